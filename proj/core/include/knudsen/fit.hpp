#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace knudsen {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 1.0;
  std::size_t n = 0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(const std::vector<double>& x,
                        const std::vector<double>& y);

struct InsufficientDynamicRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecayFitResult {
  LinearFit fit;  // log(distance) vs log(1 + t)
  double ci_half_width = 0.0;  // 95%, normal approximation
  double noise_floor = 0.0;
  double floor_multiple = 3.0;
  std::vector<std::size_t> window;  // indices admitted to the fit
};

// Power-law decay fit on the pre-noise-floor window: points with distance
// within floor_multiple * noise_floor are excluded, and fewer than min_points
// admissible points is an InsufficientDynamicRange error, never a silent fit.
DecayFitResult decay_fit(const std::vector<double>& times,
                         const std::vector<double>& distances,
                         double noise_floor, double floor_multiple = 3.0,
                         std::size_t min_points = 6);

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
// Same, with CDF values precomputed at the sorted sample points.
double ks_statistic_sorted(const std::vector<double>& sorted,
                           const std::vector<double>& cdf_values);
// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// CDF of the Rice(nu, sigma2) distribution at each sorted point, accumulated
// by Gauss-Legendre panels between consecutive points. Never evaluates the
// unscaled Bessel function, so large nu/sigma is safe.
std::vector<double> rice_cdf_sorted(const std::vector<double>& sorted,
                                    double nu, double sigma2);

double normal_cdf(double x, double mean, double variance);

}  // namespace knudsen
