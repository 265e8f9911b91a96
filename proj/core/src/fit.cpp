#include "knudsen/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "knudsen/kernel.hpp"
#include "knudsen/quadrature.hpp"

namespace knudsen {

LinearFit least_squares(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("least_squares: size mismatch");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("least_squares: need at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("least_squares: degenerate abscissae");
  }
  LinearFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ssr += r * r;
  }
  if (x.size() > 2) {
    fit.slope_se = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

DecayFitResult decay_fit(const std::vector<double>& times,
                         const std::vector<double>& distances,
                         double noise_floor, double floor_multiple,
                         std::size_t min_points) {
  if (times.size() != distances.size()) {
    throw std::invalid_argument("decay_fit: size mismatch");
  }
  if (!(noise_floor >= 0.0) || !(floor_multiple >= 1.0)) {
    throw std::invalid_argument("decay_fit: bad noise floor");
  }
  DecayFitResult res;
  res.noise_floor = noise_floor;
  res.floor_multiple = floor_multiple;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !(distances[i] > 0.0)) continue;
    if (distances[i] <= floor_multiple * noise_floor) continue;
    lx.push_back(std::log1p(times[i]));
    ly.push_back(std::log(distances[i]));
    res.window.push_back(i);
  }
  if (res.window.size() < min_points) {
    throw InsufficientDynamicRange(
        "insufficient dynamic range: " + std::to_string(res.window.size()) +
        " points above " + std::to_string(floor_multiple) +
        "x noise floor, need " + std::to_string(min_points));
  }
  res.fit = least_squares(lx, ly);
  res.ci_half_width = 1.959963984540054 * res.fit.slope_se;
  return res;
}

double ks_statistic_sorted(const std::vector<double>& sorted,
                           const std::vector<double>& cdf_values) {
  if (sorted.size() != cdf_values.size() || sorted.empty()) {
    throw std::invalid_argument("ks_statistic: bad input");
  }
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf_values[i];
    // The empirical CDF jumps from i/n to (i+1)/n at the sample.
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) values[i] = cdf(samples[i]);
  return ks_statistic_sorted(samples, values);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

std::vector<double> rice_cdf_sorted(const std::vector<double>& sorted,
                                    double nu, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("rice_cdf: variance must be positive");
  }
  const double sigma = std::sqrt(sigma2);
  const GaussLegendreRule& rule = gauss_legendre(16);
  auto panel = [&](double a, double b) {
    // Split so no panel exceeds one sigma; 16-node Gauss-Legendre is then
    // far below the statistical resolution this CDF feeds.
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / sigma)));
    double s = 0.0;
    for (int p = 0; p < m; ++p) {
      const double pa = a + (b - a) * p / m;
      const double pb = a + (b - a) * (p + 1) / m;
      const double half = 0.5 * (pb - pa), mid = 0.5 * (pa + pb);
      double acc = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        acc += rule.weights[k] * rice_pdf(mid + half * rule.nodes[k], nu,
                                          sigma2);
      }
      s += half * acc;
    }
    return s;
  };
  std::vector<double> cdf(sorted.size());
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = std::max(sorted[i], 0.0);
    if (x < prev) {
      throw std::invalid_argument("rice_cdf: points must be sorted");
    }
    acc += panel(prev, x);
    cdf[i] = std::min(acc, 1.0);
    prev = x;
  }
  return cdf;
}

double normal_cdf(double x, double mean, double variance) {
  return 0.5 * (1.0 + std::erf((x - mean) / std::sqrt(2.0 * variance)));
}

}  // namespace knudsen
