#include "knudsen/bessel.hpp"

#include <cmath>

namespace knudsen {

namespace {

constexpr double kSeriesCutoff = 15.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Sum of (t^2/4)^k / (k!)^2; all terms positive, no cancellation.
double series_sum(double t) {
  const double q = 0.25 * t * t;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Asymptotic tail sum_k a_k / t^k with a_0 = 1, a_{k+1} = a_k (2k+1)^2/(8(k+1)).
// Truncated at the smallest term; relative error ~ exp(-2t), below 1e-13 for
// t >= 15.
double asymptotic_sum(double t) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 30; ++k) {
    const double next =
        term * (2 * k + 1.0) * (2 * k + 1.0) / (8.0 * (k + 1) * t);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace

double bessel_i0(double y) {
  const double t = std::abs(y);
  if (t <= kSeriesCutoff) return series_sum(t);
  return std::exp(t) / std::sqrt(kTwoPi * t) * asymptotic_sum(t);
}

double bessel_i0_scaled(double y) {
  const double t = std::abs(y);
  if (t <= kSeriesCutoff) return std::exp(-t) * series_sum(t);
  return asymptotic_sum(t) / std::sqrt(kTwoPi * t);
}

double log_bessel_i0(double y) {
  const double t = std::abs(y);
  if (t <= kSeriesCutoff) return std::log(series_sum(t));
  return t - 0.5 * std::log(kTwoPi * t) + std::log(asymptotic_sum(t));
}

}  // namespace knudsen
