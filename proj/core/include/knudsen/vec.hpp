#pragma once

#include <array>
#include <cmath>

namespace knudsen {

// Fixed-capacity vector for d in {2,3}. Unused trailing components must stay
// zero so norms and dots are dimension-agnostic.
using Vec = std::array<double, 3>;

inline constexpr Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline constexpr Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec operator-(const Vec& a, const Vec& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec operator*(double s, const Vec& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline Vec operator-(const Vec& a) { return {-a[0], -a[1], -a[2]}; }

inline Vec& operator+=(Vec& a, const Vec& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}

inline Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace knudsen
