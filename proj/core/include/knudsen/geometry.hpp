#pragma once

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "knudsen/vec.hpp"

namespace knudsen {

// Thrown when the forward ray never reaches the boundary (zero velocity, or
// motion parallel to the periodic direction of the box).
struct NoExitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wall temperature as a function of a scalar boundary parameter: polar angle
// for disk, colatitude for ball, perimeter fraction for polygons, x1 for the
// periodic box. Profiles are periodic with the shape's natural period.
class TemperatureProfile {
 public:
  static TemperatureProfile constant(double theta);
  // offset + amplitude * sin(2 pi s / period)
  static TemperatureProfile sinusoid(double offset, double amplitude,
                                     double period);
  // Breakpoints (param, value) sorted by param inside [0, period); linear
  // interpolation, cyclic continuation across the period seam.
  static TemperatureProfile piecewise_linear(std::vector<double> params,
                                             std::vector<double> values,
                                             double period);

  double operator()(double s) const;
  double min_value() const;
  double max_value() const;
  bool is_constant() const { return kind_ == Kind::Constant; }

 private:
  enum class Kind { Constant, Sinusoid, PiecewiseLinear };
  Kind kind_ = Kind::Constant;
  double a_ = 1.0, b_ = 0.0, period_ = 1.0;
  std::vector<double> params_, values_;
};

struct BoundaryHit {
  double time = 0.0;
  Vec point{};
  Vec normal{};  // outward unit normal
  int wall_id = 0;
  int dim = 2;
  double bparam = 0.0;
  double temperature = 1.0;
};

struct Disk2D {
  double radius;
};
struct Ball3D {
  double radius;
};
struct ConvexPolygon2D {
  std::vector<Vec> vertices;  // CCW, strictly convex
};
// Unit square, periodic in x1; walls are x2 = 0 (id 0) and x2 = 1 (id 1).
struct PeriodicBox2D {};

class Domain {
 public:
  static Domain disk(double radius,
                     TemperatureProfile wall = TemperatureProfile::constant(1.0));
  static Domain ball(double radius,
                     TemperatureProfile wall = TemperatureProfile::constant(1.0));
  static Domain polygon(std::vector<Vec> vertices,
                        TemperatureProfile wall = TemperatureProfile::constant(1.0));
  static Domain periodic_box(
      TemperatureProfile bottom = TemperatureProfile::constant(1.0),
      TemperatureProfile top = TemperatureProfile::constant(1.0));

  int dim() const;
  int wall_count() const;
  double diameter() const;

  bool contains(const Vec& x, double tol = 1e-9) const;
  // Wraps the periodic coordinate back into the fundamental cell; identity
  // for non-periodic shapes.
  Vec canonicalize(const Vec& x) const;

  // Time to the boundary along v; 0 on outgoing or tangential boundary
  // states. Throws NoExitError if the ray never reaches a wall.
  double exit_time(const Vec& x, const Vec& v) const;
  BoundaryHit exit_hit(const Vec& x, const Vec& v) const;

  std::pair<Vec, Vec> bounding_box() const;
  const TemperatureProfile& wall_profile(int wall_id) const;
  double max_temperature() const;
  double min_temperature() const;

  const std::variant<Disk2D, Ball3D, ConvexPolygon2D, PeriodicBox2D>& shape()
      const {
    return shape_;
  }

 private:
  Domain() = default;
  std::variant<Disk2D, Ball3D, ConvexPolygon2D, PeriodicBox2D> shape_;
  std::vector<TemperatureProfile> wall_profiles_;
  // Polygon edge cache: outward normals and cumulative arclength.
  std::vector<Vec> edge_normals_;
  std::vector<double> cum_arclength_;
  double perimeter_ = 0.0;
};

// 1 + sigma(x, v) + sqrt(|v|).
double bracket(const Domain& domain, const Vec& x, const Vec& v);
double weight_m_alpha(const Domain& domain, const Vec& x, const Vec& v,
                      double alpha);

inline double wrap01(double x) { return x - std::floor(x); }

}  // namespace knudsen
