#include "knudsen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace knudsen {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
}

TemperatureProfile TemperatureProfile::constant(double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("temperature must be positive");
  TemperatureProfile p;
  p.kind_ = Kind::Constant;
  p.a_ = theta;
  return p;
}

TemperatureProfile TemperatureProfile::sinusoid(double offset,
                                                double amplitude,
                                                double period) {
  if (!(offset - std::abs(amplitude) > 0.0))
    throw std::invalid_argument("sinusoid temperature must stay positive");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  TemperatureProfile p;
  p.kind_ = Kind::Sinusoid;
  p.a_ = offset;
  p.b_ = amplitude;
  p.period_ = period;
  return p;
}

TemperatureProfile TemperatureProfile::piecewise_linear(
    std::vector<double> params, std::vector<double> values, double period) {
  if (params.size() != values.size() || params.size() < 2)
    throw std::invalid_argument("piecewise profile needs >= 2 breakpoints");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(values[i] > 0.0))
      throw std::invalid_argument("temperature values must be positive");
    if (params[i] < 0.0 || params[i] >= period)
      throw std::invalid_argument("breakpoint outside [0, period)");
    if (i > 0 && !(params[i] > params[i - 1]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
  }
  TemperatureProfile p;
  p.kind_ = Kind::PiecewiseLinear;
  p.period_ = period;
  p.params_ = std::move(params);
  p.values_ = std::move(values);
  return p;
}

double TemperatureProfile::operator()(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::Sinusoid:
      return a_ + b_ * std::sin(2.0 * kPi * s / period_);
    case Kind::PiecewiseLinear: {
      double t = s - period_ * std::floor(s / period_);
      auto it = std::upper_bound(params_.begin(), params_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - params_.begin());
      // Segment [lo, hi) with cyclic wrap at the seam.
      if (hi == 0 || hi == params_.size()) {
        const double p0 = params_.back();
        const double p1 = params_.front() + period_;
        double tt = (hi == 0) ? t + period_ : t;
        const double w = (tt - p0) / (p1 - p0);
        return values_.back() + w * (values_.front() - values_.back());
      }
      const double p0 = params_[hi - 1], p1 = params_[hi];
      const double w = (t - p0) / (p1 - p0);
      return values_[hi - 1] + w * (values_[hi] - values_[hi - 1]);
    }
  }
  return a_;
}

double TemperatureProfile::min_value() const {
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::Sinusoid:
      return a_ - std::abs(b_);
    case Kind::PiecewiseLinear:
      return *std::min_element(values_.begin(), values_.end());
  }
  return a_;
}

double TemperatureProfile::max_value() const {
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::Sinusoid:
      return a_ + std::abs(b_);
    case Kind::PiecewiseLinear:
      return *std::max_element(values_.begin(), values_.end());
  }
  return a_;
}

Domain Domain::disk(double radius, TemperatureProfile wall) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  Domain d;
  d.shape_ = Disk2D{radius};
  d.wall_profiles_ = {std::move(wall)};
  return d;
}

Domain Domain::ball(double radius, TemperatureProfile wall) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  Domain d;
  d.shape_ = Ball3D{radius};
  d.wall_profiles_ = {std::move(wall)};
  return d;
}

Domain Domain::polygon(std::vector<Vec> vertices, TemperatureProfile wall) {
  const std::size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
  Domain d;
  d.edge_normals_.resize(n);
  d.cum_arclength_.resize(n + 1);
  d.cum_arclength_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = vertices[i];
    const Vec& b = vertices[(i + 1) % n];
    const Vec e = b - a;
    const double len = norm(e);
    if (!(len > 0.0)) throw std::invalid_argument("repeated polygon vertex");
    // CCW interior lies left of the edge, so (e_y, -e_x) points outward.
    d.edge_normals_[i] = {e[1] / len, -e[0] / len, 0.0};
    d.cum_arclength_[i + 1] = d.cum_arclength_[i] + len;
    const Vec& c = vertices[(i + 2) % n];
    const double turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (!(turn > 0.0))
      throw std::invalid_argument("polygon must be strictly convex and CCW");
  }
  d.perimeter_ = d.cum_arclength_[n];
  d.shape_ = ConvexPolygon2D{std::move(vertices)};
  d.wall_profiles_ = {std::move(wall)};
  return d;
}

Domain Domain::periodic_box(TemperatureProfile bottom, TemperatureProfile top) {
  Domain d;
  d.shape_ = PeriodicBox2D{};
  d.wall_profiles_ = {std::move(bottom), std::move(top)};
  return d;
}

int Domain::dim() const {
  return std::holds_alternative<Ball3D>(shape_) ? 3 : 2;
}

int Domain::wall_count() const {
  return std::holds_alternative<PeriodicBox2D>(shape_) ? 2 : 1;
}

double Domain::diameter() const {
  if (const auto* d = std::get_if<Disk2D>(&shape_)) return 2.0 * d->radius;
  if (const auto* b = std::get_if<Ball3D>(&shape_)) return 2.0 * b->radius;
  if (const auto* p = std::get_if<ConvexPolygon2D>(&shape_)) {
    double best = 0.0;
    for (std::size_t i = 0; i < p->vertices.size(); ++i)
      for (std::size_t j = i + 1; j < p->vertices.size(); ++j)
        best = std::max(best, norm(p->vertices[i] - p->vertices[j]));
    return best;
  }
  return std::sqrt(2.0);
}

bool Domain::contains(const Vec& x, double tol) const {
  if (const auto* d = std::get_if<Disk2D>(&shape_))
    return norm(x) <= d->radius + tol && x[2] == 0.0;
  if (const auto* b = std::get_if<Ball3D>(&shape_))
    return norm(x) <= b->radius + tol;
  if (const auto* p = std::get_if<ConvexPolygon2D>(&shape_)) {
    for (std::size_t i = 0; i < p->vertices.size(); ++i)
      if (dot(p->vertices[i] - x, edge_normals_[i]) < -tol) return false;
    return x[2] == 0.0;
  }
  return x[1] >= -tol && x[1] <= 1.0 + tol && x[2] == 0.0;
}

Vec Domain::canonicalize(const Vec& x) const {
  if (std::holds_alternative<PeriodicBox2D>(shape_))
    return {wrap01(x[0]), x[1], 0.0};
  return x;
}

namespace {

// Larger positive root of |x + t v|^2 = R^2; 0 when the state points
// outward or grazes from the boundary.
double sphere_exit(const Vec& x, const Vec& v, double radius) {
  const double a = norm2(v);
  if (!(a > 0.0)) throw NoExitError("zero velocity has no boundary exit");
  const double b = dot(x, v);
  const double c = norm2(x) - radius * radius;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return 0.0;  // only reachable from fp dust outside the wall
  const double t = (-b + std::sqrt(disc)) / a;
  return t > 0.0 ? t : 0.0;
}

}  // namespace

double Domain::exit_time(const Vec& x, const Vec& v) const {
  if (const auto* d = std::get_if<Disk2D>(&shape_))
    return sphere_exit(x, v, d->radius);
  if (const auto* b = std::get_if<Ball3D>(&shape_))
    return sphere_exit(x, v, b->radius);
  if (const auto* p = std::get_if<ConvexPolygon2D>(&shape_)) {
    if (!(norm2(v) > 0.0))
      throw NoExitError("zero velocity has no boundary exit");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p->vertices.size(); ++i) {
      const double vn = dot(v, edge_normals_[i]);
      if (vn <= 0.0) continue;  // receding from this edge
      const double dist = dot(p->vertices[i] - x, edge_normals_[i]);
      best = std::min(best, std::max(dist, 0.0) / vn);
    }
    if (!std::isfinite(best))
      throw NoExitError("ray does not reach the polygon boundary");
    return best;
  }
  // Periodic box: only the x2 walls are material.
  if (v[1] > 0.0) return (1.0 - x[1]) / v[1];
  if (v[1] < 0.0) return x[1] / (-v[1]);
  throw NoExitError("motion parallel to the periodic direction");
}

BoundaryHit Domain::exit_hit(const Vec& x, const Vec& v) const {
  BoundaryHit hit;
  hit.dim = dim();
  hit.time = exit_time(x, v);
  hit.point = x + hit.time * v;
  if (const auto* d = std::get_if<Disk2D>(&shape_)) {
    hit.normal = normalized(hit.point);
    hit.bparam = std::atan2(hit.point[1], hit.point[0]);
    hit.point = d->radius * hit.normal;
  } else if (const auto* b = std::get_if<Ball3D>(&shape_)) {
    hit.normal = normalized(hit.point);
    hit.bparam = std::acos(std::clamp(hit.point[2] / b->radius, -1.0, 1.0));
    hit.point = b->radius * hit.normal;
  } else if (const auto* p = std::get_if<ConvexPolygon2D>(&shape_)) {
    // Recover the exit edge: the one whose plane the point lies on while the
    // motion approaches it.
    std::size_t edge = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p->vertices.size(); ++i) {
      if (dot(v, edge_normals_[i]) <= 0.0) continue;
      const double gap = std::abs(dot(p->vertices[i] - hit.point, edge_normals_[i]));
      if (gap < best) {
        best = gap;
        edge = i;
      }
    }
    hit.normal = edge_normals_[edge];
    const Vec& a = p->vertices[edge];
    const Vec& bv = p->vertices[(edge + 1) % p->vertices.size()];
    const double seg = norm(bv - a);
    const double along = std::clamp(dot(hit.point - a, normalized(bv - a)), 0.0, seg);
    hit.bparam = (cum_arclength_[edge] + along) / perimeter_;
  } else {
    const bool top = v[1] > 0.0;
    hit.normal = top ? vec2(0.0, 1.0) : vec2(0.0, -1.0);
    hit.point = {wrap01(hit.point[0]), top ? 1.0 : 0.0, 0.0};
    hit.wall_id = top ? 1 : 0;
    hit.bparam = hit.point[0];
  }
  hit.temperature = wall_profiles_[hit.wall_id](hit.bparam);
  return hit;
}

std::pair<Vec, Vec> Domain::bounding_box() const {
  if (const auto* d = std::get_if<Disk2D>(&shape_))
    return {vec2(-d->radius, -d->radius), vec2(d->radius, d->radius)};
  if (const auto* b = std::get_if<Ball3D>(&shape_))
    return {vec3(-b->radius, -b->radius, -b->radius),
            vec3(b->radius, b->radius, b->radius)};
  if (const auto* p = std::get_if<ConvexPolygon2D>(&shape_)) {
    Vec lo = p->vertices[0], hi = p->vertices[0];
    for (const Vec& v : p->vertices)
      for (int k = 0; k < 2; ++k) {
        lo[k] = std::min(lo[k], v[k]);
        hi[k] = std::max(hi[k], v[k]);
      }
    return {lo, hi};
  }
  return {vec2(0.0, 0.0), vec2(1.0, 1.0)};
}

const TemperatureProfile& Domain::wall_profile(int wall_id) const {
  return wall_profiles_.at(static_cast<std::size_t>(wall_id));
}

double Domain::max_temperature() const {
  double m = wall_profiles_[0].max_value();
  for (const auto& p : wall_profiles_) m = std::max(m, p.max_value());
  return m;
}

double Domain::min_temperature() const {
  double m = wall_profiles_[0].min_value();
  for (const auto& p : wall_profiles_) m = std::min(m, p.min_value());
  return m;
}

double bracket(const Domain& domain, const Vec& x, const Vec& v) {
  return 1.0 + domain.exit_time(x, v) + std::sqrt(norm(v));
}

double weight_m_alpha(const Domain& domain, const Vec& x, const Vec& v,
                      double alpha) {
  return std::pow(bracket(domain, x, v), alpha);
}

}  // namespace knudsen
