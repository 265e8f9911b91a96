#include "knudsen/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "knudsen/philox.hpp"
#include "knudsen/quadrature.hpp"

namespace knudsen {

namespace {

double clampd(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

int clamp_bin(double x, double lo, double hi, int n) {
  double w = (hi - lo) / n;
  int i = static_cast<int>(std::floor((x - lo) / w));
  // Positions sit inside the box up to rounding dust; clamp into edge bins.
  return std::min(std::max(i, 0), n - 1);
}

}  // namespace

GridSpec GridSpec::for_domain(const Domain& domain, int pos_bins_per_axis,
                              int vel_bins_per_axis, double v_max) {
  if (pos_bins_per_axis < 1 || vel_bins_per_axis < 1) {
    throw std::invalid_argument("grid: bin counts must be positive");
  }
  GridSpec g;
  g.dim = domain.dim();
  auto [lo, hi] = domain.bounding_box();
  g.pos_lo = lo;
  g.pos_hi = hi;
  for (int k = 0; k < g.dim; ++k) g.pos_bins[k] = pos_bins_per_axis;
  g.v_max = v_max > 0.0 ? v_max : 6.0 * std::sqrt(domain.max_temperature());
  g.vel_bins = vel_bins_per_axis;
  return g;
}

std::size_t GridSpec::pos_cell_count() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(pos_bins[k]);
  return n;
}

std::size_t GridSpec::vel_cell_count() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(vel_bins);
  return n;
}

std::size_t GridSpec::pos_index_of(const Vec& pos) const {
  std::size_t idx = 0;
  for (int k = dim - 1; k >= 0; --k) {
    int i = clamp_bin(pos[k], pos_lo[k], pos_hi[k], pos_bins[k]);
    idx = idx * static_cast<std::size_t>(pos_bins[k]) +
          static_cast<std::size_t>(i);
  }
  return idx;
}

std::ptrdiff_t GridSpec::index_of(const Vec& pos, const Vec& vel) const {
  std::size_t vidx = 0;
  for (int k = dim - 1; k >= 0; --k) {
    if (!(vel[k] >= -v_max && vel[k] < v_max)) return -1;
    int j = static_cast<int>(std::floor((vel[k] + v_max) * vel_bins /
                                        (2.0 * v_max)));
    j = std::min(std::max(j, 0), vel_bins - 1);
    vidx = vidx * static_cast<std::size_t>(vel_bins) +
           static_cast<std::size_t>(j);
  }
  return static_cast<std::ptrdiff_t>(pos_index_of(pos) * vel_cell_count() +
                                     vidx);
}

bool GridSpec::operator==(const GridSpec& other) const {
  if (dim != other.dim || vel_bins != other.vel_bins ||
      v_max != other.v_max) {
    return false;
  }
  for (int k = 0; k < dim; ++k) {
    if (pos_bins[k] != other.pos_bins[k] || pos_lo[k] != other.pos_lo[k] ||
        pos_hi[k] != other.pos_hi[k]) {
      return false;
    }
  }
  return true;
}

double PhaseHistogram::total() const {
  double s = overflow;
  for (double m : mass) s += m;
  return s;
}

PhaseHistogram histogram(const Ensemble& ensemble, const GridSpec& grid) {
  PhaseHistogram h;
  h.grid = grid;
  h.mass.assign(grid.cell_count(), 0.0);
  if (ensemble.empty()) return h;
  const double w = 1.0 / static_cast<double>(ensemble.size());
  for (const Particle& p : ensemble) {
    std::ptrdiff_t idx = grid.index_of(p.pos, p.vel);
    if (idx < 0) {
      h.overflow += w;
    } else {
      h.mass[static_cast<std::size_t>(idx)] += w;
    }
  }
  return h;
}

double l1_distance(const PhaseHistogram& h1, const PhaseHistogram& h2) {
  if (!(h1.grid == h2.grid)) {
    throw std::invalid_argument("l1_distance: grids differ");
  }
  double s = std::abs(h1.overflow - h2.overflow);
  for (std::size_t i = 0; i < h1.mass.size(); ++i) {
    s += std::abs(h1.mass[i] - h2.mass[i]);
  }
  return s;
}

PhaseHistogram reference_from_density(
    const GridSpec& grid,
    const std::function<double(const Vec&, const Vec&)>& density, int order,
    double total_mass) {
  if (order < 1) throw std::invalid_argument("reference: order must be >= 1");
  if (!(total_mass >= 0.0))
    throw std::invalid_argument("reference: total mass must be >= 0");
  PhaseHistogram h;
  h.grid = grid;
  h.mass.assign(grid.cell_count(), 0.0);
  const GaussLegendreRule& rule = gauss_legendre(order);

  const int d = grid.dim;
  double pw[3], vw;
  for (int k = 0; k < d; ++k) {
    pw[k] = (grid.pos_hi[k] - grid.pos_lo[k]) / grid.pos_bins[k];
  }
  vw = 2.0 * grid.v_max / grid.vel_bins;

  // Nodes and weights mapped to a cell [a, a + w].
  auto node = [&](double a, double w, int i) {
    return a + 0.5 * w * (1.0 + rule.nodes[i]);
  };

  std::size_t vc = grid.vel_cell_count();
  std::vector<int> pidx(d, 0), vidx(d, 0);
  for (std::size_t pc = 0; pc < grid.pos_cell_count(); ++pc) {
    std::size_t rem = pc;
    for (int k = 0; k < d; ++k) {
      pidx[k] = static_cast<int>(rem % grid.pos_bins[k]);
      rem /= grid.pos_bins[k];
    }
    for (std::size_t vcell = 0; vcell < vc; ++vcell) {
      rem = vcell;
      for (int k = 0; k < d; ++k) {
        vidx[k] = static_cast<int>(rem % grid.vel_bins);
        rem /= grid.vel_bins;
      }
      // Tensor quadrature over the 2d-dimensional cell.
      double cell = 0.0;
      int total = 1;
      for (int k = 0; k < 2 * d; ++k) total *= order;
      for (int t = 0; t < total; ++t) {
        int r = t;
        Vec x{}, v{};
        double wgt = 1.0;
        for (int k = 0; k < d; ++k) {
          int i = r % order;
          r /= order;
          x[k] = node(grid.pos_lo[k] + pidx[k] * pw[k], pw[k], i);
          wgt *= 0.5 * pw[k] * rule.weights[i];
        }
        for (int k = 0; k < d; ++k) {
          int i = r % order;
          r /= order;
          v[k] = node(-grid.v_max + vidx[k] * vw, vw, i);
          wgt *= 0.5 * vw * rule.weights[i];
        }
        cell += wgt * density(x, v);
      }
      h.mass[pc * vc + vcell] = cell;
    }
  }
  double inside = 0.0;
  for (double m : h.mass) inside += m;
  h.overflow = std::max(0.0, total_mass - inside);
  return h;
}

// Area of the disk |p| <= R intersected with the corner set {X <= x, Y <= y}:
// integral over t in [-R, min(x, R)] of (clamp(y, -c, c) + c), c = sqrt(R^2
// - t^2). Every piece has the circular antiderivative, so the result is
// closed-form.
static double disk_corner_area(double R, double x, double y) {
  x = clampd(x, -R, R);
  if (y <= -R) return 0.0;
  auto C = [R](double t) {
    t = clampd(t, -R, R);
    double c = std::sqrt(std::max(0.0, R * R - t * t));
    return 0.5 * (t * c + R * R * std::asin(clampd(t / R, -1.0, 1.0)));
  };
  if (y >= R) return 2.0 * (C(x) - C(-R));
  double tau = std::sqrt(std::max(0.0, R * R - y * y));
  if (y >= 0.0) {
    // Integrand: 2c outside [-tau, tau], c + y inside.
    double a = std::min(x, -tau);
    double acc = 2.0 * (C(a) - C(-R));
    if (x > -tau) {
      double b = std::min(x, tau);
      acc += (C(b) - C(-tau)) + y * (b + tau);
      if (x > tau) acc += 2.0 * (C(x) - C(tau));
    }
    return acc;
  }
  // y in (-R, 0): integrand c + y on [-tau, tau], zero outside.
  double b = std::min(x, tau);
  if (b <= -tau) return 0.0;
  return (C(b) - C(-tau)) + y * (b + tau);
}

double disk_rect_area(double radius, double x0, double x1, double y0,
                      double y1) {
  if (x1 <= x0 || y1 <= y0) return 0.0;
  double a = disk_corner_area(radius, x1, y1) -
             disk_corner_area(radius, x0, y1) -
             disk_corner_area(radius, x1, y0) +
             disk_corner_area(radius, x0, y0);
  return std::max(0.0, a);
}

namespace {

struct Pt {
  double x, y;
};

// Sutherland-Hodgman clip of a convex polygon against one half-plane
// {keep(p) >= 0}, with the crossing point from the signed distances.
std::vector<Pt> clip_half_plane(const std::vector<Pt>& poly,
                                const std::function<double(const Pt&)>& sd) {
  std::vector<Pt> out;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    double da = sd(a), db = sd(b);
    if (da >= 0.0) out.push_back(a);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
      double t = da / (da - db);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

double polygon_rect_area(const std::vector<Vec>& vertices, double x0,
                         double x1, double y0, double y1) {
  std::vector<Pt> poly;
  poly.reserve(vertices.size());
  for (const Vec& v : vertices) poly.push_back({v[0], v[1]});
  poly = clip_half_plane(poly, [&](const Pt& p) { return p.x - x0; });
  if (poly.size() < 3) return 0.0;
  poly = clip_half_plane(poly, [&](const Pt& p) { return x1 - p.x; });
  if (poly.size() < 3) return 0.0;
  poly = clip_half_plane(poly, [&](const Pt& p) { return p.y - y0; });
  if (poly.size() < 3) return 0.0;
  poly = clip_half_plane(poly, [&](const Pt& p) { return y1 - p.y; });
  if (poly.size() < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pt& p = poly[i];
    const Pt& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) * 0.5;
}

double rect_overlap_area(double ax0, double ax1, double ay0, double ay1,
                         double bx0, double bx1, double by0, double by1) {
  double w = std::min(ax1, bx1) - std::max(ax0, bx0);
  double h = std::min(ay1, by1) - std::max(ay0, by0);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

}  // namespace

PhaseHistogram reference_uniform_maxwellian(const GridSpec& grid,
                                            const Domain& domain,
                                            double theta) {
  if (theta <= 0.0) {
    throw std::invalid_argument("reference: temperature must be positive");
  }
  if (std::holds_alternative<Ball3D>(domain.shape())) {
    throw std::invalid_argument(
        "reference: exact cell volumes are not available for balls");
  }
  PhaseHistogram h;
  h.grid = grid;
  h.mass.assign(grid.cell_count(), 0.0);
  const int d = grid.dim;

  // Per-axis Gaussian bin masses, N(0, theta).
  double vw = 2.0 * grid.v_max / grid.vel_bins;
  double inv = 1.0 / std::sqrt(2.0 * theta);
  std::vector<double> vmass(grid.vel_bins);
  for (int j = 0; j < grid.vel_bins; ++j) {
    double a = -grid.v_max + j * vw;
    double b = a + vw;
    vmass[j] = 0.5 * (std::erf(b * inv) - std::erf(a * inv));
  }

  // Exact cell areas; their sum recovers |Omega| because the position grid
  // covers the bounding box.
  std::size_t pc_count = grid.pos_cell_count();
  std::vector<double> area(pc_count, 0.0);
  double total_area = 0.0;
  double pwx = (grid.pos_hi[0] - grid.pos_lo[0]) / grid.pos_bins[0];
  double pwy = (grid.pos_hi[1] - grid.pos_lo[1]) / grid.pos_bins[1];
  for (std::size_t pc = 0; pc < pc_count; ++pc) {
    int i = static_cast<int>(pc % grid.pos_bins[0]);
    int j = static_cast<int>(pc / grid.pos_bins[0]);
    double x0 = grid.pos_lo[0] + i * pwx, x1 = x0 + pwx;
    double y0 = grid.pos_lo[1] + j * pwy, y1 = y0 + pwy;
    if (const auto* disk = std::get_if<Disk2D>(&domain.shape())) {
      area[pc] = disk_rect_area(disk->radius, x0, x1, y0, y1);
    } else if (const auto* poly = std::get_if<ConvexPolygon2D>(&domain.shape())) {
      area[pc] = polygon_rect_area(poly->vertices, x0, x1, y0, y1);
    } else {
      area[pc] = rect_overlap_area(x0, x1, y0, y1, 0.0, 1.0, 0.0, 1.0);
    }
    total_area += area[pc];
  }

  std::size_t vc = grid.vel_cell_count();
  std::vector<int> vidx(d, 0);
  for (std::size_t pc = 0; pc < pc_count; ++pc) {
    double pfrac = area[pc] / total_area;
    if (pfrac == 0.0) continue;
    for (std::size_t vcell = 0; vcell < vc; ++vcell) {
      std::size_t rem = vcell;
      double vfrac = 1.0;
      for (int k = 0; k < d; ++k) {
        vfrac *= vmass[rem % grid.vel_bins];
        rem /= grid.vel_bins;
      }
      h.mass[pc * vc + vcell] = pfrac * vfrac;
    }
  }
  double inside = 0.0;
  for (double m : h.mass) inside += m;
  h.overflow = std::max(0.0, 1.0 - inside);
  return h;
}

double l1_distance_to_density(const PhaseHistogram& h,
                              const PhaseHistogram& ref) {
  if (!(h.grid == ref.grid)) {
    throw std::invalid_argument("l1_distance_to_density: grids differ");
  }
  double s = std::abs(h.overflow - ref.overflow);
  for (std::size_t i = 0; i < h.mass.size(); ++i) {
    s += std::abs(h.mass[i] - ref.mass[i]);
  }
  return s;
}

MomentEstimate weighted_moment(const Ensemble& ensemble, const Domain& domain,
                               double alpha) {
  MomentEstimate est;
  if (ensemble.empty()) return est;
  double sum = 0.0, sumsq = 0.0;
  std::size_t n_ok = 0, n_excluded = 0;
  for (const Particle& p : ensemble) {
    double w;
    try {
      w = weight_m_alpha(domain, p.pos, p.vel, alpha);
    } catch (const NoExitError&) {
      ++n_excluded;
      continue;
    }
    sum += w;
    sumsq += w * w;
    ++n_ok;
  }
  est.excluded_mass =
      static_cast<double>(n_excluded) / static_cast<double>(ensemble.size());
  if (n_ok == 0) return est;
  double mean = sum / static_cast<double>(n_ok);
  est.value = mean;
  if (n_ok > 1) {
    double var = (sumsq - sum * mean) / static_cast<double>(n_ok - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n_ok));
  }
  return est;
}

FlowField velocity_flow_field(const Ensemble& ensemble,
                              const GridSpec& grid) {
  FlowField field;
  field.grid = grid;
  std::size_t nc = grid.pos_cell_count();
  field.cells.assign(nc, FlowCell{});
  std::vector<Vec> sum(nc, Vec{});
  std::vector<Vec> sumsq(nc, Vec{});
  for (const Particle& p : ensemble) {
    std::size_t i = grid.pos_index_of(p.pos);
    ++field.cells[i].count;
    for (int k = 0; k < grid.dim; ++k) {
      sum[i][k] += p.vel[k];
      sumsq[i][k] += p.vel[k] * p.vel[k];
    }
  }
  for (std::size_t i = 0; i < nc; ++i) {
    FlowCell& c = field.cells[i];
    if (c.count == 0) continue;
    c.missing = false;
    double n = static_cast<double>(c.count);
    for (int k = 0; k < grid.dim; ++k) {
      c.mean[k] = sum[i][k] / n;
      if (c.count > 1) {
        double var = (sumsq[i][k] - sum[i][k] * c.mean[k]) / (n - 1.0);
        c.std_error[k] = std::sqrt(std::max(0.0, var) / n);
      }
    }
  }
  return field;
}

double minorization_overlap(const PhaseHistogram& h1,
                            const PhaseHistogram& h2) {
  if (!(h1.grid == h2.grid)) {
    throw std::invalid_argument("minorization_overlap: grids differ");
  }
  double s = std::min(h1.overflow, h2.overflow);
  for (std::size_t i = 0; i < h1.mass.size(); ++i) {
    s += std::min(h1.mass[i], h2.mass[i]);
  }
  return s;
}

BootstrapStats bootstrap_l1(const Ensemble& ensemble, const GridSpec& grid,
                            const PhaseHistogram& ref, int resamples,
                            std::uint64_t seed) {
  if (resamples < 2) {
    throw std::invalid_argument("bootstrap: need at least 2 resamples");
  }
  if (ensemble.empty()) {
    throw std::invalid_argument("bootstrap: empty ensemble");
  }
  const std::size_t n = ensemble.size();
  // Cache each particle's cell so resamples only reshuffle counts.
  std::vector<std::ptrdiff_t> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell[i] = grid.index_of(ensemble[i].pos, ensemble[i].vel);
  }
  const double w = 1.0 / static_cast<double>(n);
  double sum = 0.0, sumsq = 0.0;
  PhaseHistogram h;
  h.grid = grid;
  for (int b = 0; b < resamples; ++b) {
    h.mass.assign(grid.cell_count(), 0.0);
    h.overflow = 0.0;
    CounterRng rng(seed, static_cast<std::uint64_t>(b), kSubstreamBootstrap);
    for (std::size_t i = 0; i < n; ++i) {
      auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      if (j >= n) j = n - 1;
      if (cell[j] < 0) {
        h.overflow += w;
      } else {
        h.mass[static_cast<std::size_t>(cell[j])] += w;
      }
    }
    double d = l1_distance_to_density(h, ref);
    sum += d;
    sumsq += d * d;
  }
  BootstrapStats stats;
  stats.mean = sum / resamples;
  double var = (sumsq - sum * stats.mean) / (resamples - 1);
  stats.sd = std::sqrt(std::max(0.0, var));
  return stats;
}

}  // namespace knudsen
