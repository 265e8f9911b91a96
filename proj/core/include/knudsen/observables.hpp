#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "knudsen/geometry.hpp"
#include "knudsen/particle.hpp"

namespace knudsen {

// Phase-space grid: axis-aligned position box times the velocity cube
// [-v_max, v_max]^dim. Velocities outside the cube land in one overflow bin;
// positions cannot leave a bounded domain, so they clamp into edge bins.
struct GridSpec {
  int dim = 2;
  Vec pos_lo{}, pos_hi{};
  int pos_bins[3] = {1, 1, 1};
  double v_max = 6.0;
  int vel_bins = 8;  // per axis

  // Position box from the domain, velocity cutoff 6 sqrt(max wall
  // temperature) unless overridden.
  static GridSpec for_domain(const Domain& domain, int pos_bins_per_axis,
                             int vel_bins_per_axis, double v_max = 0.0);

  std::size_t pos_cell_count() const;
  std::size_t vel_cell_count() const;
  std::size_t cell_count() const { return pos_cell_count() * vel_cell_count(); }
  // Flat cell index, or -1 for velocity overflow.
  std::ptrdiff_t index_of(const Vec& pos, const Vec& vel) const;
  std::size_t pos_index_of(const Vec& pos) const;

  bool operator==(const GridSpec& other) const;
};

struct PhaseHistogram {
  GridSpec grid;
  std::vector<double> mass;
  double overflow = 0.0;

  double total() const;
};

PhaseHistogram histogram(const Ensemble& ensemble, const GridSpec& grid);

// sum over bins |h1 - h2|, overflow included as a bin. A metric on
// histograms over identical grids, bounded by 2 for probability masses.
double l1_distance(const PhaseHistogram& h1, const PhaseHistogram& h2);

// Bin masses of a closed-form density f(x, v) of known total mass
// (default 1), cell-averaged by fixed-order tensor Gauss-Legendre;
// overflow = total mass - sum(bins), clamped at 0.
PhaseHistogram reference_from_density(
    const GridSpec& grid,
    const std::function<double(const Vec&, const Vec&)>& density, int order,
    double total_mass = 1.0);

// Bin masses of uniform(domain) x isotropic Maxwellian(theta), with exact
// cell areas (disk via circular-segment antiderivatives, polygon via convex
// clipping) and erf products in velocity. Ball domains are not supported.
PhaseHistogram reference_uniform_maxwellian(const GridSpec& grid,
                                            const Domain& domain,
                                            double theta);

// sum_bins |h - ref| + h.overflow + ref.overflow: empirical distance to the
// density, charging both the sample mass outside the cube and the density
// tail beyond it.
double l1_distance_to_density(const PhaseHistogram& h,
                              const PhaseHistogram& ref);

// Area of the intersection of the disk |p| <= radius with the rectangle
// [x0,x1] x [y0,y1], in closed form.
double disk_rect_area(double radius, double x0, double x1, double y0,
                      double y1);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  // Weighted fraction of particles with no defined bracket (zero velocity,
  // or axis-parallel motion in the periodic box).
  double excluded_mass = 0.0;
};

// Ensemble mean of (1 + sigma + sqrt(|v|))^alpha.
MomentEstimate weighted_moment(const Ensemble& ensemble, const Domain& domain,
                               double alpha);

struct FlowCell {
  Vec mean{};
  Vec std_error{};
  std::size_t count = 0;
  bool missing = true;  // empty cells are flagged, never zero-filled
};

struct FlowField {
  GridSpec grid;  // only the position part is used
  std::vector<FlowCell> cells;
};

FlowField velocity_flow_field(const Ensemble& ensemble, const GridSpec& grid);

// sum over bins min(h1, h2), overflow included; grids must match.
double minorization_overlap(const PhaseHistogram& h1,
                            const PhaseHistogram& h2);

struct BootstrapStats {
  double mean = 0.0;
  double sd = 0.0;
};

// Distance-to-reference statistics over B particle resamples; the mean is
// the Monte Carlo noise-floor estimate and sd its spread.
BootstrapStats bootstrap_l1(const Ensemble& ensemble, const GridSpec& grid,
                            const PhaseHistogram& ref, int resamples,
                            std::uint64_t seed);

}  // namespace knudsen
