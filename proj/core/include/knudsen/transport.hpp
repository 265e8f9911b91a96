#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "knudsen/geometry.hpp"
#include "knudsen/kernel.hpp"
#include "knudsen/particle.hpp"
#include "knudsen/toymodel.hpp"

namespace knudsen {

struct TooManyCollisionsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One boundary condition per wall id.
struct BoundaryRule {
  std::vector<BoundaryCondition> per_wall;

  static BoundaryRule uniform(BoundaryCondition bc, int walls = 1) {
    return {std::vector<BoundaryCondition>(static_cast<std::size_t>(walls), bc)};
  }
  const BoundaryCondition& at(int wall_id) const {
    return per_wall.at(static_cast<std::size_t>(wall_id));
  }
};

// Tallies boundary events whose incident speed falls under each threshold.
struct EventCounters {
  const std::vector<double>* thresholds = nullptr;
  std::vector<double>* counts = nullptr;

  void record(double speed) const {
    for (std::size_t j = 0; j < thresholds->size(); ++j)
      if (speed <= (*thresholds)[j]) (*counts)[j] += 1.0;
  }
};

// Exact event-driven free flight: drift to the wall, draw the outgoing
// velocity from the per-particle counter stream, repeat until dt is used up.
// A flight that ends exactly on the wall stops there with the incident
// velocity; the draw happens when the clock passes the hit.
void advance_particle(Particle& p, const Domain& domain,
                      const BoundaryRule& rule, double dt, std::uint64_t seed,
                      std::uint64_t particle_index,
                      const EventCounters* counters = nullptr);

struct FluxTrace {
  std::vector<double> thresholds;
  std::vector<double> times;
  // cumulative[i][j]: weighted count (1/n per event) of boundary events up to
  // times[i] with incident speed <= thresholds[j].
  std::vector<std::vector<double>> cumulative;
};

// Cumulative series for one recorded threshold; the threshold must match a
// recorded value exactly and be finite.
std::vector<double> flux_series(const FluxTrace& trace, double threshold);

struct RunOptions {
  int workers = 0;  // 0 = hardware concurrency
  std::vector<double> flux_thresholds;
};

using SnapshotCallback =
    std::function<void(std::size_t index, double time, const Ensemble&)>;

// Advances the ensemble through the ascending snapshot times, invoking the
// callback at each. Trajectories are bitwise-reproducible for a fixed
// (seed, particle index) regardless of worker count.
FluxTrace run(Ensemble& ensemble, const Domain& domain,
              const BoundaryRule& rule, const std::vector<double>& times,
              std::uint64_t seed, const SnapshotCallback& on_snapshot,
              const RunOptions& options = {});

enum class InitialKind {
  UniformMaxwellian,
  PointMass,
  UniformPositionFixedVelocity,
  ToySteady
};

struct InitialCondition {
  InitialKind kind = InitialKind::UniformMaxwellian;
  double temperature = 1.0;           // UniformMaxwellian
  Vec point_pos{};                    // PointMass
  Vec point_vel{};                    // PointMass / UniformPositionFixedVelocity
  std::optional<ToyModelSpec> toy;    // ToySteady
};

Ensemble sample_initial(const InitialCondition& init, const Domain& domain,
                        std::size_t n, std::uint64_t seed);

// Snapshot serialization. CSV: header, comma separator, '.' decimals, LF,
// '#' comment lines skipped; binary: fixed little-endian layout with an
// opaque 64-bit tag (the config hash). Both round-trip bit-exactly.
void write_snapshot_csv(std::ostream& os, const Ensemble& ensemble, int dim);
Ensemble read_snapshot_csv(std::istream& is, int dim);
void write_snapshot_binary(std::ostream& os, const Ensemble& ensemble, int dim,
                           std::uint64_t tag = 0);
Ensemble read_snapshot_binary(std::istream& is, std::uint64_t* tag = nullptr);

}  // namespace knudsen
