#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "knudsen/geometry.hpp"
#include "knudsen/observables.hpp"
#include "knudsen/transport.hpp"

namespace knudsen {

// Invalid experiment input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProfileConfig {
  std::string kind = "constant";  // constant | sinusoid | piecewise_linear
  double value = 1.0;             // constant
  double offset = 1.0, amplitude = 0.0;  // sinusoid
  std::vector<double> params, values;    // piecewise_linear
};

struct DomainConfig {
  std::string kind = "disk";  // disk | ball | polygon | periodic_box
  double radius = 1.0;
  std::vector<std::vector<double>> vertices;
  std::vector<ProfileConfig> walls;  // one per wall; empty = constant 1
};

struct BoundaryConfig {
  std::string kind = "diffuse";
  // diffuse | cercignani_lampis | specular | bounce_back | maxwell
  double r_perp = 0.5, r_par = 0.5;
  double alpha = 0.0;  // maxwell diffuse fraction
};

struct InitialConfig {
  std::string kind = "uniform_maxwellian";
  // uniform_maxwellian | point | uniform_position_fixed_velocity | toy_steady
  double temperature = 1.0;
  std::vector<double> position, velocity;
};

struct SnapshotConfig {
  std::string kind = "geometric";  // geometric | explicit
  double t_end = 100.0;            // geometric: t_k = 2^(k/2) up to t_end
  std::vector<double> times;       // explicit
};

struct GridConfig {
  int pos_bins = 3;
  int vel_bins = 9;
  double v_max = 0.0;  // 0 = 6 sqrt(max wall temperature)
};

struct ObservablesConfig {
  std::vector<double> flux_thresholds;
  double moment_alpha = 0.0;  // 0 = skip the moment column
  int bootstrap_resamples = 32;
};

struct OutputConfig {
  std::string format = "csv";  // csv | binary
  bool write_snapshots = true;
};

struct ExperimentConfig {
  int schema_version = 1;
  DomainConfig domain;
  std::vector<BoundaryConfig> boundary;  // size 1 = all walls
  InitialConfig initial;
  std::uint64_t particles = 1000;
  std::uint64_t seed = 1;
  SnapshotConfig snapshots;
  GridConfig grid;
  ObservablesConfig observables;
  OutputConfig output;
};

// Parse and validate; every range error is a ConfigError before any work
// starts. Unknown keys are rejected to catch typos.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Canonical form: sorted keys, compact separators, shortest round-trip
// floats, defaults filled in. parse(canonical_json(c)) reproduces c exactly.
std::string canonical_json(const ExperimentConfig& config);

// FNV-1a 64 over the canonical form; embedded in every output file.
std::uint64_t fnv1a_64(const std::string& bytes);
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t h);

// Realize the validated config into runtime objects.
Domain build_domain(const ExperimentConfig& config);
BoundaryRule build_boundary(const ExperimentConfig& config,
                            const Domain& domain);
InitialCondition build_initial(const ExperimentConfig& config,
                               const Domain& domain);
std::vector<double> snapshot_times(const ExperimentConfig& config);
GridSpec build_grid(const ExperimentConfig& config, const Domain& domain);

}  // namespace knudsen
