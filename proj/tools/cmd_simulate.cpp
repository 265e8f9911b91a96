#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "knudsen/config.hpp"
#include "knudsen/observables.hpp"
#include "knudsen/toymodel.hpp"
#include "knudsen/transport.hpp"

namespace knudsen::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

struct Row {
  double time;
  std::string name;
  double value;
  double std_error;
};

// Equilibrium reference when the problem determines one in closed form:
// the toy steady state, or uniform x Maxwellian when every wall sits at the
// same constant temperature.
std::optional<PhaseHistogram> make_reference(const ExperimentConfig& cfg,
                                             const Domain& domain,
                                             const InitialCondition& init,
                                             const GridSpec& grid) {
  if (init.kind == InitialKind::ToySteady) {
    const ToyModelSpec spec = *init.toy;
    const ToyNormalization norm = normalize(spec);
    if (!norm.converged) {
      throw std::runtime_error("steady-state normalization did not converge");
    }
    const double beta = norm.beta;
    // Even quadrature order keeps the nodes off the v2 = 0 line.
    return reference_from_density(
        grid,
        [spec, beta](const Vec& x, const Vec& v) {
          return v[1] == 0.0 ? 0.0 : beta * steady_unnormalized(spec, x, v);
        },
        8);
  }
  if (std::holds_alternative<Ball3D>(domain.shape())) return std::nullopt;
  double theta = 0.0;
  for (int w = 0; w < domain.wall_count(); ++w) {
    const TemperatureProfile& p = domain.wall_profile(w);
    if (!p.is_constant()) return std::nullopt;
    if (w == 0) {
      theta = p(0.0);
    } else if (p(0.0) != theta) {
      return std::nullopt;
    }
  }
  return reference_uniform_maxwellian(grid, domain, theta);
}

}  // namespace

int run_simulate(const SimulateOptions& opt) {
  ExperimentConfig cfg = load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  const std::uint64_t hash = config_hash(cfg);
  const std::string hash_text = hash_hex(hash);

  const Domain domain = build_domain(cfg);
  const BoundaryRule rule = build_boundary(cfg, domain);
  const InitialCondition init = build_initial(cfg, domain);
  const std::vector<double> times = snapshot_times(cfg);
  const GridSpec grid = build_grid(cfg, domain);
  const std::optional<PhaseHistogram> ref =
      make_reference(cfg, domain, init, grid);

  fs::create_directories(opt.out_dir);

  Ensemble ensemble =
      sample_initial(init, domain, static_cast<std::size_t>(cfg.particles),
                     cfg.seed);

  std::vector<Row> rows;
  std::vector<std::string> files;
  const bool csv_output = cfg.output.format == "csv";

  RunOptions run_options;
  run_options.workers = opt.workers;
  run_options.flux_thresholds = cfg.observables.flux_thresholds;

  const auto started = std::chrono::steady_clock::now();

  const FluxTrace trace = run(
      ensemble, domain, rule, times, cfg.seed,
      [&](std::size_t s, double t, const Ensemble& e) {
        if (cfg.output.write_snapshots) {
          char name[64];
          std::snprintf(name, sizeof(name), "snapshot_%03zu.%s", s,
                        csv_output ? "csv" : "bin");
          std::ofstream os(fs::path(opt.out_dir) / name, std::ios::binary);
          if (!os) throw std::runtime_error("cannot write snapshot file");
          if (csv_output) {
            os << "# config_hash=" << hash_text << "\n";
            write_snapshot_csv(os, e, domain.dim());
          } else {
            write_snapshot_binary(os, e, domain.dim(), hash);
          }
          files.emplace_back(name);
        }
        if (ref) {
          const PhaseHistogram h = histogram(e, grid);
          rows.push_back(
              {t, "l1_to_equilibrium", l1_distance_to_density(h, *ref), 0.0});
          if (s + 1 == times.size()) {
            const BootstrapStats bs =
                bootstrap_l1(e, grid, *ref, cfg.observables.bootstrap_resamples,
                             cfg.seed);
            rows.push_back({t, "noise_floor", bs.mean, bs.sd});
          }
        }
        if (cfg.observables.moment_alpha > 0.0) {
          const MomentEstimate m =
              weighted_moment(e, domain, cfg.observables.moment_alpha);
          rows.push_back({t, "moment_m_alpha", m.value, m.std_error});
          rows.push_back({t, "moment_excluded_mass", m.excluded_mass, 0.0});
        }
      },
      run_options);

  for (double threshold : cfg.observables.flux_thresholds) {
    const std::vector<double> series = flux_series(trace, threshold);
    const std::string name = "flux_cum_" + format_short(threshold);
    for (std::size_t i = 0; i < times.size(); ++i) {
      rows.push_back({times[i], name, series[i], 0.0});
    }
  }

  const double wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.name < b.name;
  });

  {
    std::ofstream os(fs::path(opt.out_dir) / "observables.csv",
                     std::ios::binary);
    if (!os) throw std::runtime_error("cannot write observables.csv");
    os << "# config_hash=" << hash_text << "\n";
    os << "time,observable,value,std_error\n";
    for (const Row& r : rows) {
      os << format_double(r.time) << ',' << r.name << ','
         << format_double(r.value) << ',' << format_double(r.std_error)
         << '\n';
    }
    files.emplace_back("observables.csv");
  }

  json manifest;
  manifest["config"] = json::parse(canonical_json(cfg));
  manifest["config_hash"] = hash_text;
  manifest["files"] = files;
  manifest["particles"] = cfg.particles;
  manifest["seed"] = cfg.seed;
  manifest["snapshot_times"] = times;
  manifest["version"] = "0.1.0";
  manifest["wall_clock_seconds"] = wall_clock;
  manifest["workers"] = opt.workers;
  {
    std::ofstream os(fs::path(opt.out_dir) / "manifest.json",
                     std::ios::binary);
    if (!os) throw std::runtime_error("cannot write manifest.json");
    os << manifest.dump(2) << "\n";
  }
  return 0;
}

}  // namespace knudsen::cli
