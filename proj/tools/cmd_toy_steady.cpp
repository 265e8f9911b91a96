#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "knudsen/config.hpp"
#include "knudsen/observables.hpp"
#include "knudsen/toymodel.hpp"
#include "knudsen/transport.hpp"

namespace knudsen::cli {

namespace {

using nlohmann::json;

constexpr double kAnalyticTol = 1e-6;

}  // namespace

int run_toy_steady(const ToySteadyOptions& opt) {
  const ExperimentConfig cfg = load_config(opt.config_path);
  const Domain domain = build_domain(cfg);
  const BoundaryRule rule = build_boundary(cfg, domain);
  const InitialCondition init = build_initial(cfg, domain);
  if (init.kind != InitialKind::ToySteady || !init.toy) {
    throw ConfigError("config: toy-steady needs initial.kind = toy_steady");
  }
  const ToyModelSpec spec = *init.toy;
  const std::uint64_t hash = config_hash(cfg);

  const ToyNormalization norm = normalize(spec);
  if (!norm.converged) {
    throw std::runtime_error("normalization quadrature did not converge");
  }

  // Wall balance residuals over a fixed probe grid.
  const std::vector<double> x1s = {0.0, 0.13, 0.37, 0.5, 0.71, 0.9};
  const std::vector<Vec> v_down = {vec2(0.0, -0.5), vec2(0.7, -1.2),
                                   vec2(-1.5, -0.3), vec2(2.0, -2.0),
                                   vec2(0.3, -3.0)};
  double top_max = 0.0, bottom_max = 0.0, flux_dev = 0.0;
  for (double x1 : x1s) {
    for (const Vec& v : v_down) {
      top_max = std::max(top_max, boundary_residual_top(spec, x1, v));
      bottom_max = std::max(bottom_max, boundary_residual_bottom(spec, x1, -v));
    }
    flux_dev = std::max(flux_dev, std::abs(upward_flux(spec, x1) - norm.beta));
  }

  double flow_max = 0.0;
  for (double x1 : {0.2, 0.5, 0.8}) {
    for (double x2 : {0.25, 0.5, 0.75}) {
      const Vec flow = flow_integrals(spec, vec2(x1, x2));
      flow_max = std::max({flow_max, std::abs(flow[0]), std::abs(flow[1])});
    }
  }

  const bool analytic_pass = top_max < kAnalyticTol &&
                             bottom_max < kAnalyticTol &&
                             flux_dev < kAnalyticTol && flow_max < kAnalyticTol;

  json report;
  report["config_hash"] = hash_hex(hash);
  report["beta"] = norm.beta;
  report["mass"] = norm.mass;
  report["residuals"]["top_max"] = top_max;
  report["residuals"]["bottom_max"] = bottom_max;
  report["residuals"]["flux_vs_beta"] = flux_dev;
  report["residuals"]["flow_max"] = flow_max;
  report["analytic_tolerance"] = kAnalyticTol;
  report["analytic_pass"] = analytic_pass;

  bool dynamic_pass = true;
  if (!opt.skip_dynamic) {
    const GridSpec grid = build_grid(cfg, domain);
    // Even quadrature order keeps the nodes off the v2 = 0 line.
    const double beta = norm.beta;
    const PhaseHistogram ref = reference_from_density(
        grid,
        [&spec, beta](const Vec& x, const Vec& v) {
          return v[1] == 0.0 ? 0.0 : beta * steady_unnormalized(spec, x, v);
        },
        8);

    SteadySampleResult sampled = sample_steady(
        spec, static_cast<std::size_t>(cfg.particles), cfg.seed);
    report["acceptance_rate"] = sampled.acceptance_rate;

    Ensemble ensemble = sampled.particles;
    const PhaseHistogram h0 = histogram(ensemble, grid);
    const double d0 = l1_distance_to_density(h0, ref);
    const BootstrapStats b0 = bootstrap_l1(
        ensemble, grid, ref, cfg.observables.bootstrap_resamples, cfg.seed);

    const std::vector<double> times = snapshot_times(cfg);
    const double t_end = times.back();
    double dT = 0.0;
    run(ensemble, domain, rule, {t_end}, cfg.seed,
        [&](std::size_t, double, const Ensemble& e) {
          dT = l1_distance_to_density(histogram(e, grid), ref);
        });
    const BootstrapStats bT = bootstrap_l1(
        ensemble, grid, ref, cfg.observables.bootstrap_resamples, cfg.seed + 1);

    const double combined =
        std::sqrt(b0.sd * b0.sd + bT.sd * bT.sd);
    dynamic_pass = std::abs(dT - d0) <= 3.0 * combined;
    report["stationarity"]["time"] = t_end;
    report["stationarity"]["d_initial"] = d0;
    report["stationarity"]["d_final"] = dT;
    report["stationarity"]["sd_initial"] = b0.sd;
    report["stationarity"]["sd_final"] = bT.sd;
    report["stationarity"]["pass"] = dynamic_pass;
  }

  const bool all_pass = analytic_pass && dynamic_pass;
  report["all_pass"] = all_pass;

  if (opt.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream os(opt.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write report");
    os << report.dump(2) << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace knudsen::cli
