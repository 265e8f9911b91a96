#include <cstdint>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "knudsen/config.hpp"

// Exit codes: 0 = all pass, 1 = verification failure, 2 = configuration
// error. Stable contract for sweep scripts.
int main(int argc, char** argv) {
  CLI::App app{"Event-driven kinetic transport in bounded domains"};
  app.require_subcommand(1);

  knudsen::cli::SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run an experiment config");
  simulate->add_option("--config", sim.config_path, "Experiment JSON")
      ->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      simulate->add_option("--seed", seed_value, "Override the config seed");
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = auto)");

  knudsen::cli::VerifyKernelOptions vk;
  CLI::App* verify =
      app.add_subcommand("verify-kernel", "Run the kernel identity oracles");
  verify->add_option("--grid", vk.grid_path, "Parameter grid JSON");
  verify->add_option("--out", vk.out_path, "Report path (default stdout)");
  verify->add_flag("--inject-fault", vk.inject_fault,
                   "Deliberately break one identity (harness self-test)");

  knudsen::cli::DecayFitOptions df;
  CLI::App* decay =
      app.add_subcommand("decay-fit", "Fit a power-law decay slope");
  decay->add_option("--input", df.input_path, "Observable CSV")->required();
  decay->add_option("--dim", df.dim, "Spatial dimension")->required();
  decay->add_option("--out", df.out_path, "Report path (default stdout)");
  decay->add_option("--floor-multiple", df.floor_multiple,
                    "Noise-floor exclusion multiple");
  decay->add_option("--min-points", df.min_points,
                    "Minimum admissible points");

  knudsen::cli::ToySteadyOptions ts;
  CLI::App* toy =
      app.add_subcommand("toy-steady", "Verify the mixed-wall steady state");
  toy->add_option("--config", ts.config_path, "Experiment JSON")->required();
  toy->add_option("--out", ts.out_path, "Report path (default stdout)");
  toy->add_flag("--skip-dynamic", ts.skip_dynamic,
                "Skip the Monte Carlo stationarity check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) {
      if (seed_opt->count() > 0) sim.seed = seed_value;
      return knudsen::cli::run_simulate(sim);
    }
    if (verify->parsed()) return knudsen::cli::run_verify_kernel(vk);
    if (decay->parsed()) return knudsen::cli::run_decay_fit(df);
    if (toy->parsed()) return knudsen::cli::run_toy_steady(ts);
  } catch (const knudsen::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
