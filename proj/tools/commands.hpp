#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace knudsen::cli {

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};
int run_simulate(const SimulateOptions& opt);

struct VerifyKernelOptions {
  std::string grid_path;  // empty = built-in default grid
  std::string out_path;   // empty = stdout
  bool inject_fault = false;
};
int run_verify_kernel(const VerifyKernelOptions& opt);

struct DecayFitOptions {
  std::string input_path;
  int dim = 2;
  std::string out_path;
  double floor_multiple = 3.0;
  int min_points = 6;
};
int run_decay_fit(const DecayFitOptions& opt);

struct ToySteadyOptions {
  std::string config_path;
  std::string out_path;
  bool skip_dynamic = false;
};
int run_toy_steady(const ToySteadyOptions& opt);

}  // namespace knudsen::cli
