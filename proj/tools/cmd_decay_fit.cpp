#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "knudsen/config.hpp"
#include "knudsen/fit.hpp"

namespace knudsen::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

struct Series {
  std::vector<double> times;
  std::vector<double> distances;
  double noise_floor = 0.0;
};

// Accepts either the simulate output (time,observable,value,std_error rows,
// distance under "l1_to_equilibrium", floor under "noise_floor") or a plain
// table with "time" and "distance" columns and an optional "noise_floor"
// column.
Series read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw ConfigError("config: empty CSV '" + path + "'");

  Series s;
  if (header.size() == 4 && header[0] == "time" && header[1] == "observable") {
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const std::vector<std::string> cells = split_csv(line);
      if (cells.size() < 3) {
        throw ConfigError("config: short row in '" + path + "'");
      }
      if (cells[1] == "l1_to_equilibrium") {
        s.times.push_back(std::stod(cells[0]));
        s.distances.push_back(std::stod(cells[2]));
      } else if (cells[1] == "noise_floor") {
        s.noise_floor = std::stod(cells[2]);
      }
    }
    return s;
  }

  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end()
               ? static_cast<std::ptrdiff_t>(-1)
               : std::distance(header.begin(), it);
  };
  const std::ptrdiff_t ct = column("time");
  const std::ptrdiff_t cd = column("distance");
  const std::ptrdiff_t cf = column("noise_floor");
  if (ct < 0 || cd < 0) {
    throw ConfigError("config: '" + path +
                      "' needs time and distance columns");
  }
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() <= static_cast<std::size_t>(std::max(ct, cd))) {
      throw ConfigError("config: short row in '" + path + "'");
    }
    s.times.push_back(std::stod(cells[static_cast<std::size_t>(ct)]));
    s.distances.push_back(std::stod(cells[static_cast<std::size_t>(cd)]));
    if (cf >= 0 && cells.size() > static_cast<std::size_t>(cf)) {
      s.noise_floor = std::max(
          s.noise_floor, std::stod(cells[static_cast<std::size_t>(cf)]));
    }
  }
  return s;
}

}  // namespace

int run_decay_fit(const DecayFitOptions& opt) {
  if (opt.dim != 2 && opt.dim != 3) {
    throw ConfigError("config: --dim must be 2 or 3");
  }
  const Series s = read_series(opt.input_path);

  DecayFitResult res;
  try {
    res = decay_fit(s.times, s.distances, s.noise_floor, opt.floor_multiple,
                    static_cast<std::size_t>(opt.min_points));
  } catch (const InsufficientDynamicRange& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  json report;
  report["input"] = opt.input_path;
  report["dim"] = opt.dim;
  report["n_input"] = s.times.size();
  report["slope"] = res.fit.slope;
  report["intercept"] = res.fit.intercept;
  report["slope_se"] = res.fit.slope_se;
  report["ci95_half_width"] = res.ci_half_width;
  report["r_squared"] = res.fit.r_squared;
  report["noise_floor"] = res.noise_floor;
  report["floor_multiple"] = res.floor_multiple;
  report["window_indices"] = res.window;
  json wt = json::array();
  for (std::size_t i : res.window) wt.push_back(s.times[i]);
  report["window_times"] = wt;

  if (opt.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream os(opt.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write report");
    os << report.dump(2) << "\n";
  }
  return 0;
}

}  // namespace knudsen::cli
