#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "knudsen/config.hpp"
#include "knudsen/kernel.hpp"

namespace knudsen::cli {

namespace {

using nlohmann::json;

constexpr double kTolNormalization = 1e-6;
constexpr double kTolChen = 1e-8;
constexpr double kTolFlux = 1e-6;
constexpr double kTolReciprocity = 1e-12;

// Fixed parameter grid exercising every identity away from and near the
// edges of the admissible ranges.
json default_grid() {
  json g;
  g["normalization"] = json::array();
  for (double rp : {0.15, 0.5, 0.85}) {
    for (double rl : {0.3, 1.0, 1.7}) {
      for (double theta : {0.5, 2.0}) {
        for (auto& u : std::vector<std::pair<double, double>>{{0.5, 0.3},
                                                              {3.0, -2.0}}) {
          json c;
          c["dim"] = 2;
          c["r_perp"] = rp;
          c["r_par"] = rl;
          c["theta"] = theta;
          c["u_perp"] = u.first;
          c["u_par"] = {u.second};
          g["normalization"].push_back(c);
        }
      }
    }
  }
  for (auto& u : std::vector<std::vector<double>>{{1.5, 0.5, -1.0},
                                                  {2.0, 1.0, 1.0}}) {
    json c;
    c["dim"] = 3;
    c["r_perp"] = 0.5;
    c["r_par"] = 0.7;
    c["theta"] = 1.0;
    c["u_perp"] = u[0];
    c["u_par"] = {u[1], u[2]};
    g["normalization"].push_back(c);
  }

  const std::vector<std::vector<double>> abw = {{0.3, 1.0, 0.5},
                                                {0.25, 0.8, 1.3},
                                                {0.1, 0.4, 2.0},
                                                {1.2, 2.5, 0.7},
                                                {0.05, 3.0, 5.0}};
  g["chen_gaussian"] = abw;
  g["chen_rice"] = abw;

  g["cl_flux"] = json::array();
  for (double rl : {0.3, 0.5, 1.5}) {
    for (double t2 : {0.3, 0.8}) {
      for (auto& v : std::vector<std::pair<double, double>>{
               {0.2, 0.4}, {1.5, 1.0}, {-1.0, 2.0}}) {
        json c;
        c["r_par"] = rl;
        c["r_perp"] = rl * (2.0 - rl);
        c["t2"] = t2;
        c["v"] = {v.first, v.second};
        g["cl_flux"].push_back(c);
      }
    }
  }

  g["reciprocity"] = json::array();
  const std::vector<std::vector<double>> recib = {
      // r_perp, r_par, theta, a1, a2, b1, b2
      {0.4, 0.9, 0.7, 0.2, 1.1, 0.5, -0.8},
      {0.15, 0.3, 1.0, -1.0, 0.4, 1.3, -2.0},
      {0.85, 1.7, 2.0, 0.0, 2.5, -0.7, -0.1},
      {0.5, 0.5, 0.5, 1.8, 0.9, -1.8, -0.9},
      {0.6, 1.2, 1.5, -0.4, 0.2, 0.4, -3.0},
      {0.25, 0.75, 0.9, 2.2, 0.6, 0.1, -1.4},
  };
  for (auto& r : recib) {
    json c;
    c["r_perp"] = r[0];
    c["r_par"] = r[1];
    c["theta"] = r[2];
    c["a"] = {r[3], r[4]};
    c["b"] = {r[5], r[6]};
    g["reciprocity"].push_back(c);
  }
  return g;
}

struct CheckRow {
  std::string name;
  json params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool converged = true;
  bool pass = false;
  std::string note;
};

Vec vec2_from(const json& a) { return vec2(a.at(0), a.at(1)); }

}  // namespace

int run_verify_kernel(const VerifyKernelOptions& opt) {
  json grid;
  if (opt.grid_path.empty()) {
    grid = default_grid();
  } else {
    std::ifstream in(opt.grid_path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + opt.grid_path + "'");
    try {
      in >> grid;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: invalid grid JSON: ") + e.what());
    }
  }

  std::vector<CheckRow> checks;
  try {
    for (const json& c : grid.value("normalization", json::array())) {
      CheckRow row;
      row.name = "normalization";
      row.params = c;
      row.tolerance = kTolNormalization;
      const int dim = c.value("dim", 2);
      AccommodationParams p(c.at("r_perp").get<double>(),
                            c.at("r_par").get<double>());
      double u_par[2] = {0.0, 0.0};
      const json& up = c.at("u_par");
      for (std::size_t k = 0; k < up.size() && k < 2; ++k) u_par[k] = up[k];
      IdentityCheck r = normalization_check(c.at("u_perp").get<double>(),
                                            u_par, c.at("theta").get<double>(),
                                            p, dim);
      row.residual = r.residual;
      row.converged = r.converged;
      row.pass = r.converged && r.residual <= row.tolerance;
      if (!r.converged) row.note = "quadrature did not converge";
      checks.push_back(std::move(row));
    }

    for (const char* which : {"chen_gaussian", "chen_rice"}) {
      for (const json& c : grid.value(which, json::array())) {
        CheckRow row;
        row.name = which;
        row.params = c;
        row.tolerance = kTolChen;
        const double a = c.at(0), b = c.at(1), w = c.at(2);
        IdentityCheck r = std::string(which) == "chen_gaussian"
                              ? chen_gaussian_identity(a, b, w)
                              : chen_rice_identity(a, b, w);
        row.residual = r.residual;
        row.converged = r.converged;
        row.pass = r.converged && r.residual <= row.tolerance;
        if (!r.converged) row.note = "quadrature did not converge";
        checks.push_back(std::move(row));
      }
    }

    for (const json& c : grid.value("cl_flux", json::array())) {
      CheckRow row;
      row.name = "cl_flux";
      row.params = c;
      row.tolerance = kTolFlux;
      AccommodationParams p(c.at("r_perp").get<double>(),
                            c.at("r_par").get<double>());
      IdentityCheck r =
          cl_flux_identity(vec2_from(c.at("v")), c.at("t2").get<double>(), p);
      row.residual = r.residual;
      row.converged = r.converged;
      row.pass = r.converged && r.residual <= row.tolerance;
      if (!r.converged) row.note = "quadrature did not converge";
      checks.push_back(std::move(row));
    }

    for (const json& c : grid.value("reciprocity", json::array())) {
      CheckRow row;
      row.name = "reciprocity";
      row.params = c;
      row.tolerance = kTolReciprocity;
      AccommodationParams p(c.at("r_perp").get<double>(),
                            c.at("r_par").get<double>());
      row.residual = reciprocity_residual(vec2_from(c.at("a")),
                                          vec2_from(c.at("b")),
                                          c.at("theta").get<double>(), p);
      row.pass = row.residual <= row.tolerance;
      checks.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed grid entry: ") +
                      e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: grid entry out of range: ") +
                      e.what());
  }

  if (opt.inject_fault && !checks.empty()) {
    CheckRow& victim = checks.front();
    victim.residual += 10.0 * victim.tolerance;
    victim.pass = false;
    victim.note = "injected fault";
  }

  std::size_t failed = 0;
  json rows = json::array();
  for (const CheckRow& c : checks) {
    if (!c.pass) ++failed;
    json r;
    r["name"] = c.name;
    r["params"] = c.params;
    r["residual"] = c.residual;
    r["tolerance"] = c.tolerance;
    r["converged"] = c.converged;
    r["pass"] = c.pass;
    if (!c.note.empty()) r["note"] = c.note;
    rows.push_back(r);
  }
  json report;
  report["grid_hash"] = hash_hex(fnv1a_64(grid.dump()));
  report["checks"] = rows;
  report["total"] = checks.size();
  report["failed"] = failed;
  report["all_pass"] = failed == 0;

  if (opt.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream os(opt.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write report");
    os << report.dump(2) << "\n";
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace knudsen::cli
