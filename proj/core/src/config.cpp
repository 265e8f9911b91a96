#include "knudsen/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "knudsen/toymodel.hpp"

namespace knudsen {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(std::string(where) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  return j.at(key).get<T>();
}

ProfileConfig parse_profile(const json& j, const char* where) {
  check_keys(j, where,
             {"kind", "value", "offset", "amplitude", "params", "values"});
  ProfileConfig p;
  p.kind = get_or<std::string>(j, "kind", "constant");
  if (p.kind == "constant") {
    p.value = get_or<double>(j, "value", 1.0);
  } else if (p.kind == "sinusoid") {
    p.offset = get_or<double>(j, "offset", 1.0);
    p.amplitude = get_or<double>(j, "amplitude", 0.0);
  } else if (p.kind == "piecewise_linear") {
    p.params = get_or<std::vector<double>>(j, "params", {});
    p.values = get_or<std::vector<double>>(j, "values", {});
  } else {
    fail("unknown profile kind '" + p.kind + "' in " + where);
  }
  return p;
}

json profile_to_json(const ProfileConfig& p) {
  json j;
  j["kind"] = p.kind;
  if (p.kind == "constant") {
    j["value"] = p.value;
  } else if (p.kind == "sinusoid") {
    j["offset"] = p.offset;
    j["amplitude"] = p.amplitude;
  } else {
    j["params"] = p.params;
    j["values"] = p.values;
  }
  return j;
}

BoundaryConfig parse_boundary_entry(const json& j) {
  check_keys(j, "boundary", {"kind", "r_perp", "r_par", "alpha"});
  BoundaryConfig b;
  b.kind = get_or<std::string>(j, "kind", "diffuse");
  b.r_perp = get_or<double>(j, "r_perp", 0.5);
  b.r_par = get_or<double>(j, "r_par", 0.5);
  b.alpha = get_or<double>(j, "alpha", 0.0);
  return b;
}

Vec vec_from(const std::vector<double>& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    fail(std::string(what) + " must have " + std::to_string(dim) +
         " components");
  }
  Vec out{};
  for (int k = 0; k < dim; ++k) out[k] = v[static_cast<std::size_t>(k)];
  return out;
}

double natural_period(const std::string& domain_kind) {
  if (domain_kind == "disk" || domain_kind == "ball") return 2.0 * kPi;
  return 1.0;  // polygon arclength fraction, box x1
}

TemperatureProfile build_profile(const ProfileConfig& p, double period) {
  try {
    if (p.kind == "constant") return TemperatureProfile::constant(p.value);
    if (p.kind == "sinusoid") {
      return TemperatureProfile::sinusoid(p.offset, p.amplitude, period);
    }
    return TemperatureProfile::piecewise_linear(p.params, p.values, period);
  } catch (const std::invalid_argument& e) {
    fail(std::string("temperature profile: ") + e.what());
  }
}

BoundaryCondition build_condition(const BoundaryConfig& b) {
  try {
    if (b.kind == "diffuse") return BoundaryCondition::diffuse();
    if (b.kind == "specular") return BoundaryCondition::specular();
    if (b.kind == "bounce_back") return BoundaryCondition::bounce_back();
    if (b.kind == "maxwell") return BoundaryCondition::maxwell_mix(b.alpha);
    if (b.kind == "cercignani_lampis") {
      return BoundaryCondition::cercignani_lampis({b.r_perp, b.r_par});
    }
  } catch (const std::invalid_argument& e) {
    fail(std::string("boundary: ") + e.what());
  }
  fail("unknown boundary kind '" + b.kind + "'");
}

void validate(const ExperimentConfig& c) {
  // Realizing every section surfaces range errors before any work starts.
  Domain domain = build_domain(c);
  build_boundary(c, domain);
  build_initial(c, domain);
  snapshot_times(c);
  build_grid(c, domain);
  for (std::size_t i = 0; i < c.observables.flux_thresholds.size(); ++i) {
    double t = c.observables.flux_thresholds[i];
    if (!std::isfinite(t) || t <= 0.0) fail("flux thresholds must be positive");
    if (i > 0 && t <= c.observables.flux_thresholds[i - 1]) {
      fail("flux thresholds must be strictly increasing");
    }
  }
  if (c.observables.moment_alpha < 0.0) fail("moment_alpha must be >= 0");
  if (c.observables.bootstrap_resamples < 2) {
    fail("bootstrap_resamples must be >= 2");
  }
  if (c.output.format != "csv" && c.output.format != "binary") {
    fail("output format must be csv or binary");
  }
  if (c.particles < 1) fail("particles must be >= 1");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    check_keys(j, "config",
               {"schema_version", "domain", "boundary", "initial", "particles",
                "seed", "snapshots", "grid", "observables", "output"});
    if (!j.contains("schema_version")) fail("missing schema_version");
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != 1) {
      fail("unsupported schema_version " + std::to_string(c.schema_version));
    }

    if (j.contains("domain")) {
      const json& d = j.at("domain");
      check_keys(d, "domain", {"kind", "radius", "vertices", "walls"});
      c.domain.kind = get_or<std::string>(d, "kind", "disk");
      c.domain.radius = get_or<double>(d, "radius", 1.0);
      c.domain.vertices =
          get_or<std::vector<std::vector<double>>>(d, "vertices", {});
      if (d.contains("walls")) {
        for (const json& w : d.at("walls")) {
          c.domain.walls.push_back(parse_profile(w, "domain.walls"));
        }
      }
    }

    if (j.contains("boundary")) {
      const json& b = j.at("boundary");
      if (b.is_array()) {
        for (const json& e : b) c.boundary.push_back(parse_boundary_entry(e));
      } else {
        c.boundary.push_back(parse_boundary_entry(b));
      }
    }
    if (c.boundary.empty()) c.boundary.push_back(BoundaryConfig{});

    if (j.contains("initial")) {
      const json& i = j.at("initial");
      check_keys(i, "initial", {"kind", "temperature", "position", "velocity"});
      c.initial.kind = get_or<std::string>(i, "kind", "uniform_maxwellian");
      c.initial.temperature = get_or<double>(i, "temperature", 1.0);
      c.initial.position = get_or<std::vector<double>>(i, "position", {});
      c.initial.velocity = get_or<std::vector<double>>(i, "velocity", {});
    }

    if (j.contains("particles")) {
      c.particles = j.at("particles").get<std::uint64_t>();
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("snapshots")) {
      const json& s = j.at("snapshots");
      check_keys(s, "snapshots", {"kind", "t_end", "times"});
      c.snapshots.kind = get_or<std::string>(s, "kind", "geometric");
      c.snapshots.t_end = get_or<double>(s, "t_end", 100.0);
      c.snapshots.times = get_or<std::vector<double>>(s, "times", {});
    }

    if (j.contains("grid")) {
      const json& g = j.at("grid");
      check_keys(g, "grid", {"pos_bins", "vel_bins", "v_max"});
      c.grid.pos_bins = get_or<int>(g, "pos_bins", 3);
      c.grid.vel_bins = get_or<int>(g, "vel_bins", 9);
      c.grid.v_max = get_or<double>(g, "v_max", 0.0);
    }

    if (j.contains("observables")) {
      const json& o = j.at("observables");
      check_keys(o, "observables",
                 {"flux_thresholds", "moment_alpha", "bootstrap_resamples"});
      c.observables.flux_thresholds =
          get_or<std::vector<double>>(o, "flux_thresholds", {});
      c.observables.moment_alpha = get_or<double>(o, "moment_alpha", 0.0);
      c.observables.bootstrap_resamples =
          get_or<int>(o, "bootstrap_resamples", 32);
    }

    if (j.contains("output")) {
      const json& o = j.at("output");
      check_keys(o, "output", {"format", "write_snapshots"});
      c.output.format = get_or<std::string>(o, "format", "csv");
      c.output.write_snapshots = get_or<bool>(o, "write_snapshots", true);
    }
  } catch (const json::exception& e) {
    fail(std::string("type error: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;

  json d;
  d["kind"] = c.domain.kind;
  if (c.domain.kind == "disk" || c.domain.kind == "ball") {
    d["radius"] = c.domain.radius;
  }
  if (c.domain.kind == "polygon") d["vertices"] = c.domain.vertices;
  json walls = json::array();
  for (const ProfileConfig& w : c.domain.walls) {
    walls.push_back(profile_to_json(w));
  }
  d["walls"] = walls;
  j["domain"] = d;

  json boundary = json::array();
  for (const BoundaryConfig& b : c.boundary) {
    json e;
    e["kind"] = b.kind;
    if (b.kind == "cercignani_lampis") {
      e["r_perp"] = b.r_perp;
      e["r_par"] = b.r_par;
    }
    if (b.kind == "maxwell") e["alpha"] = b.alpha;
    boundary.push_back(e);
  }
  j["boundary"] = boundary;

  json init;
  init["kind"] = c.initial.kind;
  if (c.initial.kind == "uniform_maxwellian") {
    init["temperature"] = c.initial.temperature;
  }
  if (c.initial.kind == "point") init["position"] = c.initial.position;
  if (c.initial.kind == "point" ||
      c.initial.kind == "uniform_position_fixed_velocity") {
    init["velocity"] = c.initial.velocity;
  }
  j["initial"] = init;

  j["particles"] = c.particles;
  j["seed"] = c.seed;

  json s;
  s["kind"] = c.snapshots.kind;
  if (c.snapshots.kind == "geometric") {
    s["t_end"] = c.snapshots.t_end;
  } else {
    s["times"] = c.snapshots.times;
  }
  j["snapshots"] = s;

  json g;
  g["pos_bins"] = c.grid.pos_bins;
  g["vel_bins"] = c.grid.vel_bins;
  g["v_max"] = c.grid.v_max;
  j["grid"] = g;

  json o;
  o["flux_thresholds"] = c.observables.flux_thresholds;
  o["moment_alpha"] = c.observables.moment_alpha;
  o["bootstrap_resamples"] = c.observables.bootstrap_resamples;
  j["observables"] = o;

  json out;
  out["format"] = c.output.format;
  out["write_snapshots"] = c.output.write_snapshots;
  j["output"] = out;

  return j.dump();
}

std::uint64_t fnv1a_64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char byte : bytes) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a_64(canonical_json(config));
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Domain build_domain(const ExperimentConfig& c) {
  const DomainConfig& d = c.domain;
  const double period = natural_period(d.kind);
  std::vector<TemperatureProfile> walls;
  for (const ProfileConfig& w : d.walls) {
    walls.push_back(build_profile(w, period));
  }
  try {
    if (d.kind == "disk" || d.kind == "ball") {
      if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
        fail("radius must be positive");
      }
      if (walls.size() > 1) fail("disk/ball take a single wall profile");
      TemperatureProfile p =
          walls.empty() ? TemperatureProfile::constant(1.0) : walls[0];
      return d.kind == "disk" ? Domain::disk(d.radius, p)
                              : Domain::ball(d.radius, p);
    }
    if (d.kind == "polygon") {
      if (walls.size() > 1) fail("polygon takes a single wall profile");
      std::vector<Vec> verts;
      for (const auto& v : d.vertices) verts.push_back(vec_from(v, 2, "vertex"));
      TemperatureProfile p =
          walls.empty() ? TemperatureProfile::constant(1.0) : walls[0];
      return Domain::polygon(std::move(verts), p);
    }
    if (d.kind == "periodic_box") {
      if (!walls.empty() && walls.size() != 2) {
        fail("periodic_box takes profiles [bottom, top]");
      }
      TemperatureProfile bottom =
          walls.empty() ? TemperatureProfile::constant(1.0) : walls[0];
      TemperatureProfile top =
          walls.empty() ? TemperatureProfile::constant(1.0) : walls[1];
      return Domain::periodic_box(bottom, top);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(std::string("domain: ") + e.what());
  }
  fail("unknown domain kind '" + d.kind + "'");
}

BoundaryRule build_boundary(const ExperimentConfig& c, const Domain& domain) {
  const int walls = domain.wall_count();
  if (c.boundary.size() != 1 &&
      c.boundary.size() != static_cast<std::size_t>(walls)) {
    fail("boundary needs 1 entry or one per wall (" + std::to_string(walls) +
         ")");
  }
  BoundaryRule rule;
  for (int w = 0; w < walls; ++w) {
    const BoundaryConfig& b =
        c.boundary.size() == 1 ? c.boundary[0]
                               : c.boundary[static_cast<std::size_t>(w)];
    rule.per_wall.push_back(build_condition(b));
  }
  return rule;
}

InitialCondition build_initial(const ExperimentConfig& c,
                               const Domain& domain) {
  const InitialConfig& i = c.initial;
  InitialCondition init;
  if (i.kind == "uniform_maxwellian") {
    init.kind = InitialKind::UniformMaxwellian;
    if (!(i.temperature > 0.0) || !std::isfinite(i.temperature)) {
      fail("initial temperature must be positive");
    }
    init.temperature = i.temperature;
    return init;
  }
  if (i.kind == "point") {
    init.kind = InitialKind::PointMass;
    init.point_pos = vec_from(i.position, domain.dim(), "initial.position");
    init.point_vel = vec_from(i.velocity, domain.dim(), "initial.velocity");
    if (!domain.contains(init.point_pos)) {
      fail("initial.position lies outside the domain");
    }
    return init;
  }
  if (i.kind == "uniform_position_fixed_velocity") {
    init.kind = InitialKind::UniformPositionFixedVelocity;
    init.point_vel = vec_from(i.velocity, domain.dim(), "initial.velocity");
    return init;
  }
  if (i.kind == "toy_steady") {
    init.kind = InitialKind::ToySteady;
    BoundaryRule rule = build_boundary(c, domain);
    if (!std::holds_alternative<PeriodicBox2D>(domain.shape())) {
      fail("toy_steady requires the periodic_box domain");
    }
    if (rule.at(0).kind != WallLawKind::CercignaniLampis) {
      fail("toy_steady requires a cercignani_lampis bottom wall");
    }
    if (rule.at(1).kind != WallLawKind::Diffuse) {
      fail("toy_steady requires a diffuse top wall");
    }
    const TemperatureProfile& top = domain.wall_profile(1);
    if (!top.is_constant() || top(0.0) != 1.0) {
      fail("toy_steady requires the top wall held at temperature 1");
    }
    try {
      init.toy = ToyModelSpec(rule.at(0).accommodation, domain.wall_profile(0));
    } catch (const std::invalid_argument& e) {
      fail(std::string("toy_steady: ") + e.what());
    }
    return init;
  }
  fail("unknown initial kind '" + i.kind + "'");
}

std::vector<double> snapshot_times(const ExperimentConfig& c) {
  const SnapshotConfig& s = c.snapshots;
  if (s.kind == "geometric") {
    if (!(s.t_end >= 1.0) || !std::isfinite(s.t_end)) {
      fail("geometric schedule needs t_end >= 1");
    }
    std::vector<double> times;
    for (int k = 0;; ++k) {
      const double t = std::pow(2.0, 0.5 * k);
      if (t > s.t_end * (1.0 + 1e-12)) break;
      times.push_back(t);
    }
    return times;
  }
  if (s.kind == "explicit") {
    if (s.times.empty()) fail("explicit schedule needs times");
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      if (!std::isfinite(s.times[k]) || s.times[k] <= 0.0) {
        fail("snapshot times must be positive");
      }
      if (k > 0 && s.times[k] <= s.times[k - 1]) {
        fail("snapshot times must be strictly increasing");
      }
    }
    return s.times;
  }
  fail("unknown snapshot kind '" + s.kind + "'");
}

GridSpec build_grid(const ExperimentConfig& c, const Domain& domain) {
  if (c.grid.pos_bins < 1 || c.grid.vel_bins < 1) {
    fail("grid bins must be >= 1");
  }
  if (c.grid.v_max < 0.0 || !std::isfinite(c.grid.v_max)) {
    fail("grid v_max must be >= 0");
  }
  return GridSpec::for_domain(domain, c.grid.pos_bins, c.grid.vel_bins,
                              c.grid.v_max);
}

}  // namespace knudsen
