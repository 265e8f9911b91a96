#include "knudsen/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

namespace knudsen {

namespace {
constexpr int kMaxEventsPerAdvance = 1000000;
}

void advance_particle(Particle& p, const Domain& domain,
                      const BoundaryRule& rule, double dt, std::uint64_t seed,
                      std::uint64_t particle_index,
                      const EventCounters* counters) {
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("advance needs a finite dt >= 0");
  double remaining = dt;
  int events = 0;
  while (remaining > 0.0) {
    BoundaryHit hit;
    try {
      hit = domain.exit_hit(p.pos, p.vel);
    } catch (const NoExitError&) {
      // Free motion never reaching a wall (v = 0, or axis-parallel in the
      // periodic box): pure drift.
      p.pos = domain.canonicalize(p.pos + remaining * p.vel);
      return;
    }
    if (hit.time >= remaining) {
      p.pos = domain.canonicalize(p.pos + remaining * p.vel);
      return;
    }
    remaining -= hit.time;
    p.pos = hit.point;
    if (counters) counters->record(norm(p.vel));
    CounterRng rng(seed, particle_index, p.collision_count);
    p.vel = sample_outgoing(p.vel, hit, rule.at(hit.wall_id), rng);
    ++p.collision_count;
    if (++events > kMaxEventsPerAdvance)
      throw TooManyCollisionsError(
          "boundary-event cap exceeded in a single advance");
  }
}

std::vector<double> flux_series(const FluxTrace& trace, double threshold) {
  if (!std::isfinite(threshold))
    throw std::invalid_argument("flux counter needs a finite threshold");
  const auto it = std::find(trace.thresholds.begin(), trace.thresholds.end(),
                            threshold);
  if (it == trace.thresholds.end())
    throw std::invalid_argument("threshold was not recorded by the run");
  const std::size_t j =
      static_cast<std::size_t>(it - trace.thresholds.begin());
  std::vector<double> out(trace.times.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = trace.cumulative[i][j];
  return out;
}

FluxTrace run(Ensemble& ensemble, const Domain& domain,
              const BoundaryRule& rule, const std::vector<double>& times,
              std::uint64_t seed, const SnapshotCallback& on_snapshot,
              const RunOptions& options) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
      throw std::invalid_argument("snapshot times must be ascending and >= 0");
  }
  if (static_cast<int>(rule.per_wall.size()) != domain.wall_count())
    throw std::invalid_argument("boundary rule does not match wall count");
  for (double lam : options.flux_thresholds)
    if (!std::isfinite(lam) || lam < 0.0)
      throw std::invalid_argument("flux thresholds must be finite and >= 0");

  int workers = options.workers;
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, 64);

  FluxTrace trace;
  trace.thresholds = options.flux_thresholds;
  trace.times = times;
  const std::size_t nthr = trace.thresholds.size();
  std::vector<double> running(nthr, 0.0);
  const double weight =
      ensemble.empty() ? 0.0 : 1.0 / static_cast<double>(ensemble.size());

  double t_prev = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double dt = times[s] - t_prev;
    std::vector<std::vector<double>> counts(
        static_cast<std::size_t>(workers), std::vector<double>(nthr, 0.0));
    auto work = [&](int w) {
      const std::size_t lo = ensemble.size() * w / workers;
      const std::size_t hi = ensemble.size() * (w + 1) / workers;
      EventCounters tally{&trace.thresholds, &counts[static_cast<std::size_t>(w)]};
      const EventCounters* tally_ptr = nthr > 0 ? &tally : nullptr;
      for (std::size_t i = lo; i < hi; ++i)
        advance_particle(ensemble[i], domain, rule, dt, seed, i, tally_ptr);
    };
    if (workers == 1 || ensemble.size() < 2) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    // Raw tallies are integers, so summing before scaling keeps the result
    // independent of the worker split.
    for (std::size_t j = 0; j < nthr; ++j) {
      double total = 0.0;
      for (int w = 0; w < workers; ++w)
        total += counts[static_cast<std::size_t>(w)][j];
      running[j] += weight * total;
    }
    trace.cumulative.push_back(running);
    if (on_snapshot) on_snapshot(s, times[s], ensemble);
    t_prev = times[s];
  }
  return trace;
}

namespace {

Vec uniform_position(const Domain& domain, CounterRng& rng) {
  const auto [lo, hi] = domain.bounding_box();
  if (std::holds_alternative<PeriodicBox2D>(domain.shape()))
    return vec2(rng.uniform(), rng.uniform());
  for (int trial = 0; trial < 100000; ++trial) {
    Vec x{};
    for (int k = 0; k < domain.dim(); ++k)
      x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    if (domain.contains(x, 0.0)) return x;
  }
  throw std::runtime_error("uniform position sampler starved");
}

}  // namespace

Ensemble sample_initial(const InitialCondition& init, const Domain& domain,
                        std::size_t n, std::uint64_t seed) {
  Ensemble ens(n);
  switch (init.kind) {
    case InitialKind::UniformMaxwellian: {
      if (!(init.temperature > 0.0))
        throw std::invalid_argument("initial temperature must be positive");
      const double s = std::sqrt(init.temperature);
      for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i, kSubstreamInitial);
        ens[i].pos = uniform_position(domain, rng);
        for (int k = 0; k < domain.dim(); ++k) ens[i].vel[k] = s * rng.normal();
      }
      return ens;
    }
    case InitialKind::PointMass: {
      if (!domain.contains(init.point_pos))
        throw std::invalid_argument("point mass lies outside the domain");
      for (auto& p : ens) p = Particle{init.point_pos, init.point_vel, 0};
      return ens;
    }
    case InitialKind::UniformPositionFixedVelocity: {
      for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i, kSubstreamInitial);
        ens[i].pos = uniform_position(domain, rng);
        ens[i].vel = init.point_vel;
      }
      return ens;
    }
    case InitialKind::ToySteady: {
      if (!init.toy)
        throw std::invalid_argument("toy_steady initial data needs a spec");
      if (!std::holds_alternative<PeriodicBox2D>(domain.shape()))
        throw std::invalid_argument(
            "toy_steady initial data lives on the periodic box");
      return sample_steady(*init.toy, n, seed).particles;
    }
  }
  throw std::invalid_argument("unknown initial condition");
}

namespace {

void format_double(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

void write_snapshot_csv(std::ostream& os, const Ensemble& ensemble, int dim) {
  std::string line;
  for (int k = 0; k < dim; ++k) line += "x" + std::to_string(k + 1) + ",";
  for (int k = 0; k < dim; ++k) line += "v" + std::to_string(k + 1) + ",";
  line += "collision_count\n";
  os << line;
  for (const Particle& p : ensemble) {
    line.clear();
    for (int k = 0; k < dim; ++k) {
      format_double(line, p.pos[k]);
      line += ',';
    }
    for (int k = 0; k < dim; ++k) {
      format_double(line, p.vel[k]);
      line += ',';
    }
    line += std::to_string(p.collision_count);
    line += '\n';
    os << line;
  }
}

Ensemble read_snapshot_csv(std::istream& is, int dim) {
  Ensemble ens;
  std::string line;
  // Skip '#' comment lines (the embedded config hash), then the header.
  do {
    if (!std::getline(is, line))
      throw std::runtime_error("snapshot CSV is empty");
  } while (!line.empty() && line[0] == '#');
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    Particle p;
    std::stringstream ss(line);
    std::string cell;
    for (int k = 0; k < 2 * dim + 1; ++k) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("snapshot CSV row too short");
      if (k < dim)
        p.pos[k] = std::stod(cell);
      else if (k < 2 * dim)
        p.vel[k - dim] = std::stod(cell);
      else
        p.collision_count = static_cast<std::uint32_t>(std::stoul(cell));
    }
    ens.push_back(p);
  }
  return ens;
}

void write_snapshot_binary(std::ostream& os, const Ensemble& ensemble,
                           int dim, std::uint64_t tag) {
  const char magic[8] = {'K', 'N', 'T', 'R', 'J', '1', 0, 0};
  os.write(magic, 8);
  os.write(reinterpret_cast<const char*>(&tag), 8);
  const std::uint32_t d = static_cast<std::uint32_t>(dim);
  const std::uint64_t n = ensemble.size();
  os.write(reinterpret_cast<const char*>(&d), 4);
  os.write(reinterpret_cast<const char*>(&n), 8);
  for (const Particle& p : ensemble) {
    os.write(reinterpret_cast<const char*>(p.pos.data()), 8 * dim);
    os.write(reinterpret_cast<const char*>(p.vel.data()), 8 * dim);
    os.write(reinterpret_cast<const char*>(&p.collision_count), 4);
  }
}

Ensemble read_snapshot_binary(std::istream& is, std::uint64_t* tag) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "KNTRJ1\0\0", 8) != 0)
    throw std::runtime_error("not a trajectory snapshot stream");
  std::uint64_t t = 0;
  is.read(reinterpret_cast<char*>(&t), 8);
  if (tag != nullptr) *tag = t;
  std::uint32_t d = 0;
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&d), 4);
  is.read(reinterpret_cast<char*>(&n), 8);
  if (d != 2 && d != 3) throw std::runtime_error("bad snapshot dimension");
  Ensemble ens(n);
  for (auto& p : ens) {
    is.read(reinterpret_cast<char*>(p.pos.data()), 8 * d);
    is.read(reinterpret_cast<char*>(p.vel.data()), 8 * d);
    is.read(reinterpret_cast<char*>(&p.collision_count), 4);
  }
  if (!is) throw std::runtime_error("truncated snapshot stream");
  return ens;
}

}  // namespace knudsen
