#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "knudsen/config.hpp"
#include "knudsen/observables.hpp"
#include "knudsen/transport.hpp"

using namespace knudsen;

namespace {

bool same_particles(const Ensemble& a, const Ensemble& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (a[i].pos[k] != b[i].pos[k]) return false;
      if (a[i].vel[k] != b[i].vel[k]) return false;
    }
    if (a[i].collision_count != b[i].collision_count) return false;
  }
  return true;
}

ToyModelSpec toy_spec() {
  return ToyModelSpec(AccommodationParams(0.75, 0.5),
                      TemperatureProfile::constant(0.5));
}

BoundaryRule toy_rule(const ToyModelSpec& spec) {
  return BoundaryRule{{BoundaryCondition::cercignani_lampis(spec.accommodation),
                       BoundaryCondition::diffuse()}};
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("zero duration leaves the particle untouched") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  Particle p{vec2(0.3, -0.1), vec2(1.5, 0.7), 9};
  const Particle before = p;
  advance_particle(p, disk, rule, 0.0, 17, 3);
  CHECK(p.pos[0] == before.pos[0]);
  CHECK(p.vel[1] == before.vel[1]);
  CHECK(p.collision_count == before.collision_count);
}

TEST_CASE("specular flight preserves speed and containment") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::specular());
  Particle p{vec2(0, 0), vec2(1, 0), 0};
  advance_particle(p, disk, rule, 2.0, 1, 0);
  CHECK(disk.contains(p.pos, 1e-10));
  CHECK(std::abs(norm(p.vel) - 1.0) < 1e-12);
  CHECK(p.collision_count == 1);
  // Diameter out and back: one reflection at (1, 0) returns to the center.
  CHECK(std::abs(p.pos[0]) < 1e-12);
  CHECK(p.vel[0] == -1.0);
}

TEST_CASE("flight ending exactly on the wall defers the draw") {
  auto spec = toy_spec();
  Domain box = make_toy_domain(spec);
  BoundaryRule rule = toy_rule(spec);

  // 0.8 / 0.2 is exactly 4 in floating point, so dt = 4 lands on the wall.
  Particle p{vec2(0.2, 0.8), vec2(-0.2, -0.2), 0};
  advance_particle(p, box, rule, 4.0, 5, 0);
  CHECK(std::abs(p.pos[0] - 0.4) < 1e-12);
  CHECK(std::abs(p.pos[1]) < 1e-12);
  CHECK(p.vel[0] == -0.2);
  CHECK(p.vel[1] == -0.2);
  CHECK(p.collision_count == 0);

  // Any extra time triggers the draw at the bottom wall.
  Particle q{vec2(0.2, 0.8), vec2(-0.2, -0.2), 0};
  advance_particle(q, box, rule, 4.0 + 0.01, 5, 0);
  CHECK(q.collision_count == 1);
  CHECK(q.vel[1] > 0.0);
  CHECK(q.pos[1] > 0.0);
  CHECK(box.contains(q.pos, 1e-10));
}

TEST_CASE("periodic wraps are free of randomness and not collisions") {
  auto spec = toy_spec();
  Domain box = make_toy_domain(spec);
  BoundaryRule rule = toy_rule(spec);

  // Eight seam crossings before the top wall is reached at t = 4.
  Particle p{vec2(0.5, 0.5), vec2(2.0, 0.125), 0};
  advance_particle(p, box, rule, 3.9, 23, 0);
  CHECK(p.vel[0] == 2.0);
  CHECK(p.vel[1] == 0.125);
  CHECK(p.collision_count == 0);
  CHECK(std::abs(p.pos[0] - wrap01(0.5 + 3.9 * 2.0)) < 1e-12);
  CHECK(std::abs(p.pos[1] - (0.5 + 3.9 * 0.125)) < 1e-12);
}

TEST_CASE("runaway collision loops are diagnosed") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::specular());
  Particle p{vec2(0, 0), vec2(1e9, 0.1), 0};
  CHECK_THROWS_AS(advance_particle(p, disk, rule, 0.01, 3, 1),
                  TooManyCollisionsError);
}

TEST_CASE("empty snapshot list is a no-op") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 100, 8);
  const Ensemble before = e;
  int calls = 0;
  run(e, disk, rule, {}, 8, [&](std::size_t, double, const Ensemble&) {
    ++calls;
  });
  CHECK(calls == 0);
  CHECK(same_particles(e, before));
}

TEST_CASE("identical seeds give bitwise-identical runs") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule =
      BoundaryRule::uniform(BoundaryCondition::cercignani_lampis({0.3, 1.2}));
  InitialCondition init;

  auto one_run = [&](int workers) {
    Ensemble e = sample_initial(init, disk, 3000, 99);
    std::vector<Ensemble> snaps;
    RunOptions opt;
    opt.workers = workers;
    opt.flux_thresholds = {5.0};
    FluxTrace trace = run(
        e, disk, rule, {0.5, 1.5}, 99,
        [&](std::size_t, double, const Ensemble& s) { snaps.push_back(s); },
        opt);
    return std::make_pair(std::move(snaps), std::move(trace));
  };

  auto [snaps1, trace1] = one_run(1);
  auto [snaps4, trace4] = one_run(4);
  auto [snaps7, trace7] = one_run(7);
  REQUIRE(snaps1.size() == 2);
  for (std::size_t s = 0; s < snaps1.size(); ++s) {
    CHECK(same_particles(snaps1[s], snaps4[s]));
    CHECK(same_particles(snaps1[s], snaps7[s]));
  }
  REQUIRE(trace1.cumulative.size() == trace4.cumulative.size());
  for (std::size_t i = 0; i < trace1.cumulative.size(); ++i) {
    for (std::size_t j = 0; j < trace1.cumulative[i].size(); ++j) {
      CHECK(trace1.cumulative[i][j] == trace4.cumulative[i][j]);
      CHECK(trace1.cumulative[i][j] == trace7.cumulative[i][j]);
    }
  }
}

TEST_CASE("mass is conserved and particles stay inside") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 5000, 12);
  run(e, disk, rule, {2.0, 5.0}, 12,
      [&](std::size_t, double, const Ensemble& s) {
        CHECK(s.size() == 5000);
      });
  CHECK(e.size() == 5000);
  for (const auto& p : e) {
    CHECK(disk.contains(p.pos, 1e-9));
    CHECK(std::isfinite(p.vel[0]));
    CHECK(std::isfinite(p.vel[1]));
    CHECK(norm(p.vel) > 0.0);
  }
}

TEST_CASE("weighted moment stays under an affine envelope at equilibrium") {
  // Maxwellian start on diffuse walls is stationary, so the alpha = 1.6
  // moment holds its initial level and the smallest envelope slope covering
  // the trajectory is at noise scale.
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 20000, 31);
  const double alpha = 1.6;
  const double m0 = weighted_moment(e, disk, alpha).value;
  double b_env = 0.0;
  run(e, disk, rule, {1.0, 2.0, 4.0}, 31,
      [&](std::size_t, double t, const Ensemble& s) {
        const MomentEstimate m = weighted_moment(s, disk, alpha);
        CHECK(std::isfinite(m.value));
        CHECK(std::abs(m.value - m0) < 0.05 * m0);
        b_env = std::max(b_env, (m.value - m0) / (1.0 + t));
      });
  CHECK(b_env < 0.05 * m0);
  for (double t : {1.0, 2.0, 4.0}) CHECK(m0 + b_env * (1.0 + t) >= m0);
}

TEST_CASE("flux counters respect thresholds and accumulate") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 2000, 5);
  RunOptions opt;
  opt.flux_thresholds = {0.0, 5.0};
  FluxTrace trace = run(e, disk, rule, {1.0, 2.0, 4.0}, 5,
                        [](std::size_t, double, const Ensemble&) {}, opt);

  const auto zero = flux_series(trace, 0.0);
  for (double c : zero) CHECK(c == 0.0);

  const auto five = flux_series(trace, 5.0);
  REQUIRE(five.size() == 3);
  CHECK(five[0] > 0.0);
  CHECK(five[0] <= five[1]);
  CHECK(five[1] <= five[2]);

  CHECK_THROWS_AS(flux_series(trace, 7.0), std::invalid_argument);
}

TEST_CASE("initial samplers") {
  Domain disk = Domain::disk(1.0);

  InitialCondition point;
  point.kind = InitialKind::PointMass;
  point.point_pos = vec2(0.2, -0.3);
  point.point_vel = vec2(1.0, 0.5);
  Ensemble pe = sample_initial(point, disk, 3, 1);
  REQUIRE(pe.size() == 3);
  for (const auto& p : pe) {
    CHECK(p.pos[0] == 0.2);
    CHECK(p.vel[1] == 0.5);
  }

  InitialCondition fixed;
  fixed.kind = InitialKind::UniformPositionFixedVelocity;
  fixed.point_vel = vec2(1.2, 0.9);
  Ensemble fe = sample_initial(fixed, disk, 4000, 2);
  for (const auto& p : fe) {
    CHECK(p.vel[0] == 1.2);
    CHECK(disk.contains(p.pos, 0.0));
  }

  InitialCondition maxw;
  maxw.kind = InitialKind::UniformMaxwellian;
  maxw.temperature = 1.0;
  const std::size_t n = 200000;
  Ensemble me = sample_initial(maxw, disk, n, 3);
  double mx = 0.0, my = 0.0;
  for (const auto& p : me) {
    mx += p.vel[0];
    my += p.vel[1];
    CHECK(disk.contains(p.pos, 0.0));
  }
  const double se = 4.0 / std::sqrt(double(n));
  CHECK(std::abs(mx / double(n)) < se);
  CHECK(std::abs(my / double(n)) < se);

  InitialCondition toy;
  toy.kind = InitialKind::ToySteady;
  toy.toy = toy_spec();
  Domain box = make_toy_domain(*toy.toy);
  Ensemble te = sample_initial(toy, box, 5000, 4);
  REQUIRE(te.size() == 5000);
  for (const auto& p : te) {
    CHECK(box.contains(p.pos, 0.0));
    CHECK(p.vel[1] != 0.0);
  }
}

TEST_CASE("csv snapshots round-trip bitwise and skip comments") {
  Domain disk = Domain::disk(1.0);
  BoundaryRule rule = BoundaryRule::uniform(BoundaryCondition::diffuse());
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 64, 21);
  run(e, disk, rule, {1.0}, 21, [](std::size_t, double, const Ensemble&) {});

  std::ostringstream os;
  write_snapshot_csv(os, e, 2);
  const std::string body = os.str();
  CHECK(body.find("\r") == std::string::npos);

  std::istringstream is(body);
  Ensemble back = read_snapshot_csv(is, 2);
  CHECK(same_particles(e, back));

  std::istringstream commented("# config_hash=00ff\n" + body);
  Ensemble back2 = read_snapshot_csv(commented, 2);
  CHECK(same_particles(e, back2));
}

TEST_CASE("binary snapshots round-trip with their tag") {
  Domain disk = Domain::disk(1.0);
  InitialCondition init;
  Ensemble e = sample_initial(init, disk, 128, 77);

  std::ostringstream os(std::ios::binary);
  write_snapshot_binary(os, e, 2, 0x0123456789abcdefull);
  std::istringstream is(os.str(), std::ios::binary);
  std::uint64_t tag = 0;
  Ensemble back = read_snapshot_binary(is, &tag);
  CHECK(tag == 0x0123456789abcdefull);
  CHECK(same_particles(e, back));
}

}  // TEST_SUITE
