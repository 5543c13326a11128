#include <cmath>
#include <random>

#include "degen/calculus.hpp"
#include "degen/solver.hpp"
#include "doctest.h"

using namespace degen;

namespace {

SolverState raw_state(ScalarField u, ScalarField v) {
  SolverState s{.t = 0.0, .u = std::move(u), .v = std::move(v)};
  s.mass_u0 = integrate(s.u);
  s.l1_v0 = integrate(s.v);
  s.max_v0 = s.v.max();
  s.gradv_floor = 1e-12 * s.max_v0;
  return s;
}

ScalarField random_positive(const Grid& g, std::mt19937_64& rng, double hi) {
  std::uniform_real_distribution<double> d(0.0, hi);
  ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = d(rng);
  return f;
}

}  // namespace

TEST_CASE("cfl_timestep formula") {
  const Grid g = Grid::line(1.0, 10);
  SimParams p;
  p.cfl_safety = 0.9;
  // max phi(v) = 1 with phi = linear, u = 0.
  const SolverState s1 = raw_state(ScalarField(g, 0.0), ScalarField(g, 1.0));
  CHECK(cfl_timestep(s1, MotilitySpec::linear(), p) == doctest::Approx(0.9 * 0.005).epsilon(1e-14));

  const SolverState s2 = raw_state(ScalarField(g, 2.0), ScalarField(g, 0.0));
  CHECK(cfl_timestep(s2, MotilitySpec::linear(), p) == doctest::Approx(0.9 / 202.0).epsilon(1e-14));
  CHECK(u_is_frozen(s2, MotilitySpec::linear(), p));
  CHECK_FALSE(u_is_frozen(s1, MotilitySpec::linear(), p));
}

TEST_CASE("step at the CFL threshold keeps every coefficient nonnegative") {
  std::mt19937_64 rng(31);
  SimParams p;
  p.cfl_safety = 1.0;
  for (const Grid& g : {Grid::line(1.0, 32), Grid::rect(1.0, 0.7, 12, 9)}) {
    for (int trial = 0; trial < 20; ++trial) {
      // Spiky data: isolated cells carry most of the mass.
      ScalarField u = random_positive(g, rng, 1e-3);
      ScalarField v = random_positive(g, rng, 1e-3);
      u[rng() % g.size()] = 40.0;
      v[rng() % g.size()] = 5.0;
      const SolverState s = raw_state(u, v);
      const double dt = cfl_timestep(s, MotilitySpec::saturating(), p);
      const SolverState n = step(s, MotilitySpec::saturating(), p, dt);
      CHECK(n.u.min() >= 0.0);
      CHECK(n.v.min() >= 0.0);
      CHECK(n.v.max() <= s.v.max());
      CHECK_THROWS_AS(step(s, MotilitySpec::saturating(), p, 1.01 * dt), std::invalid_argument);
    }
  }
}

TEST_CASE("spatially constant data reduce to v' = -u v") {
  const Grid g = Grid::rect(1.0, 1.0, 8, 8);
  const SolverState s = raw_state(ScalarField(g, 2.0), ScalarField(g, 1.0));
  SimParams p;
  const double dt = 0.5 * cfl_timestep(s, MotilitySpec::linear(), p);
  const SolverState n = step(s, MotilitySpec::linear(), p, dt);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(n.u[k] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(n.v[k] == doctest::Approx(1.0 - 2.0 * dt).epsilon(1e-14));
  }
  CHECK(n.cumulative_uv == doctest::Approx(dt * 2.0).epsilon(1e-14));
  CHECK(n.cumulative_u2v == doctest::Approx(dt * 4.0).epsilon(1e-14));
  CHECK(n.cumulative_gradv4 == 0.0);
}

TEST_CASE("vanishing signal freezes u exactly when eps = 0") {
  std::mt19937_64 rng(41);
  const Grid g = Grid::line(1.0, 50);
  const ScalarField u0 = random_positive(g, rng, 3.0);
  SolverState s = raw_state(u0, ScalarField(g, 0.0));
  SimParams p;
  for (int n = 0; n < 200; ++n) s = step(s, MotilitySpec::exp_decay(2.0), p, cfl_timestep(s, MotilitySpec::exp_decay(2.0), p));
  CHECK(s.u == u0);
  CHECK(s.v.max() == 0.0);
  // Any eps > 0 unfreezes it.
  p.eps = 0.1;
  const SolverState moved = step(s, MotilitySpec::exp_decay(2.0), p, cfl_timestep(s, MotilitySpec::exp_decay(2.0), p));
  CHECK_FALSE(moved.u == u0);
}

TEST_CASE("one step conserves mass of u") {
  std::mt19937_64 rng(43);
  for (const Grid& g : {Grid::line(2.0, 64), Grid::rect(1.0, 1.0, 16, 16)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SolverState s = raw_state(random_positive(g, rng, 2.0), random_positive(g, rng, 1.0));
      SimParams p;
      p.eps = 0.01 * trial;
      const SolverState n = step(s, MotilitySpec::saturating(), p, cfl_timestep(s, MotilitySpec::saturating(), p));
      CHECK(std::abs(integrate(n.u) - integrate(s.u)) <= 1e-12 * integrate(s.u));
      // Telescoping consumption budget for a single step.
      CHECK(integrate(n.v) + n.cumulative_uv == doctest::Approx(integrate(s.v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("simulate with constant data tracks exp(-t)") {
  const Grid g = Grid::line(1.0, 16);
  SimParams p;
  p.t_end = 5.0;
  p.diag_stride = 50;
  const Trajectory tr = simulate(ScalarField(g, 1.0), ScalarField(g, 1.0), MotilitySpec::linear(), p);
  double max_dt = 0.0;
  for (const auto& r : tr.records) max_dt = std::max(max_dt, r.dt);
  // u stays constant up to one rounding per step
  const double drift = 1e-16 * static_cast<double>(tr.steps);
  for (const auto& r : tr.records) {
    CHECK(std::abs(r.min_u - 1.0) <= drift);
    CHECK(std::abs(r.max_u - 1.0) <= drift);
    CHECK(std::abs(r.max_v - std::exp(-r.t)) <= 5.0 * max_dt * std::exp(-r.t));
  }
  CHECK(tr.records.back().t == 5.0);
  CHECK_FALSE(tr.blowup_warning);
}

TEST_CASE("simulate rejects data violating the initial hypotheses") {
  const Grid g = Grid::line(1.0, 8);
  SimParams p;
  CHECK_THROWS_AS(simulate(ScalarField(g, 1.0), ScalarField(g, 0.0), MotilitySpec::linear(), p),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(ScalarField(g, 0.0), ScalarField(g, 1.0), MotilitySpec::linear(), p),
                  std::invalid_argument);
  ScalarField neg(g, 1.0);
  neg[3] = -0.1;
  CHECK_THROWS_AS(simulate(neg, ScalarField(g, 1.0), MotilitySpec::linear(), p), std::invalid_argument);
  p.cfl_safety = 1.5;
  CHECK_THROWS_AS(simulate(ScalarField(g, 1.0), ScalarField(g, 1.0), MotilitySpec::linear(), p),
                  std::invalid_argument);
}

TEST_CASE("coupled run keeps the conservation and comparison invariants") {
  const Grid g = Grid::line(1.0, 64);
  const double pi = std::acos(-1.0);
  const ScalarField u0 = ScalarField::sample(g, [&](double x, double) { return 1.0 + 0.8 * std::cos(3 * pi * x); });
  const ScalarField v0 = ScalarField::sample(g, [&](double x, double) { return x < 0.4 ? std::pow(std::sin(pi * x / 0.4), 2) : 0.0; });
  SimParams p;
  p.t_end = 2.0;
  p.diag_stride = 20;
  p.snapshot_times = {0.5, 1.0, 1.5};
  const Trajectory tr = simulate(u0, v0, MotilitySpec::exp_decay(1.0), p);
  const double m0 = integrate(u0);
  const double l10 = integrate(v0);
  double prev_max_v = v0.max();
  double prev_l1 = l10;
  for (const auto& r : tr.records) {
    CHECK(std::abs(r.mass_u - m0) <= 1e-10 * m0);
    CHECK(r.min_u >= 0.0);
    CHECK(r.min_v >= 0.0);
    CHECK(r.max_v <= prev_max_v + 1e-14);
    CHECK(r.l1_v <= prev_l1 + 1e-14);
    CHECK(std::abs(r.l1_v + r.cumulative_uv - l10) <= 1e-10 * l10);
    prev_max_v = r.max_v;
    prev_l1 = r.l1_v;
  }
  REQUIRE(tr.snapshots.size() == 3);
  CHECK(tr.snapshots[0].t == 0.5);
  CHECK(tr.snapshots[2].t == 1.5);
  // Some record lies after the last snapshot and diagnostics are monotone.
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    CHECK(tr.records[k].cumulative_uv >= tr.records[k - 1].cumulative_uv);
    CHECK(tr.records[k].cumulative_u2v >= tr.records[k - 1].cumulative_u2v);
    CHECK(tr.records[k].cumulative_gradv4 >= tr.records[k - 1].cumulative_gradv4);
  }
}

TEST_CASE("epsilon_sweep bookkeeping") {
  const Grid g = Grid::line(1.0, 32);
  const ScalarField u0 = ScalarField::sample(g, [](double x, double) { return 1.0 + x; });
  const ScalarField v0(g, 0.2);
  SimParams p;
  p.t_end = 0.2;
  const auto single = epsilon_sweep(u0, v0, MotilitySpec::linear(), p, {0.1});
  CHECK(single.pairs.empty());
  CHECK(single.finals.size() == 1);
  const auto twice = epsilon_sweep(u0, v0, MotilitySpec::linear(), p, {0.05, 0.05});
  REQUIRE(twice.pairs.size() == 1);
  CHECK(twice.pairs[0].l1_u == 0.0);
  CHECK(twice.pairs[0].linf_v == 0.0);
  CHECK_THROWS_AS(epsilon_sweep(u0, v0, MotilitySpec::linear(), p, {0.01, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep(u0, v0, MotilitySpec::linear(), p, {0.1, 0.0}), std::invalid_argument);
}
