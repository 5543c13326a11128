#include <cmath>
#include <random>
#include <vector>

#include "degen/calculus.hpp"
#include "degen/linear_mp.hpp"
#include "doctest.h"

using namespace degen;

namespace {

VectorField drift(const Grid& g, double amp) {
  return VectorField::sample_no_flux(g, [&](int axis, double x, double y) {
    return amp * std::sin(3.0 * x + axis) * std::cos(2.0 * y);
  });
}

}  // namespace

TEST_CASE("linear_cfl_limit formula") {
  const Grid g = Grid::line(1.0, 20);
  const double h = g.h(0);
  const VectorField a = drift(g, 2.0);
  ScalarField b(g, 0.5);
  b[3] = -7.0;
  const double expect = 1.0 / (2.0 / (h * h) + 2.0 * a.max_abs() / h + 7.0);
  CHECK(linear_cfl_limit(a, b) == doctest::Approx(expect).epsilon(1e-15));

  const Grid r = Grid::rect(1.0, 2.0, 10, 5);
  const VectorField z(r);
  const double hx = r.h(0), hy = r.h(1);
  CHECK(linear_cfl_limit(z, ScalarField(r, 1.0)) == doctest::Approx(1.0 / (2 / (hx * hx) + 2 / (hy * hy))));
}

TEST_CASE("step_linear reaction-only and conservative transport") {
  const Grid g = Grid::line(1.0, 16);
  const VectorField zero(g);
  const ScalarField V(g, 3.0);
  const ScalarField next = step_linear(V, zero, ScalarField(g, -1.0), 1e-3);
  for (std::size_t k = 0; k < next.size(); ++k) CHECK(next[k] == doctest::Approx(3.0 * (1.0 - 1e-3)).epsilon(1e-15));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (const Grid& gg : {Grid::line(1.0, 40), Grid::rect(1.0, 1.0, 12, 12)}) {
    ScalarField U(gg);
    for (std::size_t k = 0; k < U.size(); ++k) U[k] = d(rng);
    U[5] = 30.0;
    const VectorField a = drift(gg, 5.0);
    const ScalarField b(gg, 0.0);
    const double dt = linear_cfl_limit(a, b);
    const ScalarField W = step_linear(U, a, b, dt);
    CHECK(integrate(W) == doctest::Approx(integrate(U)).epsilon(1e-13));
    CHECK(W.min() >= 0.0);
  }
}

TEST_CASE("step_linear rejects bad steps and leaking drifts") {
  const Grid g = Grid::line(1.0, 16);
  const VectorField a = drift(g, 1.0);
  const ScalarField b(g, 0.0);
  const ScalarField V(g, 1.0);
  const double lim = linear_cfl_limit(a, b);
  CHECK_THROWS_AS(step_linear(V, a, b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step_linear(V, a, b, 1.01 * lim), std::invalid_argument);
  VectorField leak = a;
  leak.face(0, 0) = 1.0;
  CHECK_THROWS_AS(step_linear(V, leak, b, 0.5 * lim), std::invalid_argument);
}

TEST_CASE("evolve_linear with b = -1 tracks exp(-t)") {
  const Grid g = Grid::line(1.0, 16);
  const double c = 2.0;
  LinearRunOptions o;
  o.T = 1.0;
  o.windows = {0.1, 0.5};
  o.p2 = 1.0;
  o.q2 = 1.0;
  std::size_t calls = 0;
  o.observer = [&](double, const ScalarField&) { ++calls; };
  const auto coeffs = [](double, VectorField&, ScalarField& b) {
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = -1.0;
  };
  const LinearRun r = evolve_linear(ScalarField(g, c), coeffs, o);
  const double dt = 0.9 * linear_cfl_limit(VectorField(g), ScalarField(g, -1.0));
  CHECK(r.final_V.max() == doctest::Approx(c * std::exp(-1.0)).epsilon(dt));
  CHECK(r.final_V.min() == r.final_V.max());
  REQUIRE(r.inf_after.size() == 2);
  CHECK(r.inf_after[0] == r.final_V.min());
  CHECK(r.inf_after[1] == r.final_V.min());
  CHECK(r.budget_b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.budget_a == 0.0);
  CHECK(calls == r.steps + 1);
}

TEST_CASE("integrability condition") {
  MPProbeConfig c;
  CHECK(c.integrability_condition());
  c.p1 = 2.0;  // 1/4 + 1/4 = 1/2
  CHECK_FALSE(c.integrability_condition());
  c.p1 = 4.0;
  c.dim = 2;  // 1/4 + 1/4 = 1/2
  CHECK_FALSE(c.integrability_condition());
  c.p1 = 8.0;
  c.q2 = 3.0;
  c.p2 = 4.0;
  CHECK(c.integrability_condition());
  MPProbeConfig bad;
  bad.p1 = 2.0;
  CHECK_THROWS_AS(probe_lower_bound(bad, 4), std::invalid_argument);
  CHECK_THROWS_AS(probe_lower_bound(MPProbeConfig{}, 0), std::invalid_argument);
  bad = MPProbeConfig{};
  bad.tau = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("coefficient family names round trip") {
  for (auto f : {CoefficientFamily::zero, CoefficientFamily::smooth, CoefficientFamily::concentrating,
                 CoefficientFamily::mixed}) {
    CHECK(coefficient_family_from_string(to_string(f)) == f);
  }
  CHECK_THROWS_AS(coefficient_family_from_string("wild"), std::invalid_argument);
}

TEST_CASE("probe instances meet their budgets and stay positive") {
  MPProbeConfig c;
  c.cells = 48;
  c.seed = 9;
  for (auto fam : {CoefficientFamily::smooth, CoefficientFamily::concentrating, CoefficientFamily::mixed}) {
    c.family = fam;
    const MPProbeResult r = probe_lower_bound(c, 4);
    CHECK(r.condition);
    CHECK(r.all_within_budget);
    CHECK(r.empirical_C > 0.0);
    CHECK(r.empirical_C_2tau >= r.empirical_C);
    for (const auto& in : r.instances) {
      CHECK(in.budget_a == doctest::Approx(c.L).epsilon(1e-6));
      CHECK(in.budget_b == doctest::Approx(c.L).epsilon(1e-6));
      CHECK(in.max_V0 <= c.L);
      CHECK(in.int_V0 >= 1.0 / c.L * (1 - 1e-12));
    }
  }
  c.family = CoefficientFamily::mixed;
  const MPProbeResult a = probe_lower_bound(c, 3);
  const MPProbeResult b = probe_lower_bound(c, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.instances[k].seed == b.instances[k].seed);
    CHECK(a.instances[k].inf_V == b.instances[k].inf_V);
  }
}

TEST_CASE("zero coefficients reduce to the heat equation") {
  MPProbeConfig c;
  c.cells = 32;
  c.family = CoefficientFamily::zero;
  c.data = ProbeDataKind::constant;
  const MPProbeResult r = probe_lower_bound(c, 2);
  for (const auto& in : r.instances) {
    CHECK(in.budget_a == 0.0);
    CHECK(in.budget_b == 0.0);
    // constant data stay constant under pure diffusion
    CHECK(in.inf_V == doctest::Approx(in.max_V0).epsilon(1e-13));
  }
}
