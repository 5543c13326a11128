#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "degen/calculus.hpp"
#include "degen/diagnostics.hpp"
#include "degen/dictionary.hpp"
#include "degen/solver.hpp"
#include "doctest.h"

using namespace degen;

namespace {

const double kPi = std::acos(-1.0);

DiagnosticsRecord rec(double t, double u2v, double g4, double l4, double gv) {
  DiagnosticsRecord r;
  r.t = t;
  r.cumulative_u2v = u2v;
  r.cumulative_gradv4 = g4;
  r.lp_u4 = l4;
  r.sup_gradv = gv;
  return r;
}

}  // namespace

TEST_CASE("nonconstancy against hand values") {
  const Grid g = Grid::line(1.0, 4);
  CHECK(nonconstancy(ScalarField(g, 3.0)) == 0.0);
  // mean 2, every cell deviates by 1
  CHECK(nonconstancy(ScalarField(g, {1.0, 1.0, 3.0, 3.0})) == doctest::Approx(1.0).epsilon(1e-15));
  // mean 1/4 on a box of area 2: deviations 3/4, 1/4, 1/4, 1/4 on cells of area 1/2
  const Grid r = Grid::rect(2.0, 1.0, 2, 2);
  CHECK(nonconstancy(ScalarField(r, {1.0, 0.0, 0.0, 0.0})) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("gradv4_over_v3 on a linear ramp") {
  const Grid g = Grid::line(1.0, 8);
  const double h = g.h(0);
  CHECK(gradv4_over_v3(ScalarField(g, 2.0), 0.0) == 0.0);
  const ScalarField v = ScalarField::sample(g, [](double x, double) { return 1.0 + x; });
  // face slopes are 1 inside and 0 on the walls, so |grad v|^2 = 1 inside and 1/2 next to a wall
  double expect = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double g2 = (i == 0 || i == 7) ? 0.5 : 1.0;
    expect += g2 * g2 / std::pow(1.0 + g.center(0, i) + 1e-3, 3) * h;
  }
  CHECK(gradv4_over_v3(v, 1e-3) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("diagnostics_step on constant fields") {
  const Grid g = Grid::rect(2.0, 0.5, 4, 3);
  const SolverState s = SolverState::initial(ScalarField(g, 2.0), ScalarField(g, 0.25));
  const DiagnosticsRecord r = diagnostics_step(s, 0.125);
  CHECK(r.dt == 0.125);
  CHECK(r.mass_u == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.l1_v == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.min_u == 2.0);
  CHECK(r.max_v == 0.25);
  CHECK(r.lp_u2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.lp_u4 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.lp_u8 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.sup_gradv == 0.0);
  CHECK(r.nonconstancy_u == 0.0);
}

TEST_CASE("diagnostics csv layout") {
  std::ostringstream os;
  const std::vector<DiagnosticsRecord> rs{rec(0, 0, 0, 1, 1), rec(1, 2, 3, 4, 5)};
  write_diagnostics_csv(os, rs);
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("t,dt,mass_u", 0) == 0);
  for (const auto& l : lines) CHECK(std::count(l.begin(), l.end(), ',') == 15);
}

TEST_CASE("check_boundedness on synthetic histories") {
  std::vector<DiagnosticsRecord> conv, grow;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    conv.push_back(rec(t, 1.0 - std::exp(-t), 2.0 * (1.0 - std::exp(-2 * t)), 1.0, 0.5));
    grow.push_back(rec(t, t, t, 1.0 + t, 0.5));
  }
  const BoundednessCheck a = check_boundedness(conv, 10.0);
  CHECK(a.u2v_tail_fraction == doctest::Approx((std::exp(-9.0) - std::exp(-10.0)) / (1.0 - std::exp(-10.0))));
  CHECK(a.l4_ratio == 1.0);
  CHECK(a.gradv_ratio == 1.0);
  CHECK(a.passed);
  const BoundednessCheck b = check_boundedness(grow, 10.0);
  CHECK(b.u2v_tail_fraction == doctest::Approx(0.1));
  CHECK(b.l4_ratio == doctest::Approx(11.0 / 5.9));
  CHECK_FALSE(b.passed);
  // all-zero histories count as bounded
  std::vector<DiagnosticsRecord> zero{rec(0, 0, 0, 0, 0), rec(1, 0, 0, 0, 0)};
  CHECK(check_boundedness(zero, 1.0).passed);
}

TEST_CASE("plateau bump geometry") {
  const Grid g = Grid::line(1.0, 400);
  const BumpSpec b{{0.5, 0.0}, 0.1};
  const ScalarField psi = plateau_bump(g, b);
  for (int i = 0; i < g.nx(); ++i) {
    const double r = std::abs(g.center(0, i) - 0.5);
    if (r <= 0.1) CHECK(psi.at(i) == 1.0);
    if (r >= 0.2) CHECK(psi.at(i) == 0.0);
    CHECK(psi.at(i) >= 0.0);
    CHECK(psi.at(i) <= 1.0);
  }
}

TEST_CASE("standard dictionary members are certified") {
  for (const Grid& g : {Grid::line(1.0, 128), Grid::rect(1.0, 1.0, 48, 48)}) {
    const auto dict = TestFunctionDictionary::standard(g);
    CHECK(dict.size() == (g.dim() == 1 ? 11u : 27u));
    for (const auto& m : dict.members()) {
      CHECK(m.certificate <= 1.0 + 1e-12);
      CHECK(discrete_w2inf_norm(m.psi) <= m.certificate + 1e-12);
      const ScalarField lap = laplacian(m.psi);
      double sup = 0.0;
      for (std::size_t k = 0; k < lap.size(); ++k) sup = std::max(sup, std::abs(lap[k]));
      CHECK(m.lap_sup == doctest::Approx(sup).epsilon(1e-14));
      CHECK(neumann_defect(m.psi) <= 4.0);
    }
    CHECK(dict.find("constant").psi.min() == 1.0);
    CHECK_THROWS_AS(dict.find("nope"), std::out_of_range);
  }
}

TEST_CASE("cosine members are discrete Laplacian eigenvectors") {
  const Grid g = Grid::line(2.0, 64);
  const double h = g.h(0);
  const auto dict = TestFunctionDictionary::standard(g);
  for (int k = 1; k <= 8; ++k) {
    const auto& m = dict.find("cos_" + std::to_string(k));
    const double s = std::sin(k * kPi * h / (2.0 * g.length(0)));
    const double lambda = -4.0 / (h * h) * s * s;
    for (int i = 0; i < g.nx(); ++i) CHECK(m.lap_psi.at(i) == doctest::Approx(lambda * m.psi.at(i)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("dictionary rejects uncertified or non-Neumann members") {
  const Grid g = Grid::line(1.0, 64);
  TestFunctionDictionary d;
  const ScalarField c = ScalarField::sample(g, [](double x, double) { return std::cos(3 * kPi * x); });
  CHECK_THROWS_AS(d.add("big", c, 1.0, 1.0), std::invalid_argument);
  const ScalarField ramp = ScalarField::sample(g, [](double x, double) { return 0.5 * x; });
  CHECK_THROWS_AS(d.add("ramp", ramp, 1.0, 0.5), std::invalid_argument);
  d.add("ok", c, 9.0 * kPi * kPi, 1.0);
  CHECK(d.size() == 1);
}

TEST_CASE("dual_norm_proxy of constants and bump heights") {
  const Grid g = Grid::line(2.0, 200);
  const auto dict = TestFunctionDictionary::standard(g);
  CHECK(dual_norm_proxy(ScalarField(g, -0.5), dict) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dual_norm_proxy(ScalarField(g, 0.0), dict) == 0.0);
  const double R = TestFunctionDictionary::default_low_bump(g).radius;
  // the analytic certificate of a plateau bump of radius R in 1D
  const double cert = std::max({1.0, 15.0 / (8.0 * R), 10.0 / (std::sqrt(3.0) * R * R)});
  CHECK(bump_height(dict.find("bump_low")) <= 1.0 / cert + 1e-12);
  CHECK(bump_height(dict.find("bump_low")) > 0.5 / cert);
}

TEST_CASE("tv_series certified bound on a coupled run") {
  const Grid g = Grid::line(1.0, 64);
  const ScalarField u0 = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.5 * std::cos(kPi * x); });
  const ScalarField v0 = ScalarField::sample(g, [](double x, double) { return 0.3 * (1.0 + std::cos(2 * kPi * x)); });
  SimParams p;
  p.eps = 0.01;
  p.t_end = 0.5;
  p.snapshot_times = {0.0, 0.1, 0.25, 0.5};
  const Trajectory tr = simulate(u0, v0, MotilitySpec::linear(), p);
  const auto dict = TestFunctionDictionary::standard(g);
  const std::vector<double> times{0.0, 0.25, 0.5};
  const TVReport rep = tv_series(tr, dict, times, p.eps, 1.0);
  REQUIRE(rep.intervals.size() == 2);
  CHECK(rep.max_slack <= 1e-10);
  for (const auto& iv : rep.intervals) CHECK(iv.proxy <= iv.certified_bound + 1e-10);

  // Oracle: recompute the first interval by hand from the snapshots.
  const Snapshot* s0 = nullptr;
  const Snapshot* s1 = nullptr;
  for (const auto& s : tr.snapshots) {
    if (s.t == 0.0) s0 = &s;
    if (s.t == 0.25) s1 = &s;
  }
  REQUIRE(s0);
  REQUIRE(s1);
  double proxy = 0.0, bound = 0.0;
  const double mass = integrate(u0);
  for (const auto& m : dict.members()) {
    proxy = std::max(proxy, std::abs(inner(s1->u - s0->u, m.psi)));
    bound = std::max(bound, m.lap_sup * (p.eps * mass * 0.25 + (s1->cumulative_uv - s0->cumulative_uv)));
  }
  CHECK(rep.intervals[0].proxy == doctest::Approx(proxy).epsilon(1e-13));
  CHECK(rep.intervals[0].certified_bound == doctest::Approx(bound).epsilon(1e-13));

  const std::vector<double> missing{0.0, 0.3};
  CHECK_THROWS_AS(tv_series(tr, dict, missing, p.eps, 1.0), std::invalid_argument);

  std::ostringstream os;
  write_tv_csv(os, rep);
  const std::string csv = os.str();
  CHECK(csv.rfind("t0,t1,proxy,certified_bound,max_slack\n", 0) == 0);
  CHECK(csv.find("\ntotal,") != std::string::npos);
}
