#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "degen/motility.hpp"
#include "doctest.h"

using namespace degen;

namespace {

std::vector<MotilitySpec> degenerate_family() {
  return {MotilitySpec::linear(), MotilitySpec::exp_decay(1.0), MotilitySpec::exp_decay(0.3),
          MotilitySpec::saturating(),
          MotilitySpec::tabulated({0.0, 0.5, 1.0, 2.0, 5.0, 12.0}, {0.0, 0.45, 0.8, 1.2, 1.5, 1.6})};
}

}  // namespace

TEST_CASE("phi_eval closed forms") {
  CHECK(phi_eval(MotilitySpec::linear(), 0.7) == 0.7);
  CHECK(phi_eval(MotilitySpec::exp_decay(1.0), 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  for (const auto& spec : degenerate_family()) CHECK(phi_eval(spec, 0.0) == 0.0);
  CHECK(phi_eval(MotilitySpec::shifted(0.5, MotilitySpec::linear()), 0.0) == 0.5);
  CHECK_THROWS_AS(phi_eval(MotilitySpec::linear(), -1e-3), std::domain_error);
}

TEST_CASE("phi_prime closed forms") {
  CHECK(phi_prime(MotilitySpec::linear(), 3.0) == 1.0);
  CHECK(phi_prime(MotilitySpec::exp_decay(1.0), 0.0) == 1.0);
  CHECK(phi_prime(MotilitySpec::saturating(), 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(phi_prime(MotilitySpec::saturating(), -2.0), std::domain_error);
}

TEST_CASE("phi_prime agrees with centered differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  auto specs = degenerate_family();
  specs.push_back(MotilitySpec::shifted(0.25, MotilitySpec::saturating()));
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 1000; ++trial) {
      const double v = dist(rng);
      const double step = 1e-6 * std::max(1.0, v);
      if (v - step < 0.0) continue;
      const double fd = (spec.value(v + step) - spec.value(v - step)) / (2.0 * step);
      const double exact = spec.derivative(v);
      // Tabulated specs are only C^1 at nodes; skip samples straddling one.
      if (spec.kind() == MotilityKind::tabulated) {
        bool near_node = false;
        for (double node : {0.5, 1.0, 2.0, 5.0, 12.0}) near_node |= std::abs(v - node) < 2 * step;
        if (near_node) continue;
      }
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("lemma1_constants against sampling oracles") {
  const auto lin = lemma1_constants(MotilitySpec::linear(), 5.0);
  CHECK(lin.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.upper == doctest::Approx(1.0).epsilon(1e-12));

  // Oracle: 1e6 samples of the ratio and |phi'| written out by hand.
  auto oracle = [](auto ratio, auto slope, double K) {
    double lo = ratio(0.0), hi = std::abs(slope(0.0));
    for (int m = 1; m <= 1'000'000; ++m) {
      const double s = K * m / 1e6;
      lo = std::min(lo, ratio(s));
      hi = std::max(hi, std::abs(slope(s)));
    }
    return std::pair{lo, hi};
  };
  const auto [elo, ehi] = oracle([](double s) { return std::exp(-s); },
                                 [](double s) { return std::exp(-s) * (1 - s); }, 1.0);
  const auto ed = lemma1_constants(MotilitySpec::exp_decay(1.0), 1.0);
  CHECK(ed.lower == doctest::Approx(elo).epsilon(1e-9));
  CHECK(ed.upper == doctest::Approx(ehi).epsilon(1e-9));
  CHECK(ed.lower == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(ed.upper == doctest::Approx(1.0).epsilon(1e-12));

  const auto [slo, shi] = oracle([](double s) { return 1.0 / (1.0 + s); },
                                 [](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }, 1.0);
  const auto sat = lemma1_constants(MotilitySpec::saturating(), 1.0);
  CHECK(sat.lower == doctest::Approx(slo).epsilon(1e-9));
  CHECK(sat.upper == doctest::Approx(shi).epsilon(1e-9));
  CHECK(sat.lower == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(lemma1_constants(MotilitySpec::shifted(0.5, MotilitySpec::linear()), 1.0), std::domain_error);
  // A table dipping below zero violates phi > 0.
  const auto bad = MotilitySpec::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, -0.5, 1.0});
  CHECK_THROWS_AS(lemma1_constants(bad, 3.0), std::domain_error);
}

TEST_CASE("lemma1 sandwich holds on random samples") {
  std::mt19937_64 rng(23);
  for (const auto& spec : degenerate_family()) {
    for (double K : {0.1, 1.0, 10.0}) {
      const auto c = lemma1_constants(spec, K);
      CHECK(c.lower > 0.0);
      std::uniform_real_distribution<double> dist(0.0, K);
      for (int trial = 0; trial < 10000; ++trial) {
        const double v = dist(rng);
        const double p = spec.value(v);
        CHECK(c.lower * v <= p + 1e-9);
        CHECK(p <= c.upper * v + 1e-9);
        CHECK(std::abs(spec.derivative(v)) <= c.upper + 1e-9);
      }
    }
  }
}

TEST_CASE("tabulated spec parsing and validation") {
  std::istringstream is("# v phi\n0 0\n1 0.8\n2 1.0  # saturates\n\n4 1.1\n");
  const auto spec = MotilitySpec::read_table(is);
  CHECK(spec.kind() == MotilityKind::tabulated);
  CHECK(spec.value(1.0) == doctest::Approx(0.8));
  CHECK(spec.value(0.0) == 0.0);
  CHECK(spec.derivative(0.0) > 0.0);
  // Monotone data stay monotone between nodes.
  double prev = 0.0;
  for (double v = 0.0; v <= 4.0; v += 0.01) {
    CHECK(spec.value(v) >= prev - 1e-15);
    prev = spec.value(v);
  }
  CHECK_THROWS(MotilitySpec::tabulated({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}));
  CHECK_THROWS(MotilitySpec::tabulated({0.1, 1.0}, {0.0, 1.0}));
  CHECK_THROWS(MotilitySpec::tabulated({0.0, 1.0}, {0.2, 1.0}));
  std::istringstream broken("0 0\n1\n");
  CHECK_THROWS(MotilitySpec::read_table(broken));
}
