#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "degen/field.hpp"

namespace degen {

struct IneqCheckConfig {
  double p = 2.0;    // >= 2
  double eta = 1.0;  // > 0
  double C = 1.0;    // candidate constant, >= 0
  void validate() const;
};

/// The five integrals entering
///   int phi^p |grad psi|^2 / psi
///     <= eta (int phi^(p-2) psi |grad phi|^2 + int phi psi)
///        + C (1 + 1/eta) (int phi^p + (int phi)^(2p-1)) int |grad psi|^4 / psi^3.
struct Ineq41Terms {
  double lhs = 0.0;          // int phi^p |grad psi|^2 / psi
  double gradient = 0.0;     // int phi^(p-2) psi |grad phi|^2
  double product = 0.0;      // int phi psi
  double mass = 0.0;         // int phi^p + (int phi)^(2p-1)
  double fisher = 0.0;       // int |grad psi|^4 / psi^3
};

/// Throws std::invalid_argument when psi is not strictly positive, phi is
/// negative somewhere, p < 2, or the grids differ.
Ineq41Terms ineq41_terms(const ScalarField& phi, const ScalarField& psi, double p);

struct Ineq41Check {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

Ineq41Check check_ineq_41(const ScalarField& phi, const ScalarField& psi, const IneqCheckConfig& cfg);

/// Smallest C >= 0 for which the pair satisfies the inequality at this eta
/// (0 when the right-hand product term vanishes and the pair holds anyway,
/// +inf when it vanishes and the pair fails).
double required_C(const Ineq41Terms& terms, double eta);

struct IneqPair {
  ScalarField phi;
  ScalarField psi;
};

/// Random smooth positive pairs: phi = exp(s1), psi = exp(s2) with s a
/// truncated cosine series whose k-th coefficient is uniform in
/// [-amplitude/k, amplitude/k]. Deterministic in `seed`.
std::vector<IneqPair> random_ineq_corpus(const Grid& grid, std::size_t count, std::uint64_t seed,
                                         int modes = 8, double amplitude = 2.0);

/// Largest required_C over eta_grid for one pair.
double pair_required_C(double p, std::span<const double> eta_grid, const IneqPair& pair);

struct IneqRefineOptions {
  std::size_t top = 10;    // pairs to refine, worst first
  int iterations = 200;    // proposals per pair
  double step = 0.3;       // size of the log-perturbation series
  int modes = 8;
  std::uint64_t seed = 1;
};

/// Random-search ascent on the `top` pairs with the largest required constant:
/// each proposal multiplies phi and psi by exp of a small random cosine series
/// and is kept when it raises pair_required_C. Returns the refined pairs.
std::vector<IneqPair> refine_worst_pairs(double p, std::span<const double> eta_grid, std::span<const IneqPair> corpus,
                                         const IneqRefineOptions& opts = {});

/// Smallest C valid for every pair and every eta in the grid (no safety factor).
double fit_C_41(double p, std::span<const double> eta_grid, std::span<const IneqPair> corpus);

/// Number of (pair, eta) combinations for which check_ineq_41 fails at C.
std::size_t count_violations(double p, std::span<const double> eta_grid, double C, std::span<const IneqPair> corpus);

}  // namespace degen
