#include "degen/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "degen/calculus.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double weighted_integral(const Grid& g, const std::vector<double>& terms) {
  return compensated_sum(terms) * g.cell_volume();
}

ScalarField cosine_series(const Grid& grid, int modes, const std::function<double(int)>& coeff) {
  const int lmax = grid.dim() == 2 ? modes : 0;
  std::vector<double> c((modes + 1) * (lmax + 1));
  for (int k = 0; k <= modes; ++k) {
    for (int l = 0; l <= lmax; ++l) c[k * (lmax + 1) + l] = coeff(std::max(1, k + l));
  }
  return ScalarField::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (int k = 0; k <= modes; ++k) {
      const double cx = std::cos(k * kPi * x / grid.length(0));
      for (int l = 0; l <= lmax; ++l) s += c[k * (lmax + 1) + l] * cx * std::cos(l * kPi * y / grid.length(1));
    }
    return s;
  });
}

}  // namespace

void IneqCheckConfig::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("inequality check needs p >= 2");
  if (!(eta > 0.0)) throw std::invalid_argument("inequality check needs eta > 0");
  if (!(C >= 0.0)) throw std::invalid_argument("inequality check needs C >= 0");
}

Ineq41Terms ineq41_terms(const ScalarField& phi, const ScalarField& psi, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("inequality check needs p >= 2");
  if (!(phi.grid() == psi.grid())) throw std::invalid_argument("phi and psi live on different grids");
  if (!(psi.min() > 0.0)) throw std::invalid_argument("psi must be strictly positive");
  if (phi.min() < 0.0) throw std::invalid_argument("phi must be nonnegative");
  const Grid& g = phi.grid();
  const ScalarField dpsi = cell_grad_sq(psi);
  const ScalarField dphi = cell_grad_sq(phi);
  const std::size_t n = g.size();
  std::vector<double> lhs(n), grad_term(n), prod(n), powp(n), fisher(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = phi[k];
    const double s = psi[k];
    const double fp = std::pow(f, p);
    lhs[k] = fp * dpsi[k] / s;
    grad_term[k] = std::pow(f, p - 2.0) * s * dphi[k];
    prod[k] = f * s;
    powp[k] = fp;
    fisher[k] = dpsi[k] * dpsi[k] / (s * s * s);
  }
  Ineq41Terms t;
  t.lhs = weighted_integral(g, lhs);
  t.gradient = weighted_integral(g, grad_term);
  t.product = weighted_integral(g, prod);
  t.mass = weighted_integral(g, powp) + std::pow(integrate(phi), 2.0 * p - 1.0);
  t.fisher = weighted_integral(g, fisher);
  return t;
}

Ineq41Check check_ineq_41(const ScalarField& phi, const ScalarField& psi, const IneqCheckConfig& cfg) {
  cfg.validate();
  const Ineq41Terms t = ineq41_terms(phi, psi, cfg.p);
  Ineq41Check c;
  c.lhs = t.lhs;
  c.rhs = cfg.eta * (t.gradient + t.product) + cfg.C * (1.0 + 1.0 / cfg.eta) * t.mass * t.fisher;
  c.holds = c.lhs <= c.rhs;
  return c;
}

double required_C(const Ineq41Terms& t, double eta) {
  const double excess = t.lhs - eta * (t.gradient + t.product);
  if (excess <= 0.0) return 0.0;
  const double denom = (1.0 + 1.0 / eta) * t.mass * t.fisher;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return excess / denom;
}

std::vector<IneqPair> random_ineq_corpus(const Grid& grid, std::size_t count, std::uint64_t seed, int modes,
                                         double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto series = [&] {
    ScalarField f = cosine_series(grid, modes, [&](int order) { return amplitude * unit(rng) / order; });
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::exp(f[k]);
    return f;
  };
  std::vector<IneqPair> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    ScalarField phi = series();
    ScalarField psi = series();
    out.push_back({std::move(phi), std::move(psi)});
  }
  return out;
}

double pair_required_C(double p, std::span<const double> eta_grid, const IneqPair& pair) {
  const Ineq41Terms t = ineq41_terms(pair.phi, pair.psi, p);
  double best = 0.0;
  for (double eta : eta_grid) best = std::max(best, required_C(t, eta));
  return best;
}

std::vector<IneqPair> refine_worst_pairs(double p, std::span<const double> eta_grid, std::span<const IneqPair> corpus,
                                         const IneqRefineOptions& opts) {
  std::vector<double> score(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t m) { score[m] = pair_required_C(p, eta_grid, corpus[m]); });
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(order.size(), opts.top));

  std::vector<std::optional<IneqPair>> out(order.size());
  parallel_for(order.size(), [&](std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    IneqPair cur = corpus[order[r]];
    double best = score[order[r]];
    for (int it = 0; it < opts.iterations; ++it) {
      IneqPair cand = cur;
      const ScalarField s1 = cosine_series(cur.phi.grid(), opts.modes, [&](int k) { return opts.step * normal(rng) / k; });
      const ScalarField s2 = cosine_series(cur.phi.grid(), opts.modes, [&](int k) { return opts.step * normal(rng) / k; });
      for (std::size_t k = 0; k < cand.phi.size(); ++k) {
        cand.phi[k] *= std::exp(s1[k]);
        cand.psi[k] *= std::exp(s2[k]);
      }
      const double c = pair_required_C(p, eta_grid, cand);
      if (c > best) {
        best = c;
        cur = std::move(cand);
      }
    }
    out[r] = std::move(cur);
  });
  std::vector<IneqPair> refined;
  refined.reserve(out.size());
  for (auto& pr : out) refined.push_back(std::move(*pr));
  return refined;
}

double fit_C_41(double p, std::span<const double> eta_grid, std::span<const IneqPair> corpus) {
  std::vector<double> best(corpus.size(), 0.0);
  parallel_for(corpus.size(), [&](std::size_t m) { best[m] = pair_required_C(p, eta_grid, corpus[m]); });
  return best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
}

std::size_t count_violations(double p, std::span<const double> eta_grid, double C,
                             std::span<const IneqPair> corpus) {
  std::vector<std::size_t> bad(corpus.size(), 0);
  parallel_for(corpus.size(), [&](std::size_t m) {
    for (double eta : eta_grid) {
      if (!check_ineq_41(corpus[m].phi, corpus[m].psi, {p, eta, C}).holds) ++bad[m];
    }
  });
  std::size_t total = 0;
  for (std::size_t b : bad) total += b;
  return total;
}

}  // namespace degen
