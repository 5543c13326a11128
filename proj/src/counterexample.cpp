#include "degen/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "degen/calculus.hpp"
#include "degen/linear_mp.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGLNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

double distance(const CounterexampleSpec& spec, double x, double y) {
  const double dx = x - spec.x0[0];
  const double dy = spec.dim == 2 ? y - spec.x0[1] : 0.0;
  return std::sqrt(dx * dx + dy * dy);
}

// Multilinear interpolation of cell-center values at x0.
double value_at(const ScalarField& f, std::array<double, 2> x0) {
  const Grid& g = f.grid();
  std::array<int, 2> lo{0, 0};
  std::array<double, 2> w{0.0, 0.0};
  for (int d = 0; d < g.dim(); ++d) {
    const double s = std::clamp(x0[d] / g.h(d) - 0.5, 0.0, g.cells(d) - 1.0);
    lo[d] = std::min(static_cast<int>(std::floor(s)), g.cells(d) - 2);
    w[d] = s - lo[d];
  }
  if (g.dim() == 1) return (1 - w[0]) * f.at(lo[0]) + w[0] * f.at(lo[0] + 1);
  return (1 - w[0]) * (1 - w[1]) * f.at(lo[0], lo[1]) + w[0] * (1 - w[1]) * f.at(lo[0] + 1, lo[1]) +
         (1 - w[0]) * w[1] * f.at(lo[0], lo[1] + 1) + w[0] * w[1] * f.at(lo[0] + 1, lo[1] + 1);
}

}  // namespace

double PlateauProfile::value(double xi) const {
  if (xi <= plateau_end) return height;
  if (xi >= support_end) return 0.0;
  return height * (1.0 - smoothstep5((xi - plateau_end) / (support_end - plateau_end)));
}

double PlateauProfile::integral() const { return height * (plateau_end + 0.5 * (support_end - plateau_end)); }

PlateauProfile PlateauProfile::standard(int n, double alpha) {
  const double h = 2.0 * n + alpha;
  const double xp = std::sqrt(h / (1.0 - alpha));
  return {h, xp, xp + 1.0};
}

CounterexampleSpec CounterexampleSpec::standard(int dim, double alpha, int cells) {
  CounterexampleSpec s;
  s.alpha = alpha;
  s.g = PlateauProfile::standard(dim, alpha);
  s.dim = dim;
  s.lengths = std::vector<double>(dim, 2.0);
  s.cells = std::vector<int>(dim, cells);
  s.x0 = {1.0, dim == 2 ? 1.0 : 0.0};
  s.R = 0.45 * 2.0;
  s.R0 = dim == 2 ? std::sqrt(2.0) : 1.0;
  return s;
}

bool CounterexampleSpec::budget_condition() const { return 1.0 / q + dim / (2.0 * p) >= 1.0; }

void CounterexampleSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("counterexample needs alpha in (0, 1)");
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("counterexample needs p, q >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("counterexample needs T > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw std::invalid_argument("cfl_safety must lie in (0, 1]");
  if (lengths.size() != static_cast<std::size_t>(dim) || cells.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("counterexample grid needs one length and cell count per axis");
  }
  const Grid box = grid();
  if (!(R > 0.0)) throw std::invalid_argument("counterexample needs R > 0");
  double far = 0.0;
  for (int d = 0; d < dim; ++d) {
    if (x0[d] - R < 0.0 || x0[d] + R > box.length(d)) throw std::invalid_argument("B_R(x0) must lie inside the domain");
    const double m = std::max(x0[d], box.length(d) - x0[d]);
    far += m * m;
  }
  if (std::sqrt(far) > R0 * (1.0 + 1e-12)) throw std::invalid_argument("domain must lie inside B_R0(x0)");
  if (!(g.height > 0.0) || !(g.plateau_end >= 0.0) || !(g.support_end > g.plateau_end)) {
    throw std::invalid_argument("profile needs height > 0 and support_end > plateau_end >= 0");
  }
}

Grid CounterexampleSpec::grid() const { return Grid::make(dim, lengths, cells); }

double CounterexampleSpec::T_k(int k) const { return T + std::ldexp(1.0, -k); }

double CounterexampleSpec::initial_value() const {
  return std::min(std::pow(T, alpha), std::pow(T + 1.0, alpha - 1.0) * R * R);
}

double verify_g_condition(const CounterexampleSpec& spec) {
  const int samples = 100000;
  const double top = spec.g.support_end + 1.0;
  const int n = spec.dim;
  double margin = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= samples; ++m) {
    const double xi = top * m / samples;
    const double lhs = (xi * xi + 1.0) * spec.g.value(xi);
    const double rhs = 2.0 * n + spec.alpha - (1.0 - spec.alpha) * xi * xi;
    margin = std::min(margin, lhs - rhs);
  }
  return margin;
}

CounterexampleProblem build_counterexample(const CounterexampleSpec& spec, int k) {
  spec.validate();
  if (verify_g_condition(spec) < 0.0) throw std::invalid_argument("profile g violates the barrier condition");
  const double Tk = spec.T_k(k);
  if (!(Tk > spec.T)) throw std::invalid_argument("T_k must exceed T");
  const Grid g = spec.grid();
  std::vector<double> radius(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      radius[g.index(i, j)] = distance(spec, g.center(0, i), g.dim() == 2 ? g.center(1, j) : 0.0);
    }
  }
  CounterexampleProblem prob{nullptr, ScalarField(g, spec.initial_value()), Tk};
  const PlateauProfile profile = spec.g;
  prob.b_at = [radius = std::move(radius), profile, Tk](double t, ScalarField& b) {
    const double tau = Tk - t;
    const double inv = 1.0 / tau;
    const double inv_sqrt = 1.0 / std::sqrt(tau);
    for (std::size_t m = 0; m < b.size(); ++m) b[m] = -inv * profile.value(radius[m] * inv_sqrt);
  };
  return prob;
}

double barrier(const CounterexampleSpec& spec, int k, std::array<double, 2> x, double t) {
  const double tau = spec.T_k(k) - t;
  const double r = distance(spec, x[0], x[1]);
  return std::pow(tau, spec.alpha) * (r * r / tau + 1.0);
}

double supersolution_residual(const CounterexampleSpec& spec, int k, double r, double t) {
  const double tau = spec.T_k(k) - t;
  const double xi = r / std::sqrt(tau);
  const double f = xi * xi + 1.0;
  const double fp = 2.0 * xi;
  const double fpp = 2.0;
  const double radial = xi > 0.0 ? fp / xi : fpp;
  const double scale = std::pow(tau, spec.alpha - 1.0);
  const double v_t = scale * (-spec.alpha * f + 0.5 * xi * fp);
  const double lap = scale * (fpp + (spec.dim - 1) * radial);
  const double bV = -scale * spec.g.value(xi) * f;
  return v_t - lap - bV;
}

CounterexampleReport run_counterexample(const CounterexampleSpec& spec, const std::vector<int>& k_list) {
  spec.validate();
  CounterexampleReport report;
  report.g_margin = verify_g_condition(spec);
  if (report.g_margin < 0.0) throw std::invalid_argument("profile g violates the barrier condition");
  for (int k : k_list) {
    if (!(spec.T_k(k) > spec.T)) throw std::invalid_argument("T_k must exceed T");
  }
  // ||b_k(t)||_p^q <= c tau^(-gamma) with tau = T_k - t in (0, T + 1].
  const double gamma = spec.q * (1.0 - spec.dim / (2.0 * spec.p));
  if (gamma < 1.0) {
    constexpr int kIntervals = 20000;
    const double hx = spec.g.support_end / kIntervals;
    double moment = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double xi = i * hx;
      const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      moment += w * std::pow(spec.g.value(xi), spec.p) * std::pow(xi, spec.dim - 1);
    }
    moment *= hx / 3.0;
    const double sphere = spec.dim == 1 ? 2.0 : 2.0 * std::acos(-1.0);
    const double c = std::pow(sphere * moment, spec.q / spec.p);
    report.budget_bound = c * std::pow(spec.T + 1.0, 1.0 - gamma) / (1.0 - gamma);
  }
  const Grid grid = spec.grid();
  std::vector<char> inside(grid.size());
  std::vector<double> barrier_r2(grid.size());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double r = distance(spec, grid.center(0, i), grid.dim() == 2 ? grid.center(1, j) : 0.0);
      inside[grid.index(i, j)] = r <= spec.R;
      barrier_r2[grid.index(i, j)] = r * r;
    }
  }

  report.rows.resize(k_list.size());
  parallel_for(k_list.size(), [&](std::size_t idx) {
    const int k = k_list[idx];
    const CounterexampleProblem prob = build_counterexample(spec, k);
    CounterexampleRow& row = report.rows[idx];
    row.k = k;
    row.gap = prob.T_k - spec.T;

    // Budget with s = sqrt(T_k - t): dt = 2 s ds, smooth in s.
    {
      ScalarField b(grid);
      const double s_hi = std::sqrt(prob.T_k);
      const double s_lo = std::sqrt(prob.T_k - spec.T);
      const int panels = 64;
      const double width = (s_hi - s_lo) / panels;
      double total = 0.0;
      for (int m = 0; m < panels; ++m) {
        const double mid = s_lo + (m + 0.5) * width;
        for (std::size_t q = 0; q < kGLNodes.size(); ++q) {
          const double s = mid + 0.5 * width * kGLNodes[q];
          prob.b_at(prob.T_k - s * s, b);
          total += 0.5 * width * kGLWeights[q] * 2.0 * s * std::pow(lp_norm(b, spec.p), spec.q);
        }
      }
      row.budget = total;
    }

    double min_x0 = std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    std::size_t calls = 0;
    LinearRunOptions opts;
    opts.T = spec.T;
    opts.cfl_safety = spec.cfl_safety;
    opts.observer = [&](double t, const ScalarField& V) {
      min_x0 = std::min(min_x0, value_at(V, spec.x0));
      const bool final = t >= spec.T;
      if (calls++ % 8 != 0 && !final) return;
      const double tau = prob.T_k - t;
      const double ta = std::pow(tau, spec.alpha);
      for (std::size_t m = 0; m < V.size(); ++m) {
        if (inside[m]) ratio = std::max(ratio, V[m] / (ta * (barrier_r2[m] / tau + 1.0)));
      }
    };
    auto provider = [&](double t, VectorField&, ScalarField& b) { prob.b_at(t, b); };
    const LinearRun run = evolve_linear(prob.V0, provider, opts);
    row.steps = run.steps;
    row.min_V_at_x0 = min_x0;
    row.max_domination_ratio = ratio;

    double res = std::numeric_limits<double>::infinity();
    const int nr = 200;
    const int nt = 200;
    for (int it = 0; it <= nt; ++it) {
      const double t = spec.T * it / nt;
      for (int ir = 0; ir <= nr; ++ir) res = std::min(res, supersolution_residual(spec, k, spec.R * ir / nr, t));
    }
    row.min_supersolution_residual = res;
  });
  return report;
}

void write_counterexample_csv(std::ostream& os, const CounterexampleReport& report) {
  os << "k,gap,budget_integral,min_V_at_x0,max_domination_ratio,min_supersolution_residual\n"
     << std::setprecision(17);
  for (const auto& r : report.rows) {
    os << r.k << ',' << r.gap << ',' << r.budget << ',' << r.min_V_at_x0 << ',' << r.max_domination_ratio << ','
       << r.min_supersolution_residual << '\n';
  }
}

}  // namespace degen
