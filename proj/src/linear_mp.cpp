#include "degen/linear_mp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "degen/calculus.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// |a| at cell centers from the mean of the two bounding faces per axis.
double vector_lp_norm(const VectorField& a, double p) {
  const Grid& g = a.grid();
  ScalarField mag(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double ax = 0.5 * (a.face(0, i, j) + a.face(0, i + 1, j));
      double s = ax * ax;
      if (g.dim() == 2) {
        const double ay = 0.5 * (a.face(1, i, j) + a.face(1, i, j + 1));
        s += ay * ay;
      }
      mag.at(i, j) = std::sqrt(s);
    }
  }
  return lp_norm(mag, p);
}

template <class F>
double simpson(F&& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

constexpr int kBudgetIntervals = 2048;

struct Modulation {
  double omega = 0.0;
  double phase = 0.0;
  double operator()(double t) const { return 1.0 + 0.5 * std::sin(omega * t + phase); }
};

struct Coefficients {
  VectorField a_shape;
  ScalarField b_shape;
  Modulation theta_a;
  Modulation theta_b;
  double scale_a = 0.0;
  double scale_b = 0.0;
  std::string family;
};

Coefficients make_coefficients(const Grid& g, CoefficientFamily family, const MPProbeConfig& cfg,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  if (family == CoefficientFamily::mixed) {
    family = unit(rng) < 0.5 ? CoefficientFamily::smooth : CoefficientFamily::concentrating;
  }
  Coefficients c{VectorField(g), ScalarField(g), {}, {}, 0.0, 0.0, to_string(family)};
  c.theta_a = {uni(1.0, 10.0), uni(0.0, 2 * kPi)};
  c.theta_b = {uni(1.0, 10.0), uni(0.0, 2 * kPi)};
  if (family == CoefficientFamily::zero) return c;

  const double lx = g.length(0);
  const double ly = g.length(1);
  const int n = g.dim();
  if (family == CoefficientFamily::smooth) {
    std::array<double, 4> ca{}, cy{}, cb{};
    for (int k = 0; k < 4; ++k) {
      ca[k] = uni(-1.0, 1.0) / (k + 1);
      cy[k] = uni(-1.0, 1.0) / (k + 1);
      cb[k] = uni(-1.0, 1.0) / (k + 1);
    }
    const double offset = uni(0.5, 1.5);
    c.a_shape = VectorField::sample_no_flux(g, [&](int axis, double x, double y) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) {
        s += axis == 0 ? ca[k] * std::sin((k + 1) * kPi * x / lx) * (n == 2 ? std::cos(k * kPi * y / ly) : 1.0)
                       : cy[k] * std::sin((k + 1) * kPi * y / ly) * std::cos(k * kPi * x / lx);
      }
      return s;
    });
    c.b_shape = ScalarField::sample(g, [&](double x, double y) {
      double s = -offset;
      for (int k = 0; k < 4; ++k) {
        s += cb[k] * std::cos((k + 1) * kPi * x / lx) * (n == 2 ? std::cos(k * kPi * y / ly) : 1.0);
      }
      return s;
    });
  } else {
    // Spikes of width w normalized so that their L^p norms stay O(1) as w shrinks.
    const double w = uni(0.01, 0.05) * std::min(lx, n == 2 ? ly : lx);
    const std::array<double, 2> cb{uni(0.2, 0.8) * lx, uni(0.2, 0.8) * ly};
    const std::array<double, 2> ca{uni(0.2, 0.8) * lx, uni(0.2, 0.8) * ly};
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double amp_a = std::pow(w, -n / cfg.p1);
    const double amp_b = std::pow(w, -n / cfg.p2);
    c.a_shape = VectorField::sample_no_flux(g, [&](int axis, double x, double y) {
      const double dx = x - ca[0];
      const double dy = n == 2 ? y - ca[1] : 0.0;
      const double r2 = (dx * dx + dy * dy) / (w * w);
      return sign * amp_a * (axis == 0 ? dx : dy) / w * std::exp(-r2);
    });
    c.b_shape = ScalarField::sample(g, [&](double x, double y) {
      const double dx = x - cb[0];
      const double dy = n == 2 ? y - cb[1] : 0.0;
      return -amp_b * std::exp(-(dx * dx + dy * dy) / (w * w));
    });
  }

  const double na = vector_lp_norm(c.a_shape, cfg.p1);
  const double nb = lp_norm(c.b_shape, cfg.p2);
  const double ia = simpson([&](double t) { return std::pow(c.theta_a(t), cfg.q1); }, 0.0, cfg.T, kBudgetIntervals);
  const double ib = simpson([&](double t) { return std::pow(c.theta_b(t), cfg.q2); }, 0.0, cfg.T, kBudgetIntervals);
  if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) {
    throw GeneratorFailure("coefficient shape has zero or infinite norm; cannot scale to the budget");
  }
  c.scale_a = std::pow(cfg.L / (std::pow(na, cfg.q1) * ia), 1.0 / cfg.q1);
  c.scale_b = std::pow(cfg.L / (std::pow(nb, cfg.q2) * ib), 1.0 / cfg.q2);
  if (!std::isfinite(c.scale_a) || !std::isfinite(c.scale_b)) {
    throw GeneratorFailure("budget scaling overflowed");
  }
  return c;
}

ScalarField make_data(const Grid& g, const MPProbeConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  if (cfg.data == ProbeDataKind::constant) {
    const double c = std::max(uni(0.5, 1.0) * cfg.L, 1.0 / (cfg.L * g.volume()));
    if (c > cfg.L) throw GeneratorFailure("constant data cannot meet max V0 <= L and int V0 >= 1/L");
    return ScalarField(g, c);
  }
  // cos^2 bump supported away from the boundary, zero elsewhere.
  const double scale = g.dim() == 2 ? std::min(g.length(0), g.length(1)) : g.length(0);
  const double w = uni(0.15, 0.3) * scale;
  const std::array<double, 2> center{uni(0.35, 0.65) * g.length(0), uni(0.35, 0.65) * g.length(1)};
  ScalarField shape = ScalarField::sample(g, [&](double x, double y) {
    const double dx = x - center[0];
    const double dy = g.dim() == 2 ? y - center[1] : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r >= w) return 0.0;
    const double c = std::cos(0.5 * kPi * r / w);
    return c * c;
  });
  double peak = uni(0.5, 1.0) * cfg.L;
  const double mass = integrate(shape) / shape.max();
  if (peak * mass < 1.0 / cfg.L) peak = 1.01 / (cfg.L * mass);
  if (peak > cfg.L) throw GeneratorFailure("data cannot meet max V0 <= L and int V0 >= 1/L");
  shape *= peak / shape.max();
  return shape;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

double linear_cfl_limit(const VectorField& a, const ScalarField& b) {
  const Grid& g = b.grid();
  double rate = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    double amax = 0.0;
    for (double x : a.component(d)) amax = std::max(amax, std::abs(x));
    rate += 2.0 / (g.h(d) * g.h(d)) + 2.0 * amax / g.h(d);
  }
  rate += std::max(0.0, -b.min());
  return 1.0 / rate;
}

ScalarField step_linear(const ScalarField& V, const VectorField& a, const ScalarField& b, double dt) {
  if (!(V.grid() == b.grid()) || !(V.grid() == a.grid())) throw std::invalid_argument("step_linear: grids differ");
  if (!(dt > 0.0)) throw std::invalid_argument("step_linear: dt must be positive");
  const double limit = linear_cfl_limit(a, b);
  if (dt > limit * (1.0 + 1e-12)) throw std::invalid_argument("step_linear: dt exceeds the CFL limit");
  const ScalarField lap = laplacian(V);
  const ScalarField drift = div_flux(a, V);
  ScalarField out = V;
  for (std::size_t k = 0; k < V.size(); ++k) out[k] += dt * (lap[k] + drift[k] + b[k] * V[k]);
  return out;
}

LinearRun evolve_linear(const ScalarField& V0, const CoefficientProvider& coeffs, const LinearRunOptions& opts) {
  if (!(opts.T > 0.0)) throw std::invalid_argument("evolve_linear: T must be positive");
  if (!(opts.cfl_safety > 0.0 && opts.cfl_safety <= 1.0)) {
    throw std::invalid_argument("evolve_linear: cfl_safety must lie in (0, 1]");
  }
  const Grid& g = V0.grid();
  LinearRun run{V0, std::vector<double>(opts.windows.size(), std::numeric_limits<double>::infinity()), 0.0, 0.0, 0};
  VectorField a(g);
  ScalarField b(g);
  if (opts.observer) opts.observer(0.0, run.final_V);
  double t = 0.0;
  while (t < opts.T) {
    coeffs(t, a, b);
    double dt = opts.cfl_safety * linear_cfl_limit(a, b);
    const bool last = t + dt >= opts.T;
    if (last) dt = opts.T - t;
    run.budget_a += dt * std::pow(vector_lp_norm(a, opts.p1), opts.q1);
    run.budget_b += dt * std::pow(lp_norm(b, opts.p2), opts.q2);
    run.final_V = step_linear(run.final_V, a, b, dt);
    t = last ? opts.T : t + dt;
    ++run.steps;
    const double m = run.final_V.min();
    for (std::size_t w = 0; w < opts.windows.size(); ++w) {
      if (t > opts.windows[w]) run.inf_after[w] = std::min(run.inf_after[w], m);
    }
    if (opts.observer) opts.observer(t, run.final_V);
  }
  return run;
}

std::string to_string(CoefficientFamily f) {
  switch (f) {
    case CoefficientFamily::zero: return "zero";
    case CoefficientFamily::smooth: return "smooth";
    case CoefficientFamily::concentrating: return "concentrating";
    case CoefficientFamily::mixed: return "mixed";
  }
  return "?";
}

CoefficientFamily coefficient_family_from_string(const std::string& s) {
  for (auto f : {CoefficientFamily::zero, CoefficientFamily::smooth, CoefficientFamily::concentrating,
                 CoefficientFamily::mixed}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown coefficient family: " + s);
}

bool MPProbeConfig::integrability_condition() const {
  return 1.0 / q1 + dim / (2.0 * p1) < 0.5 && 1.0 / q2 + dim / (2.0 * p2) < 1.0;
}

void MPProbeConfig::validate() const {
  if (!(p1 >= 2.0) || !(q1 > 2.0) || !(p2 >= 1.0) || !(q2 > 1.0)) {
    throw std::invalid_argument("probe exponents need p1 >= 2, q1 > 2, p2 >= 1, q2 > 1");
  }
  if (!(L > 0.0)) throw std::invalid_argument("probe budget L must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("probe horizon T must be positive");
  if (!(tau > 0.0 && tau < T)) throw std::invalid_argument("probe time tau must lie in (0, T)");
  if (dim != 1 && dim != 2) throw std::invalid_argument("probe grid dimension must be 1 or 2 (n <= 2)");
  if (!(length > 0.0) || cells < 2) throw std::invalid_argument("probe grid needs length > 0 and cells >= 2");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw std::invalid_argument("probe cfl_safety must lie in (0, 1]");
}

MPProbeResult probe_lower_bound(const MPProbeConfig& config, std::size_t instances) {
  config.validate();
  if (!config.integrability_condition()) {
    throw std::invalid_argument("integrability condition fails: no uniform positive lower bound exists");
  }
  if (instances == 0) throw std::invalid_argument("probe needs at least one instance");
  const Grid g = config.dim == 1 ? Grid::line(config.length, config.cells)
                                 : Grid::rect(config.length, config.length, config.cells, config.cells);
  MPProbeResult result;
  result.condition = true;
  result.instances.resize(instances);
  parallel_for(instances, [&](std::size_t k) {
    const std::uint64_t seed = instance_seed(config.seed, k);
    std::mt19937_64 rng(seed);
    const Coefficients c = make_coefficients(g, config.family, config, rng);
    const ScalarField V0 = make_data(g, config, rng);
    auto provider = [&](double t, VectorField& a, ScalarField& b) {
      const double sa = c.scale_a * c.theta_a(t);
      const double sb = c.scale_b * c.theta_b(t);
      for (int d = 0; d < g.dim(); ++d) {
        auto dst = a.component(d);
        auto src = c.a_shape.component(d);
        for (std::size_t m = 0; m < dst.size(); ++m) dst[m] = sa * src[m];
      }
      for (std::size_t m = 0; m < b.size(); ++m) b[m] = sb * c.b_shape[m];
    };
    LinearRunOptions opts;
    opts.T = config.T;
    opts.cfl_safety = config.cfl_safety;
    opts.windows = {config.tau, 2.0 * config.tau};
    opts.p1 = config.p1;
    opts.q1 = config.q1;
    opts.p2 = config.p2;
    opts.q2 = config.q2;
    const LinearRun run = evolve_linear(V0, provider, opts);

    ProbeInstance& inst = result.instances[k];
    inst.seed = seed;
    inst.family = c.family;
    inst.inf_V = run.inf_after[0];
    inst.inf_V_2tau = run.inf_after[1];
    VectorField a(g);
    ScalarField b(g);
    inst.budget_a = simpson([&](double t) {
      provider(t, a, b);
      return std::pow(vector_lp_norm(a, config.p1), config.q1);
    }, 0.0, config.T, kBudgetIntervals);
    inst.budget_b = simpson([&](double t) {
      provider(t, a, b);
      return std::pow(lp_norm(b, config.p2), config.q2);
    }, 0.0, config.T, kBudgetIntervals);
    inst.max_V0 = V0.max();
    inst.int_V0 = integrate(V0);
    const double tol = 1.0 + 1e-9;
    inst.within_budget = inst.budget_a <= config.L * tol && inst.budget_b <= config.L * tol &&
                         inst.max_V0 <= config.L * tol && inst.int_V0 * config.L >= 1.0 / tol;
  });
  result.empirical_C = std::numeric_limits<double>::infinity();
  result.empirical_C_2tau = std::numeric_limits<double>::infinity();
  result.all_within_budget = true;
  for (const auto& inst : result.instances) {
    result.empirical_C = std::min(result.empirical_C, inst.inf_V);
    result.empirical_C_2tau = std::min(result.empirical_C_2tau, inst.inf_V_2tau);
    result.all_within_budget = result.all_within_budget && inst.within_budget;
  }
  return result;
}

}  // namespace degen
