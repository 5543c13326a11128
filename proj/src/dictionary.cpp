#include "degen/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "degen/calculus.hpp"

namespace degen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace

ScalarField plateau_bump(const Grid& grid, const BumpSpec& bump) {
  if (!(bump.radius > 0.0)) throw std::invalid_argument("plateau_bump: radius must be positive");
  const double R = bump.radius;
  return ScalarField::sample(grid, [&](double x, double y) {
    const double dx = x - bump.center[0];
    const double dy = grid.dim() == 2 ? y - bump.center[1] : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    return 1.0 - smoothstep5((r - R) / R);
  });
}

double discrete_w2inf_norm(const ScalarField& psi) {
  const Grid& g = psi.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  double m = lp_norm(psi, kInfNorm);
  m = std::max(m, grad(psi).max_abs());
  auto val = [&](int i, int j) {
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return psi.at(i, j);
  };
  const double hx = g.h(0);
  const double hy = g.h(1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = psi.at(i, j);
      m = std::max(m, std::abs(val(i + 1, j) - 2 * c + val(i - 1, j)) / (hx * hx));
      if (g.dim() == 2) {
        m = std::max(m, std::abs(val(i, j + 1) - 2 * c + val(i, j - 1)) / (hy * hy));
        if (i + 1 < nx && j + 1 < ny) {
          const double mixed = (psi.at(i + 1, j + 1) - psi.at(i + 1, j) - psi.at(i, j + 1) + c) / (hx * hy);
          m = std::max(m, std::abs(mixed));
        }
      }
    }
  }
  return m;
}

double neumann_defect(const ScalarField& psi) {
  const Grid& g = psi.grid();
  const VectorField d = grad(psi);
  double second = 0.0;
  const ScalarField lap = laplacian(psi);
  second = lp_norm(lap, kInfNorm);
  double wall = 0.0;
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    wall = std::max({wall, std::abs(d.face(0, 1, j)) / g.h(0), std::abs(d.face(0, nx - 1, j)) / g.h(0)});
  }
  if (g.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      wall = std::max({wall, std::abs(d.face(1, i, 1)) / g.h(1), std::abs(d.face(1, i, ny - 1)) / g.h(1)});
    }
  }
  if (wall == 0.0) return 0.0;
  return second > 0.0 ? wall / second : std::numeric_limits<double>::infinity();
}

void TestFunctionDictionary::add(std::string name, const ScalarField& psi, double scale,
                                 double analytic_certificate) {
  ScalarField normalized = psi;
  normalized *= 1.0 / scale;
  const double cert = std::max(discrete_w2inf_norm(normalized), analytic_certificate / scale);
  if (cert > 1.0 + 1e-12) throw std::invalid_argument("test function " + name + " has W^{2,inf} norm > 1");
  if (neumann_defect(normalized) > 4.0) {
    throw std::invalid_argument("test function " + name + " violates the discrete Neumann condition");
  }
  ScalarField lap = laplacian(normalized);
  const double lap_sup = lp_norm(lap, kInfNorm);
  members_.push_back(TestFunction{std::move(name), std::move(normalized), std::move(lap), cert, lap_sup});
}

TestFunctionDictionary TestFunctionDictionary::standard(const Grid& grid, const BumpSpec& low,
                                                        const BumpSpec& high) {
  TestFunctionDictionary dict;
  dict.add("constant", ScalarField(grid, 1.0), 1.0, 1.0);

  // Cosine modes ordered by frequency, (k, l) != (0, 0).
  struct Mode {
    int k, l;
    double freq2;
  };
  std::vector<Mode> modes;
  const int kmax = grid.dim() == 1 ? 8 : 8;
  const int lmax = grid.dim() == 1 ? 0 : 8;
  const double wx = kPi / grid.length(0);
  const double wy = kPi / grid.length(1);
  for (int k = 0; k <= kmax; ++k) {
    for (int l = 0; l <= lmax; ++l) {
      if (k == 0 && l == 0) continue;
      modes.push_back({k, l, (k * wx) * (k * wx) + (l * wy) * (l * wy)});
    }
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.freq2 < b.freq2; });
  const std::size_t count = grid.dim() == 1 ? 8 : 24;
  for (std::size_t m = 0; m < count && m < modes.size(); ++m) {
    const auto [k, l, f2] = modes[m];
    const double ax = k * wx;
    const double ay = l * wy;
    const ScalarField psi = ScalarField::sample(
        grid, [&](double x, double y) { return std::cos(ax * x) * (grid.dim() == 2 ? std::cos(ay * y) : 1.0); });
    const double analytic = std::max({1.0, ax, ay, ax * ax, ay * ay, ax * ay});
    const double scale = std::max(analytic, discrete_w2inf_norm(psi));
    std::string name = "cos_" + std::to_string(k);
    if (grid.dim() == 2) name += "_" + std::to_string(l);
    dict.add(std::move(name), psi, scale, analytic);
  }

  auto add_bump = [&](const std::string& name, const BumpSpec& b) {
    const ScalarField psi = plateau_bump(grid, b);
    const double R = b.radius;
    // Radial profile: |beta'| <= 15/(8R), |beta''| <= 10/(sqrt(3) R^2); in 2D
    // the angular Hessian eigenvalue beta'/r is at most |beta'|/R.
    double analytic = std::max({1.0, 15.0 / (8.0 * R), 10.0 / (std::sqrt(3.0) * R * R)});
    if (grid.dim() == 2) analytic = std::max(analytic, 15.0 / (8.0 * R * R));
    const double scale = std::max(analytic, discrete_w2inf_norm(psi));
    dict.add(name, psi, scale, analytic);
  };
  add_bump("bump_low", low);
  add_bump("bump_high", high);
  return dict;
}

BumpSpec TestFunctionDictionary::default_low_bump(const Grid& grid) {
  const double r = 0.0375 * (grid.dim() == 1 ? grid.length(0) : std::min(grid.length(0), grid.length(1)));
  return BumpSpec{{0.25 * grid.length(0), grid.dim() == 2 ? 0.25 * grid.length(1) : 0.0}, r};
}

BumpSpec TestFunctionDictionary::default_high_bump(const Grid& grid) {
  const double r = 0.0375 * (grid.dim() == 1 ? grid.length(0) : std::min(grid.length(0), grid.length(1)));
  return BumpSpec{{0.675 * grid.length(0), grid.dim() == 2 ? 0.675 * grid.length(1) : 0.0}, r};
}

TestFunctionDictionary TestFunctionDictionary::standard(const Grid& grid) {
  return standard(grid, default_low_bump(grid), default_high_bump(grid));
}

const TestFunction& TestFunctionDictionary::find(const std::string& name) const {
  for (const auto& m : members_) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no test function named " + name);
}

double bump_height(const TestFunction& bump) { return bump.psi.max(); }

double dual_norm_proxy(const ScalarField& f, const TestFunctionDictionary& dict) {
  double best = 0.0;
  for (const auto& m : dict.members()) best = std::max(best, std::abs(inner(f, m.psi)));
  return best;
}

TVReport tv_series(std::span<const Snapshot> snapshots, const TestFunctionDictionary& dict, double eps,
                   double mass_u0, double Lambda) {
  TVReport report;
  report.max_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < snapshots.size(); ++k) {
    const Snapshot& a = snapshots[k];
    const Snapshot& b = snapshots[k + 1];
    const ScalarField du = b.u - a.u;
    const double drive = eps * mass_u0 * (b.t - a.t) + Lambda * (b.cumulative_uv - a.cumulative_uv);
    TVInterval iv{a.t, b.t, 0.0, 0.0, -std::numeric_limits<double>::infinity()};
    for (const auto& m : dict.members()) {
      const double lhs = std::abs(inner(du, m.psi));
      const double bound = m.lap_sup * drive;
      iv.proxy = std::max(iv.proxy, lhs);
      iv.certified_bound = std::max(iv.certified_bound, bound);
      iv.max_slack = std::max(iv.max_slack, lhs - bound);
    }
    report.total_proxy += iv.proxy;
    report.total_bound += iv.certified_bound;
    report.max_slack = std::max(report.max_slack, iv.max_slack);
    report.intervals.push_back(iv);
  }
  if (report.intervals.empty()) report.max_slack = 0.0;
  return report;
}

TVReport tv_series(const Trajectory& traj, const TestFunctionDictionary& dict, std::span<const double> times,
                   double eps, double Lambda) {
  std::vector<Snapshot> chosen;
  for (double t : times) {
    auto it = std::find_if(traj.snapshots.begin(), traj.snapshots.end(), [&](const Snapshot& s) { return s.t == t; });
    if (it == traj.snapshots.end()) throw std::invalid_argument("tv_series: no snapshot at requested time");
    if (!chosen.empty() && !(t > chosen.back().t)) throw std::invalid_argument("tv_series: times must increase");
    chosen.push_back(*it);
  }
  return tv_series(chosen, dict, eps, traj.final_state.mass_u0, Lambda);
}

void write_tv_csv(std::ostream& os, const TVReport& report) {
  os << "t0,t1,proxy,certified_bound,max_slack\n" << std::setprecision(17);
  for (const auto& iv : report.intervals) {
    os << iv.t0 << ',' << iv.t1 << ',' << iv.proxy << ',' << iv.certified_bound << ',' << iv.max_slack << '\n';
  }
  os << "total,," << report.total_proxy << ',' << report.total_bound << ',' << report.max_slack << '\n';
}

}  // namespace degen
