#include "degen/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "degen/calculus.hpp"
#include "degen/counterexample.hpp"
#include "degen/dictionary.hpp"
#include "degen/inequality.hpp"
#include "degen/initial_data.hpp"
#include "degen/linear_mp.hpp"
#include "degen/parallel.hpp"
#include "degen/snapshot.hpp"

namespace degen {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_records(const fs::path& path, const Trajectory& tr) {
  auto os = open_out(path);
  write_diagnostics_csv(os, tr.records);
}

void write_snapshots(const fs::path& dir, const std::string& label, const Trajectory& tr) {
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const Snapshot& s = tr.snapshots[k];
    write_snapshot(dir / (label + "_u_" + std::to_string(k) + ".txt"), s.u, s.t);
    write_snapshot(dir / (label + "_v_" + std::to_string(k) + ".txt"), s.v, s.t);
  }
  write_snapshot(dir / (label + "_u_final.txt"), tr.final_state.u, tr.final_state.t);
  write_snapshot(dir / (label + "_v_final.txt"), tr.final_state.v, tr.final_state.t);
}

struct Data {
  ScalarField u0;
  ScalarField v0;
};

Data make_data(const ExperimentConfig& c) {
  const Grid g = c.make_grid();
  return {make_u0(g, c.init, c.seed), make_v0(g, c.init, c.seed)};
}

// Base motility of a shifted spec, or the spec itself.
MotilitySpec degenerate_part(const ExperimentConfig& c) {
  if (c.motility.kind != "shifted") return c.make_motility();
  ExperimentConfig base = c;
  base.motility.kind = c.motility.base;
  return base.make_motility();
}

void check_boundedness_verdict(Verdict& v, const std::string& label, const Trajectory& tr, double t_end) {
  const BoundednessCheck b = check_boundedness(tr.records, t_end);
  v.add(label + " cumulative u^2 v converges", b.u2v_tail_fraction <= 0.05,
        "last 10% of time adds " + num(b.u2v_tail_fraction) + " of the total (<= 0.05)");
  v.add(label + " cumulative |grad v|^4/v^3 converges", b.gradv4_tail_fraction <= 0.05,
        "last 10% of time adds " + num(b.gradv4_tail_fraction) + " of the total (<= 0.05)");
  v.add(label + " sup ||u||_4 stays bounded", b.l4_ratio <= 1.05,
        "late/early sup ratio " + num(b.l4_ratio) + " (<= 1.05)");
  v.add(label + " sup ||grad v||_inf stays bounded", b.gradv_ratio <= 1.05,
        "late/early sup ratio " + num(b.gradv_ratio) + " (<= 1.05)");
}

Verdict run_e1(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  Data d = make_data(c);
  const Trajectory tr = simulate(d.u0, d.v0, c.make_motility(), c.sim);
  write_records(dir / "diagnostics.csv", tr);
  write_snapshots(dir, "run", tr);
  check_trajectory_invariants(v, "run", tr);
  check_boundedness_verdict(v, "run", tr, c.sim.t_end);
  if (tr.u_frozen_at_start) v.notes.push_back("u was frozen at t = 0 (eps = 0 and phi(v) = 0 everywhere)");
  return v;
}

Verdict run_e2(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  Data d = make_data(c);
  SimParams p = c.sim;
  std::vector<double> times(c.tv_points);
  for (int k = 0; k < c.tv_points; ++k) times[k] = c.sim.t_end * k / (c.tv_points - 1);
  p.snapshot_times = times;
  const MotilitySpec phi = c.make_motility();
  const Trajectory tr = simulate(d.u0, d.v0, phi, p);
  write_records(dir / "diagnostics.csv", tr);
  write_snapshots(dir, "run", tr);
  check_trajectory_invariants(v, "run", tr);

  const double K = d.v0.max();
  const double Lambda = lemma1_constants(degenerate_part(c), K).upper;
  const double eps_eff = p.eps + (c.motility.kind == "shifted" ? c.motility.shift : 0.0);
  const TestFunctionDictionary dict = TestFunctionDictionary::standard(d.u0.grid());
  const TVReport tv = tv_series(tr, dict, times, eps_eff, Lambda);
  {
    auto os = open_out(dir / "tv.csv");
    write_tv_csv(os, tv);
  }
  v.add("certified TV bound per (interval, psi)", tv.max_slack <= 1e-10,
        "max slack " + num(tv.max_slack) + " (<= 1e-10) over " + std::to_string(tv.intervals.size()) +
            " intervals and " + std::to_string(dict.size()) + " test functions");
  v.add("total variation proxy is finite", std::isfinite(tv.total_proxy) && tv.total_proxy <= tv.total_bound + 1e-10,
        "sum of proxies " + num(tv.total_proxy) + ", sum of bounds " + num(tv.total_bound));
  const auto& last = tr.records.back();
  v.notes.push_back("int v(t_end) = " + num(last.l1_v) + ", ||grad v(t_end)||_inf = " + num(last.sup_gradv) +
                    " (no decay rate is asserted)");
  v.notes.push_back("Lambda(K) = " + num(Lambda) + " with K = " + num(K));
  return v;
}

Verdict run_e3(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  const PatternOutcome o = pattern_pair(c);
  write_records(dir / "diagnostics_degenerate.csv", o.degenerate);
  write_records(dir / "diagnostics_control.csv", o.control);
  write_snapshots(dir, "degenerate", o.degenerate);
  write_snapshots(dir, "control", o.control);
  {
    auto os = open_out(dir / "pattern.csv");
    os << "run,nonconstancy_u0,nonconstancy_final,ratio\n" << std::setprecision(17);
    os << "degenerate," << o.nonconstancy_u0 << ',' << o.ratio_degenerate * o.nonconstancy_u0 << ','
       << o.ratio_degenerate << '\n';
    os << "control," << o.nonconstancy_u0 << ',' << o.ratio_control * o.nonconstancy_u0 << ',' << o.ratio_control
       << '\n';
  }
  check_trajectory_invariants(v, "degenerate", o.degenerate);
  check_trajectory_invariants(v, "control", o.control);
  v.add("degenerate run keeps its pattern", o.ratio_degenerate >= c.pattern.retain_ratio,
        "nonconstancy ratio " + num(o.ratio_degenerate) + " (>= " + num(c.pattern.retain_ratio) + ")");
  v.add("shifted control flattens", o.ratio_control <= c.pattern.flatten_ratio,
        "nonconstancy ratio " + num(o.ratio_control) + " (<= " + num(c.pattern.flatten_ratio) + ")");
  v.notes.push_back("the ratio thresholds are artifact choices; no quantitative threshold is known");
  return v;
}

Verdict run_e4(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  Data d = make_data(c);
  const MotilitySpec phi = c.make_motility();
  const ConvergenceReport rep = epsilon_sweep(d.u0, d.v0, phi, c.sim, c.sweep.eps_list);
  SimParams p0 = c.sim;
  p0.eps = 0.0;
  const Trajectory limit = simulate(d.u0, d.v0, phi, p0);
  const double gap0 = lp_norm(rep.finals.back().u - limit.final_state.u, 1.0);
  {
    auto os = open_out(dir / "convergence.csv");
    os << "eps_a,eps_b,l1_u,linf_v\n" << std::setprecision(17);
    for (const auto& pr : rep.pairs) os << pr.eps_a << ',' << pr.eps_b << ',' << pr.l1_u << ',' << pr.linf_v << '\n';
    os << rep.eps.back() << ",0," << gap0 << ','
       << lp_norm(rep.finals.back().v - limit.final_state.v, kInfNorm) << '\n';
  }
  write_records(dir / "diagnostics_eps0.csv", limit);
  check_trajectory_invariants(v, "eps=0", limit);
  for (std::size_t k = 0; k < rep.finals.size(); ++k) {
    const double m = integrate(rep.finals[k].u);
    v.add("mass conserved at eps=" + num(rep.eps[k]), std::abs(m - rep.finals[k].mass_u0) <= 1e-10 * rep.finals[k].mass_u0,
          "relative drift " + num(std::abs(m - rep.finals[k].mass_u0) / rep.finals[k].mass_u0));
  }
  bool decreasing = true;
  std::string dists;
  for (std::size_t k = 0; k < rep.pairs.size(); ++k) {
    dists += (k ? ", " : "") + num(rep.pairs[k].l1_u);
    if (k > 0 && !(rep.pairs[k].l1_u < rep.pairs[k - 1].l1_u)) decreasing = false;
  }
  v.add("successive L1 distances decrease", decreasing, "distances " + dists);
  if (!rep.pairs.empty()) {
    const double last = rep.pairs.back().l1_u;
    v.add("smallest eps is close to the eps = 0 run", gap0 <= 2.0 * last,
          "||u_eps - u_0||_1 = " + num(gap0) + " vs 2 x last gap " + num(2.0 * last));
  }
  return v;
}

Verdict run_e5a(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  MPProbeConfig mp;
  mp.p1 = c.mp.p1;
  mp.q1 = c.mp.q1;
  mp.p2 = c.mp.p2;
  mp.q2 = c.mp.q2;
  mp.L = c.mp.L;
  mp.T = c.mp.T;
  mp.tau = c.mp.tau;
  mp.seed = c.seed;
  mp.family = coefficient_family_from_string(c.mp.family);
  mp.data = c.mp.data == "constant" ? ProbeDataKind::constant : ProbeDataKind::random;
  mp.cells = c.mp.cells;
  const bool condition = mp.integrability_condition();
  v.add("integrability condition on (p1, q1, p2, q2)", condition,
        condition ? "holds" : "fails: no uniform lower bound exists, probe refused");
  if (condition) {
    const MPProbeResult r = probe_lower_bound(mp, c.mp.instances);
    {
      auto os = open_out(dir / "probe.csv");
      os << "instance,seed,family,inf_V,inf_V_2tau,budget_a,budget_b,max_V0,int_V0\n" << std::setprecision(17);
      for (std::size_t k = 0; k < r.instances.size(); ++k) {
        const auto& in = r.instances[k];
        os << k << ',' << in.seed << ',' << in.family << ',' << in.inf_V << ',' << in.inf_V_2tau << ','
           << in.budget_a << ',' << in.budget_b << ',' << in.max_V0 << ',' << in.int_V0 << '\n';
      }
    }
    v.add("every instance meets its budget", r.all_within_budget, "L = " + num(mp.L));
    v.add("empirical lower bound is positive", r.empirical_C > 0.0,
          "inf V over (tau, T) = " + num(r.empirical_C) + " over " + std::to_string(r.instances.size()) + " instances");
    v.add("shrinking the window never lowers the bound", r.empirical_C_2tau >= r.empirical_C,
          "inf over (2 tau, T) = " + num(r.empirical_C_2tau));
  }

  // Coupled system: positivity of v spreading into the zero region of v0.
  Data d = make_data(c);
  const MotilitySpec phi = c.make_motility();
  std::vector<double> mins(c.mp.coupled_eps.size());
  std::vector<char> ok(c.mp.coupled_eps.size(), 0);
  parallel_for(mins.size(), [&](std::size_t k) {
    SimParams p = c.sim;
    p.eps = c.mp.coupled_eps[k];
    p.t_end = c.mp.coupled_time;
    p.snapshot_times.clear();
    const Trajectory tr = simulate(d.u0, d.v0, phi, p);
    mins[k] = tr.final_state.v.min();
  });
  {
    auto os = open_out(dir / "coupled.csv");
    os << "eps,min_v\n" << std::setprecision(17);
    for (std::size_t k = 0; k < mins.size(); ++k) os << c.mp.coupled_eps[k] << ',' << mins[k] << '\n';
  }
  if (d.v0.min() > 0.0) v.notes.push_back("v0 has no zero region; the coupled positivity check is weaker");
  if (!mins.empty()) {
    const double lo = *std::min_element(mins.begin(), mins.end());
    const double hi = *std::max_element(mins.begin(), mins.end());
    v.add("coupled min v(., t) is positive", lo > 0.0, "min over eps of min_x v = " + num(lo));
    v.add("coupled min v(., t) is stable in eps", lo > 0.0 && hi < 2.0 * lo, "max/min = " + num(hi / lo) + " (< 2)");
  }
  return v;
}

Verdict run_e5b(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  CounterexampleSpec spec = CounterexampleSpec::standard(c.ce.dim, c.ce.alpha, c.ce.cells);
  spec.T = c.ce.T;
  spec.p = c.ce.p;
  spec.q = c.ce.q;
  std::vector<int> ks;
  for (int k = c.ce.k_min; k <= c.ce.k_max; ++k) ks.push_back(k);
  const CounterexampleReport r = run_counterexample(spec, ks);
  {
    auto os = open_out(dir / "counterexample.csv");
    write_counterexample_csv(os, r);
  }
  v.add("profile satisfies the barrier condition", r.g_margin >= 0.0, "margin " + num(r.g_margin));
  if (!spec.budget_condition()) v.notes.push_back("1/q + n/(2p) < 1: budgets are not expected to stay bounded");
  double max_budget = 0.0;
  for (const auto& row : r.rows) max_budget = std::max(max_budget, row.budget);
  if (r.budget_bound > 0.0) {
    v.add("budgets share one bound L", max_budget <= r.budget_bound,
          "max budget " + num(max_budget) + " <= L = " + num(r.budget_bound));
  } else {
    v.add("budgets share one bound L", false, "no uniform bound available for these exponents");
  }
  bool below = true, decreasing = true, dominated = true, residual = true;
  std::ostringstream mins;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    mins << (k ? ", " : "") << "k=" << row.k << ": " << num(row.min_V_at_x0);
    below = below && row.min_V_at_x0 <= 2.0 * std::pow(row.gap, spec.alpha);
    decreasing = decreasing && (k == 0 || row.min_V_at_x0 < r.rows[k - 1].min_V_at_x0);
    dominated = dominated && row.max_domination_ratio <= 1.0 + 1e-6;
    residual = residual && row.min_supersolution_residual >= -1e-8;
  }
  v.add("min_t V_k(x0, t) <= 2 (T_k - T)^alpha", below, mins.str());
  v.add("min_t V_k(x0, t) decreases in k", decreasing, mins.str());
  v.add("barrier dominates V_k on B_R", dominated, "ratios <= 1 + 1e-6");
  v.add("barrier is a supersolution", residual, "sampled residual >= -1e-8");
  return v;
}

Verdict run_e6(const ExperimentConfig& c, const fs::path& dir) {
  Verdict v{c.experiment, {}, {}};
  const Grid g = c.grid.dim == 1 ? Grid::line(c.grid.lx, c.ineq.cells)
                                 : Grid::rect(c.grid.lx, c.grid.ly, c.ineq.cells, c.ineq.cells);
  const auto train = random_ineq_corpus(g, c.ineq.corpus, c.seed, c.ineq.modes, c.ineq.amplitude);
  const auto fresh = random_ineq_corpus(g, c.ineq.corpus, c.seed + 1, c.ineq.modes, c.ineq.amplitude);
  const double C_random = fit_C_41(c.ineq.p, c.ineq.eta_grid, train);
  IneqRefineOptions ro;
  ro.top = static_cast<std::size_t>(c.ineq.refine_top);
  ro.iterations = c.ineq.refine_iterations;
  ro.modes = c.ineq.modes;
  ro.seed = c.seed;
  const auto refined = refine_worst_pairs(c.ineq.p, c.ineq.eta_grid, train, ro);
  const double C = std::max(C_random, fit_C_41(c.ineq.p, c.ineq.eta_grid, refined));
  const double Cv = c.ineq.validation_factor * C;
  const std::size_t bad = count_violations(c.ineq.p, c.ineq.eta_grid, Cv, fresh);
  {
    auto os = open_out(dir / "inequality.csv");
    os << "pair,lhs,gradient,product,mass,fisher,required_C\n" << std::setprecision(17);
    for (std::size_t m = 0; m < train.size(); ++m) {
      const Ineq41Terms t = ineq41_terms(train[m].phi, train[m].psi, c.ineq.p);
      const double req = pair_required_C(c.ineq.p, c.ineq.eta_grid, train[m]);
      os << m << ',' << t.lhs << ',' << t.gradient << ',' << t.product << ',' << t.mass << ',' << t.fisher << ','
         << req << '\n';
    }
  }
  v.add("fitted constant is finite", std::isfinite(C),
        "C = " + num(C) + " (random pairs alone: " + num(C_random) + ", " + std::to_string(refined.size()) +
            " worst pairs refined)");
  v.add("fresh pairs hold at the inflated constant", bad == 0,
        std::to_string(bad) + " violations at " + num(c.ineq.validation_factor) + " C on " +
            std::to_string(fresh.size()) + " pairs");
  const std::span<const IneqPair> half(train.data(), train.size() / 2);
  const double C_half = fit_C_41(c.ineq.p, c.ineq.eta_grid, half);
  v.add("constant shrinks with the corpus", C_half <= C_random, "C(half) = " + num(C_half));
  const ScalarField one(g, 1.0);
  const ScalarField zero(g, 0.0);
  const Ineq41Check z = check_ineq_41(zero, train.front().psi, {c.ineq.p, 1.0, Cv});
  v.add("phi = 0 holds exactly", z.holds && z.lhs == 0.0 && z.rhs == 0.0,
        "lhs " + num(z.lhs) + ", rhs " + num(z.rhs));
  const Ineq41Check flat = check_ineq_41(train.front().phi, one, {c.ineq.p, 1.0, Cv});
  v.add("constant psi holds exactly", flat.holds && flat.lhs == 0.0, "lhs " + num(flat.lhs) + ", rhs " + num(flat.rhs));
  return v;
}

}  // namespace

void Verdict::add(std::string name, bool passed, std::string detail) {
  checks.push_back({std::move(name), passed, std::move(detail)});
}

bool Verdict::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void write_verdict(std::ostream& os, const Verdict& v) {
  os << "experiment " << v.experiment << '\n';
  for (const auto& c : v.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  for (const auto& n : v.notes) os << "note: " << n << '\n';
  os << "result: " << (v.passed() ? "PASS" : "FAIL") << '\n';
}

void check_trajectory_invariants(Verdict& v, const std::string& label, const Trajectory& tr) {
  const SolverState& s = tr.final_state;
  double drift = 0.0, min_u = kInfNorm, min_v = kInfNorm, budget = 0.0;
  bool sup_ok = true, l1_ok = true;
  for (std::size_t k = 0; k < tr.records.size(); ++k) {
    const auto& r = tr.records[k];
    drift = std::max(drift, std::abs(r.mass_u - s.mass_u0) / s.mass_u0);
    min_u = std::min(min_u, r.min_u);
    min_v = std::min(min_v, r.min_v);
    budget = std::max(budget, std::abs(r.l1_v + r.cumulative_uv - s.l1_v0) / s.l1_v0);
    sup_ok = sup_ok && r.max_v <= s.max_v0 + 1e-14;
    if (k > 0) {
      sup_ok = sup_ok && r.max_v <= tr.records[k - 1].max_v + 1e-14;
      l1_ok = l1_ok && r.l1_v <= tr.records[k - 1].l1_v + 1e-14 * s.l1_v0;
    }
  }
  v.add(label + " mass of u conserved", drift <= 1e-10, "max relative drift " + num(drift) + " (<= 1e-10)");
  v.add(label + " u and v stay nonnegative", min_u >= -1e-14 && min_v >= -1e-14,
        "min u " + num(min_u) + ", min v " + num(min_v));
  v.add(label + " sup v is nonincreasing", sup_ok, "max v <= previous max v + 1e-14");
  v.add(label + " consumption budget", budget <= 1e-10, "max relative defect " + num(budget) + " (<= 1e-10)");
  v.add(label + " int v is nonincreasing", l1_ok, "int v <= previous int v + 1e-14 int v0");
  v.add(label + " no blow-up flag", !tr.blowup_warning, "sup ||u||_inf stayed below 1e3 ||u0||_inf");
}

PatternOutcome pattern_pair(const ExperimentConfig& c) {
  const MotilitySpec phi = c.make_motility();
  if (!phi.is_degenerate()) throw std::invalid_argument("pattern experiment needs a degenerate motility");
  const MotilitySpec control = MotilitySpec::shifted(c.pattern.control_shift, phi);
  Data d = make_data(c);
  std::vector<std::optional<Trajectory>> runs(2);
  parallel_for(2, [&](std::size_t k) { runs[k] = simulate(d.u0, d.v0, k == 0 ? phi : control, c.sim); });
  const double nc0 = nonconstancy(d.u0);
  const double base = nc0 > 0.0 ? nc0 : 1.0;
  PatternOutcome o{nc0, nonconstancy(runs[0]->final_state.u) / base, nonconstancy(runs[1]->final_state.u) / base,
                   std::move(*runs[0]), std::move(*runs[1])};
  return o;
}

ThresholdReport sweep_v0_mass(const ExperimentConfig& c, const std::vector<double>& deltas) {
  if (deltas.empty()) throw std::invalid_argument("sweep needs at least one delta");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0) || (k > 0 && !(deltas[k] < deltas[k - 1]))) {
      throw std::invalid_argument("deltas must be positive and decreasing");
    }
  }
  const Grid g = c.make_grid();
  const MotilitySpec phi = c.make_motility();
  const ScalarField u0 = make_u0(g, c.init, c.seed);
  const double nc0 = nonconstancy(u0);
  ThresholdReport rep;
  rep.rows.resize(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t k) {
    InitConfig init = c.init;
    init.v = "bump";
    init.v_mass = deltas[k];
    const ScalarField v0 = make_v0(g, init, c.seed);
    const Trajectory tr = simulate(u0, v0, phi, c.sim);
    const TestFunctionDictionary dict = TestFunctionDictionary::standard(g);
    rep.rows[k] = {deltas[k], nonconstancy(tr.final_state.u) / (nc0 > 0.0 ? nc0 : 1.0),
                   dual_norm_proxy(tr.final_state.u - u0, dict)};
  });
  for (const auto& row : rep.rows) {
    if (row.ratio >= c.pattern.retain_ratio && !rep.found) {
      rep.found = true;
      rep.largest_retaining_delta = row.delta;
    }
  }
  // Rows are ordered by decreasing delta; proxy should not grow as delta shrinks.
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k].proxy > rep.rows[k - 1].proxy) ++rep.proxy_inversions;
  }

  const TestFunctionDictionary dict = TestFunctionDictionary::standard(g);
  const BumpSpec low = TestFunctionDictionary::default_low_bump(g);
  const BumpSpec high = TestFunctionDictionary::default_high_bump(g);
  rep.c3 = std::min(bump_height(dict.find("bump_low")), bump_height(dict.find("bump_high")));
  double c1 = -kInfNorm, c2 = kInfNorm;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.center(0, i);
      const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
      auto dist = [&](const BumpSpec& b) { return std::hypot(x - b.center[0], g.dim() == 2 ? y - b.center[1] : 0.0); };
      if (dist(low) <= 2.0 * low.radius) c1 = std::max(c1, u0.at(i, j));
      if (dist(high) <= 2.0 * high.radius) c2 = std::min(c2, u0.at(i, j));
    }
  }
  rep.kappa = std::max(0.0, 0.5 * (c2 - c1));
  const double R = low.radius;
  rep.ball_volume = g.dim() == 1 ? 2.0 * R : std::acos(-1.0) * R * R;
  rep.xi_hat = rep.rows.front().proxy / rep.rows.front().delta;
  rep.predicted_delta = rep.xi_hat > 0.0 ? rep.c3 * rep.kappa * rep.ball_volume / (2.0 * rep.xi_hat) : kInfNorm;
  return rep;
}

void write_threshold_csv(std::ostream& os, const ThresholdReport& r) {
  os << "delta,ratio,proxy\n" << std::setprecision(17);
  for (const auto& row : r.rows) os << row.delta << ',' << row.ratio << ',' << row.proxy << '\n';
}

Verdict run_sweep(const ExperimentConfig& c, const std::vector<double>& deltas, const fs::path& dir) {
  fs::create_directories(dir);
  Verdict v{"sweep_v0_mass", {}, {}};
  const ThresholdReport r = sweep_v0_mass(c, deltas);
  {
    auto os = open_out(dir / "threshold.csv");
    write_threshold_csv(os, r);
  }
  v.add("smallest mass retains the pattern", r.rows.back().ratio >= c.pattern.retain_ratio,
        "ratio " + num(r.rows.back().ratio) + " at delta " + num(r.rows.back().delta));
  v.add("proxy grows with the mass", r.proxy_inversions <= 1,
        std::to_string(r.proxy_inversions) + " inversions (<= 1 tolerated)");
  if (r.found) {
    v.add("predicted threshold lies below the empirical one", r.predicted_delta <= r.largest_retaining_delta,
          "predicted " + num(r.predicted_delta) + " vs empirical " + num(r.largest_retaining_delta));
    v.notes.push_back("largest delta with ratio >= " + num(c.pattern.retain_ratio) + ": " +
                      num(r.largest_retaining_delta));
  } else {
    v.add("some mass retains the pattern", false, "no delta reached ratio " + num(c.pattern.retain_ratio));
  }
  v.notes.push_back("Xi_hat = " + num(r.xi_hat) + ", c3 = " + num(r.c3) + ", kappa = " + num(r.kappa) +
                    ", |B_R| = " + num(r.ball_volume));
  auto os = open_out(dir / "verdict.txt");
  write_verdict(os, v);
  return v;
}

Verdict run_experiment(const ExperimentConfig& c, const fs::path& dir) {
  c.validate();
  fs::create_directories(dir);
  Verdict v;
  if (c.experiment == "E1_boundedness") v = run_e1(c, dir);
  else if (c.experiment == "E2_stabilization") v = run_e2(c, dir);
  else if (c.experiment == "E3_pattern_threshold") v = run_e3(c, dir);
  else if (c.experiment == "E4_eps_convergence") v = run_e4(c, dir);
  else if (c.experiment == "E5a_mp_probe") v = run_e5a(c, dir);
  else if (c.experiment == "E5b_counterexample") v = run_e5b(c, dir);
  else if (c.experiment == "E6_inequality_fit") v = run_e6(c, dir);
  else throw ConfigError(0, "unknown experiment " + c.experiment);
  {
    auto os = open_out(dir / "config.txt");
    os << serialize(c);
  }
  auto os = open_out(dir / "verdict.txt");
  write_verdict(os, v);
  return v;
}

}  // namespace degen
