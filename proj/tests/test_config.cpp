#include <random>
#include <string>

#include "degen/config.hpp"
#include "doctest.h"

using namespace degen;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config takes every default") {
  const ExperimentConfig c = parse_config("experiment = E1_boundedness\n");
  CHECK(c == ExperimentConfig{});
  CHECK(c.grid.nx == 256);
  CHECK(c.sweep.eps_list == std::vector<double>{0.1, 0.025, 0.00625});
  CHECK(c.mp.instances == 32);
  CHECK(c.ce.cells == 512);
  CHECK(c.ineq.corpus == 200);
  CHECK(c.tv_points == 10);
}

TEST_CASE("comments, blanks and spacing") {
  const ExperimentConfig c = parse_config(
      "# header\n\n  experiment=E4_eps_convergence   # trailing\n"
      "grid.dim = 2\ngrid.ny = 32\nsweep.eps_list = 0.5, 0.25,0.125\nsim.snapshots =\n");
  CHECK(c.experiment == "E4_eps_convergence");
  CHECK(c.grid.dim == 2);
  CHECK(c.grid.ny == 32);
  CHECK(c.sweep.eps_list == std::vector<double>{0.5, 0.25, 0.125});
  CHECK(c.sim.snapshot_times.empty());
}

TEST_CASE("dimension three is refused with the n <= 2 reason") {
  const std::string text = "experiment = E1_boundedness\ngrid.dim = 3\n";
  CHECK(error_line(text) == 2);
  const std::string msg = error_text(text);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("n <= 2") != std::string::npos);
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_line("experiment = E1_boundedness\nbogus.key = 1\n") == 2);
  CHECK(error_line("grid.nx = many\n") == 1);
  CHECK(error_line("grid.nx = 2.5\n") == 1);
  CHECK(error_line("seed = -3\n") == 1);
  CHECK(error_line("sim.eps = 0.1\nsim.eps = 0.2\n") == 2);
  CHECK(error_line("\n\njust words\n") == 3);
  CHECK(error_line("experiment = E9\n") == 1);
  CHECK(error_line("mp.tau = 0.1\nmp.T = 0.05\n") == 1);
  CHECK(error_line("sweep.eps_list = 0.1, 0.2\n") == 1);
  CHECK(error_line("sim.cfl_safety = 1.5\n") == 1);
  CHECK(error_line("sweep.deltas = 0.1, x\n") == 1);
  // invariant failure on a defaulted key is reported as line 0
  CHECK(error_line("motility.kind = tabulated\n") == 0);
}

TEST_CASE("serialize round trip") {
  ExperimentConfig c;
  c.experiment = "E5b_counterexample";
  c.seed = 123456789012345ULL;
  c.output_dir = "runs/a b";
  c.grid.dim = 2;
  c.grid.ny = 17;
  c.grid.lx = 0.1 + 0.2;
  c.motility.kind = "shifted";
  c.motility.base = "exp_decay";
  c.motility.beta = 1.0 / 3.0;
  c.init.v_mass = 1e-7;
  c.sim.snapshot_times = {0.0, 0.25, 1.0 / 3.0};
  c.sweep.deltas = {0.3, 0.2, 0.1};
  c.mp.coupled_eps = {0.0};
  c.ce.k_max = 9;
  c.ineq.eta_grid = {2.0};
  c.tv_points = 4;
  const ExperimentConfig back = parse_config(serialize(c));
  CHECK(back == c);
  CHECK(serialize(back) == serialize(c));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.01, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    ExperimentConfig r;
    r.sim.eps = d(rng);
    r.sim.t_end = d(rng);
    r.init.u_height = d(rng);
    r.mp.L = d(rng);
    r.pattern.retain_ratio = d(rng);
    CHECK(parse_config(serialize(r)) == r);
  }
}

TEST_CASE("validate and builders") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.grid.nx = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.grid = {2, 8, 4, 2.0, 1.0};
  const Grid g = c.make_grid();
  CHECK(g.dim() == 2);
  CHECK(g.nx() == 8);
  CHECK(g.ny() == 4);
  c.motility.kind = "shifted";
  CHECK_FALSE(c.make_motility().is_degenerate());
  c.motility.kind = "exp_decay";
  CHECK(c.make_motility().is_degenerate());
  CHECK(experiment_ids().size() == 7);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}
