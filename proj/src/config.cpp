#include "degen/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace degen {

namespace {

// Validation failure tied to a key, translated to a line number by the parser.
struct KeyError {
  std::string key;
  std::string message;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

struct Entry {
  std::function<bool(const std::string&)> set;  // false on type mismatch
  std::function<std::string()> get;
  const char* type;
};

Entry bind(double& x) {
  return {[&x](const std::string& s) { return parse_number(s, x); }, [&x] { return format_double(x); }, "real"};
}

Entry bind(int& x) {
  return {[&x](const std::string& s) { return parse_number(s, x); }, [&x] { return std::to_string(x); }, "integer"};
}

Entry bind(std::uint64_t& x) {
  return {[&x](const std::string& s) { return parse_number(s, x); }, [&x] { return std::to_string(x); },
          "nonnegative integer"};
}

Entry bind(std::string& x) {
  return {[&x](const std::string& s) {
            x = s;
            return true;
          },
          [&x] { return x; }, "string"};
}

Entry bind(std::vector<double>& x) {
  return {[&x](const std::string& s) {
            std::vector<double> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
              double v;
              if (!parse_number(trim(item), v)) return false;
              out.push_back(v);
            }
            x = std::move(out);
            return true;
          },
          [&x] {
            std::string s;
            for (std::size_t k = 0; k < x.size(); ++k) s += (k ? "," : "") + format_double(x[k]);
            return s;
          },
          "comma-separated reals"};
}

// Ordered so that serialize() writes sections together.
std::vector<std::pair<std::string, Entry>> key_table(ExperimentConfig& c) {
  return {
      {"experiment", bind(c.experiment)},
      {"seed", bind(c.seed)},
      {"output.dir", bind(c.output_dir)},
      {"grid.dim", bind(c.grid.dim)},
      {"grid.nx", bind(c.grid.nx)},
      {"grid.ny", bind(c.grid.ny)},
      {"grid.lx", bind(c.grid.lx)},
      {"grid.ly", bind(c.grid.ly)},
      {"motility.kind", bind(c.motility.kind)},
      {"motility.beta", bind(c.motility.beta)},
      {"motility.shift", bind(c.motility.shift)},
      {"motility.base", bind(c.motility.base)},
      {"motility.table", bind(c.motility.table)},
      {"init.u", bind(c.init.u)},
      {"init.u_base", bind(c.init.u_base)},
      {"init.u_height", bind(c.init.u_height)},
      {"init.u_lo", bind(c.init.u_lo)},
      {"init.u_hi", bind(c.init.u_hi)},
      {"init.u_ramp", bind(c.init.u_ramp)},
      {"init.u_center", bind(c.init.u_center)},
      {"init.u_width", bind(c.init.u_width)},
      {"init.u_amplitude", bind(c.init.u_amplitude)},
      {"init.v", bind(c.init.v)},
      {"init.v_level", bind(c.init.v_level)},
      {"init.v_peak", bind(c.init.v_peak)},
      {"init.v_center", bind(c.init.v_center)},
      {"init.v_width", bind(c.init.v_width)},
      {"init.v_mass", bind(c.init.v_mass)},
      {"init.v_amplitude", bind(c.init.v_amplitude)},
      {"sim.eps", bind(c.sim.eps)},
      {"sim.t_end", bind(c.sim.t_end)},
      {"sim.cfl_safety", bind(c.sim.cfl_safety)},
      {"sim.diag_stride", bind(c.sim.diag_stride)},
      {"sim.snapshots", bind(c.sim.snapshot_times)},
      {"sweep.eps_list", bind(c.sweep.eps_list)},
      {"sweep.deltas", bind(c.sweep.deltas)},
      {"mp.p1", bind(c.mp.p1)},
      {"mp.q1", bind(c.mp.q1)},
      {"mp.p2", bind(c.mp.p2)},
      {"mp.q2", bind(c.mp.q2)},
      {"mp.L", bind(c.mp.L)},
      {"mp.T", bind(c.mp.T)},
      {"mp.tau", bind(c.mp.tau)},
      {"mp.family", bind(c.mp.family)},
      {"mp.data", bind(c.mp.data)},
      {"mp.instances", bind(c.mp.instances)},
      {"mp.cells", bind(c.mp.cells)},
      {"mp.coupled_time", bind(c.mp.coupled_time)},
      {"mp.coupled_eps", bind(c.mp.coupled_eps)},
      {"ce.alpha", bind(c.ce.alpha)},
      {"ce.T", bind(c.ce.T)},
      {"ce.p", bind(c.ce.p)},
      {"ce.q", bind(c.ce.q)},
      {"ce.k_min", bind(c.ce.k_min)},
      {"ce.k_max", bind(c.ce.k_max)},
      {"ce.dim", bind(c.ce.dim)},
      {"ce.cells", bind(c.ce.cells)},
      {"ineq.p", bind(c.ineq.p)},
      {"ineq.corpus", bind(c.ineq.corpus)},
      {"ineq.eta_grid", bind(c.ineq.eta_grid)},
      {"ineq.cells", bind(c.ineq.cells)},
      {"ineq.modes", bind(c.ineq.modes)},
      {"ineq.amplitude", bind(c.ineq.amplitude)},
      {"ineq.validation_factor", bind(c.ineq.validation_factor)},
      {"ineq.refine_top", bind(c.ineq.refine_top)},
      {"ineq.refine_iterations", bind(c.ineq.refine_iterations)},
      {"pattern.control_shift", bind(c.pattern.control_shift)},
      {"pattern.retain_ratio", bind(c.pattern.retain_ratio)},
      {"pattern.flatten_ratio", bind(c.pattern.flatten_ratio)},
      {"tv.points", bind(c.tv_points)},
  };
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw KeyError{key, message};
}

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return s == o; });
}

MotilitySpec degenerate_kind(const std::string& kind, double beta) {
  if (kind == "linear") return MotilitySpec::linear();
  if (kind == "exp_decay") return MotilitySpec::exp_decay(beta);
  if (kind == "saturating") return MotilitySpec::saturating();
  throw std::invalid_argument("unknown motility kind: " + kind);
}

void check(const ExperimentConfig& c) {
  const auto& ids = experiment_ids();
  require(std::find(ids.begin(), ids.end(), c.experiment) != ids.end(), "experiment",
          "unknown experiment id '" + c.experiment + "'");
  require(!c.output_dir.empty(), "output.dir", "output directory must not be empty");

  require(c.grid.dim == 1 || c.grid.dim == 2, "grid.dim",
          "grid.dim must be 1 or 2: the model is only analysed in space dimension n <= 2");
  require(c.grid.nx >= 2, "grid.nx", "grid.nx must be at least 2");
  require(c.grid.dim == 1 || c.grid.ny >= 2, "grid.ny", "grid.ny must be at least 2 in 2D");
  require(c.grid.lx > 0.0, "grid.lx", "grid.lx must be positive");
  require(c.grid.ly > 0.0, "grid.ly", "grid.ly must be positive");

  require(one_of(c.motility.kind, {"linear", "exp_decay", "saturating", "shifted", "tabulated"}), "motility.kind",
          "unknown motility kind '" + c.motility.kind + "'");
  require(c.motility.beta > 0.0, "motility.beta", "motility.beta must be positive");
  require(c.motility.shift > 0.0, "motility.shift", "motility.shift must be positive");
  require(one_of(c.motility.base, {"linear", "exp_decay", "saturating"}), "motility.base",
          "motility.base must be a degenerate kind");
  require(c.motility.kind != "tabulated" || !c.motility.table.empty(), "motility.table",
          "tabulated motility needs motility.table");

  require(one_of(c.init.u, {"constant", "two_bump", "gaussian", "random_smooth"}), "init.u",
          "unknown u recipe '" + c.init.u + "'");
  require(c.init.u_base > 0.0, "init.u_base", "init.u_base must be positive");
  require(c.init.u_height >= 0.0, "init.u_height", "init.u_height must be nonnegative");
  require(c.init.u_lo < c.init.u_hi, "init.u_hi", "init.u_hi must exceed init.u_lo");
  require(c.init.u_ramp > 0.0, "init.u_ramp", "init.u_ramp must be positive");
  require(c.init.u_width > 0.0, "init.u_width", "init.u_width must be positive");
  require(c.init.u_amplitude >= 0.0, "init.u_amplitude", "init.u_amplitude must be nonnegative");
  require(one_of(c.init.v, {"constant", "bump", "random_smooth"}), "init.v", "unknown v recipe '" + c.init.v + "'");
  require(c.init.v_level > 0.0, "init.v_level", "init.v_level must be positive");
  require(c.init.v_peak > 0.0, "init.v_peak", "init.v_peak must be positive");
  require(c.init.v_width > 0.0, "init.v_width", "init.v_width must be positive");
  require(c.init.v_mass >= 0.0, "init.v_mass", "init.v_mass must be nonnegative");
  require(c.init.v_amplitude >= 0.0, "init.v_amplitude", "init.v_amplitude must be nonnegative");

  require(c.sim.eps >= 0.0, "sim.eps", "sim.eps must be nonnegative");
  require(c.sim.t_end > 0.0, "sim.t_end", "sim.t_end must be positive");
  require(c.sim.cfl_safety > 0.0 && c.sim.cfl_safety <= 1.0, "sim.cfl_safety", "sim.cfl_safety must lie in (0, 1]");
  require(c.sim.diag_stride >= 1, "sim.diag_stride", "sim.diag_stride must be at least 1");
  for (double t : c.sim.snapshot_times) {
    require(t >= 0.0 && t <= c.sim.t_end, "sim.snapshots", "snapshot times must lie in [0, t_end]");
  }

  require(!c.sweep.eps_list.empty(), "sweep.eps_list", "sweep.eps_list must not be empty");
  for (std::size_t k = 0; k < c.sweep.eps_list.size(); ++k) {
    require(c.sweep.eps_list[k] > 0.0, "sweep.eps_list", "sweep.eps_list entries must be positive");
    require(k == 0 || c.sweep.eps_list[k] <= c.sweep.eps_list[k - 1], "sweep.eps_list",
            "sweep.eps_list must be nonincreasing");
  }
  for (std::size_t k = 0; k < c.sweep.deltas.size(); ++k) {
    require(c.sweep.deltas[k] > 0.0, "sweep.deltas", "sweep.deltas entries must be positive");
    require(k == 0 || c.sweep.deltas[k] < c.sweep.deltas[k - 1], "sweep.deltas", "sweep.deltas must decrease");
  }

  require(c.mp.p1 >= 2.0, "mp.p1", "mp.p1 must be at least 2");
  require(c.mp.q1 > 2.0, "mp.q1", "mp.q1 must exceed 2");
  require(c.mp.p2 >= 1.0, "mp.p2", "mp.p2 must be at least 1");
  require(c.mp.q2 > 1.0, "mp.q2", "mp.q2 must exceed 1");
  require(c.mp.L > 0.0, "mp.L", "mp.L must be positive");
  require(c.mp.T > 0.0, "mp.T", "mp.T must be positive");
  require(c.mp.tau > 0.0 && c.mp.tau < c.mp.T, "mp.tau", "mp.tau must lie in (0, mp.T)");
  require(one_of(c.mp.family, {"zero", "smooth", "concentrating", "mixed"}), "mp.family",
          "unknown coefficient family '" + c.mp.family + "'");
  require(one_of(c.mp.data, {"random", "constant"}), "mp.data", "mp.data must be random or constant");
  require(c.mp.instances >= 1, "mp.instances", "mp.instances must be at least 1");
  require(c.mp.cells >= 2, "mp.cells", "mp.cells must be at least 2");
  require(c.mp.coupled_time > 0.0, "mp.coupled_time", "mp.coupled_time must be positive");
  for (double e : c.mp.coupled_eps) require(e >= 0.0, "mp.coupled_eps", "mp.coupled_eps entries must be >= 0");

  require(c.ce.alpha > 0.0 && c.ce.alpha < 1.0, "ce.alpha", "ce.alpha must lie in (0, 1)");
  require(c.ce.T > 0.0, "ce.T", "ce.T must be positive");
  require(c.ce.p >= 1.0, "ce.p", "ce.p must be at least 1");
  require(c.ce.q >= 1.0, "ce.q", "ce.q must be at least 1");
  require(c.ce.k_min >= 1, "ce.k_min", "ce.k_min must be at least 1");
  require(c.ce.k_max >= c.ce.k_min && c.ce.k_max <= 40, "ce.k_max", "ce.k_max must lie in [k_min, 40]");
  require(c.ce.dim == 1 || c.ce.dim == 2, "ce.dim", "ce.dim must be 1 or 2: the analysis covers n <= 2 only");
  require(c.ce.cells >= 2, "ce.cells", "ce.cells must be at least 2");

  require(c.ineq.p >= 2.0, "ineq.p", "ineq.p must be at least 2");
  require(c.ineq.corpus >= 1, "ineq.corpus", "ineq.corpus must be at least 1");
  require(!c.ineq.eta_grid.empty(), "ineq.eta_grid", "ineq.eta_grid must not be empty");
  for (double e : c.ineq.eta_grid) require(e > 0.0, "ineq.eta_grid", "ineq.eta_grid entries must be positive");
  require(c.ineq.cells >= 2, "ineq.cells", "ineq.cells must be at least 2");
  require(c.ineq.modes >= 1, "ineq.modes", "ineq.modes must be at least 1");
  require(c.ineq.amplitude >= 0.0, "ineq.amplitude", "ineq.amplitude must be nonnegative");
  require(c.ineq.validation_factor >= 1.0, "ineq.validation_factor", "ineq.validation_factor must be >= 1");
  require(c.ineq.refine_top >= 0, "ineq.refine_top", "ineq.refine_top must be nonnegative");
  require(c.ineq.refine_iterations >= 0, "ineq.refine_iterations", "ineq.refine_iterations must be nonnegative");

  require(c.pattern.control_shift > 0.0, "pattern.control_shift", "pattern.control_shift must be positive");
  require(c.pattern.retain_ratio > 0.0, "pattern.retain_ratio", "pattern.retain_ratio must be positive");
  require(c.pattern.flatten_ratio >= 0.0, "pattern.flatten_ratio", "pattern.flatten_ratio must be nonnegative");
  require(c.tv_points >= 2, "tv.points", "tv.points must be at least 2");
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"E1_boundedness",     "E2_stabilization", "E3_pattern_threshold",
                                            "E4_eps_convergence", "E5a_mp_probe",     "E5b_counterexample",
                                            "E6_inequality_fit"};
  return ids;
}

void ExperimentConfig::validate() const {
  try {
    check(*this);
  } catch (const KeyError& e) {
    throw ConfigError(0, e.key + ": " + e.message);
  }
}

Grid ExperimentConfig::make_grid() const {
  return grid.dim == 1 ? Grid::line(grid.lx, grid.nx) : Grid::rect(grid.lx, grid.ly, grid.nx, grid.ny);
}

MotilitySpec ExperimentConfig::make_motility() const {
  if (motility.kind == "shifted") return MotilitySpec::shifted(motility.shift, degenerate_kind(motility.base, motility.beta));
  if (motility.kind == "tabulated") return MotilitySpec::read_table_file(motility.table);
  return degenerate_kind(motility.kind, motility.beta);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  auto table = key_table(c);
  std::map<std::string, int> line_of;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (line_of.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    if (!it->second.set(value)) {
      throw ConfigError(line_no, "type mismatch for '" + key + "': expected " + it->second.type + ", got '" + value + "'");
    }
    line_of[key] = line_no;
  }
  try {
    check(c);
  } catch (const KeyError& e) {
    const auto it = line_of.find(e.key);
    throw ConfigError(it == line_of.end() ? 0 : it->second, e.key + ": " + e.message);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  std::string out;
  for (const auto& [key, entry] : key_table(copy)) out += key + " = " + entry.get() + "\n";
  return out;
}

}  // namespace degen
