#include "degen/motility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace degen {

namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Fritsch-Carlson slopes as used by PCHIP.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(s) != sign(d0)) {
      s = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(s) > std::abs(3.0 * d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min({fc, fd, f(a), f(b)});
}

}  // namespace

MotilitySpec MotilitySpec::linear() { return MotilitySpec{}; }

MotilitySpec MotilitySpec::exp_decay(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("exp_decay: beta must be >= 0");
  MotilitySpec s;
  s.kind_ = MotilityKind::exp_decay;
  s.beta_ = beta;
  return s;
}

MotilitySpec MotilitySpec::saturating() {
  MotilitySpec s;
  s.kind_ = MotilityKind::saturating;
  return s;
}

MotilitySpec MotilitySpec::shifted(double c0, const MotilitySpec& base) {
  if (!(c0 > 0.0)) throw std::invalid_argument("shifted: c0 must be positive");
  if (!base.is_degenerate()) throw std::invalid_argument("shifted: base must be a degenerate kind");
  MotilitySpec s;
  s.kind_ = MotilityKind::shifted;
  s.shift_ = c0;
  s.base_ = std::make_shared<const MotilitySpec>(base);
  return s;
}

MotilitySpec MotilitySpec::tabulated(std::vector<double> v, std::vector<double> phi) {
  if (v.size() != phi.size() || v.size() < 2) {
    throw std::invalid_argument("tabulated motility needs at least two (v, phi) pairs");
  }
  if (v.front() != 0.0 || phi.front() != 0.0) {
    throw std::invalid_argument("tabulated motility must start at v = 0 with phi = 0");
  }
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) throw std::invalid_argument("tabulated motility: v must be strictly increasing");
  }
  MotilitySpec s;
  s.kind_ = MotilityKind::tabulated;
  s.slopes_ = pchip_slopes(v, phi);
  s.nodes_ = std::move(v);
  s.values_ = std::move(phi);
  return s;
}

MotilitySpec MotilitySpec::read_table(std::istream& is) {
  std::vector<double> v, phi;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw std::runtime_error("motility table line " + std::to_string(lineno) + ": expected 'v phi'");
    v.push_back(a);
    phi.push_back(b);
  }
  return tabulated(std::move(v), std::move(phi));
}

MotilitySpec MotilitySpec::read_table_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open motility table: " + path);
  return read_table(is);
}

double MotilitySpec::value(double v) const {
  if (v < 0.0) throw std::domain_error("motility evaluated at negative signal");
  return value_unchecked(v);
}

double MotilitySpec::derivative(double v) const {
  if (v < 0.0) throw std::domain_error("motility derivative evaluated at negative signal");
  return derivative_unchecked(v);
}

double MotilitySpec::value_unchecked(double v) const {
  switch (kind_) {
    case MotilityKind::linear:
      return v;
    case MotilityKind::exp_decay:
      return v * std::exp(-beta_ * v);
    case MotilityKind::saturating:
      return v / (1.0 + v);
    case MotilityKind::shifted:
      return base_->value_unchecked(v) + shift_;
    case MotilityKind::tabulated: {
      const std::size_t n = nodes_.size();
      if (v >= nodes_[n - 1]) return values_[n - 1] + slopes_[n - 1] * (v - nodes_[n - 1]);
      const std::size_t k = std::upper_bound(nodes_.begin(), nodes_.end(), v) - nodes_.begin() - 1;
      const double h = nodes_[k + 1] - nodes_[k];
      const double t = (v - nodes_[k]) / h;
      const double t2 = t * t;
      const double t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * values_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] +
             (-2 * t3 + 3 * t2) * values_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
    }
  }
  return 0.0;
}

double MotilitySpec::derivative_unchecked(double v) const {
  switch (kind_) {
    case MotilityKind::linear:
      return 1.0;
    case MotilityKind::exp_decay:
      return std::exp(-beta_ * v) * (1.0 - beta_ * v);
    case MotilityKind::saturating:
      return 1.0 / ((1.0 + v) * (1.0 + v));
    case MotilityKind::shifted:
      return base_->derivative_unchecked(v);
    case MotilityKind::tabulated: {
      const std::size_t n = nodes_.size();
      if (v >= nodes_[n - 1]) return slopes_[n - 1];
      const std::size_t k = std::upper_bound(nodes_.begin(), nodes_.end(), v) - nodes_.begin() - 1;
      const double h = nodes_[k + 1] - nodes_[k];
      const double t = (v - nodes_[k]) / h;
      const double t2 = t * t;
      return ((6 * t2 - 6 * t) * values_[k] + (-6 * t2 + 6 * t) * values_[k + 1]) / h +
             (3 * t2 - 4 * t + 1) * slopes_[k] + (3 * t2 - 2 * t) * slopes_[k + 1];
    }
  }
  return 0.0;
}

std::string MotilitySpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case MotilityKind::linear:
      os << "linear";
      break;
    case MotilityKind::exp_decay:
      os << "exp_decay(beta=" << beta_ << ")";
      break;
    case MotilityKind::saturating:
      os << "saturating";
      break;
    case MotilityKind::shifted:
      os << "shifted(c0=" << shift_ << ", " << base_->describe() << ")";
      break;
    case MotilityKind::tabulated:
      os << "tabulated(" << nodes_.size() << " nodes)";
      break;
  }
  return os.str();
}

Lemma1Constants lemma1_constants(const MotilitySpec& spec, double K, int samples) {
  if (!spec.is_degenerate()) throw std::domain_error("lemma1_constants: motility is not degenerate");
  if (!(K > 0.0)) throw std::invalid_argument("lemma1_constants: K must be positive");
  if (samples < 2) throw std::invalid_argument("lemma1_constants: need at least two samples");

  auto ratio = [&](double s) { return s > 0.0 ? spec.value(s) / s : spec.derivative(0.0); };
  auto neg_abs_slope = [&](double s) { return -std::abs(spec.derivative(s)); };

  double lo = ratio(0.0);
  double hi = -neg_abs_slope(0.0);
  int lo_at = 0;
  int hi_at = 0;
  const double step = K / samples;
  for (int m = 1; m <= samples; ++m) {
    const double s = m == samples ? K : m * step;
    const double r = ratio(s);
    const double d = -neg_abs_slope(s);
    if (r < lo) {
      lo = r;
      lo_at = m;
    }
    if (d > hi) {
      hi = d;
      hi_at = m;
    }
  }
  auto bracket = [&](int m) {
    return std::pair{std::max(0, m - 1) * step, std::min(samples, m + 1) * step};
  };
  {
    const auto [a, b] = bracket(lo_at);
    lo = std::min(lo, golden_min(ratio, a, std::min(b, K)));
  }
  {
    const auto [a, b] = bracket(hi_at);
    hi = std::max(hi, -golden_min(neg_abs_slope, a, std::min(b, K)));
  }
  if (!(lo > 0.0)) throw std::domain_error("lemma1_constants: phi(s)/s is not positive on [0,K]");
  return Lemma1Constants{lo, hi};
}

}  // namespace degen
