#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace degen {

enum class MotilityKind { linear, exp_decay, saturating, shifted, tabulated };

/// Signal-dependent motility phi(v), v >= 0.
///
/// Every kind except `shifted` satisfies phi(0) = 0, phi'(0) > 0, phi > 0 on
/// (0, inf). `shifted` adds a constant c0 > 0 to a base kind and serves as the
/// nondegenerate control.
class MotilitySpec {
 public:
  static MotilitySpec linear();
  /// phi(v) = v exp(-beta v)
  static MotilitySpec exp_decay(double beta);
  /// phi(v) = v / (1 + v)
  static MotilitySpec saturating();
  static MotilitySpec shifted(double c0, const MotilitySpec& base);
  /// Monotone-cubic (Fritsch-Carlson) interpolant through (v_k, phi_k),
  /// linearly extrapolated past the last node. Requires strictly increasing
  /// v starting at 0 with phi = 0 there.
  static MotilitySpec tabulated(std::vector<double> v, std::vector<double> phi);
  /// Two whitespace-separated columns "v phi" per line; '#' starts a comment.
  static MotilitySpec read_table(std::istream& is);
  static MotilitySpec read_table_file(const std::string& path);

  MotilityKind kind() const { return kind_; }
  bool is_degenerate() const { return kind_ != MotilityKind::shifted; }
  double beta() const { return beta_; }
  double shift() const { return shift_; }

  /// Throw std::domain_error for v < 0.
  double value(double v) const;
  double derivative(double v) const;

  std::string describe() const;

 private:
  MotilitySpec() = default;
  double value_unchecked(double v) const;
  double derivative_unchecked(double v) const;

  MotilityKind kind_ = MotilityKind::linear;
  double beta_ = 0.0;
  double shift_ = 0.0;
  std::shared_ptr<const MotilitySpec> base_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

inline double phi_eval(const MotilitySpec& spec, double v) { return spec.value(v); }
inline double phi_prime(const MotilitySpec& spec, double v) { return spec.derivative(v); }

struct Lemma1Constants {
  double lower = 0.0;  // lambda(K) = inf_{[0,K]} phi(s)/s, with phi'(0) at s = 0
  double upper = 0.0;  // Lambda(K) = sup_{(0,K)} |phi'|
};

/// Constants with lower*v <= phi(v) <= upper*v and |phi'(v)| <= upper on
/// [0, K], found by dense uniform sampling plus golden-section refinement
/// around the extremal samples. Throws std::domain_error when the spec is not
/// degenerate or the sampled lower constant is not positive.
Lemma1Constants lemma1_constants(const MotilitySpec& spec, double K, int samples = 1'000'000);

}  // namespace degen
