#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace laakso {

/// Positive doubling profile evaluable at any r > 0.
///
/// A power law r^e, or a table of anchor values at r = 2^k for k in
/// [k_lo, k_hi] with piecewise-linear interpolation between consecutive
/// anchors and geometric continuation (boundary ratio) outside the window.
class DoublingProfile {
 public:
  enum class Kind { kPower, kTable };

  static DoublingProfile power(double exponent);
  /// Anchors values[i] at r = 2^(k_lo + i). Needs at least two positive,
  /// non-decreasing values.
  static DoublingProfile table(int k_lo, std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  int k_lo() const noexcept { return k_lo_; }
  int k_hi() const noexcept { return k_lo_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Value at r = 2^k, including the geometric continuation.
  double anchor(int k) const;
  double eval(double r) const;
  double operator()(double r) const { return eval(r); }

  /// Smallest r with eval(r) >= v.
  double inverse(double v) const;

  /// Multiplies every anchor by c.
  DoublingProfile scaled(double c) const;

  /// Anchor-wise product; power laws add exponents.
  static DoublingProfile product(const DoublingProfile& p, const DoublingProfile& q);

 private:
  DoublingProfile() = default;

  Kind kind_ = Kind::kPower;
  double exponent_ = 1.0;
  int k_lo_ = 0;
  std::vector<double> values_;
};

struct AdmissibilityReport {
  bool admissible = true;
  double best_constant = 1.0;
  /// (r, R) violating one of the two bounds; present iff not admissible.
  std::optional<std::pair<double, double>> witness;
};

/// max over k in [k_lo, k_hi-1] of p(2^{k+1}) / p(2^k), at least 1.
double doubling_constant(const DoublingProfile& p, int k_lo, int k_hi);

/// Checks C0^-1 (R/r)^2 <= Psi(R)/Psi(r) <= C0 R V(R) / (r V(r)) on all dyadic
/// pairs r = 2^i <= R = 2^j with i, j in [k_lo, k_hi].
AdmissibilityReport check_admissible(const DoublingProfile& V, const DoublingProfile& psi,
                                     double C0, int k_lo, int k_hi);

/// sup over r >= r_min of s/r - 1/Psi(r), on a dyadic grid refined by a
/// golden-section pass around the best grid point. Clamped at 0.
double phi(const DoublingProfile& psi, double s, double r_min);

/// r_min standing in for the continuum limit r -> 0.
inline constexpr double kContinuumRMin = 0x1p-60;

}  // namespace laakso
