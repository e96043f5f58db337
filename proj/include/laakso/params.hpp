#pragma once

#include <string>
#include <vector>

#include "laakso/profiles.hpp"

namespace laakso {

/// Integer parameter function on a window [k_lo, k_hi] with constant values
/// below and above it. Used for both the branching function b and the gluing
/// function g.
class ParamFunction {
 public:
  ParamFunction() = default;
  ParamFunction(int k_lo, std::vector<int> values, int below, int above, bool graph_mode);

  /// b constant equal to v for k >= 1; b(k) = 2 below.
  static ParamFunction constant_branching(int v, bool graph_mode = true);
  /// g constant equal to v for k >= 1; g(k) = 1 below.
  static ParamFunction constant_gluing(int v, bool graph_mode = true);

  int operator()(int k) const noexcept {
    if (k < k_lo_) return below_;
    if (k > k_hi()) return above_;
    return values_[static_cast<std::size_t>(k - k_lo_)];
  }

  int k_lo() const noexcept { return k_lo_; }
  int k_hi() const noexcept { return k_lo_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<int>& values() const noexcept { return values_; }
  int below() const noexcept { return below_; }
  int above() const noexcept { return above_; }
  bool graph_mode() const noexcept { return graph_mode_; }

  /// Largest value taken anywhere.
  int sup() const noexcept;
  /// Smallest value taken anywhere.
  int inf() const noexcept;

  bool operator==(const ParamFunction& o) const = default;

 private:
  int k_lo_ = 1;
  std::vector<int> values_{2};
  int below_ = 2;
  int above_ = 2;
  bool graph_mode_ = true;
};

using BranchingFunction = ParamFunction;
using GluingFunction = ParamFunction;

/// Largest value any parameter function may take (digits are stored in bytes).
inline constexpr int kMaxParamValue = 255;

/// Volume profile of an index set: V_f(2^n) = 1/prod_{n<=k<=0} f(k) for n <= 0,
/// V_f(2) = 1 and V_f(2^n) = prod_{k=1}^{n-1} f(k) for n >= 2.
DoublingProfile v_from_counts(const ParamFunction& f);

__extension__ typedef __int128 Int128;

/// Exact anchor V_f(2^n) as num/den.
struct Fraction {
  Int128 num = 1;
  Int128 den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Fraction v_anchor_exact(const ParamFunction& f, int n);

/// Scale function Psi_b(2^n) = 2^n V_b(2^n), linear in between, Psi_b(0) = 0.
DoublingProfile psi_b(const BranchingFunction& b);

/// Volume law V_g V_b.
DoublingProfile volume_law(const BranchingFunction& b, const GluingFunction& g);

struct FitResult {
  BranchingFunction b;
  GluingFunction g;
  double psi_log_error = 0.0;
  double vol_log_error = 0.0;
  /// Psi is tracked as psi_scale * Psi_b; V as vol_scale * V_g V_b.
  double psi_scale = 1.0;
  double vol_scale = 1.0;
  double psi_bound = 0.0;
  double vol_bound = 0.0;
};

/// Greedy multiplicative tracking of (V, Psi) by (V_g V_b, Psi_b) on
/// n = 1..k_max. Targets are normalized at r = 2.
FitResult fit_params(const DoublingProfile& V, const DoublingProfile& psi, int k_max, int B_max,
                     int G_max, double C0 = 2.0);

struct Violation {
  std::string function;  // "b" or "g"
  std::string kind;      // "range" or "graph_mode"
  int k = 0;
  int value = 0;
};

std::vector<Violation> validate(const BranchingFunction& b, const GluingFunction& g,
                                bool graph_mode);

}  // namespace laakso
