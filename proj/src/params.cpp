#include "laakso/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laakso/error.hpp"

namespace laakso {

ParamFunction::ParamFunction(int k_lo, std::vector<int> values, int below, int above,
                             bool graph_mode)
    : k_lo_(k_lo), values_(std::move(values)), below_(below), above_(above),
      graph_mode_(graph_mode) {
  if (values_.empty()) throw Error(ErrorCode::kInvalidConfig, "parameter window is empty");
  auto check = [](int v) {
    if (v < 0 || v > kMaxParamValue) {
      throw Error(ErrorCode::kInvalidRange, "parameter value out of storable range: " +
                                                std::to_string(v));
    }
  };
  for (int v : values_) check(v);
  check(below_);
  check(above_);
}

ParamFunction ParamFunction::constant_branching(int v, bool graph_mode) {
  return ParamFunction(1, {v}, 2, v, graph_mode);
}

ParamFunction ParamFunction::constant_gluing(int v, bool graph_mode) {
  return ParamFunction(1, {v}, 1, v, graph_mode);
}

int ParamFunction::sup() const noexcept {
  return std::max({below_, above_, *std::max_element(values_.begin(), values_.end())});
}

int ParamFunction::inf() const noexcept {
  return std::min({below_, above_, *std::min_element(values_.begin(), values_.end())});
}

namespace {

constexpr Int128 kProductLimit = static_cast<Int128>(1) << 120;

Int128 checked_mul(Int128 a, int f) {
  if (f > 0 && a > kProductLimit / f) {
    throw Error(ErrorCode::kTooLarge, "volume anchor overflows exact arithmetic");
  }
  return a * f;
}

int anchor_lo(const ParamFunction& f) { return std::min(f.k_lo(), 0) - 1; }
int anchor_hi(const ParamFunction& f) { return std::max(f.k_hi(), 1) + 2; }

}  // namespace

Fraction v_anchor_exact(const ParamFunction& f, int n) {
  Fraction r;
  if (n <= 0) {
    for (int k = n; k <= 0; ++k) r.den = checked_mul(r.den, f(k));
  } else {
    for (int k = 1; k <= n - 1; ++k) r.num = checked_mul(r.num, f(k));
  }
  return r;
}

DoublingProfile v_from_counts(const ParamFunction& f) {
  const int lo = anchor_lo(f), hi = anchor_hi(f);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) v.push_back(v_anchor_exact(f, n).value());
  return DoublingProfile::table(lo, std::move(v));
}

DoublingProfile psi_b(const BranchingFunction& b) {
  const int lo = anchor_lo(b), hi = anchor_hi(b);
  std::vector<double> v;
  for (int n = lo; n <= hi; ++n) v.push_back(std::ldexp(v_anchor_exact(b, n).value(), n));
  return DoublingProfile::table(lo, std::move(v));
}

DoublingProfile volume_law(const BranchingFunction& b, const GluingFunction& g) {
  return DoublingProfile::product(v_from_counts(g), v_from_counts(b));
}

FitResult fit_params(const DoublingProfile& V, const DoublingProfile& psi, int k_max, int B_max,
                     int G_max, double C0) {
  if (k_max < 1) throw Error(ErrorCode::kInvalidConfig, "k_max must be at least 1");
  if (B_max < 2 || G_max < 1 || B_max > kMaxParamValue || G_max > kMaxParamValue) {
    throw Error(ErrorCode::kInvalidConfig, "B_max must be in [2,255] and G_max in [1,255]");
  }
  const AdmissibilityReport adm = check_admissible(V, psi, C0, 0, k_max);
  if (!adm.admissible) {
    throw Error(ErrorCode::kNotAdmissible,
                "profiles fail the admissibility check with C0 = " + std::to_string(C0) +
                    " (best constant " + std::to_string(adm.best_constant) + ")");
  }

  // Candidates within this of the best so far count as ties and keep the smaller value.
  constexpr double kTieTolerance = 1e-9;
  FitResult res;
  res.psi_scale = psi.anchor(1) / 2.0;
  res.vol_scale = V.anchor(1);
  auto target_psi = [&](int n) { return std::log(psi.anchor(n) / res.psi_scale); };
  auto target_vol = [&](int n) { return std::log(V.anchor(n) / res.vol_scale); };

  std::vector<int> bv, gv;
  double log_psi = std::log(2.0);  // log Psi_b(2)
  double log_vg = 0.0;             // log V_g(2)
  double log_vb = 0.0;             // log V_b(2)
  for (int n = 1; n <= k_max; ++n) {
    const double tp = target_psi(n + 1);
    int best_b = 2;
    double best_err = std::numeric_limits<double>::infinity();
    for (int b = 2; b <= B_max; ++b) {
      const double err = std::abs(log_psi + std::log(2.0 * b) - tp);
      if (err < best_err - kTieTolerance) {
        best_err = err;
        best_b = b;
      }
    }
    log_psi += std::log(2.0 * best_b);
    log_vb += std::log(static_cast<double>(best_b));
    res.psi_log_error = std::max(res.psi_log_error, best_err);

    const double tv = target_vol(n + 1);
    int best_g = 1;
    best_err = std::numeric_limits<double>::infinity();
    for (int g = 1; g <= G_max; ++g) {
      const double err = std::abs(log_vg + std::log(static_cast<double>(g)) + log_vb - tv);
      if (err < best_err - kTieTolerance) {
        best_err = err;
        best_g = g;
      }
    }
    log_vg += std::log(static_cast<double>(best_g));
    res.vol_log_error = std::max(res.vol_log_error, best_err);
    bv.push_back(best_b);
    gv.push_back(best_g);
  }
  const int b_last = bv.back(), g_last = gv.back();
  res.b = ParamFunction(1, std::move(bv), 2, b_last, true);
  res.g = ParamFunction(1, std::move(gv), 1, g_last, true);

  res.psi_bound = std::log(2.0 * B_max) + std::log(doubling_constant(psi, 0, k_max + 1));
  res.vol_bound = std::log(static_cast<double>(G_max)) + std::log(doubling_constant(V, 0, k_max + 1));
  if (res.psi_log_error > res.psi_bound || res.vol_log_error > res.vol_bound) {
    throw Error(ErrorCode::kTargetOutOfRange,
                "tracking error exceeds its bound (psi " + std::to_string(res.psi_log_error) +
                    " vs " + std::to_string(res.psi_bound) + ", volume " +
                    std::to_string(res.vol_log_error) + " vs " + std::to_string(res.vol_bound) +
                    "); raise B_max or G_max");
  }
  return res;
}

namespace {

void check_function(const ParamFunction& f, const char* name, int lo_allowed, bool graph_mode,
                    int graph_value, std::vector<Violation>& out) {
  auto range = [&](int k, int v) {
    if (v < lo_allowed) out.push_back({name, "range", k, v});
  };
  auto graph = [&](int k, int v) {
    if (graph_mode && v != graph_value) out.push_back({name, "graph_mode", k, v});
  };
  range(f.k_lo() - 1, f.below());
  graph(std::min(f.k_lo() - 1, 0), f.below());
  for (int k = f.k_lo(); k <= f.k_hi(); ++k) {
    range(k, f(k));
    if (k <= 0) graph(k, f(k));
  }
  range(f.k_hi() + 1, f.above());
  if (f.k_hi() + 1 <= 0) graph(f.k_hi() + 1, f.above());
}

}  // namespace

std::vector<Violation> validate(const BranchingFunction& b, const GluingFunction& g,
                                bool graph_mode) {
  std::vector<Violation> out;
  check_function(b, "b", 2, graph_mode, 2, out);
  check_function(g, "g", 1, graph_mode, 1, out);
  return out;
}

}  // namespace laakso
