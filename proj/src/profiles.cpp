#include "laakso/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laakso/error.hpp"

namespace laakso {

DoublingProfile DoublingProfile::power(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kInvalidConfig, "power-law exponent must be positive");
  }
  DoublingProfile p;
  p.kind_ = Kind::kPower;
  p.exponent_ = exponent;
  return p;
}

DoublingProfile DoublingProfile::table(int k_lo, std::vector<double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "table profile needs at least two anchors");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidConfig, "table anchors must be positive and finite");
    }
    if (i > 0 && values[i] < values[i - 1]) {
      throw Error(ErrorCode::kInvalidConfig, "table anchors must be non-decreasing");
    }
  }
  DoublingProfile p;
  p.kind_ = Kind::kTable;
  p.k_lo_ = k_lo;
  p.values_ = std::move(values);
  return p;
}

double DoublingProfile::anchor(int k) const {
  if (kind_ == Kind::kPower) return std::exp2(exponent_ * k);
  const int hi = k_hi();
  if (k < k_lo_) {
    const double ratio = values_[1] / values_[0];
    return values_.front() * std::pow(ratio, static_cast<double>(k - k_lo_));
  }
  if (k > hi) {
    const double ratio = values_[values_.size() - 1] / values_[values_.size() - 2];
    return values_.back() * std::pow(ratio, static_cast<double>(k - hi));
  }
  return values_[static_cast<std::size_t>(k - k_lo_)];
}

double DoublingProfile::eval(double r) const {
  if (!(r > 0.0)) return 0.0;
  if (kind_ == Kind::kPower) return std::pow(r, exponent_);
  int e = 0;
  const double m = std::frexp(r, &e);
  const int k = e - 1;
  const double t = 2.0 * m - 1.0;
  const double a = anchor(k);
  if (t == 0.0) return a;
  return a + t * (anchor(k + 1) - a);
}

double DoublingProfile::inverse(double v) const {
  if (!(v > 0.0)) return 0.0;
  if (kind_ == Kind::kPower) return std::pow(v, 1.0 / exponent_);
  int lo = k_lo_;
  while (anchor(lo) >= v) {
    if (--lo < -1100) return 0.0;
  }
  int hi = lo + 1;
  while (anchor(hi) < v) {
    if (++hi > 1100) return std::numeric_limits<double>::infinity();
  }
  lo = hi - 1;
  const double a = anchor(lo), b = anchor(hi);
  const double t = (v - a) / (b - a);
  return std::ldexp(1.0 + t, lo);
}

DoublingProfile DoublingProfile::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidConfig, "profile scale must be positive");
  if (kind_ == Kind::kPower) {
    if (c == 1.0) return *this;
    // Tabulate so the scale survives; window wide enough for every experiment.
    std::vector<double> v;
    for (int k = -8; k <= 40; ++k) v.push_back(c * anchor(k));
    return table(-8, std::move(v));
  }
  DoublingProfile p = *this;
  for (double& x : p.values_) x *= c;
  return p;
}

DoublingProfile DoublingProfile::product(const DoublingProfile& p, const DoublingProfile& q) {
  if (p.kind_ == Kind::kPower && q.kind_ == Kind::kPower) {
    return power(p.exponent_ + q.exponent_);
  }
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const DoublingProfile* x : {&p, &q}) {
    if (x->kind_ == Kind::kTable) {
      lo = std::min(lo, x->k_lo());
      hi = std::max(hi, x->k_hi());
    }
  }
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(p.anchor(k) * q.anchor(k));
  return table(lo, std::move(v));
}

double doubling_constant(const DoublingProfile& p, int k_lo, int k_hi) {
  double best = 1.0;
  for (int k = k_lo; k < k_hi; ++k) {
    best = std::max(best, p.anchor(k + 1) / p.anchor(k));
  }
  return best;
}

AdmissibilityReport check_admissible(const DoublingProfile& V, const DoublingProfile& psi,
                                     double C0, int k_lo, int k_hi) {
  AdmissibilityReport rep;
  constexpr double kRelTol = 1e-12;
  for (int i = k_lo; i <= k_hi; ++i) {
    const double r = std::ldexp(1.0, i);
    for (int j = i; j <= k_hi; ++j) {
      const double R = std::ldexp(1.0, j);
      const double growth = psi.anchor(j) / psi.anchor(i);
      const double lower_c = (R / r) * (R / r) / growth;
      const double upper_c = growth * r * V.anchor(i) / (R * V.anchor(j));
      const double c = std::max(lower_c, upper_c);
      if (c > rep.best_constant) rep.best_constant = c;
      if (c > C0 * (1.0 + kRelTol) && !rep.witness) rep.witness = std::make_pair(r, R);
    }
  }
  rep.admissible = !rep.witness.has_value();
  return rep;
}

namespace {

double objective(const DoublingProfile& psi, double s, double r) {
  return s / r - 1.0 / psi.eval(r);
}

double golden_max(const DoublingProfile& psi, double s, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = objective(psi, s, c), fd = objective(psi, s, d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(psi, s, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(psi, s, d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double phi(const DoublingProfile& psi, double s, double r_min) {
  if (!(s > 0.0)) return 0.0;
  const int k0 = std::max(-60, static_cast<int>(std::ceil(std::log2(r_min))));
  const int k1 = 64;
  double best = objective(psi, s, r_min);
  double best_r = r_min;
  for (int k = k0; k <= k1; ++k) {
    const double r = std::ldexp(1.0, k);
    if (r < r_min) continue;
    const double f = objective(psi, s, r);
    if (f > best) {
      best = f;
      best_r = r;
    }
  }
  // Tables are linear between dyadic anchors, where the objective has a single
  // critical point, so each bracketing interval is refined separately.
  const double lo = std::max(r_min, best_r / 2.0);
  if (lo < best_r) best = std::max(best, golden_max(psi, s, lo, best_r));
  best = std::max(best, golden_max(psi, s, best_r, best_r * 2.0));
  return std::max(0.0, best);
}

}  // namespace laakso
