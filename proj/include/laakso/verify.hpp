#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laakso/graph.hpp"
#include "laakso/profiles.hpp"
#include "laakso/walk.hpp"

namespace laakso {

struct ExponentFit {
  std::string quantity;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  std::vector<std::pair<double, double>> points;  // (log r, log value)
};

/// Least-squares slope of log value against log r. Throws Degenerate for
/// fewer than 4 points, equal abscissae or nonpositive inputs.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct GridPoint {
  std::string center_id;
  double r = 0.0;  // radius or step count
  double lo = 0.0;  // smallest ratio at this point
  double hi = 0.0;  // largest ratio at this point
};

/// Empirical over theoretical ratios on a grid.
///
/// pass requires ratio_max / ratio_min <= threshold. When calibrated is set
/// the band must also lie inside [1/threshold, threshold].
struct EnvelopeReport {
  std::string quantity;  // volume, exit_time, hke_upper, hke_lower_near_diag, green
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double threshold = 0.0;
  bool calibrated = false;
  /// Non-gating reports (parameter sweeps) never affect the exit code.
  bool gating = true;
  bool pass = false;
  std::vector<GridPoint> grid;
  std::vector<std::pair<std::string, double>> params;

  double spread() const { return ratio_min > 0.0 ? ratio_max / ratio_min : std::numeric_limits<double>::infinity(); }
};

/// Sets ratio_min, ratio_max and pass from grid.
void finalize(EnvelopeReport& rep);

/// ball_volume / (V_g V_b)(r) over centers x radii; calibrated.
EnvelopeReport check_volume(const LaaksoGraph& graph, const std::vector<LaaksoVertex>& centers,
                            const std::vector<int>& radii, double threshold,
                            const WalkOptions& opts = {});

/// exact mean exit time / (psi_scale * Psi_b)(r) over centers x radii; calibrated.
EnvelopeReport check_exit_time(const LaaksoGraph& graph, const std::vector<LaaksoVertex>& centers,
                               const std::vector<int>& radii, double threshold,
                               double psi_scale = 1.0, const WalkOptions& opts = {});

struct HkeOptions {
  double delta = 0.25;
  double threshold = 100.0;
  /// The propagation ball has radius ceil((1 + upper_reach) (n_max + 1) / 2)
  /// at least, so upper ratios are exact out to d = upper_reach * n.
  double upper_reach = 1.0;
  std::vector<double> c_grid{1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0};
};

struct HkeReports {
  EnvelopeReport lower;  // hke_lower_near_diag
  EnvelopeReport upper;  // hke_upper
  /// p_n(x, x) for each n, for the on-diagonal exponent.
  std::vector<std::pair<double, double>> on_diagonal;
};

/// Lower: (p_n + p_{n+1})(x, y) m(B(x, R_n)) for d(x, y) <= delta R_n, with
/// R_n = Psi_b^{-1}(n). Upper: p_n(x, y) m(B(x, R_n)) exp(c1 n Phi(c2 d / n))
/// with (c1, c2) chosen on a grid to minimize the spread; the maximum runs
/// over the exactly computed support and the minimum over near-diagonal y.
HkeReports check_hke(const LaaksoGraph& graph, const LaaksoVertex& center,
                     const std::vector<int>& n_values, const HkeOptions& hke,
                     const WalkOptions& opts = {});

/// G(n) = sum_{k<=n} p_k(p, p) against 1 + sum_{k=1}^n 1 / (V_g V_b)(Psi_b^{-1}(k)).
EnvelopeReport check_green(const LaaksoGraph& graph, const std::vector<int>& n_values,
                           double threshold, const WalkOptions& opts = {});

enum class Transience { kRecurrent, kTransient };

struct TransienceReport {
  Transience verdict = Transience::kRecurrent;
  /// Geometric trend of the dyadic pieces of the integral of Psi(s)/(s V(s)).
  double trend = 1.0;
  double partial_integral = 0.0;
};

/// Integrates Psi(s)/(s V(s)) over [1, 2^k_max] dyadically and classifies by
/// the trend of the last `window` pieces. Throws Inconclusive within 1e-3 of 1.
TransienceReport classify_transience(const DoublingProfile& V, const DoublingProfile& psi, int k_max,
                                     int window = 4);

struct MonteCarloCheck {
  std::string center_id;
  int radius = 0;
  double exact = 0.0;
  double mean = 0.0;
  double half_width = 0.0;
  std::int64_t trials = 0;
  bool pass = false;  // |mean - exact| <= 3 half widths
};

MonteCarloCheck check_monte_carlo(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                  std::int64_t trials, const RandomStream& stream,
                                  const WalkOptions& opts = {});

/// Everything verify-all runs.
struct VerifyPlan {
  std::vector<std::string> centers{"root", "hub:1", "hub:2"};
  std::vector<int> radii{4, 8, 16, 32};
  std::vector<int> n_values{16, 32, 64, 128, 256};
  std::vector<double> deltas{0.125, 0.25, 0.5};
  std::vector<int> mc_radii{4, 8};
  std::vector<int> green_n{64, 128, 256, 512, 1024};
  int k_max = 20;
  double volume_threshold = 64.0;
  double exit_threshold = 64.0;
  double hke_threshold = 100.0;
  double green_threshold = 64.0;
  double delta = 0.25;
  double psi_scale = 1.0;
  std::int64_t trials = 400;
  std::uint64_t seed = 1;
};

struct VerifyOutcome {
  std::vector<EnvelopeReport> checks;
  std::vector<ExponentFit> fits;
  std::vector<MonteCarloCheck> monte_carlo;
  std::optional<TransienceReport> transience;
  std::string transience_note;
  int exit_code = 0;  // bitmask: volume 1, exit_time 2, hke 4, green 8, monte carlo 16
};

VerifyOutcome verify_all(const LaaksoGraph& graph, const VerifyPlan& plan, const WalkOptions& opts);

}  // namespace laakso
