#include "laakso/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "laakso/error.hpp"
#include "laakso/params.hpp"

namespace laakso {

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw Error(ErrorCode::kDegenerate, "exponent fit needs at least 4 points");
  ExponentFit fit;
  for (const auto& [r, v] : points) {
    if (!(r > 0.0) || !(v > 0.0)) {
      throw Error(ErrorCode::kDegenerate, "exponent fit needs positive r and values");
    }
    fit.points.emplace_back(std::log(r), std::log(v));
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) throw Error(ErrorCode::kDegenerate, "all abscissae are equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - fit.intercept - fit.slope * x;
    sse += e * e;
  }
  fit.stderr_ = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

void finalize(EnvelopeReport& rep) {
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  for (const auto& g : rep.grid) {
    rep.ratio_min = std::min(rep.ratio_min, g.lo);
    rep.ratio_max = std::max(rep.ratio_max, g.hi);
  }
  if (rep.grid.empty()) rep.ratio_min = 0.0;
  bool ok = !rep.grid.empty() && rep.ratio_min > 0.0 && rep.spread() <= rep.threshold;
  if (rep.calibrated) {
    ok = ok && rep.ratio_min >= 1.0 / rep.threshold && rep.ratio_max <= rep.threshold;
  }
  rep.pass = ok;
}

EnvelopeReport check_volume(const LaaksoGraph& graph, const std::vector<LaaksoVertex>& centers,
                            const std::vector<int>& radii, double threshold, const WalkOptions& opts) {
  EnvelopeReport rep;
  rep.quantity = "volume";
  rep.threshold = threshold;
  rep.calibrated = true;
  const DoublingProfile law = volume_law(graph.b(), graph.g());
  const int r_max = radii.empty() ? 0 : *std::max_element(radii.begin(), radii.end());
  for (const auto& c : centers) {
    const BallGraph ball = bfs_ball(graph, c, std::max(0, r_max - 1), opts.ball());
    const std::string id = vertex_id(c);
    for (int r : radii) {
      const double ratio = static_cast<double>(ball.degree_sum_below(r)) / law.eval(r);
      rep.grid.push_back({id, static_cast<double>(r), ratio, ratio});
    }
  }
  finalize(rep);
  return rep;
}

EnvelopeReport check_exit_time(const LaaksoGraph& graph, const std::vector<LaaksoVertex>& centers,
                               const std::vector<int>& radii, double threshold, double psi_scale,
                               const WalkOptions& opts) {
  EnvelopeReport rep;
  rep.quantity = "exit_time";
  rep.threshold = threshold;
  rep.calibrated = true;
  rep.params.emplace_back("psi_scale", psi_scale);
  const DoublingProfile psi = psi_b(graph.b());
  for (const auto& c : centers) {
    const std::string id = vertex_id(c);
    for (int r : radii) {
      const double mean = exact_mean_exit_time(graph, c, r, opts).mean;
      const double ratio = mean / (psi_scale * psi.eval(r));
      rep.grid.push_back({id, static_cast<double>(r), ratio, ratio});
    }
  }
  finalize(rep);
  return rep;
}

HkeReports check_hke(const LaaksoGraph& graph, const LaaksoVertex& center,
                     const std::vector<int>& n_values_in, const HkeOptions& hke,
                     const WalkOptions& opts) {
  std::vector<int> n_values = n_values_in;
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
  if (n_values.empty()) throw Error(ErrorCode::kInvalidConfig, "check_hke needs step counts");
  if (!(hke.delta > 0.0 && hke.delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "delta must lie in (0, 1]");
  }
  const DoublingProfile psi = psi_b(graph.b());
  const int n_max = n_values.back();
  int radius = static_cast<int>(std::ceil((1.0 + hke.upper_reach) * (n_max + 1) / 2.0));
  std::vector<double> R(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    R[i] = psi.inverse(n_values[i]);
    const int need = static_cast<int>(std::ceil((n_values[i] + 1 + hke.delta * R[i]) / 2.0));
    radius = std::max({radius, need, static_cast<int>(std::ceil(R[i]))});
  }
  std::vector<int> steps;
  for (int n : n_values) {
    steps.push_back(n);
    steps.push_back(n + 1);
  }
  const KernelField f = heat_kernel_field(graph, center, steps, radius, opts);
  const BallGraph& ball = f.ball;
  auto step_index = [&](int n) {
    return static_cast<std::size_t>(std::lower_bound(f.steps.begin(), f.steps.end(), n) - f.steps.begin());
  };

  HkeReports out;
  const std::string id = vertex_id(center);
  out.lower.quantity = "hke_lower_near_diag";
  out.lower.threshold = hke.threshold;
  out.lower.params.emplace_back("delta", hke.delta);
  out.upper.quantity = "hke_upper";
  out.upper.threshold = hke.threshold;
  out.upper.params.emplace_back("delta", hke.delta);

  // Per n and distance: largest p over exact y and smallest positive p over
  // near-diagonal y, in logs.
  struct Row {
    double log_m = 0.0;
    std::map<int, double> log_pmax;
    std::map<int, double> log_pmin_near;
  };
  std::vector<Row> rows(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const std::size_t a = step_index(n), b = step_index(n + 1);
    const double m = static_cast<double>(ball.degree_sum_below(static_cast<int>(std::ceil(R[i]))));
    rows[i].log_m = std::log(m);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::int32_t y = 0; y < ball.size(); ++y) {
      const int d = ball.dist[static_cast<std::size_t>(y)];
      const bool near = d <= hke.delta * R[i];
      if (near && f.exact(b, y)) {
        const double v = (f.p[a][static_cast<std::size_t>(y)] + f.p[b][static_cast<std::size_t>(y)]) * m;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double p = f.p[a][static_cast<std::size_t>(y)];
      if (p > 0.0 && f.exact(a, y)) {
        const double lp = std::log(p);
        auto it = rows[i].log_pmax.find(d);
        if (it == rows[i].log_pmax.end()) rows[i].log_pmax[d] = lp;
        else it->second = std::max(it->second, lp);
        if (near) {
          auto jt = rows[i].log_pmin_near.find(d);
          if (jt == rows[i].log_pmin_near.end()) rows[i].log_pmin_near[d] = lp;
          else jt->second = std::min(jt->second, lp);
        }
      }
    }
    out.lower.grid.push_back({id, static_cast<double>(n), lo, hi});
    out.on_diagonal.emplace_back(static_cast<double>(n), f.p[a][0]);
  }
  finalize(out.lower);

  // Phi(c2 d / n) per (n, d, c2).
  double best_spread = std::numeric_limits<double>::infinity();
  std::vector<GridPoint> best_grid;
  double best_c1 = 0.0, best_c2 = 0.0;
  for (double c2 : hke.c_grid) {
    std::vector<std::map<int, double>> phis(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      for (const auto& [d, lp] : rows[i].log_pmax) {
        phis[i][d] = phi(psi, c2 * d / n_values[i], 1.0);
      }
    }
    for (double c1 : hke.c_grid) {
      std::vector<GridPoint> grid;
      double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
      for (std::size_t i = 0; i < n_values.size(); ++i) {
        const double n = n_values[i];
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& [d, lp] : rows[i].log_pmax) {
          hi = std::max(hi, lp + rows[i].log_m + c1 * n * phis[i].at(d));
        }
        for (const auto& [d, lp] : rows[i].log_pmin_near) {
          lo = std::min(lo, lp + rows[i].log_m + c1 * n * phis[i].at(d));
        }
        gmin = std::min(gmin, lo);
        gmax = std::max(gmax, hi);
        grid.push_back({id, n, std::exp(lo), std::exp(hi)});
      }
      const double spread = gmax - gmin;
      if (spread < best_spread) {
        best_spread = spread;
        best_grid = std::move(grid);
        best_c1 = c1;
        best_c2 = c2;
      }
    }
  }
  out.upper.grid = std::move(best_grid);
  out.upper.params.emplace_back("c1", best_c1);
  out.upper.params.emplace_back("c2", best_c2);
  out.upper.params.emplace_back("upper_reach", hke.upper_reach);
  finalize(out.upper);
  return out;
}

EnvelopeReport check_green(const LaaksoGraph& graph, const std::vector<int>& n_values, double threshold,
                           const WalkOptions& opts) {
  EnvelopeReport rep;
  rep.quantity = "green";
  rep.threshold = threshold;
  if (n_values.empty()) {
    finalize(rep);
    return rep;
  }
  const int n_max = *std::max_element(n_values.begin(), n_values.end());
  const std::vector<double> G = base_green_series(graph, n_max, opts);
  const DoublingProfile psi = psi_b(graph.b());
  const DoublingProfile law = volume_law(graph.b(), graph.g());
  std::vector<double> theory(static_cast<std::size_t>(n_max) + 1, 1.0);
  for (int k = 1; k <= n_max; ++k) {
    theory[static_cast<std::size_t>(k)] = theory[static_cast<std::size_t>(k) - 1] + 1.0 / law.eval(psi.inverse(k));
  }
  const std::string id = vertex_id(LaaksoGraph::base());
  for (int n : n_values) {
    const double ratio = G[static_cast<std::size_t>(n)] / theory[static_cast<std::size_t>(n)];
    rep.grid.push_back({id, static_cast<double>(n), ratio, ratio});
  }
  finalize(rep);
  return rep;
}

TransienceReport classify_transience(const DoublingProfile& V, const DoublingProfile& psi, int k_max,
                                     int window) {
  if (window < 1 || k_max - 1 - window < 0) {
    throw Error(ErrorCode::kInvalidConfig, "k_max must exceed the trend window");
  }
  // Piece k is ln 2 * integral over t in [k, k+1] of Psi(2^t) / V(2^t).
  constexpr int kIntervals = 32;
  std::vector<double> pieces;
  for (int k = 0; k < k_max; ++k) {
    double s = 0.0;
    for (int j = 0; j <= kIntervals; ++j) {
      const double t = k + static_cast<double>(j) / kIntervals;
      const double r = std::exp2(t);
      const double w = (j == 0 || j == kIntervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      s += w * psi.eval(r) / V.eval(r);
    }
    pieces.push_back(std::log(2.0) * s / (3.0 * kIntervals));
  }
  TransienceReport rep;
  for (double p : pieces) rep.partial_integral += p;
  const std::size_t K = pieces.size() - 1;
  rep.trend = std::pow(pieces[K] / pieces[K - static_cast<std::size_t>(window)], 1.0 / window);
  if (std::abs(rep.trend - 1.0) < 1e-3) {
    throw Error(ErrorCode::kInconclusive,
                "integrand trend " + std::to_string(rep.trend) + " is within 1e-3 of 1");
  }
  rep.verdict = rep.trend < 1.0 ? Transience::kTransient : Transience::kRecurrent;
  return rep;
}

MonteCarloCheck check_monte_carlo(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                  std::int64_t trials, const RandomStream& stream,
                                  const WalkOptions& opts) {
  MonteCarloCheck c;
  c.center_id = vertex_id(center);
  c.radius = radius;
  c.trials = trials;
  c.exact = exact_mean_exit_time(graph, center, radius, opts).mean;
  const ExitTimeRecord mc = simulate_exit_time(graph, center, radius, trials, stream, opts);
  c.mean = mc.mean;
  c.half_width = mc.half_width;
  c.pass = std::abs(c.mean - c.exact) <= 3.0 * c.half_width + 1e-9 * std::max(1.0, c.exact);
  return c;
}

namespace {

void maybe_fit(std::vector<ExponentFit>& fits, const std::string& name,
               const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 4) return;
  ExponentFit f = fit_exponent(pts);
  f.quantity = name;
  fits.push_back(std::move(f));
}

}  // namespace

VerifyOutcome verify_all(const LaaksoGraph& graph, const VerifyPlan& plan, const WalkOptions& opts) {
  VerifyOutcome out;
  std::vector<LaaksoVertex> centers;
  for (const auto& c : plan.centers) centers.push_back(graph.resolve_center(c));
  if (centers.empty()) throw Error(ErrorCode::kInvalidConfig, "verify-all needs at least one center");
  const LaaksoVertex& first = centers.front();
  const std::string first_id = vertex_id(first);

  EnvelopeReport vol = check_volume(graph, centers, plan.radii, plan.volume_threshold, opts);
  std::vector<std::pair<double, double>> pts;
  for (const auto& g : vol.grid) {
    if (g.center_id == first_id) pts.emplace_back(g.r, g.lo * volume_law(graph.b(), graph.g()).eval(g.r));
  }
  maybe_fit(out.fits, "volume", pts);
  if (!vol.pass) out.exit_code |= 1;
  out.checks.push_back(std::move(vol));

  EnvelopeReport ex = check_exit_time(graph, centers, plan.radii, plan.exit_threshold, plan.psi_scale, opts);
  pts.clear();
  const DoublingProfile psi = psi_b(graph.b());
  for (const auto& g : ex.grid) {
    if (g.center_id == first_id) pts.emplace_back(g.r, g.lo * plan.psi_scale * psi.eval(g.r));
  }
  maybe_fit(out.fits, "exit_time", pts);
  if (!ex.pass) out.exit_code |= 2;
  out.checks.push_back(std::move(ex));

  if (!plan.n_values.empty()) {
    HkeOptions hke;
    hke.delta = plan.delta;
    hke.threshold = plan.hke_threshold;
    HkeReports main = check_hke(graph, first, plan.n_values, hke, opts);
    maybe_fit(out.fits, "on_diagonal", main.on_diagonal);
    if (!main.lower.pass || !main.upper.pass) out.exit_code |= 4;
    out.checks.push_back(std::move(main.lower));
    out.checks.push_back(std::move(main.upper));
    for (double delta : plan.deltas) {
      if (delta == plan.delta) continue;
      HkeOptions sweep = hke;
      sweep.delta = delta;
      HkeReports r = check_hke(graph, first, plan.n_values, sweep, opts);
      r.lower.gating = false;
      out.checks.push_back(std::move(r.lower));
    }
  }

  if (!plan.green_n.empty()) {
    EnvelopeReport green = check_green(graph, plan.green_n, plan.green_threshold, opts);
    if (!green.pass) out.exit_code |= 8;
    out.checks.push_back(std::move(green));
  }

  try {
    out.transience = classify_transience(volume_law(graph.b(), graph.g()), psi, plan.k_max);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInconclusive) throw;
    out.transience_note = e.what();
  }

  const RandomStream stream(plan.seed, 0);
  for (std::size_t i = 0; i < plan.mc_radii.size(); ++i) {
    MonteCarloCheck c = check_monte_carlo(graph, first, plan.mc_radii[i], plan.trials,
                                          stream.child(i), opts);
    if (!c.pass) out.exit_code |= 16;
    out.monte_carlo.push_back(std::move(c));
  }
  return out;
}

}  // namespace laakso
