#include "laakso/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "laakso/error.hpp"

namespace laakso::kernels {

namespace {

constexpr std::int64_t kBlock = 4096;

double blocked_max_abs_scaled(const std::vector<double>& r, const std::vector<std::int32_t>& deg,
                              std::int64_t n) {
  double m = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    m = std::max(m, std::abs(r[static_cast<std::size_t>(i)]) / deg[static_cast<std::size_t>(i)]);
  }
  return m;
}

}  // namespace

std::vector<double> inverse_degrees(const BallGraph& g) {
  std::vector<double> inv(g.degree.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / g.degree[i];
  return inv;
}

void step_pull(const BallGraph& g, const std::vector<double>& inv_deg, const std::vector<double>& in,
               std::vector<double>& out, int workers) {
  const std::int64_t n = g.size();
  out.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static, 1024) num_threads(std::max(1, workers))
  for (std::int64_t y = 0; y < n; ++y) {
    double s = 0.0;
    for (std::int64_t e = g.offsets[static_cast<std::size_t>(y)];
         e < g.offsets[static_cast<std::size_t>(y) + 1]; ++e) {
      const std::size_t x = static_cast<std::size_t>(g.adj[static_cast<std::size_t>(e)]);
      s += in[x] * inv_deg[x];
    }
    out[static_cast<std::size_t>(y)] = s;
  }
}

void step_push_serial(const BallGraph& g, const std::vector<double>& inv_deg,
                      const std::vector<double>& in, std::vector<double>& out) {
  const std::size_t n = static_cast<std::size_t>(g.size());
  out.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (in[x] == 0.0) continue;
    const double share = in[x] * inv_deg[x];
    for (std::int64_t e = g.offsets[x]; e < g.offsets[x + 1]; ++e) {
      out[static_cast<std::size_t>(g.adj[static_cast<std::size_t>(e)])] += share;
    }
  }
}

double blocked_dot(const double* a, const double* b, std::int64_t n, int workers) {
  const std::int64_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) num_threads(std::max(1, workers))
  for (std::int64_t k = 0; k < blocks; ++k) {
    double s = 0.0;
    const std::int64_t end = std::min(n, (k + 1) * kBlock);
    for (std::int64_t i = k * kBlock; i < end; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(k)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

namespace {

// y = (D - A) x on the interior prefix [0, n).
void apply_operator(const BallGraph& g, std::int64_t n, const std::vector<double>& x,
                    std::vector<double>& y, int workers) {
#pragma omp parallel for schedule(static, 1024) num_threads(std::max(1, workers))
  for (std::int64_t i = 0; i < n; ++i) {
    double s = g.degree[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    for (std::int64_t e = g.offsets[static_cast<std::size_t>(i)];
         e < g.offsets[static_cast<std::size_t>(i) + 1]; ++e) {
      const std::int32_t j = g.adj[static_cast<std::size_t>(e)];
      if (j < n) s -= x[static_cast<std::size_t>(j)];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

}  // namespace

double exit_residual(const BallGraph& g, int r, const std::vector<double>& h) {
  const std::int64_t n = g.prefix(r);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int64_t e = g.offsets[static_cast<std::size_t>(i)];
         e < g.offsets[static_cast<std::size_t>(i) + 1]; ++e) {
      const std::int32_t j = g.adj[static_cast<std::size_t>(e)];
      if (j < n) s += h[static_cast<std::size_t>(j)];
    }
    const double res = h[static_cast<std::size_t>(i)] - 1.0 - s / g.degree[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

std::vector<double> solve_exit_cg(const BallGraph& g, int r, double tol, int max_iter, int workers,
                                  SolveStats* stats) {
  const std::int64_t n = g.prefix(r);
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> h(un, 0.0), res(un), z(un), p(un), q(un);
  for (std::size_t i = 0; i < un; ++i) res[i] = g.degree[i];
  auto precondition = [&] {
    for (std::size_t i = 0; i < un; ++i) z[i] = res[i] / g.degree[i];
  };
  auto max_h = [&] {
    double m = 1.0;
    for (double v : h) m = std::max(m, std::abs(v));
    return m;
  };
  precondition();
  p = z;
  double rz = blocked_dot(res.data(), z.data(), n, workers);
  int it = 0;
  double resid = blocked_max_abs_scaled(res, g.degree, n);
  while (resid > tol * max_h()) {
    if (it >= max_iter) {
      throw Error(ErrorCode::kNoConvergence,
                  "exit-time solve did not converge in " + std::to_string(max_iter) +
                      " iterations (residual " + std::to_string(resid) + ")");
    }
    apply_operator(g, n, p, q, workers);
    const double alpha = rz / blocked_dot(p.data(), q.data(), n, workers);
    for (std::size_t i = 0; i < un; ++i) {
      h[i] += alpha * p[i];
      res[i] -= alpha * q[i];
    }
    ++it;
    if (it % 50 == 0) {
      // Replace the recurrence residual with the true one to stop drift.
      apply_operator(g, n, h, q, workers);
      for (std::size_t i = 0; i < un; ++i) res[i] = g.degree[i] - q[i];
    }
    precondition();
    const double rz_next = blocked_dot(res.data(), z.data(), n, workers);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < un; ++i) p[i] = z[i] + beta * p[i];
    resid = blocked_max_abs_scaled(res, g.degree, n);
    if (resid <= tol * max_h()) {
      apply_operator(g, n, h, q, workers);
      for (std::size_t i = 0; i < un; ++i) res[i] = g.degree[i] - q[i];
      resid = blocked_max_abs_scaled(res, g.degree, n);
    }
  }
  if (stats) {
    stats->iterations = it;
    stats->residual = resid;
  }
  return h;
}

std::vector<double> solve_exit_sor(const BallGraph& g, int r, double tol, int max_sweeps,
                                   double omega, SolveStats* stats) {
  const std::int64_t n = g.prefix(r);
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (std::int64_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::int64_t e = g.offsets[static_cast<std::size_t>(i)];
           e < g.offsets[static_cast<std::size_t>(i) + 1]; ++e) {
        const std::int32_t j = g.adj[static_cast<std::size_t>(e)];
        if (j < n) s += h[static_cast<std::size_t>(j)];
      }
      const double target = 1.0 + s / g.degree[static_cast<std::size_t>(i)];
      h[static_cast<std::size_t>(i)] += omega * (target - h[static_cast<std::size_t>(i)]);
    }
    double m = 1.0;
    for (double v : h) m = std::max(m, v);
    const double resid = exit_residual(g, r, h);
    if (resid <= tol * m) {
      if (stats) {
        stats->iterations = sweep;
        stats->residual = resid;
      }
      return h;
    }
  }
  throw Error(ErrorCode::kNoConvergence,
              "relaxation did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

LumpedWalk make_lumped_walk(const LaaksoGraph& graph, int radius, const BallOptions& opts) {
  const LaaksoGraph tree_graph(graph.b(), GluingFunction::constant_gluing(1));
  LumpedWalk w;
  w.tree_ball = bfs_ball(tree_graph, LaaksoGraph::base(), radius, opts);
  w.inv_deg = inverse_degrees(w.tree_ball);
  w.hub_state.assign(static_cast<std::size_t>(w.tree_ball.size()), 0);
  for (int k = 0; k <= kMaxIndex; ++k) {
    const auto id = w.tree_ball.find(LaaksoGraph::hub(k));
    if (!id) break;
    w.hub_state[static_cast<std::size_t>(*id)] = k + 1;
    w.levels = k + 2;
  }
  return w;
}

void lumped_step_pull(const LumpedWalk& w, const std::vector<double>& in, std::vector<double>& out,
                      int workers) {
  const BallGraph& g = w.tree_ball;
  const std::int64_t n = g.size();
  const int L = w.levels;
  out.assign(static_cast<std::size_t>(n * L), 0.0);
#pragma omp parallel for schedule(static, 512) num_threads(std::max(1, workers))
  for (std::int64_t y = 0; y < n; ++y) {
    const int floor_state = w.hub_state[static_cast<std::size_t>(y)];
    double* row = out.data() + y * L;
    for (std::int64_t e = g.offsets[static_cast<std::size_t>(y)];
         e < g.offsets[static_cast<std::size_t>(y) + 1]; ++e) {
      const std::int64_t x = g.adj[static_cast<std::size_t>(e)];
      const double c = w.inv_deg[static_cast<std::size_t>(x)];
      const double* src = in.data() + x * L;
      for (int s = 0; s < L; ++s) row[std::max(s, floor_state)] += src[s] * c;
    }
  }
}

void lumped_step_push_serial(const LumpedWalk& w, const std::vector<double>& in,
                             std::vector<double>& out) {
  const BallGraph& g = w.tree_ball;
  const std::int64_t n = g.size();
  const int L = w.levels;
  out.assign(static_cast<std::size_t>(n * L), 0.0);
  for (std::int64_t x = 0; x < n; ++x) {
    const double c = w.inv_deg[static_cast<std::size_t>(x)];
    for (std::int64_t e = g.offsets[static_cast<std::size_t>(x)];
         e < g.offsets[static_cast<std::size_t>(x) + 1]; ++e) {
      const std::int64_t y = g.adj[static_cast<std::size_t>(e)];
      const int floor_state = w.hub_state[static_cast<std::size_t>(y)];
      for (int s = 0; s < L; ++s) {
        out[static_cast<std::size_t>(y * L + std::max(s, floor_state))] += in[static_cast<std::size_t>(x * L + s)] * c;
      }
    }
  }
}

}  // namespace laakso::kernels
