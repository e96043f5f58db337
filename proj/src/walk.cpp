#include "laakso/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "laakso/error.hpp"
#include "laakso/kernels.hpp"

namespace laakso {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Neumaier compensated sum in the given order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), index_(stream_index), key_(mix64(seed ^ mix64(stream_index ^ 0x6A09E667F3BCC909ULL))) {}

std::uint64_t RandomStream::next() noexcept { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

std::uint64_t RandomStream::uniform_int(std::uint64_t n) noexcept {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % n;
}

double RandomStream::uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1p-53; }

RandomStream RandomStream::child(std::uint64_t i) const noexcept { return RandomStream(key_, i); }

Distribution step_distribution(const LaaksoGraph& graph, const Distribution& d) {
  Distribution out;
  std::vector<LaaksoVertex> nb;
  for (const auto& [x, mass] : d) {
    graph.neighbors_into(x, nb);
    const double share = mass / static_cast<double>(nb.size());
    for (const LaaksoVertex& y : nb) out[y] += share;
  }
  return out;
}

std::vector<HeatKernelRecord> heat_kernel(const LaaksoGraph& graph, const LaaksoVertex& x, int n_max,
                                          const std::vector<LaaksoVertex>& targets,
                                          const WalkOptions& opts) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidConfig, "n_max must be nonnegative");
  const int N = n_max + 1;
  // Distances of the targets, searched up to N; farther targets have p = 0.
  int reach = (N + 1) / 2;
  BallGraph probe = bfs_ball(graph, x, reach, opts.ball());
  int D = 0;
  bool all_found = true;
  for (const auto& y : targets) {
    const auto id = probe.find(y);
    if (id) D = std::max(D, probe.dist[static_cast<std::size_t>(*id)]);
    else all_found = false;
  }
  if (!all_found) {
    probe = bfs_ball(graph, x, N, opts.ball());
    for (const auto& y : targets) {
      if (const auto id = probe.find(y)) D = std::max(D, probe.dist[static_cast<std::size_t>(*id)]);
    }
  }
  const int R = (N + D) / 2;
  const BallGraph ball = R <= probe.radius ? std::move(probe) : bfs_ball(graph, x, R, opts.ball());
  std::vector<std::int32_t> ids;
  for (const auto& y : targets) {
    const auto id = ball.find(y);
    ids.push_back(id ? *id : -1);
  }

  const auto inv = kernels::inverse_degrees(ball);
  std::vector<double> cur(static_cast<std::size_t>(ball.size()), 0.0), next;
  cur[0] = 1.0;
  std::vector<std::vector<double>> at_target(static_cast<std::size_t>(N) + 1,
                                             std::vector<double>(targets.size(), 0.0));
  for (int n = 0; n <= N; ++n) {
    for (std::size_t t = 0; t < ids.size(); ++t) {
      if (ids[t] >= 0) at_target[static_cast<std::size_t>(n)][t] = cur[static_cast<std::size_t>(ids[t])] * inv[static_cast<std::size_t>(ids[t])];
    }
    if (n < N) {
      kernels::step_pull(ball, inv, cur, next, opts.workers);
      cur.swap(next);
    }
  }
  std::vector<HeatKernelRecord> out;
  out.reserve(static_cast<std::size_t>(N) * targets.size());
  for (int n = 0; n <= n_max; ++n) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      out.push_back({n, x, targets[t], at_target[static_cast<std::size_t>(n)][t],
                     at_target[static_cast<std::size_t>(n) + 1][t]});
    }
  }
  return out;
}

KernelField heat_kernel_field(const LaaksoGraph& graph, const LaaksoVertex& x, std::vector<int> steps,
                              int radius, const WalkOptions& opts) {
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  KernelField f;
  f.ball = bfs_ball(graph, x, radius, opts.ball());
  f.steps = steps;
  const auto inv = kernels::inverse_degrees(f.ball);
  std::vector<double> cur(static_cast<std::size_t>(f.ball.size()), 0.0), next;
  cur[0] = 1.0;
  int n = 0;
  for (int target : steps) {
    if (target < 0) throw Error(ErrorCode::kInvalidConfig, "step counts must be nonnegative");
    while (n < target) {
      kernels::step_pull(f.ball, inv, cur, next, opts.workers);
      cur.swap(next);
      ++n;
    }
    std::vector<double> p(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) p[i] = cur[i] * inv[i];
    f.p.push_back(std::move(p));
  }
  return f;
}

namespace {

// Return probabilities P_n(p, p) from the hub-level walk, n = 0..n_max.
std::vector<double> base_return_probability(const LaaksoGraph& graph, int n_max,
                                            const WalkOptions& opts) {
  const kernels::LumpedWalk w = kernels::make_lumped_walk(graph, (n_max + 1) / 2, opts.ball());
  const int L = w.levels;
  std::vector<double> weight(static_cast<std::size_t>(L), 1.0);
  for (int s = 1; s < L; ++s) weight[static_cast<std::size_t>(s)] = weight[static_cast<std::size_t>(s) - 1] / graph.g()(s - 1);
  std::vector<double> cur(static_cast<std::size_t>(w.tree_ball.size() * L), 0.0), next;
  cur[0] = 1.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    double p = 0.0;
    for (int s = 0; s < L; ++s) p += cur[static_cast<std::size_t>(s)] * weight[static_cast<std::size_t>(s)];
    out.push_back(p);
    if (n < n_max) {
      kernels::lumped_step_pull(w, cur, next, opts.workers);
      cur.swap(next);
    }
  }
  return out;
}

}  // namespace

std::vector<double> base_return_kernel(const LaaksoGraph& graph, int n_max, const WalkOptions& opts) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidConfig, "n_max must be nonnegative");
  std::vector<double> p = base_return_probability(graph, n_max, opts);
  const double inv_deg = 1.0 / graph.degree(LaaksoGraph::base());
  for (double& v : p) v *= inv_deg;
  return p;
}

std::vector<double> base_green_series(const LaaksoGraph& graph, int n_max, const WalkOptions& opts) {
  const std::vector<double> p = base_return_kernel(graph, n_max, opts);
  std::vector<double> g(p.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.add(p[i]);
    g[i] = s.value();
  }
  return g;
}

double green_partial(const LaaksoGraph& graph, const LaaksoVertex& x, const LaaksoVertex& y, int n_max,
                     const WalkOptions& opts) {
  if (x == LaaksoGraph::base() && y == x) return base_green_series(graph, n_max, opts).back();
  const auto recs = heat_kernel(graph, x, n_max, {y}, opts);
  CompensatedSum s;
  for (const auto& r : recs) s.add(r.p_n);
  return s.value();
}

ExitTimeRecord exact_mean_exit_time(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                    const WalkOptions& opts) {
  ExitTimeRecord rec;
  rec.center = center;
  rec.radius = radius;
  if (radius <= 0) return rec;
  const BallGraph ball = bfs_ball(graph, center, radius, opts.ball());
  const auto h = kernels::solve_exit_cg(ball, radius, opts.tol, opts.max_iter, opts.workers);
  rec.mean = h[0];
  return rec;
}

ExitTimeRecord simulate_exit_time(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                  std::int64_t trials, const RandomStream& stream,
                                  const WalkOptions& opts) {
  if (trials < 100) throw Error(ErrorCode::kInvalidConfig, "Monte Carlo needs at least 100 trials");
  ExitTimeRecord rec;
  rec.center = center;
  rec.radius = radius;
  rec.trials = trials;
  if (radius <= 0) return rec;
  const BallGraph ball = bfs_ball(graph, center, radius, opts.ball());
  std::vector<double> samples(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 4) num_threads(std::max(1, opts.workers))
  for (std::int64_t t = 0; t < trials; ++t) {
    RandomStream rng = stream.child(static_cast<std::uint64_t>(t));
    std::int64_t x = 0, steps = 0;
    while (ball.dist[static_cast<std::size_t>(x)] < radius) {
      const std::int64_t row = ball.offsets[static_cast<std::size_t>(x)];
      const std::uint64_t k = rng.uniform_int(static_cast<std::uint64_t>(ball.degree[static_cast<std::size_t>(x)]));
      x = ball.adj[static_cast<std::size_t>(row + static_cast<std::int64_t>(k))];
      ++steps;
    }
    samples[static_cast<std::size_t>(t)] = static_cast<double>(steps);
  }
  CompensatedSum sum;
  for (double v : samples) sum.add(v);
  const double mean = sum.value() / static_cast<double>(trials);
  CompensatedSum sq;
  for (double v : samples) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / static_cast<double>(trials - 1);
  rec.mean = mean;
  rec.half_width = 1.96 * std::sqrt(var / static_cast<double>(trials));
  return rec;
}

}  // namespace laakso
