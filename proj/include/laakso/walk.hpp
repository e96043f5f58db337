#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "laakso/ball.hpp"
#include "laakso/random.hpp"

namespace laakso {

struct WalkOptions {
  std::int64_t vertex_cap = kDefaultVertexCap;
  int workers = 1;
  double tol = 1e-10;
  int max_iter = 1'000'000;

  BallOptions ball() const { return {vertex_cap, workers}; }
};

/// Sparse probability distribution over vertices.
using Distribution = std::map<LaaksoVertex, double>;

/// One step of the simple random walk: d'(y) = sum_{x ~ y} d(x) / deg(x).
Distribution step_distribution(const LaaksoGraph& graph, const Distribution& d);

struct HeatKernelRecord {
  int n = 0;
  LaaksoVertex x;
  LaaksoVertex y;
  double p_n = 0.0;
  double p_n_plus_1 = 0.0;
};

/// Exact p_n(x, y) = P_n(x, y) / deg(y) for n = 0..n_max and every target,
/// ordered by n then target. Propagates on the ball of radius
/// floor((n_max + 1 + D) / 2), D the largest target distance, which no path
/// that ends at a target can leave.
std::vector<HeatKernelRecord> heat_kernel(const LaaksoGraph& graph, const LaaksoVertex& x, int n_max,
                                          const std::vector<LaaksoVertex>& targets,
                                          const WalkOptions& opts = {});

/// p_n(x, .) on a ball for selected step counts.
struct KernelField {
  BallGraph ball;
  std::vector<int> steps;
  std::vector<std::vector<double>> p;  // p[i][y] = p_{steps[i]}(x, y)
  /// p_{steps[i]}(x, y) is exact where d(x, y) <= 2 * radius - steps[i].
  bool exact(std::size_t i, std::int32_t y) const {
    return 2 * ball.radius - steps[i] >= ball.dist[static_cast<std::size_t>(y)];
  }
};

KernelField heat_kernel_field(const LaaksoGraph& graph, const LaaksoVertex& x, std::vector<int> steps,
                              int radius, const WalkOptions& opts = {});

/// p_n(p, p) at the base point for n = 0..n_max through the hub-level walk.
std::vector<double> base_return_kernel(const LaaksoGraph& graph, int n_max,
                                       const WalkOptions& opts = {});

struct ExitTimeRecord {
  LaaksoVertex center;
  int radius = 0;
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal CI; 0 for exact solves
  std::int64_t trials = 0;  // 0 for exact solves
};

ExitTimeRecord exact_mean_exit_time(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                    const WalkOptions& opts = {});

/// Monte Carlo over trials; trial t draws from stream.child(t), so the result
/// is identical for any worker count.
ExitTimeRecord simulate_exit_time(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                                  std::int64_t trials, const RandomStream& stream,
                                  const WalkOptions& opts = {});

/// sum_{n=0}^{n_max} p_n(x, y).
double green_partial(const LaaksoGraph& graph, const LaaksoVertex& x, const LaaksoVertex& y,
                     int n_max, const WalkOptions& opts = {});

/// Cumulative sums G(n) = sum_{k<=n} p_k(p, p), n = 0..n_max, at the base point.
std::vector<double> base_green_series(const LaaksoGraph& graph, int n_max,
                                      const WalkOptions& opts = {});

}  // namespace laakso
