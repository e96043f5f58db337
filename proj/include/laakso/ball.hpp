#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "laakso/graph.hpp"

namespace laakso {

inline constexpr std::int64_t kDefaultVertexCap = 4'000'000;

struct BallOptions {
  std::int64_t vertex_cap = kDefaultVertexCap;
  int workers = 1;
};

/// Closed graph ball with exact distances and in-ball adjacency (CSR).
///
/// Vertices are in BFS order, so dist is non-decreasing and the open ball
/// {d < r} is the prefix [0, sphere_start[r]). Rows of adj are sorted.
/// degree holds the true degree in the full graph.
struct BallGraph {
  LaaksoVertex center;
  int radius = 0;
  std::vector<LaaksoVertex> vertices;
  std::vector<std::int32_t> dist;
  std::vector<std::int32_t> degree;
  std::vector<std::int64_t> offsets;
  std::vector<std::int32_t> adj;
  std::vector<std::int64_t> sphere_start;  // size radius + 2

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(vertices.size()); }
  /// Number of vertices with distance < r.
  std::int64_t prefix(int r) const noexcept;
  std::optional<std::int32_t> find(const LaaksoVertex& v) const;
  /// Sum of true degrees over distance < r.
  std::int64_t degree_sum_below(int r) const noexcept;

  // Open-addressing index into vertices.
  std::vector<std::int32_t> slots;
  std::uint64_t mask = 0;
};

/// Frontier-by-frontier BFS to the given radius. Neighbor evaluation is
/// parallel over each frontier; insertion order is serial, so the result is
/// independent of the worker count.
BallGraph bfs_ball(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                   const BallOptions& opts = {});

struct BallSummary {
  LaaksoVertex center;
  int radius = 0;
  std::int64_t vertex_count = 0;  // d < radius
  std::int64_t degree_sum = 0;    // m_G of the open ball
  std::int64_t boundary_size = 0; // d == radius
};

BallSummary ball_summary(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                         const BallOptions& opts = {});

/// m_G(B(center, r)) = sum of degrees over d < r.
std::int64_t ball_volume(const LaaksoGraph& graph, const LaaksoVertex& center, int r,
                         const BallOptions& opts = {});

/// Subgraph induced by the closed ball of radius 2^n around the base point.
BallGraph induced_ball_graph(const LaaksoGraph& graph, int n, const BallOptions& opts = {});

}  // namespace laakso
