#include "laakso/ball.hpp"

#include <algorithm>
#include <string>

#include <omp.h>

#include "laakso/error.hpp"

namespace laakso {

namespace {

class Index {
 public:
  explicit Index(BallGraph& g) : g_(g) { rehash(1024); }

  std::int32_t find(const LaaksoVertex& v) const {
    std::uint64_t i = hash_(v) & g_.mask;
    while (true) {
      const std::int32_t s = g_.slots[i];
      if (s < 0) return -1;
      if (g_.vertices[static_cast<std::size_t>(s)] == v) return s;
      i = (i + 1) & g_.mask;
    }
  }

  void insert(std::int32_t id) {
    if (static_cast<std::uint64_t>(g_.vertices.size()) * 2 > g_.mask) rehash((g_.mask + 1) * 2);
    place(id);
  }

 private:
  void place(std::int32_t id) {
    std::uint64_t i = hash_(g_.vertices[static_cast<std::size_t>(id)]) & g_.mask;
    while (g_.slots[i] >= 0) i = (i + 1) & g_.mask;
    g_.slots[i] = id;
  }

  void rehash(std::uint64_t capacity) {
    g_.slots.assign(capacity, -1);
    g_.mask = capacity - 1;
    for (std::size_t id = 0; id < g_.vertices.size(); ++id) place(static_cast<std::int32_t>(id));
  }

  BallGraph& g_;
  LaaksoVertexHash hash_;
};

}  // namespace

std::int64_t BallGraph::prefix(int r) const noexcept {
  if (r <= 0) return 0;
  if (r > radius) return size();
  return sphere_start[static_cast<std::size_t>(r)];
}

std::optional<std::int32_t> BallGraph::find(const LaaksoVertex& v) const {
  if (slots.empty()) return std::nullopt;
  LaaksoVertexHash hash;
  std::uint64_t i = hash(v) & mask;
  while (true) {
    const std::int32_t s = slots[i];
    if (s < 0) return std::nullopt;
    if (vertices[static_cast<std::size_t>(s)] == v) return s;
    i = (i + 1) & mask;
  }
}

std::int64_t BallGraph::degree_sum_below(int r) const noexcept {
  std::int64_t sum = 0;
  const std::int64_t end = prefix(r);
  for (std::int64_t i = 0; i < end; ++i) sum += degree[static_cast<std::size_t>(i)];
  return sum;
}

BallGraph bfs_ball(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                   const BallOptions& opts) {
  if (radius < 0) throw Error(ErrorCode::kInvalidConfig, "radius must be nonnegative");
  BallGraph g;
  g.center = center;
  g.radius = radius;
  Index index(g);
  g.vertices.push_back(center);
  g.dist.push_back(0);
  index.insert(0);
  g.sphere_start = {0, 1};

  // Interior rows, filled as each frontier is expanded.
  std::vector<std::vector<std::int32_t>> rows;
  std::vector<std::vector<LaaksoVertex>> scratch;
  const int workers = std::max(1, opts.workers);

  for (int d = 0; d < radius; ++d) {
    const std::int64_t begin = g.sphere_start[static_cast<std::size_t>(d)];
    const std::int64_t end = g.sphere_start[static_cast<std::size_t>(d) + 1];
    const std::int64_t count = end - begin;
    scratch.resize(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 256) num_threads(workers)
    for (std::int64_t i = 0; i < count; ++i) {
      graph.neighbors_into(g.vertices[static_cast<std::size_t>(begin + i)],
                           scratch[static_cast<std::size_t>(i)]);
    }
    rows.resize(static_cast<std::size_t>(end));
    for (std::int64_t i = 0; i < count; ++i) {
      auto& row = rows[static_cast<std::size_t>(begin + i)];
      for (const LaaksoVertex& w : scratch[static_cast<std::size_t>(i)]) {
        std::int32_t id = index.find(w);
        if (id < 0) {
          if (static_cast<std::int64_t>(g.vertices.size()) >= opts.vertex_cap) {
            throw CapExceededError("ball around " + center.serialize() + " exceeds " +
                                       std::to_string(opts.vertex_cap) + " vertices at radius " +
                                       std::to_string(d + 1),
                                   d, static_cast<std::int64_t>(g.vertices.size()));
          }
          id = static_cast<std::int32_t>(g.vertices.size());
          g.vertices.push_back(w);
          g.dist.push_back(d + 1);
          index.insert(id);
        }
        row.push_back(id);
      }
    }
    g.sphere_start.push_back(static_cast<std::int64_t>(g.vertices.size()));
  }

  const std::size_t n = g.vertices.size();
  g.degree.resize(n);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::size_t i = 0; i < n; ++i) g.degree[i] = graph.degree(g.vertices[i]);

  // Rows for the outer sphere come from reversing interior edges; the graph
  // is bipartite, so no edge joins two vertices at the same distance.
  const std::size_t interior = rows.size();
  std::vector<std::int64_t> counts(n, 0);
  for (std::size_t i = 0; i < interior; ++i) {
    counts[i] += static_cast<std::int64_t>(rows[i].size());
    for (std::int32_t j : rows[i]) {
      if (static_cast<std::size_t>(j) >= interior) ++counts[static_cast<std::size_t>(j)];
    }
  }
  g.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] = g.offsets[i] + counts[i];
  g.adj.resize(static_cast<std::size_t>(g.offsets[n]));
  std::vector<std::int64_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (std::size_t i = 0; i < interior; ++i) {
    for (std::int32_t j : rows[i]) {
      g.adj[static_cast<std::size_t>(fill[i]++)] = j;
      if (static_cast<std::size_t>(j) >= interior) {
        g.adj[static_cast<std::size_t>(fill[static_cast<std::size_t>(j)]++)] = static_cast<std::int32_t>(i);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adj.begin() + g.offsets[i], g.adj.begin() + g.offsets[i + 1]);
  }
  return g;
}

BallSummary ball_summary(const LaaksoGraph& graph, const LaaksoVertex& center, int radius,
                         const BallOptions& opts) {
  const BallGraph g = bfs_ball(graph, center, radius, opts);
  BallSummary s;
  s.center = center;
  s.radius = radius;
  s.vertex_count = g.prefix(radius);
  s.degree_sum = g.degree_sum_below(radius);
  s.boundary_size = g.size() - s.vertex_count;
  return s;
}

std::int64_t ball_volume(const LaaksoGraph& graph, const LaaksoVertex& center, int r,
                         const BallOptions& opts) {
  if (r <= 0) return 0;
  const BallGraph g = bfs_ball(graph, center, r - 1, opts);
  return g.degree_sum_below(r);
}

BallGraph induced_ball_graph(const LaaksoGraph& graph, int n, const BallOptions& opts) {
  if (n < 0 || n > 30) throw Error(ErrorCode::kInvalidConfig, "level must be in [0, 30]");
  return bfs_ball(graph, LaaksoGraph::base(), 1 << n, opts);
}

}  // namespace laakso
