#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <laakso/ball.hpp>
#include <laakso/error.hpp>
#include <laakso/graph.hpp>

#include "oracles.hpp"

using namespace laakso;

namespace {

Label L(std::vector<std::pair<int, int>> s) { return Label::from_support(s); }

LaaksoGraph make(int b, int g) {
  return LaaksoGraph(BranchingFunction::constant_branching(b), GluingFunction::constant_gluing(g));
}

/// Implementation vertex of every oracle class; checks that canonicalization
/// is constant on classes and injective across them.
std::vector<LaaksoVertex> class_images(const oracle::Laakso& o, const LaaksoGraph& G) {
  std::vector<std::set<LaaksoVertex>> img(static_cast<std::size_t>(o.classes));
  for (std::size_t i = 0; i < o.raw.size(); ++i) {
    const auto& [u, x] = o.raw[i];
    img[o.cls[i]].insert(G.canonical_vertex(u, G.tree().canonicalize(x)));
  }
  std::vector<LaaksoVertex> out;
  std::set<LaaksoVertex> seen;
  for (const auto& s : img) {
    CHECK(s.size() == 1);
    out.push_back(*s.begin());
    seen.insert(*s.begin());
  }
  CHECK(seen.size() == out.size());
  return out;
}

/// Random vertices reached by random walks of random length from the base.
std::vector<LaaksoVertex> sample_vertices(const LaaksoGraph& G, int count, int max_len, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<LaaksoVertex> out;
  std::uniform_int_distribution<int> len(0, max_len);
  for (int i = 0; i < count; ++i) {
    LaaksoVertex v = LaaksoGraph::base();
    const int steps = len(rng);
    for (int s = 0; s < steps; ++s) {
      const auto nb = G.neighbors(v);
      v = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
    }
    out.push_back(v);
  }
  return out;
}

struct OracleCase {
  int n;
  BranchingFunction b;
  GluingFunction g;
  oracle::Levels levels;
};

std::vector<OracleCase> oracle_cases() {
  using BF = BranchingFunction;
  using GF = GluingFunction;
  return {
      {4, BF::constant_branching(2), GF::constant_gluing(2), oracle::Levels::kValuation},
      {4, BF::constant_branching(2), GF::constant_gluing(3), oracle::Levels::kValuation},
      {4, BF::constant_branching(2), GF(1, {2, 1, 3, 2}, 1, 2, true), oracle::Levels::kValuation},
      {4, BF::constant_branching(2), GF::constant_gluing(2), oracle::Levels::kLabels},
      {3, BF::constant_branching(3), GF::constant_gluing(2), oracle::Levels::kLabels},
      {3, BF(1, {4, 2, 3}, 2, 3, true), GF(1, {3, 2, 2}, 1, 2, true), oracle::Levels::kLabels},
  };
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("canonical_vertex examples") {
    const auto G4 = LaaksoGraph(BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(4));
    CHECK(G4.canonical_vertex(L({{1, 3}, {2, 2}}), Label{}) == LaaksoVertex{L({{1, 3}, {2, 2}}), Label{}});
    CHECK(G4.canonical_vertex(L({{1, 3}}), L({{1, 1}})) == LaaksoVertex{Label{}, L({{1, 1}})});
    CHECK(G4.tree().distance_to_root(L({{1, 1}})) == 2);
    Label five;
    for (const auto& x : enumerate_finite_tree(0, 3, BranchingFunction::constant_branching(2)).vertices) {
      if (G4.tree().distance_to_root(x) == 5) five = x;
    }
    CHECK(G4.tree().wormhole_level(five) == 0);
    CHECK(G4.canonical_vertex(L({{1, 2}}), five).u == L({{1, 2}}));
    CHECK_THROWS_AS(G4.canonical_vertex(L({{1, 4}}), Label{}), Error);
    CHECK_THROWS_AS(G4.canonical_vertex(L({{0, 1}}), Label{}), Error);
    // The oracle closure agrees on the second example.
    const auto o = oracle::laakso(2, BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(4));
    CHECK(o.cls[o.index.at({L({{1, 3}}), L({{1, 1}})})] == o.cls[o.index.at({Label{}, L({{1, 1}})})]);
  }

  TEST_CASE("neighbors examples") {
    const auto classic = make(2, 2);
    CHECK(classic.neighbors(LaaksoGraph::base()).size() == 1);
    CHECK(classic.degree(LaaksoGraph::hub(1)) == 4);
    CHECK(classic.neighbors(LaaksoGraph::hub(1)).size() == 4);
    const auto half = make(2, 1);
    for (const auto& v : sample_vertices(half, 200, 300, 1)) {
      CHECK(half.degree(v) == (v == LaaksoGraph::base() ? 1 : 2));
      CHECK(half.neighbors(v).size() == static_cast<std::size_t>(half.degree(v)));
    }
  }

  TEST_CASE("neighbors and canonical forms match the closure oracle") {
    for (const auto& c : oracle_cases()) {
      const LaaksoGraph G(c.b, c.g);
      const auto o = oracle::laakso(c.n, c.b, c.g, c.levels);
      const auto img = class_images(o, G);
      for (int k = 0; k < o.classes; ++k) {
        if (o.root_distance[k] >= (1 << c.n)) continue;
        std::set<LaaksoVertex> expect;
        for (int j : o.graph.adj[k]) expect.insert(img[j]);
        const auto got = G.neighbors(img[k]);
        CHECK(std::set<LaaksoVertex>(got.begin(), got.end()) == expect);
        CHECK(got.size() == expect.size());
        CHECK(G.degree(img[k]) == static_cast<int>(expect.size()));
      }
    }
  }

  TEST_CASE("bfs_ball matches explicit-adjacency BFS") {
    for (const auto& c : oracle_cases()) {
      const LaaksoGraph G(c.b, c.g);
      const auto o = oracle::laakso(c.n, c.b, c.g, c.levels);
      const auto img = class_images(o, G);
      const int R = 1 << c.n;
      const auto d = oracle::bfs(o.graph, o.base_class);
      const auto ball = bfs_ball(G, LaaksoGraph::base(), R);
      std::map<LaaksoVertex, int> expect;
      for (int k = 0; k < o.classes; ++k) {
        if (d[k] >= 0 && d[k] <= R) expect[img[k]] = d[k];
      }
      std::map<LaaksoVertex, int> got;
      for (std::int64_t i = 0; i < ball.size(); ++i) got[ball.vertices[i]] = ball.dist[i];
      CHECK(got == expect);
    }
  }

  TEST_CASE("bfs_ball examples") {
    const auto half = make(2, 1);
    const auto b0 = bfs_ball(half, LaaksoGraph::base(), 0);
    CHECK(b0.size() == 1);
    CHECK(b0.dist[0] == 0);
    const auto b3 = bfs_ball(half, LaaksoGraph::base(), 3);
    CHECK(b3.size() == 4);
    CHECK(b3.dist == std::vector<std::int32_t>{0, 1, 2, 3});

    // Classical Laakso, root, radius 4. The explicit enumeration gives 9.
    const auto classic = make(2, 2);
    const auto o = oracle::laakso(3, BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2));
    const auto d = oracle::bfs(o.graph, o.base_class);
    const auto expect = std::count_if(d.begin(), d.end(), [](int x) { return x >= 0 && x <= 4; });
    CHECK(bfs_ball(classic, LaaksoGraph::base(), 4).size() == expect);
    CHECK(expect == 9);
  }

  TEST_CASE("ball_volume examples") {
    const auto half = make(2, 1);
    CHECK(ball_volume(half, LaaksoGraph::base(), 4) == 7);
    for (int r = 1; r <= 64; r *= 2) CHECK(ball_volume(half, LaaksoGraph::base(), r) == 2 * r - 1);
    const auto classic = make(2, 2);
    for (const auto& v : sample_vertices(classic, 20, 50, 2)) {
      CHECK(ball_volume(classic, v, 1) == classic.degree(v));
    }
    // Frozen from the explicit enumeration oracle (T_{0,5}, 2^5 ultrametric digits).
    const auto o = oracle::laakso(5, BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2));
    const auto d = oracle::bfs(o.graph, o.base_class);
    std::map<int, std::int64_t> oracle_vol;
    for (int r : {4, 8, 16, 32}) {
      std::int64_t s = 0;
      for (int k = 0; k < o.classes; ++k) {
        if (d[k] >= 0 && d[k] < r) s += static_cast<std::int64_t>(o.graph.adj[k].size());
      }
      oracle_vol[r] = s;
      CHECK(ball_volume(classic, LaaksoGraph::base(), r) == s);
    }
    CHECK(oracle_vol[4] == 13);
    CHECK(oracle_vol[8] == 58);
    CHECK(oracle_vol[16] == 244);
    CHECK(oracle_vol[32] == 1000);
    for (int r : {4, 8, 16}) {
      const double ratio = static_cast<double>(oracle_vol[2 * r]) / static_cast<double>(oracle_vol[r]);
      CHECK(ratio > 3.5);
      CHECK(ratio < 5.0);
    }
  }

  TEST_CASE("induced_ball_graph examples") {
    const auto half = make(2, 1);
    const auto g0 = induced_ball_graph(half, 0);
    CHECK(g0.size() == 2);
    CHECK(g0.adj.size() == 2);
    const auto g2 = induced_ball_graph(half, 2);
    CHECK(g2.size() == 5);
    CHECK(g2.adj.size() == 8);
    const auto classic = make(2, 2);
    const auto g3 = induced_ball_graph(classic, 3);
    const auto o = oracle::laakso(4, BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2));
    const auto img = class_images(o, classic);
    const auto d = oracle::bfs(o.graph, o.base_class);
    std::set<std::pair<LaaksoVertex, LaaksoVertex>> expect, got;
    std::set<LaaksoVertex> vexpect, vgot;
    for (int k = 0; k < o.classes; ++k) {
      if (d[k] < 0 || d[k] > 8) continue;
      vexpect.insert(img[k]);
      for (int j : o.graph.adj[k]) {
        if (d[j] >= 0 && d[j] <= 8) expect.insert({img[k], img[j]});
      }
    }
    for (std::int64_t i = 0; i < g3.size(); ++i) {
      vgot.insert(g3.vertices[i]);
      for (std::int64_t e = g3.offsets[i]; e < g3.offsets[i + 1]; ++e) {
        got.insert({g3.vertices[i], g3.vertices[g3.adj[e]]});
      }
    }
    CHECK(vgot == vexpect);
    CHECK(got == expect);
  }

  TEST_CASE("neighbor symmetry, parity and degree formula on 10^4 sampled vertices") {
    const std::vector<std::pair<BranchingFunction, GluingFunction>> configs{
        {BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2)},
        {BranchingFunction::constant_branching(3), GluingFunction::constant_gluing(1)},
        {BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(4)},
        {BranchingFunction(1, {3, 2, 4, 2, 5}, 2, 2, true), GluingFunction(1, {2, 3, 1, 2, 2}, 1, 3, true)},
    };
    unsigned seed = 10;
    for (const auto& [b, g] : configs) {
      const LaaksoGraph G(b, g);
      for (const auto& v : sample_vertices(G, 10000, 400, seed++)) {
        const auto nb = G.neighbors(v);
        const auto level = G.tree().wormhole_level(v.x);
        const int tdeg = G.tree().degree(v.x);
        CHECK(G.degree(v) == (level ? g(*level) * tdeg : tdeg));
        CHECK(static_cast<int>(nb.size()) == G.degree(v));
        for (const auto& w : nb) {
          const auto back = G.neighbors(w);
          CHECK(std::binary_search(back.begin(), back.end(), v));
          CHECK(std::abs(G.tree().distance_to_root(v.x) - G.tree().distance_to_root(w.x)) == 1);
        }
      }
    }
  }

  TEST_CASE("projection contraction and coordinate locking on BFS balls") {
    const std::vector<std::pair<BranchingFunction, GluingFunction>> configs{
        {BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2)},
        {BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(3)},
        {BranchingFunction::constant_branching(3), GluingFunction::constant_gluing(2)},
    };
    unsigned seed = 40;
    for (const auto& [b, g] : configs) {
      const LaaksoGraph G(b, g);
      const LabelTree& T = G.tree();
      for (const auto& v : sample_vertices(G, 6, 200, seed++)) {
        const int R = 24;
        const auto ball = bfs_ball(G, v, R);
        // Highest wormhole level within tree distance d of the projection.
        std::vector<int> max_level(R + 1, -1);
        {
          std::map<Label, int> seen{{v.x, 0}};
          std::vector<Label> q{v.x};
          for (std::size_t i = 0; i < q.size(); ++i) {
            const int d = seen[q[i]];
            if (auto l = T.wormhole_level(q[i])) max_level[d] = std::max(max_level[d], *l);
            if (d == R) continue;
            for (const auto& y : T.neighbors(q[i])) {
              if (seen.emplace(y, d + 1).second) q.push_back(y);
            }
          }
          for (int d = 1; d <= R; ++d) max_level[d] = std::max(max_level[d], max_level[d - 1]);
        }
        for (std::int64_t i = 0; i < ball.size(); ++i) {
          const auto& w = ball.vertices[i];
          const int d = ball.dist[i];
          CHECK(T.distance(v.x, w.x).units <= d);
          for (int n = 1; n <= 12; ++n) {
            if (d >= (1 << n) || max_level[d] >= n) continue;
            for (int k = n; k <= 20; ++k) CHECK(v.u.get(k) == w.u.get(k));
          }
        }
      }
    }
  }

  TEST_CASE("serialization, ids and center resolution") {
    const auto G = make(3, 2);
    const LaaksoVertex v{L({{2, 1}}), L({{0, 1}, {2, 2}})};
    CHECK(v.serialize() == "u=2:1|x=0:1;2:2");
    CHECK(LaaksoVertex::parse(v.serialize()) == v);
    CHECK(vertex_id(v).size() == 16);
    CHECK(vertex_id(v) != vertex_id(LaaksoGraph::base()));
    CHECK(G.resolve_center("root") == LaaksoGraph::base());
    CHECK(G.resolve_center("hub:3") == LaaksoGraph::hub(3));
    CHECK(G.resolve_center("u=2:1|x=0:1;2:2") == v);
    CHECK_THROWS_AS(G.resolve_center("hub:x"), Error);
  }

  TEST_CASE("cap exceeded carries diagnostics") {
    const auto classic = make(2, 2);
    BallOptions opts;
    opts.vertex_cap = 500;
    try {
      bfs_ball(classic, LaaksoGraph::base(), 200, opts);
      FAIL("expected CapExceeded");
    } catch (const CapExceededError& e) {
      CHECK(e.code() == ErrorCode::kCapExceeded);
      CHECK(e.reached_radius() > 0);
      CHECK(e.vertices() > 0);
    }
  }
}
