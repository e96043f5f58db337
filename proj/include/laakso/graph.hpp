#pragma once

#include <compare>
#include <string>
#include <vector>

#include "laakso/params.hpp"
#include "laakso/tree.hpp"

namespace laakso {

/// Vertex of the Laakso-type graph: ultrametric coordinate u (digits k >= 1,
/// u(k) < g(k)) and canonical tree vertex x, in quotient form.
struct LaaksoVertex {
  Label u;
  Label x;

  /// "u=<support>|x=<support>", the canonical serialization.
  std::string serialize() const;
  static LaaksoVertex parse(const std::string& text);

  auto operator<=>(const LaaksoVertex&) const = default;
  bool operator==(const LaaksoVertex&) const = default;
};

struct LaaksoVertexHash {
  std::size_t operator()(const LaaksoVertex& v) const noexcept;
};

/// Stable vertex id: FNV-1a 64 of the canonical serialization, 16 hex digits.
std::string vertex_id(const LaaksoVertex& v);

/// The graph G(g, b) in graph mode, as an implicit graph.
///
/// (u, x) and (u', x) are identified when x is a level-n wormhole and u, u'
/// differ only at n; the canonical form zeroes u(n). Every edge joins
/// canonical(u_j, y) to (u, x) for a lift u_j of u at the wormhole level of
/// x and a tree neighbor y of x.
class LaaksoGraph {
 public:
  LaaksoGraph(BranchingFunction b, GluingFunction g);

  const LabelTree& tree() const noexcept { return tree_; }
  const BranchingFunction& b() const noexcept { return tree_.b(); }
  const GluingFunction& g() const noexcept { return g_; }

  /// Validates ranges (InvalidRange) and returns the quotient representative.
  LaaksoVertex canonical_vertex(const Label& u, const Label& x) const;
  LaaksoVertex canonical_unchecked(Label u, const Label& x) const noexcept;
  /// Canonicalizes a vertex given in serialized form.
  LaaksoVertex vertex_from_string(const std::string& text) const;

  /// Sorted, deduplicated neighbors.
  std::vector<LaaksoVertex> neighbors(const LaaksoVertex& v) const;
  void neighbors_into(const LaaksoVertex& v, std::vector<LaaksoVertex>& out) const;
  /// g(n) * tree degree for a level-n wormhole x, tree degree otherwise.
  int degree(const LaaksoVertex& v) const noexcept;

  /// p = (0, root).
  static LaaksoVertex base() { return {}; }
  /// (0, {k -> 1}).
  static LaaksoVertex hub(int k) { return {Label{}, LabelTree::hub(k)}; }

  /// Resolves "root", "hub:k" or a serialized vertex.
  LaaksoVertex resolve_center(const std::string& text) const;

 private:
  LabelTree tree_;
  GluingFunction g_;
};

}  // namespace laakso
