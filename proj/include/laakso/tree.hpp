#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laakso/params.hpp"

namespace laakso {

inline constexpr int kMinIndex = -15;
inline constexpr int kMaxIndex = 32;
inline constexpr int kSlots = kMaxIndex - kMinIndex + 1;

/// Finitely supported digit sequence s: [kMinIndex, kMaxIndex] -> [0, 255].
struct Label {
  std::array<std::uint8_t, kSlots> d{};

  static Label from_support(const std::vector<std::pair<int, int>>& support);

  int get(int k) const noexcept {
    return (k < kMinIndex || k > kMaxIndex) ? 0 : d[static_cast<std::size_t>(k - kMinIndex)];
  }
  void set(int k, int v);

  bool is_zero() const noexcept;
  /// Lowest index with a nonzero digit.
  std::optional<int> lowest() const noexcept;
  /// Highest index with a nonzero digit.
  std::optional<int> highest() const noexcept;
  std::vector<std::pair<int, int>> support() const;

  /// "k:v;k:v" over the support in increasing index order; empty for zero.
  std::string serialize() const;
  static Label parse(const std::string& text);

  auto operator<=>(const Label&) const = default;
  bool operator==(const Label&) const = default;
};

struct LabelHash {
  std::size_t operator()(const Label& l) const noexcept;
};

/// Tree length units * 2^exponent.
struct DyadicLength {
  std::int64_t units = 0;
  int exponent = 0;
  double value() const;
  bool operator==(const DyadicLength&) const = default;
};

/// Label arithmetic for the tree T_{m,n} built from a branching function b.
///
/// Labels have s(m) in {0,1} and s(k) in [0, b(k)-1] for m < k <= n. Edges
/// flip the bottom digit s(m). Two labels are identified when they differ
/// only at a free index l, where s(l-1) = 1 and s(j) = 0 for j < l-1; the
/// canonical representative has s(l) = 0. The default top n = kMaxIndex
/// stands in for the infinite tree.
class LabelTree {
 public:
  explicit LabelTree(BranchingFunction b, int m = 0, int n = kMaxIndex);

  const BranchingFunction& b() const noexcept { return b_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }

  /// Throws InvalidLabel unless s is a label of this tree.
  void check_label(const Label& s) const;
  bool in_window(const Label& s) const noexcept;

  std::optional<int> free_index(const Label& s) const noexcept;
  /// Validates, then returns the class representative.
  Label canonicalize(const Label& s) const;
  Label canonical_unchecked(Label s) const noexcept;

  std::vector<Label> representatives(const Label& v) const;
  /// Sorted, deduplicated neighbors of a canonical vertex.
  std::vector<Label> neighbors(const Label& v) const;
  int degree(const Label& v) const noexcept;

  /// Exact tree distance in units of 2^m. Throws WindowMismatch for labels
  /// outside this tree's window.
  DyadicLength distance(const Label& u, const Label& v) const;
  /// Distance to the all-zero root, in units of 2^m.
  std::int64_t distance_to_root(const Label& v) const;

  /// n with s(n) = 1 and s(k) = 0 for k < n; none when the lowest nonzero
  /// digit differs from 1 or the label is zero.
  std::optional<int> wormhole_level(const Label& v) const noexcept;

  /// The label {k -> 1}, the far end of T_{m,k} from the root.
  static Label hub(int k);

 private:
  /// Distances to root and to hub(k) within T_{m,k}, in units of 2^m.
  struct RootHub {
    std::int64_t to_root;
    std::int64_t to_hub;
  };
  RootHub root_hub(const Label& s, int k) const noexcept;

  BranchingFunction b_;
  int m_;
  int n_;
};

struct FiniteTree {
  int m = 0;
  int n = 0;
  std::vector<Label> vertices;                // sorted canonical labels
  std::vector<std::pair<int, int>> edges;     // sorted index pairs, first < second
};

inline constexpr std::int64_t kDefaultEnumerationCap = 100000;

/// Explicit T_{m,n} from canonicalizing all labels. Throws TooLarge when the
/// label count exceeds cap.
FiniteTree enumerate_finite_tree(int m, int n, const BranchingFunction& b,
                                 std::int64_t cap = kDefaultEnumerationCap);

/// Number of raw labels in S(T_{m,n}).
std::int64_t label_count(int m, int n, const BranchingFunction& b);

}  // namespace laakso
