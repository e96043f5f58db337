#include "laakso/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "laakso/error.hpp"

namespace laakso {

Label Label::from_support(const std::vector<std::pair<int, int>>& support) {
  Label l;
  for (const auto& [k, v] : support) l.set(k, v);
  return l;
}

void Label::set(int k, int v) {
  if (k < kMinIndex || k > kMaxIndex) {
    if (v == 0) return;
    throw Error(ErrorCode::kInvalidLabel, "digit index out of storable range: " + std::to_string(k));
  }
  if (v < 0 || v > 255) {
    throw Error(ErrorCode::kInvalidLabel, "digit value out of range: " + std::to_string(v));
  }
  d[static_cast<std::size_t>(k - kMinIndex)] = static_cast<std::uint8_t>(v);
}

bool Label::is_zero() const noexcept {
  return std::all_of(d.begin(), d.end(), [](std::uint8_t x) { return x == 0; });
}

std::optional<int> Label::lowest() const noexcept {
  for (int i = 0; i < kSlots; ++i) {
    if (d[static_cast<std::size_t>(i)] != 0) return i + kMinIndex;
  }
  return std::nullopt;
}

std::optional<int> Label::highest() const noexcept {
  for (int i = kSlots - 1; i >= 0; --i) {
    if (d[static_cast<std::size_t>(i)] != 0) return i + kMinIndex;
  }
  return std::nullopt;
}

std::vector<std::pair<int, int>> Label::support() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < kSlots; ++i) {
    if (d[static_cast<std::size_t>(i)] != 0) out.emplace_back(i + kMinIndex, d[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string Label::serialize() const {
  std::string out;
  for (const auto& [k, v] : support()) {
    if (!out.empty()) out += ';';
    out += std::to_string(k);
    out += ':';
    out += std::to_string(v);
  }
  return out;
}

Label Label::parse(const std::string& text) {
  Label l;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kInvalidLabel, "expected k:v in '" + item + "'");
    }
    try {
      l.set(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidLabel, "malformed digit '" + item + "'");
    }
  }
  return l;
}

std::size_t LabelHash::operator()(const Label& l) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t x : l.d) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

double DyadicLength::value() const { return std::ldexp(static_cast<double>(units), exponent); }

LabelTree::LabelTree(BranchingFunction b, int m, int n) : b_(std::move(b)), m_(m), n_(n) {
  if (m < kMinIndex || n > kMaxIndex || m > n) {
    throw Error(ErrorCode::kInvalidConfig, "tree window must satisfy " +
                                               std::to_string(kMinIndex) + " <= m <= n <= " +
                                               std::to_string(kMaxIndex));
  }
  if (n - m > 46) throw Error(ErrorCode::kInvalidConfig, "tree window too tall for 64-bit lengths");
}

bool LabelTree::in_window(const Label& s) const noexcept {
  const auto lo = s.lowest();
  if (!lo) return true;
  return *lo >= m_ && *s.highest() <= n_;
}

void LabelTree::check_label(const Label& s) const {
  if (!in_window(s)) {
    throw Error(ErrorCode::kInvalidLabel, "label '" + s.serialize() + "' has digits outside [" +
                                              std::to_string(m_) + "," + std::to_string(n_) + "]");
  }
  if (s.get(m_) > 1) {
    throw Error(ErrorCode::kInvalidLabel, "bottom digit must be 0 or 1 in '" + s.serialize() + "'");
  }
  for (const auto& [k, v] : s.support()) {
    if (k > m_ && v >= b_(k)) {
      throw Error(ErrorCode::kInvalidLabel, "digit " + std::to_string(v) + " at index " +
                                                std::to_string(k) + " exceeds b(k)-1 = " +
                                                std::to_string(b_(k) - 1));
    }
  }
}

std::optional<int> LabelTree::free_index(const Label& s) const noexcept {
  const auto lo = s.lowest();
  if (!lo || s.get(*lo) != 1 || *lo + 1 > n_) return std::nullopt;
  return *lo + 1;
}

Label LabelTree::canonical_unchecked(Label s) const noexcept {
  if (const auto l = free_index(s)) s.d[static_cast<std::size_t>(*l - kMinIndex)] = 0;
  return s;
}

Label LabelTree::canonicalize(const Label& s) const {
  check_label(s);
  return canonical_unchecked(s);
}

std::vector<Label> LabelTree::representatives(const Label& v) const {
  const auto l = free_index(v);
  if (!l) return {v};
  std::vector<Label> out;
  for (int j = 0; j < b_(*l); ++j) {
    Label s = v;
    s.set(*l, j);
    out.push_back(s);
  }
  return out;
}

std::vector<Label> LabelTree::neighbors(const Label& v) const {
  std::vector<Label> out;
  for (Label s : representatives(v)) {
    s.set(m_, 1 - s.get(m_));
    out.push_back(canonical_unchecked(s));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int LabelTree::degree(const Label& v) const noexcept {
  const auto l = free_index(v);
  return l ? b_(*l) : 1;
}

LabelTree::RootHub LabelTree::root_hub(const Label& s, int k) const noexcept {
  const int bottom = s.get(m_);
  RootHub rh{bottom, 1 - bottom};
  for (int j = m_ + 1; j <= k; ++j) {
    const std::int64_t half = std::int64_t{1} << (j - 1 - m_);
    const int digit = s.get(j);
    const std::int64_t via_hub = rh.to_hub + half;
    const std::int64_t to_root = digit == 0 ? rh.to_root : via_hub;
    const std::int64_t to_hub = digit == 1 ? rh.to_root : via_hub;
    rh = {to_root, to_hub};
  }
  return rh;
}

DyadicLength LabelTree::distance(const Label& u, const Label& v) const {
  if (!in_window(u) || !in_window(v)) {
    throw Error(ErrorCode::kWindowMismatch, "labels '" + u.serialize() + "' and '" +
                                                v.serialize() + "' are not both in [" +
                                                std::to_string(m_) + "," + std::to_string(n_) + "]");
  }
  const Label a = canonical_unchecked(u), b = canonical_unchecked(v);
  int top = m_ - 1;
  for (int k = n_; k >= m_; --k) {
    if (a.get(k) != b.get(k)) {
      top = k;
      break;
    }
  }
  if (top < m_) return {0, m_};
  if (top == m_) return {1, m_};
  return {root_hub(a, top - 1).to_hub + root_hub(b, top - 1).to_hub, m_};
}

std::int64_t LabelTree::distance_to_root(const Label& v) const {
  const auto hi = v.highest();
  if (!hi) return 0;
  return root_hub(v, std::max(*hi, m_)).to_root;
}

std::optional<int> LabelTree::wormhole_level(const Label& v) const noexcept {
  const auto lo = v.lowest();
  if (!lo || v.get(*lo) != 1) return std::nullopt;
  return *lo;
}

Label LabelTree::hub(int k) {
  Label l;
  l.set(k, 1);
  return l;
}

std::int64_t label_count(int m, int n, const BranchingFunction& b) {
  std::int64_t count = 2;
  for (int k = m + 1; k <= n; ++k) {
    count *= b(k);
    if (count > (std::int64_t{1} << 40)) return count;
  }
  return count;
}

FiniteTree enumerate_finite_tree(int m, int n, const BranchingFunction& b, std::int64_t cap) {
  const LabelTree tree(b, m, n);
  const std::int64_t count = label_count(m, n, b);
  if (count > cap) {
    throw Error(ErrorCode::kTooLarge, "T_{" + std::to_string(m) + "," + std::to_string(n) +
                                          "} has " + std::to_string(count) +
                                          " labels, cap is " + std::to_string(cap));
  }
  std::vector<Label> raw;
  raw.reserve(static_cast<std::size_t>(count));
  Label s;
  while (true) {
    raw.push_back(s);
    int k = m;
    for (; k <= n; ++k) {
      const int radix = k == m ? 2 : b(k);
      const int next = s.get(k) + 1;
      if (next < radix) {
        s.set(k, next);
        break;
      }
      s.set(k, 0);
    }
    if (k > n) break;
  }

  std::map<Label, int> index;
  for (const Label& l : raw) index.emplace(tree.canonical_unchecked(l), 0);
  FiniteTree out;
  out.m = m;
  out.n = n;
  for (auto& [l, i] : index) {
    i = static_cast<int>(out.vertices.size());
    out.vertices.push_back(l);
  }
  for (const Label& l : raw) {
    if (l.get(m) != 0) continue;
    Label t = l;
    t.set(m, 1);
    int a = index.at(tree.canonical_unchecked(l));
    int c = index.at(tree.canonical_unchecked(t));
    if (a > c) std::swap(a, c);
    out.edges.emplace_back(a, c);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

}  // namespace laakso
