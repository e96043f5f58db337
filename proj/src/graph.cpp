#include "laakso/graph.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "laakso/error.hpp"

namespace laakso {

std::string LaaksoVertex::serialize() const { return "u=" + u.serialize() + "|x=" + x.serialize(); }

LaaksoVertex LaaksoVertex::parse(const std::string& text) {
  const auto bar = text.find('|');
  if (text.rfind("u=", 0) != 0 || bar == std::string::npos || text.compare(bar + 1, 2, "x=") != 0) {
    throw Error(ErrorCode::kInvalidRange, "expected 'u=...|x=...', got '" + text + "'");
  }
  return {Label::parse(text.substr(2, bar - 2)), Label::parse(text.substr(bar + 3))};
}

std::size_t LaaksoVertexHash::operator()(const LaaksoVertex& v) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t c : v.u.d) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  for (std::uint8_t c : v.x.d) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::string vertex_id(const LaaksoVertex& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : v.serialize()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

LaaksoGraph::LaaksoGraph(BranchingFunction b, GluingFunction g)
    : tree_(std::move(b), 0, kMaxIndex), g_(std::move(g)) {
  for (const auto& v : validate(tree_.b(), g_, true)) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("{} violates {} at k={} (value {})", v.function, v.kind, v.k, v.value));
  }
}

LaaksoVertex LaaksoGraph::canonical_unchecked(Label u, const Label& x) const noexcept {
  if (const auto n = tree_.wormhole_level(x)) {
    if (*n >= kMinIndex && *n <= kMaxIndex) u.d[static_cast<std::size_t>(*n - kMinIndex)] = 0;
  }
  return {u, x};
}

LaaksoVertex LaaksoGraph::canonical_vertex(const Label& u, const Label& x) const {
  Label cx;
  try {
    cx = tree_.canonicalize(x);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidRange, e.what());
  }
  for (const auto& [k, v] : u.support()) {
    if (k < 1 || v >= g_(k)) {
      throw Error(ErrorCode::kInvalidRange,
                  fmt::format("u({}) = {} outside [0, g({})-1] with g({}) = {}", k, v, k, k,
                              k < 1 ? 1 : g_(k)));
    }
  }
  return canonical_unchecked(u, cx);
}

LaaksoVertex LaaksoGraph::vertex_from_string(const std::string& text) const {
  const LaaksoVertex raw = LaaksoVertex::parse(text);
  return canonical_vertex(raw.u, raw.x);
}

void LaaksoGraph::neighbors_into(const LaaksoVertex& v, std::vector<LaaksoVertex>& out) const {
  out.clear();
  const std::vector<Label> ys = tree_.neighbors(v.x);
  const auto level = tree_.wormhole_level(v.x);
  const int lifts = level && *level >= 1 ? g_(*level) : 1;
  Label u = v.u;
  for (int j = 0; j < lifts; ++j) {
    if (lifts > 1) u.set(*level, j);
    for (const Label& y : ys) out.push_back(canonical_unchecked(u, y));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<LaaksoVertex> LaaksoGraph::neighbors(const LaaksoVertex& v) const {
  std::vector<LaaksoVertex> out;
  neighbors_into(v, out);
  return out;
}

int LaaksoGraph::degree(const LaaksoVertex& v) const noexcept {
  const int dt = tree_.degree(v.x);
  const auto level = tree_.wormhole_level(v.x);
  return level && *level >= 1 ? g_(*level) * dt : dt;
}

LaaksoVertex LaaksoGraph::resolve_center(const std::string& text) const {
  if (text == "root" || text == "base") return base();
  if (text.rfind("hub:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(text.substr(4));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidConfig, "bad hub level in '" + text + "'");
    }
    if (k < 0 || k > kMaxIndex) throw Error(ErrorCode::kInvalidConfig, "hub level out of range");
    return canonical_vertex(Label{}, LabelTree::hub(k));
  }
  return vertex_from_string(text);
}

}  // namespace laakso
