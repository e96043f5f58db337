#include "laakso/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "laakso/error.hpp"

namespace laakso::io {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

void dump_into(const json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        dump_into(v, indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

json to_json(const DoublingProfile& p) {
  if (p.kind() == DoublingProfile::Kind::kPower) return {{"kind", "power"}, {"exponent", p.exponent()}};
  return {{"kind", "table"}, {"k_lo", p.k_lo()}, {"k_hi", p.k_hi()}, {"values", p.values()}};
}

DoublingProfile profile_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return DoublingProfile::power(j.at("exponent").get<double>());
    if (kind == "table") {
      auto values = j.at("values").get<std::vector<double>>();
      const int k_lo = j.at("k_lo").get<int>();
      if (j.contains("k_hi") && j.at("k_hi").get<int>() != k_lo + static_cast<int>(values.size()) - 1) {
        throw Error(ErrorCode::kInvalidConfig, "table profile: k_hi - k_lo + 1 must equal the value count");
      }
      return DoublingProfile::table(k_lo, std::move(values));
    }
    throw Error(ErrorCode::kInvalidConfig, "unknown profile kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("profile: ") + e.what());
  }
}

json to_json(const ParamFunction& f) {
  return {{"k_lo", f.k_lo()},         {"k_hi", f.k_hi()},       {"values", f.values()},
          {"below", f.below()},       {"above", f.above()},     {"graph_mode", f.graph_mode()}};
}

ParamFunction param_from_json(const json& j, bool gluing) {
  try {
    auto values = j.at("values").get<std::vector<int>>();
    const int k_lo = j.at("k_lo").get<int>();
    if (j.contains("k_hi") && j.at("k_hi").get<int>() != k_lo + static_cast<int>(values.size()) - 1) {
      throw Error(ErrorCode::kInvalidConfig, "parameter function: k_hi - k_lo + 1 must equal the value count");
    }
    if (values.empty()) throw Error(ErrorCode::kInvalidConfig, "parameter function has no values");
    const int below = j.value("below", gluing ? 1 : 2);
    const int above = j.value("above", gluing ? values.back() : 2);
    return ParamFunction(k_lo, std::move(values), below, above, j.value("graph_mode", true));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("parameter function: ") + e.what());
  }
}

json to_json(const AdmissibilityReport& r) {
  json j{{"admissible", r.admissible}, {"best_constant", r.best_constant}};
  j["witness"] = r.witness ? json{{"r", r.witness->first}, {"R", r.witness->second}} : json(nullptr);
  return j;
}

json to_json(const FitResult& r) {
  return {{"b", to_json(r.b)},
          {"g", to_json(r.g)},
          {"psi_log_error", r.psi_log_error},
          {"vol_log_error", r.vol_log_error},
          {"psi_scale", r.psi_scale},
          {"vol_scale", r.vol_scale},
          {"psi_bound", r.psi_bound},
          {"vol_bound", r.vol_bound}};
}

json to_json(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) {
    arr.push_back({{"function", x.function}, {"kind", x.kind}, {"k", x.k}, {"value", x.value}});
  }
  return arr;
}

json to_json(const ExponentFit& f) {
  json pts = json::array();
  for (const auto& [x, y] : f.points) pts.push_back({x, y});
  return {{"quantity", f.quantity}, {"slope", f.slope}, {"intercept", f.intercept},
          {"stderr", f.stderr_},    {"points", pts}};
}

json to_json(const EnvelopeReport& r) {
  json grid = json::array();
  for (const auto& g : r.grid) {
    grid.push_back({{"center_id", g.center_id}, {"r", g.r}, {"ratio_lo", g.lo}, {"ratio_hi", g.hi}});
  }
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"quantity", r.quantity}, {"ratio_min", r.ratio_min}, {"ratio_max", r.ratio_max},
          {"spread", r.spread()},   {"threshold", r.threshold}, {"threshold_kind", "engineering"},
          {"calibrated", r.calibrated},
          {"gating", r.gating},     {"pass", r.pass},           {"params", params},
          {"grid", grid}};
}

json to_json(const MonteCarloCheck& c) {
  return {{"center_id", c.center_id}, {"radius", c.radius}, {"exact", c.exact},
          {"mean", c.mean},           {"half_width", c.half_width}, {"trials", c.trials},
          {"pass", c.pass}};
}

json to_json(const TransienceReport& t) {
  return {{"verdict", t.verdict == Transience::kTransient ? "transient" : "recurrent"},
          {"trend", t.trend},
          {"partial_integral", t.partial_integral}};
}

json label_to_json(const Label& l) {
  json j = json::object();
  for (const auto& [k, v] : l.support()) j[std::to_string(k)] = v;
  return j;
}

Label label_from_json(const json& j) {
  Label l;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) l.set(std::stoi(it.key()), it.value().get<int>());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kInvalidLabel, std::string("label: ") + e.what());
  }
  return l;
}

std::string hash_id(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

namespace {

void check_unique(const std::vector<std::string>& ids) {
  std::set<std::string> seen(ids.begin(), ids.end());
  if (seen.size() != ids.size()) throw Error(ErrorCode::kInvalidConfig, "vertex id collision in export");
}

}  // namespace

void write_tree_csv(const FiniteTree& t, const LabelTree& tree, std::ostream& edges,
                    std::ostream& vertices) {
  const std::size_t n = t.vertices.size();
  std::vector<std::string> key(n), ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    key[i] = "x=" + t.vertices[i].serialize();
    ids[i] = hash_id(key[i]);
  }
  check_unique(ids);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  vertices << "id,label,root_distance,wormhole_level\n";
  for (std::size_t i : order) {
    const auto level = tree.wormhole_level(t.vertices[i]);
    vertices << ids[i] << ',' << t.vertices[i].serialize() << ',' << tree.distance_to_root(t.vertices[i])
             << ',' << (level ? std::to_string(*level) : "") << '\n';
  }
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [a, b] : t.edges) {
    auto ka = key[static_cast<std::size_t>(a)], kb = key[static_cast<std::size_t>(b)];
    const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
    rows.emplace_back(ka < kb ? ids[ia] : ids[ib], ka < kb ? ids[ib] : ids[ia]);
  }
  std::sort(rows.begin(), rows.end());
  edges << "u_id,v_id\n";
  for (const auto& [a, b] : rows) edges << a << ',' << b << '\n';
}

void write_ball_csv(const BallGraph& g, std::ostream& edges, std::ostream& vertices) {
  const std::size_t n = static_cast<std::size_t>(g.size());
  std::vector<std::string> key(n), ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    key[i] = g.vertices[i].serialize();
    ids[i] = hash_id(key[i]);
  }
  check_unique(ids);
  std::vector<std::size_t> order(n), rank(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
  vertices << "id,u_support,x_support,root_distance,degree\n";
  for (std::size_t i : order) {
    vertices << ids[i] << ',' << g.vertices[i].u.serialize() << ',' << g.vertices[i].x.serialize() << ','
             << g.dist[i] << ',' << (g.offsets[i + 1] - g.offsets[i]) << '\n';
  }
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
      const std::size_t j = static_cast<std::size_t>(g.adj[static_cast<std::size_t>(e)]);
      if (rank[i] < rank[j]) rows.emplace_back(rank[i], rank[j]);
    }
  }
  std::sort(rows.begin(), rows.end());
  edges << "u_id,v_id\n";
  for (const auto& [a, b] : rows) edges << ids[order[a]] << ',' << ids[order[b]] << '\n';
}

}  // namespace laakso::io
