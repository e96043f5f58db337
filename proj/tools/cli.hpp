#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <laakso/io.hpp>
#include <laakso/params.hpp>
#include <laakso/profiles.hpp>
#include <laakso/verify.hpp>

namespace laakso::cli {

/// Exit codes outside the verify-all bitmask.
inline constexpr int kExitInadmissible = 2;
inline constexpr int kExitViolations = 3;
inline constexpr int kExitError = 70;

/// Parsed JSON run configuration. Exactly one of profiles or explicit
/// parameters is present.
struct RunConfig {
  std::optional<DoublingProfile> V;
  std::optional<DoublingProfile> psi;
  std::optional<BranchingFunction> b;
  std::optional<GluingFunction> g;
  int k_max = 20;
  int B_max = 8;
  int G_max = 8;
  double C0 = 2.0;
  VerifyPlan plan;
  int workers = 1;
  std::int64_t vertex_cap = kDefaultVertexCap;
  std::int64_t enumeration_cap = kDefaultEnumerationCap;

  bool has_profiles() const { return V.has_value(); }
};

RunConfig parse_config(const io::json& j);

/// Config with every default filled in; workers is omitted so reports do not
/// depend on it.
io::json resolved_config(const RunConfig& c);

/// (b, g) from explicit parameters, or fitted from the profiles.
std::pair<BranchingFunction, GluingFunction> resolve_params(const RunConfig& c);

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace laakso::cli
