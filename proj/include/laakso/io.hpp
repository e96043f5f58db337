#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "laakso/ball.hpp"
#include "laakso/params.hpp"
#include "laakso/profiles.hpp"
#include "laakso/tree.hpp"
#include "laakso/verify.hpp"

namespace laakso::io {

using json = nlohmann::json;

/// Shortest-free formatting: every float with 17 significant digits.
std::string format_double(double v);

/// Serializes with sorted keys and format_double for floats. Non-finite
/// floats become null.
std::string dump_json(const json& j, int indent = 2);

json to_json(const DoublingProfile& p);
DoublingProfile profile_from_json(const json& j);

json to_json(const ParamFunction& f);
/// Missing below/above default to 2 for b and 1 (below) / last value (above) for g.
ParamFunction param_from_json(const json& j, bool gluing);

json to_json(const AdmissibilityReport& r);
json to_json(const FitResult& r);
json to_json(const std::vector<Violation>& v);
json to_json(const ExponentFit& f);
json to_json(const EnvelopeReport& r);
json to_json(const MonteCarloCheck& c);
json to_json(const TransienceReport& t);

/// Sparse map {"1":2,"4":1}.
json label_to_json(const Label& l);
Label label_from_json(const json& j);

/// Edge CSV (u_id,v_id) and vertex CSV (id,label,root_distance,wormhole_level)
/// for an enumerated tree; ids are FNV-1a 64 of "x=<support>".
void write_tree_csv(const FiniteTree& t, const LabelTree& tree, std::ostream& edges,
                    std::ostream& vertices);

/// Edge CSV (u_id,v_id) and vertex CSV (id,u_support,x_support,root_distance,
/// degree) for a ball graph. Rows are ordered by canonical serialization;
/// root_distance is the graph distance from the center and degree is the
/// degree inside the ball.
void write_ball_csv(const BallGraph& g, std::ostream& edges, std::ostream& vertices);

/// FNV-1a 64 of text as 16 hex digits.
std::string hash_id(const std::string& text);

}  // namespace laakso::io
