#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "netboost/betweenness.hpp"
#include "netboost/error.hpp"
#include "netboost/network.hpp"
#include "netboost/scenario.hpp"
#include "netboost/solver.hpp"

namespace netboost {

using Json = nlohmann::json;

/// Pair-counting convention attached to every score payload.
inline constexpr const char* kPairConvention = "unordered";

Json error_json(ErrorCode code, const std::string& message);

/// Node ids or labels. Throws Error(UnknownNode) (or `missing` when given).
NodeId node_from_json(const Network& net, const Json& ref, ErrorCode missing = ErrorCode::UnknownNode);

/// Nodes, edges and weighted degrees; betweenness attached when given.
Json graph_json(const Network& net, const BetweennessScores* scores = nullptr);

/// Solver parameters from a request body. Field names follow SolverConfig;
/// nodes may be ids or labels. Throws Error(BadRequest | InvalidConfig | UnknownTarget | UnknownNode).
SolverConfig config_from_json(const Network& net, const Json& body);
Json config_to_json(const Network& net, const SolverConfig& cfg);

Json solution_to_json(const Network& net, const Solution& solution);
/// Reads what solution_to_json writes; labels and derived fields are ignored.
Solution solution_from_json(const Json& doc);

Json path_set_to_json(const Network& net, const PathSet& paths);
Json paths_report_to_json(const Network& net, const PathsReport& report);
Json what_if_to_json(const Network& net, const WhatIfReport& report);
Json sweep_to_json(const Network& net, const SweepReport& report);

}  // namespace netboost
