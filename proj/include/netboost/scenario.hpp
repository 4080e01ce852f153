#pragma once

#include <map>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "netboost/betweenness.hpp"
#include "netboost/network.hpp"
#include "netboost/solver.hpp"

namespace netboost {

struct WhatIfReport {
  NodeId a = 0;
  NodeId b = 0;
  Weight old_weight = 0;  // 0 when there was no edge
  Weight new_weight = 0;  // 0 removes the edge
  double b_a_before = 0.0;
  double b_a_after = 0.0;
  double b_b_before = 0.0;
  double b_b_after = 0.0;
};

/// Betweenness of a and b before and after setting the weight of {a, b}.
WhatIfReport what_if_edge(const Network& net, NodeId a, NodeId b, Weight new_weight,
                          DistanceTransform transform);

struct PathsReport {
  PathSet before;
  std::optional<PathSet> after;
};

/// Shortest s-t paths on the network, and on the solution's edited network when given.
PathsReport paths_report(const Network& net, const Solution* solution, NodeId s, NodeId t,
                         DistanceTransform transform, std::size_t max_paths);

struct SweepRun {
  Weight budget = 0;
  std::optional<Solution> solution;
  std::optional<std::pair<std::string, std::string>> error;  // code, message
};

struct SweepReport {
  std::vector<Weight> budgets;
  std::vector<SweepRun> runs;
  /// Label -> number of runs whose edits touch that node.
  std::map<std::string, std::size_t> frequency;
};

/// Parses "start:stop:step" (inclusive) or a single budget.
std::vector<Weight> parse_budget_range(std::string_view text);

/// Frequency table recomputed from the stored runs.
std::map<std::string, std::size_t> count_touched_nodes(const Network& net, std::span<const SweepRun> runs);

/// (label, count) sorted by count descending, then label.
std::vector<std::pair<std::string, std::size_t>> ranked_frequency(const SweepReport& report);

struct SweepProgress {
  std::size_t run = 0;  // 0-based index of the budget being solved
  std::size_t runs = 0;
  ProgressEvent inner;
};
using SweepProgressSink = std::function<void(const SweepProgress&)>;

/// One independent solve per budget. A failing run is recorded and the sweep
/// continues. Throws Error(InvalidConfig) for an empty list, a zero budget or
/// a configuration that no budget could make valid.
SweepReport run_budget_sweep(const Network& net, const SolverConfig& base_cfg,
                             std::span<const Weight> budgets, const SweepProgressSink& progress = {},
                             std::stop_token stop = {});

}  // namespace netboost
