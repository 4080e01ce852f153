#include "netboost/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "netboost/error.hpp"

namespace netboost {

WhatIfReport what_if_edge(const Network& net, NodeId a, NodeId b, Weight new_weight,
                          DistanceTransform transform) {
  if (!net.contains(a)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(a));
  if (!net.contains(b)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(b));
  if (a == b) throw Error(ErrorCode::SameNode, "what-if needs two distinct nodes");

  WhatIfReport r;
  r.a = a;
  r.b = b;
  r.old_weight = net.weight(a, b).value_or(0);
  r.new_weight = new_weight;
  const auto before = betweenness_all(net, transform);
  r.b_a_before = before[a];
  r.b_b_before = before[b];
  if (new_weight == r.old_weight) {
    r.b_a_after = r.b_a_before;
    r.b_b_after = r.b_b_before;
    return r;
  }
  const auto after = betweenness_all(with_edge_weight(net, a, b, new_weight), transform);
  r.b_a_after = after[a];
  r.b_b_after = after[b];
  return r;
}

PathsReport paths_report(const Network& net, const Solution* solution, NodeId s, NodeId t,
                         DistanceTransform transform, std::size_t max_paths) {
  PathsReport r;
  r.before = shortest_paths_between(net, s, t, transform, max_paths);
  if (solution) {
    const auto edited = apply_edits(net, solution->target, solution->edits);
    r.after = shortest_paths_between(edited, s, t, transform, max_paths);
  }
  return r;
}

std::vector<Weight> parse_budget_range(std::string_view text) {
  auto number = [&](std::string_view part) {
    Weight v = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
      throw Error(ErrorCode::InvalidConfig, "bad budget range '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) {
    const auto b = number(parts[0]);
    if (b < 1) throw Error(ErrorCode::InvalidConfig, "budgets must be at least 1");
    return {b};
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::InvalidConfig, "budget range must be start:stop:step");
  }
  const auto lo = number(parts[0]);
  const auto hi = number(parts[1]);
  const auto step = number(parts[2]);
  if (lo < 1 || step < 1 || hi < lo) {
    throw Error(ErrorCode::InvalidConfig, "budget range needs 1 <= start <= stop and step >= 1");
  }
  std::vector<Weight> out;
  for (Weight b = lo; b <= hi; b += step) {
    out.push_back(b);
    if (hi - b < step) break;
  }
  return out;
}

std::map<std::string, std::size_t> count_touched_nodes(const Network& net,
                                                       std::span<const SweepRun> runs) {
  std::map<std::string, std::size_t> freq;
  for (const auto& run : runs) {
    if (!run.solution) continue;
    std::set<NodeId> touched;
    for (const auto& e : run.solution->edits) touched.insert(e.u);
    for (auto u : touched) ++freq[net.label(u)];
  }
  return freq;
}

std::vector<std::pair<std::string, std::size_t>> ranked_frequency(const SweepReport& report) {
  std::vector<std::pair<std::string, std::size_t>> out(report.frequency.begin(), report.frequency.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

SweepReport run_budget_sweep(const Network& net, const SolverConfig& base_cfg,
                             std::span<const Weight> budgets, const SweepProgressSink& progress,
                             std::stop_token stop) {
  if (budgets.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs at least one budget");
  for (auto b : budgets) {
    if (b < 1) throw Error(ErrorCode::InvalidConfig, "budgets must be at least 1");
  }
  {
    auto first = base_cfg;
    first.budget = budgets.front();
    validate_config(net, first);
  }
  SweepReport report;
  report.budgets.assign(budgets.begin(), budgets.end());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (stop.stop_requested()) break;
    SweepRun run;
    run.budget = budgets[i];
    auto cfg = base_cfg;
    cfg.budget = budgets[i];
    ProgressSink inner;
    if (progress) {
      inner = [&, i](const ProgressEvent& ev) { progress(SweepProgress{i, budgets.size(), ev}); };
    }
    try {
      run.solution = solve_co_mbi(net, cfg, inner, stop);
    } catch (const Error& e) {
      run.error = std::pair{std::string(to_string(e.code())), std::string(e.what())};
    }
    report.runs.push_back(std::move(run));
  }
  report.frequency = count_touched_nodes(net, report.runs);
  return report;
}

}  // namespace netboost
