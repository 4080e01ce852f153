#include "netboost/dynamic_betweenness.hpp"

#include <limits>

#include "length_graph.hpp"
#include "netboost/error.hpp"

namespace netboost {
namespace {

bool at_most(double a, double b) { return a < b || lengths_equal(a, b); }

}  // namespace

DynamicBetweenness::DynamicBetweenness(Network net, DistanceTransform transform, unsigned threads)
    : net_(std::move(net)),
      transform_(transform),
      graph_(std::make_unique<detail::LengthGraph>(detail::LengthGraph::from(net_, transform))) {
  base_ = BetweennessScores(detail::accumulate_betweenness(*graph_, threads));
}

DynamicBetweenness::DynamicBetweenness(Network net, DistanceTransform transform,
                                       BetweennessScores base)
    : net_(std::move(net)),
      transform_(transform),
      base_(std::move(base)),
      graph_(std::make_unique<detail::LengthGraph>(detail::LengthGraph::from(net_, transform))) {
  if (base_.size() != net_.node_count()) {
    throw Error(ErrorCode::Internal, "base scores do not match the network");
  }
}

DynamicBetweenness::~DynamicBetweenness() = default;
DynamicBetweenness::DynamicBetweenness(DynamicBetweenness&&) noexcept = default;
DynamicBetweenness& DynamicBetweenness::operator=(DynamicBetweenness&&) noexcept = default;

std::vector<NodeId> DynamicBetweenness::affected_sources(NodeId target, EdgeEdit edit) const {
  if (!net_.contains(target)) throw Error(ErrorCode::UnknownNode, "target " + std::to_string(target));
  if (edit.u == target) throw Error(ErrorCode::EditTargetsSelf, "edit on the target itself");
  if (!net_.contains(edit.u)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(edit.u));
  if (edit.increment == 0) throw Error(ErrorCode::InvalidConfig, "edit increments must be positive");

  const auto old_weight = net_.weight(target, edit.u);
  const double old_len = old_weight ? edge_length(*old_weight, transform_)
                                    : std::numeric_limits<double>::infinity();
  const double new_len = edge_length(old_weight.value_or(0) + edit.increment, transform_);

  detail::SourceSearch from_u(graph_->n);
  detail::SourceSearch from_v(graph_->n);
  from_u.run(*graph_, edit.u - 1);
  from_v.run(*graph_, target - 1);
  const auto du = from_u.dist();
  const auto dv = from_v.dist();

  std::vector<NodeId> affected;
  for (std::uint32_t s = 0; s < graph_->n; ++s) {
    const bool was_tight = old_weight && (lengths_equal(du[s] + old_len, dv[s]) ||
                                          lengths_equal(dv[s] + old_len, du[s]));
    const bool now_useful = at_most(du[s] + new_len, dv[s]) || at_most(dv[s] + new_len, du[s]);
    if (was_tight || now_useful) affected.push_back(s + 1);
  }
  return affected;
}

BetweennessScores DynamicBetweenness::after_edit(NodeId target, EdgeEdit edit) const {
  const EdgeEdit edits[] = {edit};
  const auto edited = apply_edits(net_, target, edits);
  const auto affected = affected_sources(target, edit);
  if (affected.empty()) return base_;

  const auto new_graph = detail::LengthGraph::from(edited, transform_);
  if (2 * affected.size() >= net_.node_count()) {
    return BetweennessScores(detail::accumulate_betweenness(new_graph, 1));
  }

  std::vector<std::uint32_t> sources;
  sources.reserve(affected.size());
  for (auto s : affected) sources.push_back(s - 1);
  const auto before = detail::dependency_sum(*graph_, sources);
  const auto after = detail::dependency_sum(new_graph, sources);

  std::vector<double> values(base_.values().begin(), base_.values().end());
  for (std::size_t x = 0; x < values.size(); ++x) {
    values[x] += 0.5 * (after[x] - before[x]);
    // Cancellation can leave a tiny negative residue on zero scores.
    if (values[x] < 0.0) values[x] = 0.0;
  }
  return BetweennessScores(std::move(values));
}

BetweennessScores recompute_after_edit(const Network& net, NodeId target, EdgeEdit edit,
                                       DistanceTransform transform) {
  DynamicBetweenness dynamic(net, transform);
  return dynamic.after_edit(target, edit);
}

}  // namespace netboost
