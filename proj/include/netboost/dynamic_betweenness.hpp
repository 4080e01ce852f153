#pragma once

#include <memory>
#include <vector>

#include "netboost/betweenness.hpp"
#include "netboost/network.hpp"

namespace netboost {

namespace detail {
struct LengthGraph;
}

/// Betweenness of a network kept alongside the data needed to rescore it
/// after one edit of an edge incident to a target.
///
/// Only sources whose shortest-path DAG can change are re-run: those for
/// which the edited edge was tight before, or is tight or shortening after.
/// Their old dependencies are subtracted and new ones added. When at least
/// half of the sources are affected the edited graph is recomputed from
/// scratch instead.
class DynamicBetweenness {
 public:
  DynamicBetweenness(Network net, DistanceTransform transform, unsigned threads = 1);
  DynamicBetweenness(Network net, DistanceTransform transform, BetweennessScores base);
  ~DynamicBetweenness();
  DynamicBetweenness(DynamicBetweenness&&) noexcept;
  DynamicBetweenness& operator=(DynamicBetweenness&&) noexcept;

  const Network& network() const { return net_; }
  const BetweennessScores& base() const { return base_; }

  /// Scores for every node of apply_edits(network(), target, {edit}).
  BetweennessScores after_edit(NodeId target, EdgeEdit edit) const;

  /// Sources (1-based) whose dependencies are recomputed for this edit.
  std::vector<NodeId> affected_sources(NodeId target, EdgeEdit edit) const;

 private:
  Network net_;
  DistanceTransform transform_;
  BetweennessScores base_;
  std::unique_ptr<detail::LengthGraph> graph_;
};

/// Convenience form that also computes the unedited scores.
BetweennessScores recompute_after_edit(const Network& net, NodeId target, EdgeEdit edit,
                                       DistanceTransform transform);

}  // namespace netboost
