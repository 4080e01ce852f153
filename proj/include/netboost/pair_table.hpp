#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netboost/betweenness.hpp"
#include "netboost/network.hpp"

namespace netboost {

/// All-pairs shortest distances and path counts of one network, plus its
/// betweenness, built by one Brandes sweep.
///
/// With the table, the betweenness of any node x after shortening the edge
/// {v, u} (v the target) to length l is obtained without new searches. Let
///   U = { s : d(s,u) + l <= d(s,v) },  W = { t : d(t,v) + l <= d(t,u) }.
/// A pair's distance or count, or its share through x, can only change when
/// some new shortest path uses the edge, which forces s in U and t in W (or
/// the reverse). So b'(x) = b(x) + sum over s in U, t in W of the change in
/// sigma_st(x) / sigma_st, and every updated quantity follows from table rows:
/// paths through the edge are counted as sigma(s,u) * sigma(v,t), and paths
/// that used the old copy of the edge are subtracted from sigma(s,t).
///
/// Memory is 16 n^2 bytes.
class PairTable {
 public:
  PairTable(Network net, DistanceTransform transform, unsigned threads = 1);

  static std::size_t memory_bytes(std::size_t nodes) { return nodes * nodes * 2 * sizeof(double); }

  const Network& network() const { return net_; }
  DistanceTransform transform() const { return transform_; }
  const BetweennessScores& scores() const { return scores_; }

  double distance(NodeId a, NodeId b) const { return dist_[index(a, b)]; }
  double path_count(NodeId a, NodeId b) const { return sigma_[index(a, b)]; }

  /// True when the edit strictly shortens the edge {target, edit.u}, the case
  /// scores_after_edit handles. Weight increases always qualify under the
  /// reciprocal transform; under identity only new edges do.
  bool supports(NodeId target, EdgeEdit edit) const;

  /// Betweenness of `nodes` (in the given order) on
  /// apply_edits(network(), target, {edit}). Requires supports(target, edit).
  std::vector<double> scores_after_edit(NodeId target, EdgeEdit edit,
                                        std::span<const NodeId> nodes) const;

 private:
  std::size_t index(NodeId a, NodeId b) const { return (a - 1) * n_ + (b - 1); }

  Network net_;
  DistanceTransform transform_;
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<double> sigma_;
  BetweennessScores scores_;
};

}  // namespace netboost
