#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace netboost {

/// Node identifiers are 1-based and contiguous, as in NET files.
using NodeId = std::uint32_t;
/// Co-occurrence counts. Stored weights are always >= 1.
using Weight = std::uint64_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Weight weight = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  NodeId to = 0;
  Weight weight = 0;
};

/// How a co-occurrence weight becomes a shortest-path length.
///
/// Reciprocal treats the weight as tie strength (length 1/w), so that
/// strengthening an edge shortens it. Identity reads weights as lengths.
enum class DistanceTransform { Reciprocal, Identity };

std::string_view to_string(DistanceTransform transform);
DistanceTransform parse_transform(std::string_view text);

inline double edge_length(Weight weight, DistanceTransform transform) {
  return transform == DistanceTransform::Reciprocal ? 1.0 / static_cast<double>(weight)
                                                    : static_cast<double>(weight);
}

/// Increase of the weight of the edge {target, u}; creates the edge when absent.
struct EdgeEdit {
  NodeId u = 0;
  Weight increment = 0;

  friend bool operator==(const EdgeEdit&, const EdgeEdit&) = default;
};

/// Immutable weighted undirected graph with labeled nodes.
///
/// Edges are stored once with u < v, sorted by (u, v). An adjacency index
/// sorted by neighbor id is built alongside for traversal.
class Network {
 public:
  Network() = default;

  /// Validates and canonicalizes. Throws Error on self-loops, duplicate
  /// pairs, non-positive weights, out-of-range ids and duplicate labels.
  static Network build(std::vector<std::string> labels, std::vector<Edge> edges);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(NodeId id) const { return id >= 1 && id <= labels_.size(); }

  const std::string& label(NodeId id) const;
  std::span<const std::string> labels() const { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Arc> neighbors(NodeId id) const;
  bool adjacent(NodeId a, NodeId b) const { return weight(a, b).has_value(); }
  std::optional<Weight> weight(NodeId a, NodeId b) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::string, NodeId> by_label_;
};

/// Resolves "12" or "label" to a node id. Labels win over numeric text.
std::optional<NodeId> resolve_node(const Network& net, std::string_view ref);

/// The network with every edit applied to edges incident to target.
Network apply_edits(const Network& net, NodeId target, std::span<const EdgeEdit> edits);

/// The network with edge {a, b} set to weight; weight 0 removes it.
Network with_edge_weight(const Network& net, NodeId a, NodeId b, Weight weight);

Weight weighted_degree(const Network& net, NodeId node);

/// Nearest-rank percentile of the weighted degree multiset; q in [0, 100].
Weight degree_percentile_threshold(const Network& net, double q);

}  // namespace netboost
