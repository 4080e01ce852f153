#include "netboost/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include "netboost/error.hpp"

namespace netboost {

std::string_view to_string(DistanceTransform transform) {
  return transform == DistanceTransform::Reciprocal ? "reciprocal" : "identity";
}

DistanceTransform parse_transform(std::string_view text) {
  if (text == "reciprocal") return DistanceTransform::Reciprocal;
  if (text == "identity") return DistanceTransform::Identity;
  throw Error(ErrorCode::InvalidConfig, "unknown transform '" + std::string(text) + "'");
}

Network Network::build(std::vector<std::string> labels, std::vector<Edge> edges) {
  Network net;
  const auto n = labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& label = labels[i];
    if (label.find_first_of("\"\r\n") != std::string::npos) {
      throw Error(ErrorCode::InvalidLabel, "label of node " + std::to_string(i + 1) +
                                               " contains a quote or line break");
    }
    if (!net.by_label_.emplace(label, static_cast<NodeId>(i + 1)).second) {
      throw Error(ErrorCode::DuplicateLabel, "label '" + label + "' is used twice");
    }
  }

  for (auto& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw Error(ErrorCode::OutOfRangeNodeId, "edge " + std::to_string(e.u) + " " +
                                                   std::to_string(e.v) + " references a missing node");
    }
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop on node " + std::to_string(e.u));
    if (e.weight == 0) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " has weight 0");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  auto dup = std::adjacent_find(edges.begin(), edges.end(),
                                [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; });
  if (dup != edges.end()) {
    throw Error(ErrorCode::DuplicateEdge,
                "pair " + std::to_string(dup->u) + " " + std::to_string(dup->v) + " listed twice");
  }

  net.labels_ = std::move(labels);
  net.edges_ = std::move(edges);

  std::vector<std::size_t> degree(n + 1, 0);
  for (const auto& e : net.edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  net.offsets_.assign(n + 2, 0);
  for (std::size_t i = 1; i <= n; ++i) net.offsets_[i + 1] = net.offsets_[i] + degree[i];
  net.arcs_.resize(net.edges_.size() * 2);
  std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
  // Edges are sorted by (u, v): for node x every (w, x) with w < x is visited before any (x, w),
  // so each adjacency list comes out in ascending neighbor order.
  for (const auto& e : net.edges_) {
    net.arcs_[cursor[e.u]++] = Arc{e.v, e.weight};
    net.arcs_[cursor[e.v]++] = Arc{e.u, e.weight};
  }
  return net;
}

const std::string& Network::label(NodeId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id));
  return labels_[id - 1];
}

std::optional<NodeId> Network::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::span<const Arc> Network::neighbors(NodeId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id));
  return std::span<const Arc>(arcs_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::optional<Weight> Network::weight(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b) || a == b) return std::nullopt;
  auto arcs = neighbors(a);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), b,
                             [](const Arc& arc, NodeId id) { return arc.to < id; });
  if (it == arcs.end() || it->to != b) return std::nullopt;
  return it->weight;
}

std::optional<NodeId> resolve_node(const Network& net, std::string_view ref) {
  if (auto id = net.find(ref)) return id;
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), value);
  if (ec == std::errc() && ptr == ref.data() + ref.size() && net.contains(value)) return value;
  return std::nullopt;
}

namespace {

std::vector<std::string> copy_labels(const Network& net) {
  return {net.labels().begin(), net.labels().end()};
}

}  // namespace

Network apply_edits(const Network& net, NodeId target, std::span<const EdgeEdit> edits) {
  if (!net.contains(target)) {
    throw Error(ErrorCode::UnknownNode, "target " + std::to_string(target));
  }
  if (edits.empty()) return net;

  std::map<NodeId, Weight> increments;
  for (const auto& edit : edits) {
    if (edit.u == target) throw Error(ErrorCode::EditTargetsSelf, "edit on the target itself");
    if (!net.contains(edit.u)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(edit.u));
    if (edit.increment == 0) {
      throw Error(ErrorCode::InvalidConfig, "edit increments must be positive");
    }
    if (!increments.emplace(edit.u, edit.increment).second) {
      throw Error(ErrorCode::DuplicateEdit, "node " + std::to_string(edit.u) + " edited twice");
    }
  }

  std::vector<Edge> edges(net.edges().begin(), net.edges().end());
  for (auto& e : edges) {
    NodeId other = e.u == target ? e.v : (e.v == target ? e.u : 0);
    if (other == 0) continue;
    if (auto it = increments.find(other); it != increments.end()) {
      e.weight += it->second;
      increments.erase(it);
    }
  }
  for (const auto& [u, inc] : increments) edges.push_back(Edge{target, u, inc});
  return Network::build(copy_labels(net), std::move(edges));
}

Network with_edge_weight(const Network& net, NodeId a, NodeId b, Weight weight) {
  if (!net.contains(a)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(a));
  if (!net.contains(b)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(b));
  if (a == b) throw Error(ErrorCode::SameNode, "both endpoints are node " + std::to_string(a));
  const auto lo = std::min(a, b);
  const auto hi = std::max(a, b);

  std::vector<Edge> edges;
  edges.reserve(net.edge_count() + 1);
  bool found = false;
  for (const auto& e : net.edges()) {
    if (e.u == lo && e.v == hi) {
      found = true;
      if (weight > 0) edges.push_back(Edge{lo, hi, weight});
    } else {
      edges.push_back(e);
    }
  }
  if (!found && weight > 0) edges.push_back(Edge{lo, hi, weight});
  return Network::build(copy_labels(net), std::move(edges));
}

Weight weighted_degree(const Network& net, NodeId node) {
  Weight total = 0;
  for (const auto& arc : net.neighbors(node)) total += arc.weight;
  return total;
}

Weight degree_percentile_threshold(const Network& net, double q) {
  const auto n = net.node_count();
  if (n == 0) throw Error(ErrorCode::EmptyNetwork, "percentile of an empty network");
  if (!(q >= 0.0 && q <= 100.0)) {
    throw Error(ErrorCode::InvalidConfig, "percentile must lie in [0, 100]");
  }
  std::vector<Weight> degrees;
  degrees.reserve(n);
  for (NodeId id = 1; id <= n; ++id) degrees.push_back(weighted_degree(net, id));
  std::sort(degrees.begin(), degrees.end());
  // Nearest rank: smallest value whose cumulative rank reaches q% of n.
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) / 100.0 - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return degrees[rank - 1];
}

}  // namespace netboost
