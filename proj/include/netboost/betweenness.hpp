#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netboost/network.hpp"

namespace netboost {

/// Relative tolerance under which two path lengths count as equal.
inline constexpr double kLengthTieTolerance = 1e-12;

/// Unreachable (infinite) lengths never compare equal.
inline bool lengths_equal(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= kLengthTieTolerance * std::max(1.0, std::abs(a));
}

/// Per-node weighted betweenness, summed over unordered pairs and not normalized.
class BetweennessScores {
 public:
  BetweennessScores() = default;
  explicit BetweennessScores(std::vector<double> values) : values_(std::move(values)) {}

  double operator[](NodeId id) const { return values_[id - 1]; }
  double at(NodeId id) const { return values_.at(id - 1); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Brandes with tie-aware Dijkstra. Pairs in different components add 0.
/// `threads` only changes scheduling; the result is bitwise identical.
BetweennessScores betweenness_all(const Network& net, DistanceTransform transform,
                                  unsigned threads = 1);

/// Exhaustive simple-path enumeration. Testing oracle; at most 10 nodes.
BetweennessScores betweenness_bruteforce(const Network& net, DistanceTransform transform);

inline constexpr std::size_t kBruteforceMaxNodes = 10;

/// All shortest paths between two nodes.
struct PathSet {
  NodeId source = 0;
  NodeId sink = 0;
  std::optional<double> distance;  // empty when unreachable
  std::uint64_t num_shortest = 0;  // saturates at UINT64_MAX
  std::vector<std::vector<NodeId>> paths;
  bool truncated = false;
};

/// Paths are listed in lexicographic node-id order, at most max_paths of them;
/// num_shortest is always the full count.
PathSet shortest_paths_between(const Network& net, NodeId s, NodeId t,
                               DistanceTransform transform, std::size_t max_paths);

}  // namespace netboost
