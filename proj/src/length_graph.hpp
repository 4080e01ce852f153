#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "netboost/network.hpp"

namespace netboost::detail {

/// CSR view of a network with transformed edge lengths and 0-based indices.
struct LengthGraph {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> lengths;

  static LengthGraph from(const Network& net, DistanceTransform transform);
};

/// Reusable single-source workspace: tie-aware Dijkstra plus Brandes
/// dependency accumulation. Predecessors are not stored; they are recovered
/// from tight edges during accumulation.
class SourceSearch {
 public:
  explicit SourceSearch(std::uint32_t n);

  /// Settles every node reachable from source. Stops early once stop_at is
  /// settled when stop_at is a valid index.
  void run(const LengthGraph& g, std::uint32_t source, std::uint32_t stop_at = UINT32_MAX);

  /// Fills delta with the pair dependencies of the last source on every node
  /// (the source itself keeps 0).
  void accumulate(const LengthGraph& g, std::vector<double>& delta) const;

  std::span<const double> dist() const { return dist_; }
  std::span<const double> sigma() const { return sigma_; }
  /// Settled nodes in non-decreasing distance order.
  std::span<const std::uint32_t> order() const { return order_; }

 private:
  std::vector<double> dist_;
  std::vector<double> sigma_;
  std::vector<std::uint32_t> order_;
  static constexpr std::uint32_t kNoSlot = UINT32_MAX;

  bool before(std::uint32_t a, std::uint32_t b) const;
  void sift_up(std::size_t i);
  std::uint32_t pop_min();

  std::vector<std::uint32_t> heap_;
  std::vector<std::uint32_t> slot_;  // heap position, kNoSlot when absent
  std::uint32_t source_ = 0;
};

/// Called once per source with that source's distance and path-count rows.
using RowSink = std::function<void(std::uint32_t source, std::span<const double> dist,
                                   std::span<const double> sigma)>;

/// Brandes over all sources, returning unordered-pair betweenness (half the
/// ordered sum). Sources are processed in fixed chunks whose partial sums are
/// reduced in chunk order, so the result does not depend on thread count.
std::vector<double> accumulate_betweenness(const LengthGraph& g, unsigned threads,
                                           const RowSink& sink = {});

/// Sum of dependencies over the given sources (ordered-pair convention).
std::vector<double> dependency_sum(const LengthGraph& g, std::span<const std::uint32_t> sources);

}  // namespace netboost::detail
