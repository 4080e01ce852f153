#include "length_graph.hpp"

#include <algorithm>
#include <limits>

#include "netboost/betweenness.hpp"
#include "parallel.hpp"

namespace netboost::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kSourcesPerChunk = 64;


}  // namespace

LengthGraph LengthGraph::from(const Network& net, DistanceTransform transform) {
  LengthGraph g;
  g.n = static_cast<std::uint32_t>(net.node_count());
  g.offsets.resize(g.n + 1, 0);
  g.targets.reserve(net.edge_count() * 2);
  g.lengths.reserve(net.edge_count() * 2);
  for (NodeId id = 1; id <= g.n; ++id) {
    for (const auto& arc : net.neighbors(id)) {
      g.targets.push_back(arc.to - 1);
      g.lengths.push_back(edge_length(arc.weight, transform));
    }
    g.offsets[id] = static_cast<std::uint32_t>(g.targets.size());
  }
  return g;
}

SourceSearch::SourceSearch(std::uint32_t n) : dist_(n, kInf), sigma_(n, 0.0), slot_(n, kNoSlot) {
  order_.reserve(n);
  heap_.reserve(n);
}

// Indexed 4-ary min-heap on (distance, node id). Each node sits in the heap at
// most once and moves up when its distance drops, so pops come out in the same
// order as a lazy heap keyed the same way, without the stale entries.
bool SourceSearch::before(std::uint32_t a, std::uint32_t b) const {
  return dist_[a] < dist_[b] || (dist_[a] == dist_[b] && a < b);
}

void SourceSearch::sift_up(std::size_t i) {
  const auto x = heap_[i];
  while (i > 0) {
    const auto parent = (i - 1) / 4;
    if (!before(x, heap_[parent])) break;
    heap_[i] = heap_[parent];
    slot_[heap_[i]] = static_cast<std::uint32_t>(i);
    i = parent;
  }
  heap_[i] = x;
  slot_[x] = static_cast<std::uint32_t>(i);
}

std::uint32_t SourceSearch::pop_min() {
  const auto top = heap_.front();
  slot_[top] = kNoSlot;
  const auto last = heap_.back();
  heap_.pop_back();
  if (heap_.empty()) return top;
  std::size_t i = 0;
  const std::size_t size = heap_.size();
  while (true) {
    const std::size_t first = 4 * i + 1;
    if (first >= size) break;
    std::size_t best = first;
    const std::size_t end = std::min(first + 4, size);
    for (std::size_t c = first + 1; c < end; ++c) {
      if (before(heap_[c], heap_[best])) best = c;
    }
    if (!before(heap_[best], last)) break;
    heap_[i] = heap_[best];
    slot_[heap_[i]] = static_cast<std::uint32_t>(i);
    i = best;
  }
  heap_[i] = last;
  slot_[last] = static_cast<std::uint32_t>(i);
  return top;
}

void SourceSearch::run(const LengthGraph& g, std::uint32_t source, std::uint32_t stop_at) {
  std::fill(dist_.begin(), dist_.end(), kInf);
  std::fill(sigma_.begin(), sigma_.end(), 0.0);
  for (auto x : heap_) slot_[x] = kNoSlot;
  order_.clear();
  heap_.clear();
  source_ = source;

  dist_[source] = 0.0;
  sigma_[source] = 1.0;
  heap_.push_back(source);
  slot_[source] = 0;
  while (!heap_.empty()) {
    const auto x = pop_min();
    const double d = dist_[x];
    order_.push_back(x);
    if (x == stop_at) break;
    const double sx = sigma_[x];
    for (auto e = g.offsets[x]; e < g.offsets[x + 1]; ++e) {
      const auto y = g.targets[e];
      const double alt = d + g.lengths[e];
      const double dy = dist_[y];
      // Clearly longer than the known distance: the common case, decided without the tie test.
      if (alt - dy > kLengthTieTolerance * std::max(1.0, alt)) continue;
      if (dy == kInf) {
        dist_[y] = alt;
        sigma_[y] = sx;
        heap_.push_back(y);
        sift_up(heap_.size() - 1);
      } else if (lengths_equal(alt, dy)) {
        sigma_[y] += sx;
      } else if (alt < dy && slot_[y] != kNoSlot) {
        dist_[y] = alt;
        sigma_[y] = sx;
        sift_up(slot_[y]);
      }
    }
  }
}

void SourceSearch::accumulate(const LengthGraph& g, std::vector<double>& delta) const {
  delta.assign(dist_.size(), 0.0);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    const auto w = *it;
    if (w == source_) continue;
    const double coeff = (1.0 + delta[w]) / sigma_[w];
    const double dw = dist_[w];
    for (auto e = g.offsets[w]; e < g.offsets[w + 1]; ++e) {
      const auto x = g.targets[e];
      const double dx = dist_[x];
      if (dx < dw && lengths_equal(dx + g.lengths[e], dw)) delta[x] += sigma_[x] * coeff;
    }
  }
  delta[source_] = 0.0;
}

std::vector<double> accumulate_betweenness(const LengthGraph& g, unsigned threads,
                                           const RowSink& sink) {
  const std::size_t n = g.n;
  const std::size_t chunks = (n + kSourcesPerChunk - 1) / kSourcesPerChunk;
  std::vector<std::vector<double>> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    SourceSearch search(g.n);
    std::vector<double> delta;
    auto& acc = partial[chunk];
    acc.assign(n, 0.0);
    const auto begin = chunk * kSourcesPerChunk;
    const auto end = std::min(n, begin + kSourcesPerChunk);
    for (auto s = begin; s < end; ++s) {
      search.run(g, static_cast<std::uint32_t>(s));
      if (sink) sink(static_cast<std::uint32_t>(s), search.dist(), search.sigma());
      search.accumulate(g, delta);
      for (std::size_t x = 0; x < n; ++x) acc[x] += delta[x];
    }
  });
  std::vector<double> total(n, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t x = 0; x < n; ++x) total[x] += acc[x];
  }
  for (auto& value : total) value *= 0.5;
  return total;
}

std::vector<double> dependency_sum(const LengthGraph& g, std::span<const std::uint32_t> sources) {
  std::vector<double> total(g.n, 0.0);
  SourceSearch search(g.n);
  std::vector<double> delta;
  for (auto s : sources) {
    search.run(g, s);
    search.accumulate(g, delta);
    for (std::size_t x = 0; x < g.n; ++x) total[x] += delta[x];
  }
  return total;
}

}  // namespace netboost::detail
