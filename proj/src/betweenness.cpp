#include "netboost/betweenness.hpp"

#include <algorithm>
#include <limits>

#include "length_graph.hpp"
#include "netboost/error.hpp"

namespace netboost {

BetweennessScores betweenness_all(const Network& net, DistanceTransform transform,
                                  unsigned threads) {
  auto graph = detail::LengthGraph::from(net, transform);
  return BetweennessScores(detail::accumulate_betweenness(graph, threads));
}

namespace {

/// Depth-first enumeration of all simple paths from one source.
class PathEnumerator {
 public:
  PathEnumerator(const Network& net, DistanceTransform transform)
      : net_(net), transform_(transform), on_path_(net.node_count() + 1, false) {}

  struct Found {
    double length;
    std::vector<NodeId> nodes;
  };

  std::vector<Found> paths(NodeId s, NodeId t) {
    found_.clear();
    path_.assign(1, s);
    on_path_[s] = true;
    descend(s, t, 0.0);
    on_path_[s] = false;
    return std::move(found_);
  }

 private:
  void descend(NodeId x, NodeId t, double length) {
    if (x == t) {
      found_.push_back({length, path_});
      return;
    }
    for (const auto& arc : net_.neighbors(x)) {
      if (on_path_[arc.to]) continue;
      on_path_[arc.to] = true;
      path_.push_back(arc.to);
      descend(arc.to, t, length + edge_length(arc.weight, transform_));
      path_.pop_back();
      on_path_[arc.to] = false;
    }
  }

  const Network& net_;
  DistanceTransform transform_;
  std::vector<bool> on_path_;
  std::vector<NodeId> path_;
  std::vector<Found> found_;
};

}  // namespace

BetweennessScores betweenness_bruteforce(const Network& net, DistanceTransform transform) {
  const auto n = net.node_count();
  if (n > kBruteforceMaxNodes) {
    throw Error(ErrorCode::TooLargeForOracle,
                std::to_string(n) + " nodes exceeds the oracle limit of " +
                    std::to_string(kBruteforceMaxNodes));
  }
  std::vector<double> b(n, 0.0);
  PathEnumerator enumerator(net, transform);
  std::vector<double> through(n + 1);
  for (NodeId s = 1; s <= n; ++s) {
    for (NodeId t = s + 1; t <= n; ++t) {
      auto paths = enumerator.paths(s, t);
      if (paths.empty()) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : paths) best = std::min(best, p.length);
      double sigma = 0.0;
      std::fill(through.begin(), through.end(), 0.0);
      for (const auto& p : paths) {
        if (!lengths_equal(p.length, best)) continue;
        sigma += 1.0;
        for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) through[p.nodes[i]] += 1.0;
      }
      for (NodeId v = 1; v <= n; ++v) b[v - 1] += through[v] / sigma;
    }
  }
  return BetweennessScores(std::move(b));
}

PathSet shortest_paths_between(const Network& net, NodeId s, NodeId t,
                               DistanceTransform transform, std::size_t max_paths) {
  if (!net.contains(s)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(s));
  if (!net.contains(t)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(t));
  if (s == t) throw Error(ErrorCode::SameNode, "source and sink are both " + std::to_string(s));

  PathSet result;
  result.source = s;
  result.sink = t;

  const auto graph = detail::LengthGraph::from(net, transform);
  detail::SourceSearch search(graph.n);
  const auto si = s - 1;
  const auto ti = t - 1;
  search.run(graph, si, ti);
  const auto dist = search.dist();
  if (dist[ti] == std::numeric_limits<double>::infinity()) return result;
  result.distance = dist[ti];

  auto is_pred = [&](std::uint32_t x, std::uint32_t e, std::uint32_t w) {
    return dist[x] < dist[w] && lengths_equal(dist[x] + graph.lengths[e], dist[w]);
  };

  // Exact path counts over the settled part of the DAG, in settle order.
  std::vector<std::uint64_t> count(graph.n, 0);
  count[si] = 1;
  for (auto w : search.order()) {
    if (w == si) continue;
    std::uint64_t total = 0;
    for (auto e = graph.offsets[w]; e < graph.offsets[w + 1]; ++e) {
      const auto x = graph.targets[e];
      if (!is_pred(x, e, w)) continue;
      const auto add = count[x];
      total = total > UINT64_MAX - add ? UINT64_MAX : total + add;
    }
    count[w] = total;
  }
  result.num_shortest = count[ti];

  // Nodes that lie on some shortest s-t path: walk predecessors back from t.
  std::vector<bool> on_dag(graph.n, false);
  std::vector<std::uint32_t> stack{ti};
  on_dag[ti] = true;
  while (!stack.empty()) {
    const auto w = stack.back();
    stack.pop_back();
    for (auto e = graph.offsets[w]; e < graph.offsets[w + 1]; ++e) {
      const auto x = graph.targets[e];
      if (!on_dag[x] && is_pred(x, e, w)) {
        on_dag[x] = true;
        stack.push_back(x);
      }
    }
  }

  // Forward DFS over ascending neighbor ids yields lexicographic order.
  std::vector<NodeId> path{s};
  auto descend = [&](auto&& self, std::uint32_t x) -> bool {
    if (x == ti) {
      if (result.paths.size() == max_paths) {
        result.truncated = true;
        return false;
      }
      result.paths.push_back(path);
      return true;
    }
    for (auto e = graph.offsets[x]; e < graph.offsets[x + 1]; ++e) {
      const auto y = graph.targets[e];
      if (!on_dag[y] || !is_pred(x, e, y)) continue;
      path.push_back(y + 1);
      const bool more = self(self, y);
      path.pop_back();
      if (!more) return false;
    }
    return true;
  };
  descend(descend, si);
  return result;
}

}  // namespace netboost
