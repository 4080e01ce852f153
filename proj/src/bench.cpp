#include "netboost/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

#include "netboost/error.hpp"

namespace netboost {

BenchScale bench_scale(std::string_view name) {
  if (name == "net1") return {"net1", 1715, 11747};
  if (name == "net2") return {"net2", 8937, 164254};
  if (name == "net3") return {"net3", 17307, 412912};
  throw Error(ErrorCode::InvalidConfig, "unknown bench scale '" + std::string(name) + "' (net1, net2, net3)");
}

Network generate_bench_network(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
  if (nodes < 2) throw Error(ErrorCode::InvalidConfig, "bench networks need at least 2 nodes");
  const std::size_t leaves = nodes / 5;
  const std::size_t core = nodes - leaves;
  const std::size_t extra_room = core * (core - 1) / 2 - (core - 1);
  if (edges < nodes - 1 || edges - (nodes - 1) > extra_room) {
    throw Error(ErrorCode::InvalidConfig, "edge count not achievable for a connected bench network");
  }

  // mt19937_64 output is fully specified; the std distributions are not, so
  // draws are reduced by hand to keep the graph identical across toolchains.
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t k) { return rng() % k; };
  auto weight = [&] {
    Weight w = 1;
    while (w < 10 && below(2) == 0) ++w;
    return w;
  };

  // Every fifth node (ids 5, 10, ...) is a pendant leaf; the others are core.
  auto is_leaf = [&](std::size_t i) { return i % 5 == 4 && i / 5 < leaves; };
  std::vector<NodeId> core_ids;
  core_ids.reserve(core);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (!is_leaf(i)) core_ids.push_back(static_cast<NodeId>(i + 1));
  }

  std::vector<Edge> list;
  list.reserve(edges);
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges * 2);
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  // Core endpoint pool: each core node appears once plus once per incident edge.
  std::vector<NodeId> pool;
  pool.reserve(2 * edges + core);
  auto add = [&](NodeId a, NodeId b) {
    list.push_back(Edge{a, b, weight()});
    present.insert(key(a, b));
  };

  pool.push_back(core_ids[0]);
  for (std::size_t i = 1; i < nodes; ++i) {
    const auto id = static_cast<NodeId>(i + 1);
    const NodeId to = pool[below(pool.size())];
    add(id, to);
    pool.push_back(to);
    if (!is_leaf(i)) {
      pool.push_back(id);
      pool.push_back(id);
    }
  }
  while (list.size() < edges) {
    const NodeId a = pool[below(pool.size())];
    const NodeId b = below(2) == 0 ? pool[below(pool.size())] : core_ids[below(core_ids.size())];
    if (a == b || present.contains(key(a, b))) continue;
    add(a, b);
    pool.push_back(a);
    pool.push_back(b);
  }

  std::vector<std::string> labels;
  labels.reserve(nodes);
  for (std::size_t i = 1; i <= nodes; ++i) labels.push_back("w" + std::to_string(i));
  return Network::build(std::move(labels), std::move(list));
}

BenchTargets select_bench_targets(const BetweennessScores& scores) {
  const auto n = static_cast<NodeId>(scores.size());
  if (n < 4) throw Error(ErrorCode::InvalidConfig, "bench needs at least 4 nodes");
  BenchTargets t;
  t.min = 1;
  for (NodeId x = 2; x <= n; ++x) {
    if (scores[x] < scores[t.min]) t.min = x;
  }
  for (NodeId x = 1; x <= n; ++x) {
    if (x != t.min && (t.max == 0 || scores[x] > scores[t.max])) t.max = x;
  }
  auto closest = [&](double goal, std::initializer_list<NodeId> taken) {
    NodeId best = 0;
    for (NodeId x = 1; x <= n; ++x) {
      if (std::find(taken.begin(), taken.end(), x) != taken.end()) continue;
      if (best == 0 || std::abs(scores[x] - goal) < std::abs(scores[best] - goal)) best = x;
    }
    return best;
  };
  t.low = closest(1e3, {t.min, t.max});
  t.medium = closest(1e5, {t.min, t.max, t.low});
  return t;
}

std::vector<BenchRow> run_bench_matrix(const Network& net, const BenchTargets& targets,
                                       const BenchOptions& options) {
  const std::pair<const char*, NodeId> tiers[] = {
      {"MIN", targets.min}, {"LOW", targets.low}, {"MEDIUM", targets.medium}, {"MAX", targets.max}};
  std::vector<BenchRow> rows;
  std::vector<SolverConfig> configs;
  for (const auto& [tier, target] : tiers) {
    for (auto mode : {SolveMode::NewConnection, SolveMode::ChangeWeight}) {
      for (bool bs : {false, true}) {
        for (auto budget : options.budgets) {
          SolverConfig cfg;
          cfg.target = target;
          cfg.budget = budget;
          cfg.mode = mode;
          cfg.max_edges = 1;
          cfg.use_binary_search = bs;
          cfg.transform = options.transform;
          cfg.threads = options.threads;
          configs.push_back(cfg);
          rows.push_back(BenchRow{tier, target, mode, bs, budget, 0.0, 0});
        }
      }
    }
  }

  // Repeats sweep the whole matrix so slow stretches of machine time spread over all rows.
  const unsigned repeats = std::max(1u, options.repeats);
  for (unsigned r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const auto sol = solve_co_mbi(net, configs[i]);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      rows[i].seconds = r == 0 ? took.count() : std::min(rows[i].seconds, took.count());
      rows[i].edits = sol.edits.size();
      if (r + 1 == repeats && options.on_row) options.on_row(rows[i]);
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "tier,mode,binary_search,budget,seconds\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& r : rows) {
    out << r.tier << ',' << to_string(r.mode) << ',' << (r.binary_search ? "on" : "off") << ','
        << r.budget << ',' << r.seconds << '\n';
  }
  return out.str();
}

}  // namespace netboost
