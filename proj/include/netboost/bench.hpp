#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "netboost/betweenness.hpp"
#include "netboost/network.hpp"
#include "netboost/solver.hpp"

namespace netboost {

struct BenchScale {
  std::string name;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

/// "net1", "net2" or "net3". Throws Error(InvalidConfig) otherwise.
BenchScale bench_scale(std::string_view name);

inline constexpr std::uint64_t kDefaultBenchSeed = 20240601;

/// Connected, degree-heterogeneous network with exactly `nodes` nodes and
/// `edges` edges and integer weights in 1..10 skewed towards 1. A fifth of
/// the nodes are pendant leaves; the rest form a preferential-attachment
/// tree densified by extra preferential edges. Same seed, same network.
Network generate_bench_network(std::size_t nodes, std::size_t edges, std::uint64_t seed);

struct BenchTargets {
  NodeId min = 0;     // smallest betweenness (0 on these graphs)
  NodeId low = 0;     // closest to 1,000
  NodeId medium = 0;  // closest to 100,000
  NodeId max = 0;     // largest betweenness
};

/// Distinct tier targets; ties go to the smaller id.
BenchTargets select_bench_targets(const BetweennessScores& scores);

struct BenchRow {
  std::string tier;
  NodeId target = 0;
  SolveMode mode = SolveMode::ChangeWeight;
  bool binary_search = false;
  Weight budget = 0;
  double seconds = 0.0;  // fastest of the repetitions
  std::size_t edits = 0;
};

struct BenchOptions {
  std::vector<Weight> budgets{10, 100};
  /// Full passes over the matrix; each row keeps its fastest time.
  unsigned repeats = 1;
  unsigned threads = 1;
  DistanceTransform transform = DistanceTransform::Reciprocal;
  std::function<void(const BenchRow&)> on_row;
};

/// tier x mode x binary search x budget, each solve limited to one edge.
std::vector<BenchRow> run_bench_matrix(const Network& net, const BenchTargets& targets,
                                       const BenchOptions& options = {});

/// Header plus one line per row: tier,mode,binary_search,budget,seconds.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace netboost
