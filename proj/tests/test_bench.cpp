#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "netboost/bench.hpp"
#include "netboost/error.hpp"
#include "support/test_support.hpp"

using namespace netboost;

TEST_CASE("named scales") {
  CHECK(bench_scale("net1").nodes == 1715);
  CHECK(bench_scale("net1").edges == 11747);
  CHECK(bench_scale("net2").edges == 164254);
  CHECK(bench_scale("net3").nodes == 17307);
  CHECK_THROWS_AS(bench_scale("net4"), Error);
}

TEST_CASE("generator honors its contract") {
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{10, 9}, {50, 120}, {300, 2000}, {1715, 11747}}) {
    const auto net = generate_bench_network(n, m, kDefaultBenchSeed);
    CHECK(net.node_count() == n);
    CHECK(net.edge_count() == m);
    CHECK(testsupport::is_connected(net));
    for (const auto& e : net.edges()) {
      CHECK(e.weight >= 1);
      CHECK(e.weight <= 10);
    }
    std::size_t leaves = 0;
    for (NodeId x = 1; x <= n; ++x) leaves += net.neighbors(x).size() == 1;
    CHECK(leaves >= n / 5);
  }
}

TEST_CASE("generator is heterogeneous and skewed towards light edges") {
  const auto net = generate_bench_network(1715, 11747, kDefaultBenchSeed);
  std::size_t max_degree = 0;
  for (NodeId x = 1; x <= net.node_count(); ++x) max_degree = std::max(max_degree, net.neighbors(x).size());
  const double mean_degree = 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.node_count());
  CHECK(static_cast<double>(max_degree) > 8 * mean_degree);
  std::size_t ones = 0;
  for (const auto& e : net.edges()) ones += e.weight == 1;
  CHECK(ones * 3 > net.edge_count());
}

TEST_CASE("same seed, same network") {
  CHECK(generate_bench_network(200, 900, 7) == generate_bench_network(200, 900, 7));
  CHECK_FALSE(generate_bench_network(200, 900, 7) == generate_bench_network(200, 900, 8));
}

TEST_CASE("generator rejects impossible sizes") {
  CHECK_THROWS_AS(generate_bench_network(1, 0, 1), Error);
  CHECK_THROWS_AS(generate_bench_network(10, 8, 1), Error);
  CHECK_THROWS_AS(generate_bench_network(10, 45, 1), Error);
}

TEST_CASE("tier targets") {
  const BetweennessScores scores({5.0, 0.0, 990.0, 1010.0, 120000.0, 98000.0, 0.0, 400000.0});
  const auto t = select_bench_targets(scores);
  CHECK(t.min == 2);
  CHECK(t.max == 8);
  CHECK(t.low == 3);
  CHECK(t.medium == 6);

  // Small graphs still give four distinct targets.
  const BetweennessScores flat({0.0, 0.0, 0.0, 0.0});
  const auto f = select_bench_targets(flat);
  CHECK(std::set<NodeId>{f.min, f.low, f.medium, f.max}.size() == 4);
  CHECK_THROWS_AS(select_bench_targets(BetweennessScores({1.0, 2.0})), Error);
}

TEST_CASE("matrix shape and CSV") {
  const auto net = generate_bench_network(60, 150, 3);
  const auto targets = select_bench_targets(betweenness_all(net, DistanceTransform::Reciprocal));
  std::size_t streamed = 0;
  BenchOptions options;
  options.on_row = [&](const BenchRow&) { ++streamed; };
  const auto rows = run_bench_matrix(net, targets, options);
  CHECK(rows.size() == 32);
  CHECK(streamed == 32);
  for (const auto& r : rows) {
    CHECK(r.edits <= 1);
    CHECK(r.seconds >= 0.0);
  }

  const auto csv = bench_csv(rows);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "tier,mode,binary_search,budget,seconds");
  std::getline(lines, line);
  CHECK(line.rfind("MIN,new-connection,off,10,", 0) == 0);
  std::size_t count = 1;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 32);
}

TEST_CASE("CSV formatting") {
  const std::vector<BenchRow> rows = {{"MAX", 3, SolveMode::ChangeWeight, true, 100, 1.23456, 1}};
  CHECK(bench_csv(rows) == "tier,mode,binary_search,budget,seconds\nMAX,change-weight,on,100,1.235\n");
}
