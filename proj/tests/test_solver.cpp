#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stop_token>

#include "doctest.h"
#include "netboost/error.hpp"
#include "netboost/solver.hpp"
#include "support/test_support.hpp"

using namespace netboost;
using testsupport::draw;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

SolverConfig star_config() {
  SolverConfig cfg;
  cfg.target = 5;
  cfg.budget = 2;
  cfg.mode = SolveMode::NewConnection;
  return cfg;
}

SolverConfig random_config(std::mt19937_64& rng, const Network& net) {
  const auto n = net.node_count();
  SolverConfig cfg;
  cfg.target = static_cast<NodeId>(draw(rng, 1, n));
  cfg.budget = draw(rng, 1, 6);
  cfg.mode = static_cast<SolveMode>(draw(rng, 0, 2));
  cfg.transform = draw(rng, 0, 1) ? DistanceTransform::Reciprocal : DistanceTransform::Identity;
  cfg.use_binary_search = draw(rng, 0, 3) != 0;
  for (NodeId x = 1; x <= n; ++x) {
    if (x == cfg.target) continue;
    const auto roll = draw(rng, 0, 9);
    if (roll == 0) cfg.forbidden.insert(x);
    if (roll == 1 || roll == 2) cfg.opponents.insert(x);
  }
  if (draw(rng, 0, 3) == 0) cfg.max_edges = draw(rng, 1, 3);
  return cfg;
}

}  // namespace

TEST_CASE("mode, strategy and termination strings") {
  for (auto mode : {SolveMode::ChangeWeight, SolveMode::NewConnection, SolveMode::Both}) {
    CHECK(parse_mode(to_string(mode)) == mode);
  }
  CHECK(parse_mode("NEW_CONNECTION") == SolveMode::NewConnection);
  CHECK(code_of([] { parse_mode("sideways"); }) == ErrorCode::InvalidConfig);

  for (const auto& s : {OpponentStrategy::no_increment(), OpponentStrategy::upper_bound(2.5),
                        OpponentStrategy::delta(0.1), OpponentStrategy::delta_ratio(3)}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(parse_strategy("delta") == OpponentStrategy::delta(0.05));
  CHECK(parse_strategy("DELTA_RATIO:2") == OpponentStrategy::delta_ratio(2));
  CHECK(code_of([] { parse_strategy("upper-bound"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_strategy("delta-ratio"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_strategy("no-increment:1"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_strategy("delta:abc"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_strategy("greedy"); }) == ErrorCode::InvalidConfig);

  for (auto r : {TerminationReason::BudgetExhausted, TerminationReason::NoImprovingCandidate,
                 TerminationReason::EdgeCapReached, TerminationReason::Cancelled}) {
    CHECK(parse_termination(to_string(r)) == r);
  }
  CHECK(to_string(TerminationReason::EdgeCapReached) == "EDGE_CAP_REACHED");
}

TEST_CASE("validate_config") {
  const auto net = testsupport::star_pendant();
  auto check = [&](auto mutate) {
    auto cfg = star_config();
    mutate(cfg);
    return code_of([&] { validate_config(net, cfg); });
  };
  CHECK_NOTHROW(validate_config(net, star_config()));
  CHECK(check([](SolverConfig& c) { c.target = 9; }) == ErrorCode::UnknownTarget);
  CHECK(check([](SolverConfig& c) { c.target = 0; }) == ErrorCode::UnknownTarget);
  CHECK(check([](SolverConfig& c) { c.budget = 0; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.p_imp = 0; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.p_imp = 1.5; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.opponents = {7}; }) == ErrorCode::UnknownNode);
  CHECK(check([](SolverConfig& c) { c.forbidden = {7}; }) == ErrorCode::UnknownNode);
  CHECK(check([](SolverConfig& c) { c.forbidden = {5}; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.opponents = {5}; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.max_edges = 0; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.degree_filter_percentile = 120; }) == ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.opponent_strategy = OpponentStrategy::upper_bound(-1); }) ==
        ErrorCode::InvalidConfig);
  CHECK(check([](SolverConfig& c) { c.opponent_strategy = OpponentStrategy::delta_ratio(0); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("candidate_set examples") {
  // Target a=1 with neighbors b=2, c=3; d=4 is not adjacent.
  const auto net = Network::build({"a", "b", "c", "d"}, {{1, 2, 1}, {1, 3, 1}, {2, 4, 5}});
  SolverConfig cfg;
  cfg.target = 1;

  cfg.mode = SolveMode::ChangeWeight;
  cfg.forbidden = {3};
  CHECK(candidate_set(net, cfg, {}) == std::vector<NodeId>{2});

  cfg.forbidden.clear();
  cfg.mode = SolveMode::Both;
  CHECK(candidate_set(net, cfg, {2}) == std::vector<NodeId>{3, 4});

  cfg.mode = SolveMode::NewConnection;
  CHECK(candidate_set(net, cfg, {}) == std::vector<NodeId>{4});
  // Degrees {2, 6, 1, 5}: the 75th percentile is 5, so d survives; at 100 it does not.
  cfg.degree_filter_percentile = 75;
  CHECK(candidate_set(net, cfg, {}) == std::vector<NodeId>{4});
  cfg.degree_filter_percentile = 100;
  CHECK(candidate_set(net, cfg, {}).empty());
  // The filter never drops neighbors.
  cfg.mode = SolveMode::Both;
  CHECK(candidate_set(net, cfg, {}) == std::vector<NodeId>{2, 3});

  const auto clique = Network::build({"a", "b", "c"}, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  SolverConfig on_clique;
  on_clique.target = 2;
  on_clique.mode = SolveMode::NewConnection;
  CHECK(candidate_set(clique, on_clique, {}).empty());
}

TEST_CASE("candidate_set follows its definition on random inputs") {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 200; ++round) {
    const auto net = testsupport::random_network(rng, draw(rng, 2, 12), 35, 9);
    auto cfg = random_config(rng, net);
    if (draw(rng, 0, 1)) cfg.degree_filter_percentile = static_cast<double>(draw(rng, 0, 100));
    std::set<NodeId> edited;
    for (NodeId x = 1; x <= net.node_count(); ++x) {
      if (x != cfg.target && draw(rng, 0, 5) == 0) edited.insert(x);
    }
    const auto got = candidate_set(net, cfg, edited);
    CHECK(std::is_sorted(got.begin(), got.end()));
    for (NodeId u = 1; u <= net.node_count(); ++u) {
      const bool neighbor = net.adjacent(cfg.target, u);
      bool expected = u != cfg.target && !cfg.forbidden.contains(u) && !edited.contains(u);
      if (cfg.mode == SolveMode::ChangeWeight) expected = expected && neighbor;
      if (cfg.mode == SolveMode::NewConnection) expected = expected && !neighbor;
      if (cfg.degree_filter_percentile && !neighbor) {
        expected = expected && weighted_degree(net, u) >= degree_percentile_threshold(net, *cfg.degree_filter_percentile);
      }
      CHECK(std::binary_search(got.begin(), got.end(), u) == expected);
    }
  }
}

TEST_CASE("check_opponents") {
  using M = std::map<NodeId, double>;
  const auto none = OpponentStrategy::no_increment();
  CHECK(check_opponents({{1, 5.0}}, {{1, 5.0}}, 0.0, none));
  CHECK(check_opponents({{1, 5.0}}, {{1, 5.0 + 1e-10}}, 0.0, none));
  CHECK_FALSE(check_opponents({{1, 5.0}}, {{1, 5.01}}, 0.0, none));
  CHECK(check_opponents(M{}, M{}, 0.0, none));

  const auto d5 = OpponentStrategy::delta(0.05);
  CHECK_FALSE(check_opponents({{1, 100.0}}, {{1, 106.0}}, 0.0, d5));
  CHECK(check_opponents({{1, 100.0}}, {{1, 104.0}}, 0.0, d5));
  CHECK(check_opponents({{1, 0.0}}, {{1, 0.0}}, 0.0, d5));
  CHECK_FALSE(check_opponents({{1, 0.0}}, {{1, 0.01}}, 0.0, d5));

  const auto ub = OpponentStrategy::upper_bound(2.0);
  CHECK(check_opponents({{1, 1.0}, {2, 0.0}}, {{1, 3.0}, {2, 1.5}}, 0.0, ub));
  CHECK_FALSE(check_opponents({{1, 1.0}, {2, 0.0}}, {{1, 3.5}, {2, 1.5}}, 0.0, ub));

  // b_v = 10: target grows by 1.0, opponents by 0.2 and 0.
  const auto r3 = OpponentStrategy::delta_ratio(3);
  CHECK(check_opponents({{1, 4.0}, {2, 7.0}}, {{1, 4.2}, {2, 7.0}}, 1.0, r3));
  CHECK_FALSE(check_opponents({{1, 4.0}}, {{1, 4.5}}, 1.0, r3));
  CHECK(check_opponents({{1, 4.0}}, {{1, 3.0}}, 0.0, r3));

  CHECK(code_of([] { check_opponents({{1, 1.0}}, {{2, 1.0}}, 0.0, OpponentStrategy{}); }) ==
        ErrorCode::MismatchedOpponentSets);
  CHECK(code_of([] { check_opponents({{1, 1.0}}, {}, 0.0, OpponentStrategy{}); }) ==
        ErrorCode::MismatchedOpponentSets);
}

TEST_CASE("significant_improvement") {
  CHECK(significant_improvement(100.0, 101.0, 0.01));
  CHECK_FALSE(significant_improvement(100.0, 100.5, 0.01));
  CHECK_FALSE(significant_improvement(0.0, 0.0, 0.01));
  CHECK_FALSE(significant_improvement(0.0, 1e-12, 0.01));
  CHECK(significant_improvement(0.0, 0.5, 0.01));
  CHECK(significant_improvement(2.0, 4.0, 1.0));
}

TEST_CASE("select_best examples") {
  using C = ScoredCandidate;
  CHECK_FALSE(select_best({}, 1.0, 0.01).has_value());

  const C single[] = {{4, 2, 3.0}};
  CHECK(select_best(single, 1.0, 0.01)->u == 4);

  const C equal[] = {{1, 3, 5.0}, {2, 1, 5.0}};
  CHECK(select_best(equal, 1.0, 0.01)->u == 2);

  const C near[] = {{1, 10, 100.0}, {2, 2, 99.5}};
  CHECK(select_best(near, 50.0, 0.01)->u == 2);
  const C near_swapped[] = {{1, 2, 99.5}, {2, 10, 100.0}};
  CHECK(select_best(near_swapped, 50.0, 0.01)->u == 1);

  // A clearly better but costlier candidate still wins.
  const C far[] = {{1, 1, 50.0}, {2, 5, 80.0}};
  CHECK(select_best(far, 10.0, 0.01)->u == 2);
}

TEST_CASE("select_best depends only on the candidates, not their order") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    std::vector<ScoredCandidate> cands;
    const auto k = draw(rng, 1, 8);
    std::vector<NodeId> ids(20);
    std::iota(ids.begin(), ids.end(), NodeId{1});
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < k; ++i) {
      cands.push_back({ids[i], draw(rng, 1, 10), 10.0 + static_cast<double>(draw(rng, 0, 40)) / 4.0});
    }
    const double current = static_cast<double>(draw(rng, 1, 9));
    const auto a = select_best(cands, current, 0.05);
    std::shuffle(cands.begin(), cands.end(), rng);
    const auto b = select_best(cands, current, 0.05);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->u == b->u);
    // The winner is never dominated: nothing else is both cheaper-or-equal and significantly better.
    for (const auto& c : cands) {
      const bool dominates = c.increment <= a->increment && c.target_score - a->target_score >= 0.05 * a->target_score &&
                             c.target_score > a->target_score;
      CHECK_FALSE(dominates);
    }
  }
}

TEST_CASE("evaluator probes agree with the exhaustive oracle") {
  std::mt19937_64 rng(55);
  for (int round = 0; round < 150; ++round) {
    const auto net = testsupport::random_connected_network(rng, draw(rng, 3, 7), 30, 5);
    auto cfg = random_config(rng, net);
    cfg.engine = round % 2 ? EvaluationEngine::Dynamic : EvaluationEngine::PairTable;
    std::set<NodeId> none;
    const auto cands = candidate_set(net, cfg, none);
    if (cands.empty()) continue;
    const CandidateEvaluator ev(net, cfg, {});
    CHECK(ev.uses_pair_table() == (cfg.engine == EvaluationEngine::PairTable));
    for (auto u : cands) {
      const Weight w = draw(rng, 1, 5);
      const auto probe = ev.probe(u, w);
      const auto oracle = testsupport::oracle_after(net, cfg.target, {{u, w}}, cfg.transform);
      CHECK(std::abs(probe.target_score - oracle[cfg.target]) <= 1e-9);
      for (const auto& [c, score] : probe.opponent_scores) CHECK(std::abs(score - oracle[c]) <= 1e-9);
    }
  }
}

TEST_CASE("binary search finds the smallest accepted increment") {
  std::mt19937_64 rng(909);
  std::size_t checked = 0;
  std::size_t crossed_late = 0;
  for (int round = 0; round < 5000 && checked < 150; ++round) {
    const auto net = testsupport::random_connected_network(rng, draw(rng, 4, 7), 25, 5);
    SolverConfig cfg;
    cfg.target = static_cast<NodeId>(draw(rng, 1, net.node_count()));
    cfg.mode = SolveMode::Both;
    const auto cands = candidate_set(net, cfg, {});
    if (cands.empty()) continue;
    const auto u = cands[draw(rng, 0, cands.size() - 1)];
    const Weight remaining = 10;

    // Pick p_imp between consecutive gains so that acceptance first happens at a chosen weight.
    const auto scan = testsupport::linear_scan_oracle(net, cfg, {}, u, remaining);
    if (!testsupport::non_decreasing(scan.target_scores)) continue;
    const double cur = betweenness_bruteforce(net, cfg.transform)[cfg.target];
    if (cur <= 1e-9) continue;
    std::vector<std::size_t> steps;  // weights where the score strictly rises
    for (std::size_t w = 2; w <= remaining; ++w) {
      const double rise = scan.target_scores[w - 1] - scan.target_scores[w - 2];
      if (rise > 1e-6 && scan.target_scores[w - 1] - cur <= cur) steps.push_back(w);
    }
    if (steps.empty()) continue;
    const auto crossing = steps[draw(rng, 0, steps.size() - 1)];
    const double below = (scan.target_scores[crossing - 2] - cur) / cur;
    const double at = (scan.target_scores[crossing - 1] - cur) / cur;
    cfg.p_imp = std::max((below + at) / 2.0, 1e-6);

    const auto expected = testsupport::linear_scan_oracle(net, cfg, {}, u, remaining);
    const auto got = evaluate_candidate(net, cfg, {}, u, remaining);
    REQUIRE(expected.increment.has_value());
    REQUIRE(got.has_value());
    CHECK(got->increment == *expected.increment);
    CHECK(std::abs(got->target_score - expected.target_scores[*expected.increment - 1]) <= 1e-9);
    CHECK(got->probes <= 4);  // ceil(log2(11))
    ++checked;
    if (*expected.increment > 1) ++crossed_late;
  }
  CHECK(checked >= 100);
  CHECK(crossed_late >= 50);
}

TEST_CASE("evaluate without binary search probes the whole remaining budget once") {
  const auto net = testsupport::star_pendant();
  auto cfg = star_config();
  cfg.use_binary_search = false;
  const auto got = evaluate_candidate(net, cfg, {}, 3, 4);
  REQUIRE(got.has_value());
  CHECK(got->increment == 4);
  CHECK(got->probes == 1);
}

TEST_CASE("no increment passing the opponent check gives no evaluation") {
  // v-y is apart from the star c-{x1, x2}. Joining v to any star node forms a tree in
  // which the opponent c sits on more paths than before.
  const auto net = Network::build({"v", "y", "c", "x1", "x2"}, {{1, 2, 1}, {3, 4, 1}, {3, 5, 1}});
  SolverConfig cfg;
  cfg.target = 1;
  cfg.mode = SolveMode::NewConnection;
  cfg.opponents = {3};
  for (NodeId u : {3u, 4u, 5u}) {
    CHECK_FALSE(evaluate_candidate(net, cfg, {}, u, 5).has_value());
    CHECK_FALSE(testsupport::linear_scan_oracle(net, cfg, {}, u, 5).increment.has_value());
  }
  const auto sol = solve_co_mbi(net, cfg);
  CHECK(sol.edits.empty());
  CHECK(sol.terminated == TerminationReason::NoImprovingCandidate);

  cfg.opponent_strategy = OpponentStrategy::upper_bound(10);
  CHECK(evaluate_candidate(net, cfg, {}, 3, 5).has_value());
}

TEST_CASE("star with pendant: greedy reaches 1.5 with two unit edges") {
  const auto net = testsupport::star_pendant();
  const auto sol = solve_co_mbi(net, star_config());
  REQUIRE(sol.edits.size() == 2);
  CHECK(sol.edits[0] == EdgeEdit{3, 1});
  CHECK(sol.edits[1] == EdgeEdit{4, 1});
  CHECK(sol.cost == 2);
  CHECK(std::abs(sol.target_before) < 1e-12);
  CHECK(std::abs(sol.iterations[0].target_score - 0.5) < 1e-9);
  CHECK(std::abs(sol.target_after - 1.5) < 1e-9);
  CHECK(sol.terminated == TerminationReason::BudgetExhausted);
  CHECK(solution_violations(net, star_config(), sol).empty());

  // No two-edge addition of total weight 2 does better.
  double best = 0.0;
  for (NodeId a = 2; a <= 4; ++a) {
    for (NodeId b = a + 1; b <= 4; ++b) {
      if (a == 2 || b == 2) continue;  // l1 is already a neighbor
      best = std::max(best, testsupport::oracle_after(net, 5, {{a, 1}, {b, 1}}, DistanceTransform::Reciprocal)[5]);
    }
  }
  CHECK(std::abs(best - sol.target_after) < 1e-9);
}

TEST_CASE("opponent blocking on the star with pendant") {
  const auto net = testsupport::star_pendant();
  auto cfg = star_config();
  cfg.budget = 1;
  cfg.opponents = {1};
  const auto sol = solve_co_mbi(net, cfg);
  const auto base = betweenness_bruteforce(net, cfg.transform);

  // Exhaustive: single unit edits to non-neighbors that keep b_h within its original value.
  double best = base[5];
  for (NodeId u : {1u, 3u, 4u}) {
    const auto after = testsupport::oracle_after(net, 5, {{u, 1}}, cfg.transform);
    if (after[1] <= base[1] + 1e-9 && significant_improvement(base[5], after[5], cfg.p_imp)) {
      best = std::max(best, after[5]);
    }
  }
  CHECK(std::abs(sol.target_after - best) < 1e-9);
  for (const auto& r : sol.opponents) CHECK(r.after <= r.before + 1e-9);
  if (!sol.edits.empty()) {
    const auto after = testsupport::oracle_after(net, 5, sol.edits, cfg.transform);
    CHECK(after[1] <= base[1] + 1e-9);
  }
}

TEST_CASE("termination reasons") {
  SUBCASE("clique leaves nothing to connect") {
    const auto clique = Network::build({"a", "b", "c"}, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    SolverConfig cfg;
    cfg.target = 1;
    cfg.mode = SolveMode::NewConnection;
    cfg.budget = 5;
    const auto sol = solve_co_mbi(clique, cfg);
    CHECK(sol.edits.empty());
    CHECK(sol.terminated == TerminationReason::NoImprovingCandidate);
  }
  SUBCASE("edge cap") {
    auto cfg = star_config();
    cfg.budget = 5;
    cfg.max_edges = 1;
    const auto sol = solve_co_mbi(testsupport::star_pendant(), cfg);
    CHECK(sol.edits.size() == 1);
    CHECK(sol.terminated == TerminationReason::EdgeCapReached);
  }
  SUBCASE("cancelled before starting") {
    std::stop_source source;
    source.request_stop();
    const auto sol = solve_co_mbi(testsupport::star_pendant(), star_config(), {}, source.get_token());
    CHECK(sol.edits.empty());
    CHECK(sol.terminated == TerminationReason::Cancelled);
  }
  SUBCASE("cancelled from the progress stream") {
    std::stop_source source;
    std::size_t events = 0;
    const auto sol = solve_co_mbi(
        testsupport::star_pendant(), star_config(),
        [&](const ProgressEvent&) {
          if (++events == 1) source.request_stop();
        },
        source.get_token());
    CHECK(sol.terminated == TerminationReason::Cancelled);
    CHECK(sol.edits.empty());
  }
}

TEST_CASE("progress events are consistent") {
  std::vector<ProgressEvent> events;
  const auto sol = solve_co_mbi(testsupport::star_pendant(), star_config(),
                                [&](const ProgressEvent& e) { events.push_back(e); });
  REQUIRE_FALSE(events.empty());
  Weight last_cost = 0;
  for (const auto& e : events) {
    CHECK(e.budget == 2);
    CHECK(e.cost >= last_cost);
    CHECK(e.candidates_done <= e.candidates_total);
    last_cost = e.cost;
  }
  CHECK(events.back().cost == sol.cost);
}

TEST_CASE("solutions do not depend on threads or engine") {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 30; ++round) {
    const auto net = testsupport::random_connected_network(rng, draw(rng, 10, 30), 10, 8);
    auto cfg = random_config(rng, net);
    cfg.budget = draw(rng, 1, 12);
    const auto serial = solve_co_mbi(net, cfg);
    cfg.threads = 3;
    const auto threaded = solve_co_mbi(net, cfg);
    cfg.threads = 1;
    cfg.engine = EvaluationEngine::Dynamic;
    const auto dynamic = solve_co_mbi(net, cfg);
    for (const auto* other : {&threaded, &dynamic}) {
      CHECK(other->edits == serial.edits);
      CHECK(other->terminated == serial.terminated);
      CHECK(std::abs(other->target_after - serial.target_after) <= 1e-9);
    }
    CHECK(solution_violations(net, cfg, serial).empty());
  }
}

TEST_CASE("random solves keep every invariant, checked against the oracle") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 120; ++round) {
    const auto net = testsupport::random_network(rng, draw(rng, 3, 7), 45, 5);
    auto cfg = random_config(rng, net);
    const auto sol = solve_co_mbi(net, cfg);
    const auto violations = solution_violations(net, cfg, sol);
    CHECK_MESSAGE(violations.empty(), (violations.empty() ? "" : violations.front()));

    const auto base = betweenness_bruteforce(net, cfg.transform);
    CHECK(std::abs(sol.target_before - base[cfg.target]) <= 1e-9);
    std::vector<EdgeEdit> prefix;
    for (std::size_t i = 0; i < sol.edits.size(); ++i) {
      prefix.push_back(sol.edits[i]);
      const auto after = testsupport::oracle_after(net, cfg.target, prefix, cfg.transform);
      CHECK(std::abs(after[cfg.target] - sol.iterations[i].target_score) <= 1e-9);
      for (auto c : cfg.opponents) CHECK(after[c] <= base[c] + 1e-9);
    }
    if (sol.terminated == TerminationReason::BudgetExhausted) CHECK(sol.cost == cfg.budget);
  }
}

TEST_CASE("validate_search counts no mismatches on monotone instances") {
  auto cfg = star_config();
  cfg.budget = 6;
  cfg.validate_search = true;
  const auto sol = solve_co_mbi(testsupport::star_pendant(), cfg);
  CHECK(sol.search_mismatches == 0);
}

TEST_CASE("solution_violations reports broken solutions") {
  const auto net = testsupport::star_pendant();
  const auto cfg = star_config();
  auto sol = solve_co_mbi(net, cfg);
  REQUIRE(solution_violations(net, cfg, sol).empty());

  auto over = sol;
  over.cost = 3;
  CHECK_FALSE(solution_violations(net, cfg, over).empty());

  auto twice = sol;
  twice.edits[1].u = twice.edits[0].u;
  CHECK_FALSE(solution_violations(net, cfg, twice).empty());

  auto neighbor = sol;
  neighbor.edits[0].u = 2;  // l1 is already adjacent to v
  CHECK_FALSE(solution_violations(net, cfg, neighbor).empty());

  auto down = sol;
  down.iterations[1].target_score = 0.1;
  CHECK_FALSE(solution_violations(net, cfg, down).empty());
}

TEST_CASE("baseline greedy") {
  const auto net = testsupport::star_pendant();
  SUBCASE("one round picks l2 by id") {
    const auto sol = solve_mbi_greedy(net, 5, 1, 1, DistanceTransform::Reciprocal);
    REQUIRE(sol.edits.size() == 1);
    CHECK(sol.edits[0] == EdgeEdit{3, 1});
    CHECK(std::abs(sol.target_after - 0.5) < 1e-9);
  }
  SUBCASE("runs out of non-neighbors") {
    const auto sol = solve_mbi_greedy(net, 5, 10, 2, DistanceTransform::Reciprocal);
    CHECK(sol.edits.size() == 3);
    CHECK(sol.terminated == TerminationReason::NoImprovingCandidate);
    for (const auto& e : sol.edits) CHECK(e.increment == 2);
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { solve_mbi_greedy(net, 6, 1, 1, DistanceTransform::Reciprocal); }) ==
          ErrorCode::UnknownTarget);
    CHECK(code_of([&] { solve_mbi_greedy(net, 5, 0, 1, DistanceTransform::Reciprocal); }) ==
          ErrorCode::InvalidConfig);
  }
}

TEST_CASE("baseline greedy is step-optimal") {
  std::mt19937_64 rng(100);
  for (int round = 0; round < 60; ++round) {
    const auto net = testsupport::random_network(rng, draw(rng, 3, 7), 40, 5);
    const auto target = static_cast<NodeId>(draw(rng, 1, net.node_count()));
    const auto k = draw(rng, 1, 3);
    const auto transform = round % 2 ? DistanceTransform::Reciprocal : DistanceTransform::Identity;
    const auto sol = solve_mbi_greedy(net, target, k, 1, transform);
    std::vector<EdgeEdit> prefix;
    for (const auto& step : sol.edits) {
      double best = -1.0;
      NodeId best_u = 0;
      for (NodeId u = 1; u <= net.node_count(); ++u) {
        if (u == target || net.adjacent(target, u)) continue;
        if (std::any_of(prefix.begin(), prefix.end(), [&](const EdgeEdit& e) { return e.u == u; })) continue;
        auto trial = prefix;
        trial.push_back({u, 1});
        const double score = testsupport::oracle_after(net, target, trial, transform)[target];
        if (score > best + 1e-9 * std::max(1.0, best)) {
          best = score;
          best_u = u;
        }
      }
      CHECK(step.u == best_u);
      prefix.push_back(step);
    }
  }
}
