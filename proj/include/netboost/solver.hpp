#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "netboost/betweenness.hpp"
#include "netboost/network.hpp"

namespace netboost {

enum class SolveMode { ChangeWeight, NewConnection, Both };

std::string_view to_string(SolveMode mode);
SolveMode parse_mode(std::string_view text);

/// How much opponents may gain from the target's edits, always measured
/// against the opponents' scores in the unedited network.
struct OpponentStrategy {
  enum class Kind { NoIncrement, UpperBound, Delta, DeltaRatio };

  Kind kind = Kind::NoIncrement;
  /// UpperBound: largest allowed absolute increase. Delta: largest relative
  /// increase (0.05 = 5 %). DeltaRatio: smallest target-growth / opponent-growth.
  double parameter = 0.0;

  static OpponentStrategy no_increment() { return {}; }
  static OpponentStrategy upper_bound(double bound) { return {Kind::UpperBound, bound}; }
  static OpponentStrategy delta(double max_pct = 0.05) { return {Kind::Delta, max_pct}; }
  static OpponentStrategy delta_ratio(double min_ratio) { return {Kind::DeltaRatio, min_ratio}; }

  friend bool operator==(const OpponentStrategy&, const OpponentStrategy&) = default;
};

/// "no-increment", "upper-bound:B", "delta[:P]", "delta-ratio:R".
std::string to_string(const OpponentStrategy& strategy);
OpponentStrategy parse_strategy(std::string_view text);

/// How probes are scored. Auto uses the all-pairs table when it fits in
/// table_memory_limit and falls back to dynamic recomputation otherwise.
enum class EvaluationEngine { Auto, PairTable, Dynamic };

struct SolverConfig {
  NodeId target = 0;
  Weight budget = 1;
  SolveMode mode = SolveMode::Both;
  std::set<NodeId> opponents;
  OpponentStrategy opponent_strategy;
  std::set<NodeId> forbidden;
  double p_imp = 0.01;
  /// Non-neighbors below this weighted-degree percentile are never connected.
  std::optional<double> degree_filter_percentile;
  /// Cap on the number of edited edges; 1 spends the budget on a single edge.
  std::optional<std::size_t> max_edges;
  bool use_binary_search = true;
  /// Fixed new-edge weight of the baseline greedy.
  Weight delta = 1;
  DistanceTransform transform = DistanceTransform::Reciprocal;

  unsigned threads = 1;
  EvaluationEngine engine = EvaluationEngine::Auto;
  std::size_t table_memory_limit = std::size_t{1536} << 20;
  /// Re-run every binary search as a linear scan and count disagreements.
  bool validate_search = false;
};

/// Throws Error(UnknownTarget | UnknownNode | InvalidConfig).
void validate_config(const Network& net, const SolverConfig& cfg);

enum class TerminationReason { BudgetExhausted, NoImprovingCandidate, EdgeCapReached, Cancelled };

std::string_view to_string(TerminationReason reason);
TerminationReason parse_termination(std::string_view text);

struct OpponentReport {
  NodeId node = 0;
  double before = 0.0;
  double after = 0.0;
  /// Relative change in percent; 0 when before is 0 and nothing changed.
  double pct_change = 0.0;
};

struct IterationRecord {
  NodeId chosen = 0;
  Weight increment = 0;
  double target_score = 0.0;
  std::size_t candidates_evaluated = 0;
};

struct Solution {
  NodeId target = 0;
  Weight budget = 0;
  std::vector<EdgeEdit> edits;
  Weight cost = 0;
  double target_before = 0.0;
  double target_after = 0.0;
  std::vector<OpponentReport> opponents;
  std::vector<IterationRecord> iterations;
  TerminationReason terminated = TerminationReason::NoImprovingCandidate;
  /// Binary searches whose answer differed from a linear scan (validate_search only).
  std::size_t search_mismatches = 0;
};

/// Every broken Solution invariant, as readable messages. Empty means valid.
std::vector<std::string> solution_violations(const Network& net, const SolverConfig& cfg,
                                             const Solution& solution);

struct ProgressEvent {
  std::size_t iteration = 0;
  Weight cost = 0;
  Weight budget = 0;
  double target_score = 0.0;
  std::size_t candidates_done = 0;
  std::size_t candidates_total = 0;
};
using ProgressSink = std::function<void(const ProgressEvent&)>;

/// Nodes the next round may edit, ascending.
std::vector<NodeId> candidate_set(const Network& net, const SolverConfig& cfg,
                                  const std::set<NodeId>& already_edited);

/// Whether the opponents' scores after an edit respect the strategy.
/// Throws Error(MismatchedOpponentSets) when the maps cover different nodes.
bool check_opponents(const std::map<NodeId, double>& before, const std::map<NodeId, double>& after,
                     double target_growth, const OpponentStrategy& strategy);

/// Significance test for a probe: relative gain of at least p_imp, or any
/// gain above 1e-9 when the current score is zero.
bool significant_improvement(double current, double candidate, double p_imp);

struct CandidateEvaluation {
  NodeId u = 0;
  Weight increment = 0;
  double target_score = 0.0;
  std::map<NodeId, double> opponent_scores;
  std::size_t probes = 0;
};

/// Scores probes for one solver round: the network with the edits committed
/// so far, its betweenness, and the original opponent baseline.
class CandidateEvaluator {
 public:
  /// `current` is the original network with `committed` applied.
  CandidateEvaluator(const Network& original, const SolverConfig& cfg,
                     std::span<const EdgeEdit> committed);
  CandidateEvaluator(const Network& original, const SolverConfig& cfg,
                     std::span<const EdgeEdit> committed, double original_target,
                     std::map<NodeId, double> original_opponents);
  ~CandidateEvaluator();
  CandidateEvaluator(CandidateEvaluator&&) noexcept;
  CandidateEvaluator& operator=(CandidateEvaluator&&) noexcept;

  const Network& current() const;
  double current_target_score() const;
  std::map<NodeId, double> current_opponent_scores() const;
  double original_target_score() const { return original_target_; }
  const std::map<NodeId, double>& original_opponent_scores() const { return original_opponents_; }
  bool uses_pair_table() const;

  /// Target and opponent scores after raising {target, u} by increment.
  CandidateEvaluation probe(NodeId u, Weight increment) const;

  /// Significant gain and opponent strategy satisfied.
  bool accepts(const CandidateEvaluation& probe) const;

  /// Smallest accepted increment in [1, remaining] by binary search, or a
  /// single probe at `remaining` when binary search is off.
  std::optional<CandidateEvaluation> evaluate(NodeId u, Weight remaining) const;

  /// Smallest accepted increment by scanning 1..remaining.
  std::optional<CandidateEvaluation> linear_scan(NodeId u, Weight remaining) const;

 private:
  struct Engine;
  const SolverConfig* cfg_;
  std::unique_ptr<Engine> engine_;
  double original_target_ = 0.0;
  std::map<NodeId, double> original_opponents_;
};

/// Convenience wrapper: builds the evaluator for `committed` and evaluates u.
std::optional<CandidateEvaluation> evaluate_candidate(const Network& net, const SolverConfig& cfg,
                                                      std::span<const EdgeEdit> committed,
                                                      NodeId u, Weight remaining);

struct ScoredCandidate {
  NodeId u = 0;
  Weight increment = 0;
  double target_score = 0.0;
};

/// Round winner among accepted candidates, scanned in ascending node order.
/// A candidate displaces the incumbent when it scores at least as high and
/// either gains p_imp over it or costs no more, or when it scores lower but
/// stays within p_imp of the best seen so far while costing strictly less.
/// An exact tie in score and cost keeps the earlier (smaller) id.
std::optional<ScoredCandidate> select_best(std::span<const ScoredCandidate> evaluations,
                                           double current_score, double p_imp);

/// Budgeted greedy with weight increments, forbidden nodes and opponents.
Solution solve_co_mbi(const Network& net, const SolverConfig& cfg, const ProgressSink& progress = {},
                      std::stop_token stop = {});

/// Baseline greedy: k rounds, each adding the fixed-weight new edge that
/// maximizes the target's score (ties to the smaller node id).
Solution solve_mbi_greedy(const Network& net, NodeId target, std::size_t k, Weight delta,
                          DistanceTransform transform, unsigned threads = 1);

}  // namespace netboost
