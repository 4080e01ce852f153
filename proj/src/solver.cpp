#include "netboost/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>

#include "netboost/dynamic_betweenness.hpp"
#include "netboost/error.hpp"
#include "netboost/pair_table.hpp"
#include "parallel.hpp"

namespace netboost {
namespace {

constexpr double kEps = 1e-9;

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidConfig, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string node_text(NodeId id) { return "node " + std::to_string(id); }

}  // namespace

std::string_view to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::ChangeWeight: return "change-weight";
    case SolveMode::NewConnection: return "new-connection";
    case SolveMode::Both: return "both";
  }
  return "both";
}

SolveMode parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (lower == "change-weight") return SolveMode::ChangeWeight;
  if (lower == "new-connection") return SolveMode::NewConnection;
  if (lower == "both") return SolveMode::Both;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(text) + "'");
}

std::string to_string(const OpponentStrategy& strategy) {
  switch (strategy.kind) {
    case OpponentStrategy::Kind::NoIncrement: return "no-increment";
    case OpponentStrategy::Kind::UpperBound: return "upper-bound:" + format_number(strategy.parameter);
    case OpponentStrategy::Kind::Delta: return "delta:" + format_number(strategy.parameter);
    case OpponentStrategy::Kind::DeltaRatio: return "delta-ratio:" + format_number(strategy.parameter);
  }
  return "no-increment";
}

OpponentStrategy parse_strategy(std::string_view text) {
  const auto colon = text.find(':');
  std::string name(text.substr(0, colon));
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  const bool has_arg = colon != std::string_view::npos;
  const auto arg = has_arg ? text.substr(colon + 1) : std::string_view{};

  OpponentStrategy s;
  if (name == "no-increment") {
    if (has_arg) throw Error(ErrorCode::InvalidConfig, "no-increment takes no parameter");
    return s;
  }
  if (name == "upper-bound") {
    if (!has_arg) throw Error(ErrorCode::InvalidConfig, "upper-bound needs a bound, e.g. upper-bound:2.5");
    s = OpponentStrategy::upper_bound(parse_number(arg, "upper bound"));
  } else if (name == "delta") {
    s = OpponentStrategy::delta(has_arg ? parse_number(arg, "delta percentage") : 0.05);
  } else if (name == "delta-ratio") {
    if (!has_arg) throw Error(ErrorCode::InvalidConfig, "delta-ratio needs a ratio, e.g. delta-ratio:3");
    s = OpponentStrategy::delta_ratio(parse_number(arg, "delta ratio"));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown opponent strategy '" + std::string(text) + "'");
  }
  return s;
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::BudgetExhausted: return "BUDGET_EXHAUSTED";
    case TerminationReason::NoImprovingCandidate: return "NO_IMPROVING_CANDIDATE";
    case TerminationReason::EdgeCapReached: return "EDGE_CAP_REACHED";
    case TerminationReason::Cancelled: return "CANCELLED";
  }
  return "NO_IMPROVING_CANDIDATE";
}

TerminationReason parse_termination(std::string_view text) {
  for (auto r : {TerminationReason::BudgetExhausted, TerminationReason::NoImprovingCandidate,
                 TerminationReason::EdgeCapReached, TerminationReason::Cancelled}) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorCode::BadRequest, "unknown termination reason '" + std::string(text) + "'");
}

void validate_config(const Network& net, const SolverConfig& cfg) {
  if (!net.contains(cfg.target)) throw Error(ErrorCode::UnknownTarget, node_text(cfg.target));
  if (cfg.budget < 1) throw Error(ErrorCode::InvalidConfig, "budget must be at least 1");
  if (!(cfg.p_imp > 0.0 && cfg.p_imp <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "p_imp must be in (0, 1]");
  }
  if (cfg.delta < 1) throw Error(ErrorCode::InvalidConfig, "delta must be at least 1");
  if (cfg.max_edges && *cfg.max_edges < 1) throw Error(ErrorCode::InvalidConfig, "max_edges must be at least 1");
  if (cfg.degree_filter_percentile) {
    const double q = *cfg.degree_filter_percentile;
    if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::InvalidConfig, "degree filter must be in [0, 100]");
  }
  for (auto c : cfg.opponents) {
    if (!net.contains(c)) throw Error(ErrorCode::UnknownNode, "opponent " + node_text(c));
  }
  for (auto f : cfg.forbidden) {
    if (!net.contains(f)) throw Error(ErrorCode::UnknownNode, "forbidden " + node_text(f));
  }
  if (cfg.forbidden.contains(cfg.target)) throw Error(ErrorCode::InvalidConfig, "target is forbidden");
  if (cfg.opponents.contains(cfg.target)) throw Error(ErrorCode::InvalidConfig, "target is an opponent");
  const auto& s = cfg.opponent_strategy;
  if (!std::isfinite(s.parameter) || s.parameter < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "strategy parameter must be nonnegative");
  }
  if (s.kind == OpponentStrategy::Kind::DeltaRatio && s.parameter <= 0.0) {
    throw Error(ErrorCode::InvalidConfig, "delta-ratio must be positive");
  }
}

std::vector<NodeId> candidate_set(const Network& net, const SolverConfig& cfg,
                                  const std::set<NodeId>& already_edited) {
  std::optional<Weight> threshold;
  if (cfg.degree_filter_percentile && net.node_count() > 0) {
    threshold = degree_percentile_threshold(net, *cfg.degree_filter_percentile);
  }
  std::vector<NodeId> out;
  for (NodeId u = 1; u <= net.node_count(); ++u) {
    if (u == cfg.target || cfg.forbidden.contains(u) || already_edited.contains(u)) continue;
    const bool neighbor = net.adjacent(cfg.target, u);
    if (cfg.mode == SolveMode::ChangeWeight && !neighbor) continue;
    if (cfg.mode == SolveMode::NewConnection && neighbor) continue;
    if (!neighbor && threshold && weighted_degree(net, u) < *threshold) continue;
    out.push_back(u);
  }
  return out;
}

bool check_opponents(const std::map<NodeId, double>& before, const std::map<NodeId, double>& after,
                     double target_growth, const OpponentStrategy& strategy) {
  if (before.size() != after.size() ||
      !std::equal(before.begin(), before.end(), after.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw Error(ErrorCode::MismatchedOpponentSets, "before and after cover different opponents");
  }
  double max_growth = 0.0;
  auto a = after.begin();
  for (auto b = before.begin(); b != before.end(); ++b, ++a) {
    const double was = b->second;
    const double now = a->second;
    switch (strategy.kind) {
      case OpponentStrategy::Kind::NoIncrement:
        if (now > was + kEps) return false;
        break;
      case OpponentStrategy::Kind::UpperBound:
        if (now - was > strategy.parameter + kEps) return false;
        break;
      case OpponentStrategy::Kind::Delta:
        if (now > was * (1.0 + strategy.parameter) + kEps) return false;
        break;
      case OpponentStrategy::Kind::DeltaRatio:
        max_growth = std::max(max_growth, now - was);
        break;
    }
  }
  if (strategy.kind == OpponentStrategy::Kind::DeltaRatio && max_growth > kEps) {
    return target_growth >= strategy.parameter * max_growth;
  }
  return true;
}

bool significant_improvement(double current, double candidate, double p_imp) {
  if (current <= kEps) return candidate > kEps && candidate > current;
  return candidate - current >= p_imp * current;
}

// ---------------------------------------------------------------------------

struct CandidateEvaluator::Engine {
  Network current;
  NodeId target = 0;
  DistanceTransform transform = DistanceTransform::Reciprocal;
  std::vector<NodeId> focus;  // target first, then opponents ascending
  std::optional<PairTable> table;
  BetweennessScores base;
  mutable std::once_flag dynamic_once;
  mutable std::unique_ptr<DynamicBetweenness> dynamic;

  const DynamicBetweenness& dynamic_engine() const {
    std::call_once(dynamic_once, [this] {
      dynamic = std::make_unique<DynamicBetweenness>(current, transform, base);
    });
    return *dynamic;
  }

  std::vector<double> focus_scores(EdgeEdit edit) const {
    if (table && table->supports(target, edit)) return table->scores_after_edit(target, edit, focus);
    const auto all = dynamic_engine().after_edit(target, edit);
    std::vector<double> out;
    out.reserve(focus.size());
    for (auto x : focus) out.push_back(all[x]);
    return out;
  }
};

CandidateEvaluator::CandidateEvaluator(const Network& original, const SolverConfig& cfg,
                                       std::span<const EdgeEdit> committed)
    : CandidateEvaluator(original, cfg, committed, 0.0, {}) {
  if (!committed.empty()) {
    const auto base = betweenness_all(original, cfg.transform, cfg.threads);
    original_target_ = base[cfg.target];
    original_opponents_.clear();
    for (auto c : cfg.opponents) original_opponents_[c] = base[c];
  } else {
    original_target_ = current_target_score();
    original_opponents_ = current_opponent_scores();
  }
}

CandidateEvaluator::CandidateEvaluator(const Network& original, const SolverConfig& cfg,
                                       std::span<const EdgeEdit> committed, double original_target,
                                       std::map<NodeId, double> original_opponents)
    : cfg_(&cfg),
      engine_(std::make_unique<Engine>()),
      original_target_(original_target),
      original_opponents_(std::move(original_opponents)) {
  auto& e = *engine_;
  e.current = apply_edits(original, cfg.target, committed);
  e.target = cfg.target;
  e.transform = cfg.transform;
  e.focus.push_back(cfg.target);
  e.focus.insert(e.focus.end(), cfg.opponents.begin(), cfg.opponents.end());

  const std::size_t n = e.current.node_count();
  const bool use_table =
      cfg.engine == EvaluationEngine::PairTable ||
      (cfg.engine == EvaluationEngine::Auto && PairTable::memory_bytes(n) <= cfg.table_memory_limit);
  if (use_table) {
    e.table.emplace(e.current, cfg.transform, cfg.threads);
    e.base = e.table->scores();
  } else {
    e.dynamic = std::make_unique<DynamicBetweenness>(e.current, cfg.transform, cfg.threads);
    e.base = e.dynamic->base();
    std::call_once(e.dynamic_once, [] {});
  }
}

CandidateEvaluator::~CandidateEvaluator() = default;
CandidateEvaluator::CandidateEvaluator(CandidateEvaluator&&) noexcept = default;
CandidateEvaluator& CandidateEvaluator::operator=(CandidateEvaluator&&) noexcept = default;

const Network& CandidateEvaluator::current() const { return engine_->current; }

double CandidateEvaluator::current_target_score() const { return engine_->base[cfg_->target]; }

std::map<NodeId, double> CandidateEvaluator::current_opponent_scores() const {
  std::map<NodeId, double> out;
  for (auto c : cfg_->opponents) out[c] = engine_->base[c];
  return out;
}

bool CandidateEvaluator::uses_pair_table() const { return engine_->table.has_value(); }

CandidateEvaluation CandidateEvaluator::probe(NodeId u, Weight increment) const {
  const auto scores = engine_->focus_scores(EdgeEdit{u, increment});
  CandidateEvaluation out;
  out.u = u;
  out.increment = increment;
  out.target_score = scores[0];
  std::size_t i = 1;
  for (auto c : cfg_->opponents) out.opponent_scores[c] = scores[i++];
  out.probes = 1;
  return out;
}

bool CandidateEvaluator::accepts(const CandidateEvaluation& p) const {
  if (!significant_improvement(current_target_score(), p.target_score, cfg_->p_imp)) return false;
  return check_opponents(original_opponents_, p.opponent_scores, p.target_score - original_target_,
                         cfg_->opponent_strategy);
}

std::optional<CandidateEvaluation> CandidateEvaluator::evaluate(NodeId u, Weight remaining) const {
  if (remaining == 0) return std::nullopt;
  if (!cfg_->use_binary_search) {
    auto p = probe(u, remaining);
    if (accepts(p)) return p;
    return std::nullopt;
  }
  std::optional<CandidateEvaluation> best;
  std::size_t probes = 0;
  Weight lo = 1;
  Weight hi = remaining;
  while (lo <= hi) {
    const Weight mid = lo + (hi - lo) / 2;
    auto p = probe(u, mid);
    ++probes;
    if (accepts(p)) {
      best = std::move(p);
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  if (best) best->probes = probes;
  return best;
}

std::optional<CandidateEvaluation> CandidateEvaluator::linear_scan(NodeId u, Weight remaining) const {
  for (Weight w = 1; w <= remaining; ++w) {
    auto p = probe(u, w);
    p.probes = w;
    if (accepts(p)) return p;
  }
  return std::nullopt;
}

std::optional<CandidateEvaluation> evaluate_candidate(const Network& net, const SolverConfig& cfg,
                                                      std::span<const EdgeEdit> committed,
                                                      NodeId u, Weight remaining) {
  validate_config(net, cfg);
  CandidateEvaluator evaluator(net, cfg, committed);
  return evaluator.evaluate(u, remaining);
}

std::optional<ScoredCandidate> select_best(std::span<const ScoredCandidate> evaluations,
                                           double current_score, double p_imp) {
  std::vector<ScoredCandidate> sorted(evaluations.begin(), evaluations.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.u < b.u; });
  std::optional<ScoredCandidate> best;
  double b_best = current_score;
  double b_max = current_score;
  Weight w_best = 0;
  for (const auto& c : sorted) {
    bool take = false;
    if (c.target_score >= b_best) {
      b_max = std::max(b_max, c.target_score);
      // An exact tie at equal cost keeps the incumbent, so ties go to the smaller id.
      const bool tie = c.increment == w_best && c.target_score - b_best <= kEps * std::max(1.0, b_best);
      take = (c.target_score - b_best >= p_imp * b_best) || (c.increment <= w_best && !tie);
    } else {
      take = (b_max - c.target_score < p_imp * c.target_score) && c.increment < w_best;
    }
    if (take) {
      best = c;
      b_best = c.target_score;
      w_best = c.increment;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

void fill_opponent_report(Solution& sol, const std::map<NodeId, double>& before,
                          const std::map<NodeId, double>& after) {
  sol.opponents.clear();
  for (const auto& [c, was] : before) {
    OpponentReport r;
    r.node = c;
    r.before = was;
    r.after = after.at(c);
    if (was > kEps) {
      r.pct_change = 100.0 * (r.after - was) / was;
    } else {
      r.pct_change = r.after > kEps ? 100.0 : 0.0;
    }
    sol.opponents.push_back(r);
  }
}

}  // namespace

Solution solve_co_mbi(const Network& net, const SolverConfig& cfg, const ProgressSink& progress,
                      std::stop_token stop) {
  validate_config(net, cfg);

  Solution sol;
  sol.target = cfg.target;
  sol.budget = cfg.budget;

  if (stop.stop_requested()) {
    sol.terminated = TerminationReason::Cancelled;
    const auto base = betweenness_all(net, cfg.transform, cfg.threads);
    sol.target_before = sol.target_after = base[cfg.target];
    std::map<NodeId, double> opp;
    for (auto c : cfg.opponents) opp[c] = base[c];
    fill_opponent_report(sol, opp, opp);
    return sol;
  }

  auto evaluator = std::make_unique<CandidateEvaluator>(net, cfg, std::span<const EdgeEdit>{});
  sol.target_before = evaluator->original_target_score();
  sol.target_after = sol.target_before;
  const auto original_opponents = evaluator->original_opponent_scores();
  auto final_opponents = original_opponents;

  std::set<NodeId> edited;
  std::mutex progress_mutex;

  while (true) {
    const Weight remaining = cfg.budget - sol.cost;
    if (remaining == 0) {
      sol.terminated = TerminationReason::BudgetExhausted;
      break;
    }
    if (cfg.max_edges && sol.edits.size() >= *cfg.max_edges) {
      sol.terminated = TerminationReason::EdgeCapReached;
      break;
    }

    const auto candidates = candidate_set(net, cfg, edited);
    std::vector<std::optional<CandidateEvaluation>> results(candidates.size());
    std::vector<std::size_t> mismatches(candidates.size(), 0);
    std::atomic<std::size_t> done{0};
    std::atomic<bool> cancelled{false};

    detail::parallel_for(candidates.size(), cfg.threads, [&](std::size_t i) {
      if (cancelled.load(std::memory_order_relaxed) || stop.stop_requested()) {
        cancelled = true;
        return;
      }
      results[i] = evaluator->evaluate(candidates[i], remaining);
      if (cfg.validate_search && cfg.use_binary_search) {
        const auto scan = evaluator->linear_scan(candidates[i], remaining);
        const bool same = scan.has_value() == results[i].has_value() &&
                          (!scan || scan->increment == results[i]->increment);
        if (!same) mismatches[i] = 1;
      }
      const auto finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(ProgressEvent{sol.iterations.size(), sol.cost, cfg.budget,
                               evaluator->current_target_score(), finished, candidates.size()});
      }
    });
    for (auto m : mismatches) sol.search_mismatches += m;

    if (cancelled || stop.stop_requested()) {
      sol.terminated = TerminationReason::Cancelled;
      break;
    }

    std::vector<ScoredCandidate> accepted;
    for (const auto& r : results) {
      if (r) accepted.push_back({r->u, r->increment, r->target_score});
    }
    const auto best = select_best(accepted, evaluator->current_target_score(), cfg.p_imp);
    if (!best) {
      sol.terminated = TerminationReason::NoImprovingCandidate;
      break;
    }

    const auto& chosen = *std::find_if(results.begin(), results.end(),
                                       [&](const auto& r) { return r && r->u == best->u; });
    sol.edits.push_back(EdgeEdit{best->u, best->increment});
    sol.cost += best->increment;
    sol.target_after = best->target_score;
    final_opponents = chosen->opponent_scores;
    edited.insert(best->u);
    sol.iterations.push_back(
        IterationRecord{best->u, best->increment, best->target_score, candidates.size()});

    if (progress) {
      progress(ProgressEvent{sol.iterations.size(), sol.cost, cfg.budget, sol.target_after,
                             candidates.size(), candidates.size()});
    }

    const bool more = sol.cost < cfg.budget && (!cfg.max_edges || sol.edits.size() < *cfg.max_edges);
    if (more) {
      evaluator = std::make_unique<CandidateEvaluator>(net, cfg, sol.edits, sol.target_before,
                                                       original_opponents);
    }
  }

  fill_opponent_report(sol, original_opponents, final_opponents);
  return sol;
}

Solution solve_mbi_greedy(const Network& net, NodeId target, std::size_t k, Weight delta,
                          DistanceTransform transform, unsigned threads) {
  if (!net.contains(target)) throw Error(ErrorCode::UnknownTarget, node_text(target));
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  if (delta < 1) throw Error(ErrorCode::InvalidConfig, "delta must be at least 1");

  SolverConfig cfg;
  cfg.target = target;
  cfg.budget = static_cast<Weight>(k) * delta;
  cfg.mode = SolveMode::NewConnection;
  cfg.delta = delta;
  cfg.transform = transform;
  cfg.threads = threads;

  Solution sol;
  sol.target = target;
  sol.budget = cfg.budget;
  sol.terminated = TerminationReason::BudgetExhausted;

  std::set<NodeId> edited;
  for (std::size_t round = 0; round < k; ++round) {
    CandidateEvaluator evaluator(net, cfg, sol.edits, 0.0, {});
    if (round == 0) sol.target_before = sol.target_after = evaluator.current_target_score();
    const auto candidates = candidate_set(net, cfg, edited);
    if (candidates.empty()) {
      sol.terminated = TerminationReason::NoImprovingCandidate;
      break;
    }
    std::vector<double> scores(candidates.size());
    detail::parallel_for(candidates.size(), threads, [&](std::size_t i) {
      scores[i] = evaluator.probe(candidates[i], delta).target_score;
    });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const double tol = kEps * std::max(1.0, std::abs(scores[arg]));
      if (scores[i] > scores[arg] + tol) arg = i;
    }
    sol.edits.push_back(EdgeEdit{candidates[arg], delta});
    sol.cost += delta;
    sol.target_after = scores[arg];
    edited.insert(candidates[arg]);
    sol.iterations.push_back(IterationRecord{candidates[arg], delta, scores[arg], candidates.size()});
  }
  return sol;
}

// ---------------------------------------------------------------------------

std::vector<std::string> solution_violations(const Network& net, const SolverConfig& cfg,
                                             const Solution& sol) {
  std::vector<std::string> out;
  auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

  Weight cost = 0;
  std::set<NodeId> seen;
  for (const auto& e : sol.edits) {
    cost += e.increment;
    if (e.increment < 1) fail("edit on " + node_text(e.u) + " has zero increment");
    if (!net.contains(e.u)) {
      fail("edit endpoint " + node_text(e.u) + " does not exist");
      continue;
    }
    if (e.u == cfg.target) fail("edit targets the target itself");
    if (cfg.forbidden.contains(e.u)) fail("edit touches forbidden " + node_text(e.u));
    if (!seen.insert(e.u).second) fail("endpoint " + node_text(e.u) + " edited twice");
    const bool neighbor = net.adjacent(cfg.target, e.u);
    if (cfg.mode == SolveMode::ChangeWeight && !neighbor) fail(node_text(e.u) + " is not a neighbor");
    if (cfg.mode == SolveMode::NewConnection && neighbor) fail(node_text(e.u) + " is already a neighbor");
  }
  if (cost != sol.cost) fail("cost does not equal the sum of increments");
  if (sol.cost > cfg.budget) fail("cost exceeds budget");
  if (cfg.max_edges && sol.edits.size() > *cfg.max_edges) fail("more edits than max_edges");
  if (sol.target_after < sol.target_before - kEps) fail("target score decreased");
  if (sol.iterations.size() != sol.edits.size()) fail("trace length differs from edit count");
  double last = sol.target_before;
  for (std::size_t i = 0; i < sol.iterations.size(); ++i) {
    const auto& it = sol.iterations[i];
    if (it.target_score < last - kEps) fail("trace score decreased at step " + std::to_string(i + 1));
    last = it.target_score;
    if (i < sol.edits.size() && (it.chosen != sol.edits[i].u || it.increment != sol.edits[i].increment)) {
      fail("trace step " + std::to_string(i + 1) + " does not match its edit");
    }
  }
  std::set<NodeId> reported;
  for (const auto& r : sol.opponents) {
    reported.insert(r.node);
    if (cfg.opponent_strategy.kind == OpponentStrategy::Kind::NoIncrement && r.after > r.before + kEps) {
      fail("opponent " + node_text(r.node) + " gained betweenness");
    }
  }
  if (reported != cfg.opponents) fail("opponent report does not cover the opponent set");
  return out;
}

}  // namespace netboost
