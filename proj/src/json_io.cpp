#include "netboost/json_io.hpp"

#include <type_traits>

namespace netboost {
namespace {

Json node_entry(const Network& net, NodeId id) { return Json{{"id", id}, {"label", net.label(id)}}; }

template <typename T>
T field(const Json& body, const char* name, const char* expected) {
  bool ok = body.contains(name);
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) ok = ok && body.at(name).is_number_integer();
  if (ok) {
    try {
      return body.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  throw Error(ErrorCode::InvalidConfig, std::string("field '") + name + "' must be " + expected);
}

std::set<NodeId> node_set(const Network& net, const Json& body, const char* name) {
  std::set<NodeId> out;
  if (!body.contains(name) || body.at(name).is_null()) return out;
  const auto& list = body.at(name);
  if (!list.is_array()) {
    throw Error(ErrorCode::InvalidConfig, std::string("field '") + name + "' must be a list of nodes");
  }
  for (const auto& ref : list) out.insert(node_from_json(net, ref));
  return out;
}

OpponentStrategy strategy_from_json(const Json& s) {
  if (s.is_string()) return parse_strategy(s.get<std::string>());
  if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string()) {
    throw Error(ErrorCode::InvalidConfig, "strategy must be a string or {kind, parameter}");
  }
  std::string text = s.at("kind").get<std::string>();
  if (s.contains("parameter") && !s.at("parameter").is_null()) {
    if (!s.at("parameter").is_number()) throw Error(ErrorCode::InvalidConfig, "strategy parameter must be a number");
    text += ":" + s.at("parameter").dump();
  }
  return parse_strategy(text);
}

}  // namespace

Json error_json(ErrorCode code, const std::string& message) {
  return Json{{"code", std::string(to_string(code))}, {"message", message}};
}

NodeId node_from_json(const Network& net, const Json& ref, ErrorCode missing) {
  if (ref.is_number_unsigned() || ref.is_number_integer()) {
    const auto v = ref.get<std::int64_t>();
    if (v >= 1 && net.contains(static_cast<NodeId>(v)) && v <= static_cast<std::int64_t>(net.node_count())) {
      return static_cast<NodeId>(v);
    }
    throw Error(missing, "no node with id " + ref.dump());
  }
  if (ref.is_string()) {
    if (auto id = resolve_node(net, ref.get<std::string>())) return *id;
    throw Error(missing, "no node '" + ref.get<std::string>() + "'");
  }
  throw Error(ErrorCode::InvalidConfig, "node references must be ids or labels, got " + ref.dump());
}

Json graph_json(const Network& net, const BetweennessScores* scores) {
  Json nodes = Json::array();
  for (NodeId id = 1; id <= net.node_count(); ++id) {
    Json n{{"id", id}, {"label", net.label(id)}, {"weighted_degree", weighted_degree(net, id)}};
    if (scores) n["betweenness"] = (*scores)[id];
    nodes.push_back(std::move(n));
  }
  Json edges = Json::array();
  for (const auto& e : net.edges()) edges.push_back(Json{{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  Json out{{"n_nodes", net.node_count()}, {"n_edges", net.edge_count()}, {"nodes", std::move(nodes)},
           {"edges", std::move(edges)}};
  if (scores) out["pair_convention"] = kPairConvention;
  return out;
}

SolverConfig config_from_json(const Network& net, const Json& body) {
  if (!body.is_object()) throw Error(ErrorCode::BadRequest, "request body must be an object");
  SolverConfig cfg;
  if (!body.contains("target")) throw Error(ErrorCode::InvalidConfig, "missing field 'target'");
  cfg.target = node_from_json(net, body.at("target"), ErrorCode::UnknownTarget);
  if (!body.contains("budget")) throw Error(ErrorCode::InvalidConfig, "missing field 'budget'");
  const auto budget = field<std::int64_t>(body, "budget", "a positive integer");
  if (budget < 1) throw Error(ErrorCode::InvalidConfig, "budget must be at least 1");
  cfg.budget = static_cast<Weight>(budget);
  if (body.contains("mode")) cfg.mode = parse_mode(field<std::string>(body, "mode", "a string"));
  cfg.opponents = node_set(net, body, "opponents");
  cfg.forbidden = node_set(net, body, "forbidden");
  for (const char* key : {"strategy", "opponent_strategy"}) {
    if (body.contains(key) && !body.at(key).is_null()) cfg.opponent_strategy = strategy_from_json(body.at(key));
  }
  if (body.contains("p_imp")) cfg.p_imp = field<double>(body, "p_imp", "a number");
  for (const char* key : {"degree_filter", "degree_filter_percentile"}) {
    if (body.contains(key) && !body.at(key).is_null()) cfg.degree_filter_percentile = field<double>(body, key, "a number");
  }
  if (body.contains("max_edges") && !body.at("max_edges").is_null()) {
    const auto m = field<std::int64_t>(body, "max_edges", "a positive integer");
    if (m < 1) throw Error(ErrorCode::InvalidConfig, "max_edges must be at least 1");
    cfg.max_edges = static_cast<std::size_t>(m);
  }
  if (body.contains("use_binary_search")) cfg.use_binary_search = field<bool>(body, "use_binary_search", "a boolean");
  if (body.contains("delta")) {
    const auto d = field<std::int64_t>(body, "delta", "a positive integer");
    if (d < 1) throw Error(ErrorCode::InvalidConfig, "delta must be at least 1");
    cfg.delta = static_cast<Weight>(d);
  }
  if (body.contains("transform")) {
    try {
      cfg.transform = parse_transform(field<std::string>(body, "transform", "a string"));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
  }
  validate_config(net, cfg);
  return cfg;
}

Json config_to_json(const Network& net, const SolverConfig& cfg) {
  Json opponents = Json::array();
  for (auto c : cfg.opponents) opponents.push_back(node_entry(net, c));
  Json forbidden = Json::array();
  for (auto f : cfg.forbidden) forbidden.push_back(node_entry(net, f));
  Json out{{"target", node_entry(net, cfg.target)},
           {"budget", cfg.budget},
           {"mode", std::string(to_string(cfg.mode))},
           {"opponents", std::move(opponents)},
           {"strategy", to_string(cfg.opponent_strategy)},
           {"forbidden", std::move(forbidden)},
           {"p_imp", cfg.p_imp},
           {"use_binary_search", cfg.use_binary_search},
           {"delta", cfg.delta},
           {"transform", std::string(to_string(cfg.transform))}};
  out["degree_filter_percentile"] = cfg.degree_filter_percentile ? Json(*cfg.degree_filter_percentile) : Json();
  out["max_edges"] = cfg.max_edges ? Json(*cfg.max_edges) : Json();
  return out;
}

Json solution_to_json(const Network& net, const Solution& sol) {
  Json edits = Json::array();
  for (const auto& e : sol.edits) {
    const Weight before = net.contains(sol.target) && net.contains(e.u) ? net.weight(sol.target, e.u).value_or(0) : 0;
    edits.push_back(Json{{"u", e.u},
                         {"label", net.contains(e.u) ? net.label(e.u) : std::string()},
                         {"increment", e.increment},
                         {"weight_before", before},
                         {"weight_after", before + e.increment}});
  }
  Json opponents = Json::array();
  for (const auto& r : sol.opponents) {
    opponents.push_back(Json{{"node", r.node},
                             {"label", net.contains(r.node) ? net.label(r.node) : std::string()},
                             {"before", r.before},
                             {"after", r.after},
                             {"pct_change", r.pct_change}});
  }
  Json iterations = Json::array();
  for (const auto& it : sol.iterations) {
    iterations.push_back(Json{{"chosen", it.chosen},
                              {"label", net.contains(it.chosen) ? net.label(it.chosen) : std::string()},
                              {"increment", it.increment},
                              {"target_score", it.target_score},
                              {"candidates_evaluated", it.candidates_evaluated}});
  }
  return Json{{"target", sol.target},
              {"target_label", net.contains(sol.target) ? net.label(sol.target) : std::string()},
              {"budget", sol.budget},
              {"cost", sol.cost},
              {"target_before", sol.target_before},
              {"target_after", sol.target_after},
              {"edits", std::move(edits)},
              {"opponents", std::move(opponents)},
              {"iterations", std::move(iterations)},
              {"terminated_reason", std::string(to_string(sol.terminated))},
              {"search_mismatches", sol.search_mismatches},
              {"pair_convention", kPairConvention}};
}

Solution solution_from_json(const Json& doc) {
  try {
    Solution sol;
    sol.target = doc.at("target").get<NodeId>();
    sol.budget = doc.at("budget").get<Weight>();
    sol.cost = doc.at("cost").get<Weight>();
    sol.target_before = doc.at("target_before").get<double>();
    sol.target_after = doc.at("target_after").get<double>();
    for (const auto& e : doc.at("edits")) {
      sol.edits.push_back(EdgeEdit{e.at("u").get<NodeId>(), e.at("increment").get<Weight>()});
    }
    if (doc.contains("opponents")) {
      for (const auto& r : doc.at("opponents")) {
        sol.opponents.push_back(OpponentReport{r.at("node").get<NodeId>(), r.at("before").get<double>(),
                                               r.at("after").get<double>(), r.at("pct_change").get<double>()});
      }
    }
    if (doc.contains("iterations")) {
      for (const auto& it : doc.at("iterations")) {
        sol.iterations.push_back(IterationRecord{it.at("chosen").get<NodeId>(), it.at("increment").get<Weight>(),
                                                 it.at("target_score").get<double>(),
                                                 it.at("candidates_evaluated").get<std::size_t>()});
      }
    }
    sol.terminated = parse_termination(doc.at("terminated_reason").get<std::string>());
    if (doc.contains("search_mismatches")) sol.search_mismatches = doc.at("search_mismatches").get<std::size_t>();
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadRequest, std::string("not a solution document: ") + e.what());
  }
}

Json path_set_to_json(const Network& net, const PathSet& p) {
  Json paths = Json::array();
  for (const auto& path : p.paths) {
    Json ids = Json::array();
    Json labels = Json::array();
    for (auto x : path) {
      ids.push_back(x);
      labels.push_back(net.label(x));
    }
    paths.push_back(Json{{"nodes", std::move(ids)}, {"labels", std::move(labels)}});
  }
  return Json{{"source", node_entry(net, p.source)},
              {"sink", node_entry(net, p.sink)},
              {"distance", p.distance ? Json(*p.distance) : Json("UNREACHABLE")},
              {"num_shortest", p.num_shortest},
              {"paths", std::move(paths)},
              {"truncated", p.truncated}};
}

Json paths_report_to_json(const Network& net, const PathsReport& r) {
  return Json{{"before", path_set_to_json(net, r.before)},
              {"after", r.after ? path_set_to_json(net, *r.after) : Json()}};
}

Json what_if_to_json(const Network& net, const WhatIfReport& r) {
  return Json{{"a", node_entry(net, r.a)},
              {"b", node_entry(net, r.b)},
              {"old_weight", r.old_weight},
              {"new_weight", r.new_weight},
              {"b_a_before", r.b_a_before},
              {"b_a_after", r.b_a_after},
              {"b_b_before", r.b_b_before},
              {"b_b_after", r.b_b_after},
              {"pair_convention", kPairConvention}};
}

Json sweep_to_json(const Network& net, const SweepReport& report) {
  Json runs = Json::array();
  for (const auto& run : report.runs) {
    Json r{{"budget", run.budget}};
    if (run.solution) {
      r["solution"] = solution_to_json(net, *run.solution);
    } else if (run.error) {
      r["error"] = Json{{"code", run.error->first}, {"message", run.error->second}};
    }
    runs.push_back(std::move(r));
  }
  Json freq = Json::array();
  for (const auto& [label, count] : ranked_frequency(report)) {
    freq.push_back(Json{{"label", label}, {"count", count}});
  }
  return Json{{"budgets", report.budgets}, {"runs", std::move(runs)}, {"frequency", std::move(freq)}};
}

}  // namespace netboost
