// netboost: command-line front end for betweenness analysis and the
// budgeted betweenness-improvement solver.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "netboost/bench.hpp"
#include "netboost/error.hpp"
#include "netboost/json_io.hpp"
#include "netboost/pajek.hpp"
#include "netboost/scenario.hpp"
#include "netboost/service.hpp"
#include "netboost/solver.hpp"

using namespace netboost;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network load_network(const std::string& path) { return parse_pajek(read_file(path)); }

NodeId node_arg(const Network& net, const std::string& ref, ErrorCode missing = ErrorCode::UnknownNode) {
  if (auto id = resolve_node(net, ref)) return *id;
  throw Error(missing, "no node '" + ref + "'");
}

std::set<NodeId> node_list(const Network& net, const std::string& csv) {
  std::set<NodeId> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(node_arg(net, item));
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(10) << x;
  return ss.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct SolverFlags {
  std::string net_path;
  std::string target;
  std::string mode = "both";
  std::string opponents;
  std::string strategy = "no-increment";
  std::string forbidden;
  double p_imp = 0.01;
  std::optional<double> degree_filter;
  std::optional<std::size_t> max_edges;
  bool no_binary_search = false;
  bool validate_search = false;
  std::string transform = "reciprocal";
  unsigned threads = 0;
  std::string format = "table";

  void attach(CLI::App* cmd) {
    cmd->add_option("--net", net_path, "NET file")->required();
    cmd->add_option("--target", target, "target node label or id")->required();
    cmd->add_option("--mode", mode, "change-weight | new-connection | both");
    cmd->add_option("--opponents", opponents, "comma-separated opponent nodes");
    cmd->add_option("--strategy", strategy, "no-increment | upper-bound:B | delta:P | delta-ratio:R");
    cmd->add_option("--forbidden", forbidden, "comma-separated forbidden nodes");
    cmd->add_option("--p-imp", p_imp, "relative improvement threshold");
    cmd->add_option("--degree-filter", degree_filter, "weighted-degree percentile for new connections");
    cmd->add_option("--max-edges", max_edges, "cap on edited edges");
    cmd->add_flag("--no-binary-search", no_binary_search, "spend the whole remaining budget per probe");
    cmd->add_flag("--validate-search", validate_search, "cross-check each binary search with a linear scan");
    cmd->add_option("--transform", transform, "reciprocal | identity");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd->add_option("--format", format, "json | csv | table");
  }

  SolverConfig config(const Network& net) const {
    SolverConfig cfg;
    cfg.target = node_arg(net, target, ErrorCode::UnknownTarget);
    cfg.mode = parse_mode(mode);
    cfg.opponents = node_list(net, opponents);
    cfg.opponent_strategy = parse_strategy(strategy);
    cfg.forbidden = node_list(net, forbidden);
    cfg.p_imp = p_imp;
    cfg.degree_filter_percentile = degree_filter;
    cfg.max_edges = max_edges;
    cfg.use_binary_search = !no_binary_search;
    cfg.validate_search = validate_search;
    cfg.transform = parse_transform(transform);
    cfg.threads = threads;
    return cfg;
  }
};

void check_format(const std::string& format) {
  if (format != "json" && format != "csv" && format != "table") {
    throw Error(ErrorCode::InvalidConfig, "unknown format '" + format + "'");
  }
}

void print_solution(const Network& net, const Solution& sol, const std::string& format) {
  if (format == "json") {
    std::cout << solution_to_json(net, sol).dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    std::cout << "u,label,increment,weight_before,weight_after\n";
    for (const auto& e : sol.edits) {
      const Weight before = net.weight(sol.target, e.u).value_or(0);
      std::cout << e.u << ',' << csv_field(net.label(e.u)) << ',' << e.increment << ',' << before << ','
                << before + e.increment << '\n';
    }
    return;
  }
  std::cout << "target      " << net.label(sol.target) << " (" << sol.target << ")\n"
            << "betweenness " << fmt(sol.target_before) << " -> " << fmt(sol.target_after) << '\n'
            << "budget used " << sol.cost << " / " << sol.budget << '\n'
            << "stopped     " << to_string(sol.terminated) << '\n';
  if (sol.edits.empty()) {
    std::cout << "no edits\n";
  } else {
    std::cout << "\n  node                 weight     increment\n";
    for (const auto& e : sol.edits) {
      const Weight before = net.weight(sol.target, e.u).value_or(0);
      std::ostringstream w;
      w << before << " -> " << before + e.increment;
      std::cout << "  " << std::left << std::setw(20) << net.label(e.u) << ' ' << std::setw(10) << w.str()
                << " +" << e.increment << '\n';
    }
  }
  if (!sol.opponents.empty()) {
    std::cout << "\n  opponent             before       after        change\n";
    for (const auto& r : sol.opponents) {
      std::cout << "  " << std::left << std::setw(20) << net.label(r.node) << ' ' << std::setw(12) << fmt(r.before)
                << ' ' << std::setw(12) << fmt(r.after) << ' ' << std::showpos << fmt(r.pct_change)
                << std::noshowpos << "%\n";
    }
  }
  if (sol.search_mismatches > 0) {
    std::cout << "\nbinary search disagreed with a linear scan " << sol.search_mismatches << " time(s)\n";
  }
}

void print_path_set(const Network& net, const PathSet& p, const char* heading) {
  std::cout << heading << ": ";
  if (!p.distance) {
    std::cout << "UNREACHABLE\n";
    return;
  }
  std::cout << "distance " << fmt(*p.distance) << ", " << p.num_shortest << " shortest path(s)\n";
  for (const auto& path : p.paths) {
    std::cout << "  ";
    for (std::size_t i = 0; i < path.size(); ++i) std::cout << (i ? " - " : "") << net.label(path[i]);
    std::cout << '\n';
  }
  if (p.truncated) std::cout << "  ... (truncated)\n";
}

int serve(const std::string& addr, unsigned workers, unsigned threads, const std::string& data_dir) {
  const auto [host, port] = parse_listen_address(addr);

  // Route SIGINT/SIGTERM to a dedicated thread so shutdown runs outside a signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceOptions options;
  options.workers = workers;
  options.solver_threads = threads;
  if (!data_dir.empty()) options.data_dir = data_dir;
  Service service(options);
  const int bound = service.bind(host, port);
  std::cerr << "netboost listening on " << host << ':' << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down" << std::endl;
    service.stop();
  });
  service.run();
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted betweenness analysis and budgeted betweenness improvement"};
  app.require_subcommand(1);

  std::string net_path;
  std::string transform = "reciprocal";
  unsigned threads = 0;
  std::string format = "table";

  auto* btw = app.add_subcommand("betweenness", "betweenness of every node, highest first");
  std::optional<std::size_t> top;
  btw->add_option("--net", net_path, "NET file")->required();
  btw->add_option("--transform", transform, "reciprocal | identity");
  btw->add_option("--top", top, "only the N highest");
  btw->add_option("--threads", threads, "worker threads (0 = all cores)");
  btw->add_option("--format", format, "json | csv | table");

  SolverFlags solve_flags;
  std::uint64_t budget = 0;
  auto* solve = app.add_subcommand("solve", "improve a target's betweenness under a budget");
  solve_flags.attach(solve);
  solve->add_option("--budget", budget, "total weight increment")->required();

  SolverFlags sweep_flags;
  std::string budgets_text;
  auto* sweep = app.add_subcommand("sweep", "solve for a range of budgets and count edited nodes");
  sweep_flags.attach(sweep);
  sweep->add_option("--budgets", budgets_text, "start:stop:step (inclusive)")->required();

  std::size_t k = 1;
  std::uint64_t delta = 1;
  std::string mbi_target;
  auto* mbi = app.add_subcommand("mbi", "fixed-weight greedy edge addition");
  mbi->add_option("--net", net_path, "NET file")->required();
  mbi->add_option("--target", mbi_target, "target node")->required();
  mbi->add_option("--k", k, "number of edges to add");
  mbi->add_option("--delta", delta, "weight of each new edge");
  mbi->add_option("--transform", transform, "reciprocal | identity");
  mbi->add_option("--threads", threads, "worker threads (0 = all cores)");
  mbi->add_option("--format", format, "json | csv | table");

  std::string a_ref, b_ref;
  std::uint64_t new_weight = 0;
  auto* whatif = app.add_subcommand("what-if", "betweenness of two nodes after setting their edge weight");
  whatif->add_option("--net", net_path, "NET file")->required();
  whatif->add_option("--a", a_ref, "first node")->required();
  whatif->add_option("--b", b_ref, "second node")->required();
  whatif->add_option("--weight", new_weight, "new weight (0 removes the edge)")->required();
  whatif->add_option("--transform", transform, "reciprocal | identity");
  whatif->add_option("--format", format, "json | table");

  std::string s_ref, t_ref, solution_path;
  std::size_t max_paths = 100;
  auto* paths = app.add_subcommand("paths", "all shortest paths between two nodes");
  paths->add_option("--net", net_path, "NET file")->required();
  paths->add_option("--s", s_ref, "source node")->required();
  paths->add_option("--t", t_ref, "sink node")->required();
  paths->add_option("--solution", solution_path, "solution JSON from solve --format json");
  paths->add_option("--max-paths", max_paths, "paths to list per side");
  paths->add_option("--transform", transform, "reciprocal | identity");
  paths->add_option("--format", format, "json | table");

  std::string scale = "net1";
  bool matrix = false;
  std::uint64_t seed = kDefaultBenchSeed;
  unsigned repeats = 1;
  unsigned bench_threads = 1;
  std::string write_net;
  auto* bench = app.add_subcommand("bench", "synthetic benchmark at the size of a reference network");
  bench->add_option("--scale", scale, "net1 | net2 | net3");
  bench->add_flag("--matrix", matrix, "run tier x mode x binary search x budget and print CSV");
  bench->add_option("--seed", seed, "generator seed");
  bench->add_option("--repeats", repeats, "timed runs per row; the fastest is reported");
  bench->add_option("--threads", bench_threads, "solver threads (0 = all cores)");
  bench->add_option("--write-net", write_net, "also save the generated network");

  std::string addr;
  unsigned workers = 2;
  std::string data_dir;
  auto* srv = app.add_subcommand("serve", "start the HTTP service");
  srv->add_option("--addr", addr, "HOST:PORT (default $NETBOOST_ADDR or 127.0.0.1:8080)");
  srv->add_option("--workers", workers, "concurrent jobs");
  srv->add_option("--threads", threads, "solver threads per job");
  srv->add_option("--data-dir", data_dir, "directory for network and result snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*btw) {
      check_format(format);
      const auto net = load_network(net_path);
      const auto scores = betweenness_all(net, parse_transform(transform), threads);
      std::vector<NodeId> order(net.node_count());
      for (NodeId i = 0; i < order.size(); ++i) order[i] = i + 1;
      std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) { return scores[x] > scores[y]; });
      if (top && *top < order.size()) order.resize(*top);
      if (format == "json") {
        Json rows = Json::array();
        for (auto x : order) rows.push_back(Json{{"node", x}, {"label", net.label(x)}, {"betweenness", scores[x]}});
        std::cout << Json{{"pair_convention", kPairConvention}, {"nodes", rows}}.dump(2) << '\n';
      } else if (format == "csv") {
        std::cout << "node,label,betweenness\n";
        for (auto x : order) std::cout << x << ',' << csv_field(net.label(x)) << ',' << fmt(scores[x]) << '\n';
      } else {
        for (auto x : order) {
          std::cout << std::setw(6) << x << "  " << std::left << std::setw(24) << net.label(x) << std::right << ' '
                    << fmt(scores[x]) << '\n';
        }
      }
    } else if (*solve) {
      check_format(solve_flags.format);
      const auto net = load_network(solve_flags.net_path);
      auto cfg = solve_flags.config(net);
      cfg.budget = budget;
      const auto sol = solve_co_mbi(net, cfg);
      print_solution(net, sol, solve_flags.format);
    } else if (*sweep) {
      check_format(sweep_flags.format);
      const auto net = load_network(sweep_flags.net_path);
      const auto budgets = parse_budget_range(budgets_text);
      auto cfg = sweep_flags.config(net);
      cfg.budget = budgets.front();
      const auto report = run_budget_sweep(net, cfg, budgets);
      if (sweep_flags.format == "json") {
        std::cout << sweep_to_json(net, report).dump(2) << '\n';
      } else {
        if (sweep_flags.format == "csv") std::cout << "label,count\n";
        for (const auto& [label, count] : ranked_frequency(report)) {
          if (sweep_flags.format == "csv") {
            std::cout << csv_field(label) << ',' << count << '\n';
          } else {
            std::cout << std::left << std::setw(24) << label << ' ' << count << '\n';
          }
        }
        for (const auto& run : report.runs) {
          if (run.error) std::cerr << "budget " << run.budget << " failed: " << run.error->second << '\n';
        }
      }
    } else if (*mbi) {
      check_format(format);
      const auto net = load_network(net_path);
      const auto target = node_arg(net, mbi_target, ErrorCode::UnknownTarget);
      const auto sol = solve_mbi_greedy(net, target, k, delta, parse_transform(transform), threads);
      print_solution(net, sol, format);
    } else if (*whatif) {
      const auto net = load_network(net_path);
      const auto r = what_if_edge(net, node_arg(net, a_ref), node_arg(net, b_ref), new_weight,
                                  parse_transform(transform));
      if (format == "json") {
        std::cout << what_if_to_json(net, r).dump(2) << '\n';
      } else {
        std::cout << "edge " << net.label(r.a) << " - " << net.label(r.b) << ": weight " << r.old_weight << " -> "
                  << r.new_weight << '\n'
                  << "  " << net.label(r.a) << ": " << fmt(r.b_a_before) << " -> " << fmt(r.b_a_after) << '\n'
                  << "  " << net.label(r.b) << ": " << fmt(r.b_b_before) << " -> " << fmt(r.b_b_after) << '\n';
      }
    } else if (*paths) {
      const auto net = load_network(net_path);
      std::optional<Solution> solution;
      if (!solution_path.empty()) {
        try {
          solution = solution_from_json(Json::parse(read_file(solution_path)));
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorCode::BadRequest, "solution file is not JSON: " + std::string(e.what()));
        }
      }
      const auto report = paths_report(net, solution ? &*solution : nullptr, node_arg(net, s_ref),
                                       node_arg(net, t_ref), parse_transform(transform), max_paths);
      if (format == "json") {
        std::cout << paths_report_to_json(net, report).dump(2) << '\n';
      } else {
        print_path_set(net, report.before, "before");
        if (report.after) print_path_set(net, *report.after, "after");
      }
    } else if (*bench) {
      const auto sized = bench_scale(scale);
      const auto net = generate_bench_network(sized.nodes, sized.edges, seed);
      if (!write_net.empty()) {
        std::ofstream out(write_net, std::ios::binary);
        out << serialize_pajek(net);
      }
      const auto scores = betweenness_all(net, DistanceTransform::Reciprocal, bench_threads);
      const auto targets = select_bench_targets(scores);
      std::cerr << sized.name << ": " << net.node_count() << " nodes, " << net.edge_count() << " edges\n";
      for (auto [tier, id] : {std::pair{"MIN", targets.min}, std::pair{"LOW", targets.low},
                              std::pair{"MEDIUM", targets.medium}, std::pair{"MAX", targets.max}}) {
        std::cerr << "  " << std::left << std::setw(7) << tier << net.label(id) << "  betweenness " << fmt(scores[id])
                  << ", degree " << net.neighbors(id).size() << '\n';
      }
      if (matrix) {
        BenchOptions options;
        options.repeats = repeats;
        options.threads = bench_threads;
        std::cout << "tier,mode,binary_search,budget,seconds\n" << std::flush;
        options.on_row = [](const BenchRow& r) {
          std::cout << bench_csv({r}).substr(std::string_view("tier,mode,binary_search,budget,seconds\n").size())
                    << std::flush;
        };
        run_bench_matrix(net, targets, options);
      }
    } else if (*srv) {
      if (addr.empty()) {
        const char* env = std::getenv("NETBOOST_ADDR");
        addr = env && *env ? env : "127.0.0.1:8080";
      }
      return serve(addr, workers, threads == 0 ? 1 : threads, data_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Internal ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
