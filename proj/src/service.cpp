#include "netboost/service.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <shared_mutex>
#include <sstream>

#include "httplib.h"
#include "netboost/error.hpp"
#include "netboost/json_io.hpp"
#include "netboost/pajek.hpp"
#include "netboost/scenario.hpp"

namespace netboost {
namespace fs = std::filesystem;

std::pair<std::string, int> parse_listen_address(std::string_view text) {
  std::string host = "127.0.0.1";
  std::string_view port_text = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = -1;
  const auto* end = port_text.data() + port_text.size();
  auto [ptr, ec] = std::from_chars(port_text.data(), end, port);
  if (ec != std::errc{} || ptr != end || port < 0 || port > 65535 || host.empty()) {
    throw Error(ErrorCode::InvalidConfig, "bad listen address '" + std::string(text) + "', expected HOST:PORT");
  }
  return {host, port};
}

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNetwork:
    case ErrorCode::UnknownJob: return 404;
    case ErrorCode::Internal: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code), error_json(code, message));
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    auto body = Json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    return body;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("invalid JSON: ") + e.what());
  }
}

DistanceTransform transform_field(const Json& body, DistanceTransform fallback) {
  if (!body.contains("transform") || body.at("transform").is_null()) return fallback;
  if (!body.at("transform").is_string()) throw Error(ErrorCode::BadRequest, "transform must be a string");
  try {
    return parse_transform(body.at("transform").get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::BadRequest, e.what());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  const auto tmp = fs::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  fs::rename(tmp, path);
}

std::uint64_t id_number(const std::string& id, std::string_view prefix) {
  if (id.rfind(prefix, 0) != 0) return 0;
  std::uint64_t n = 0;
  const auto* begin = id.data() + prefix.size();
  std::from_chars(begin, id.data() + id.size(), n);
  return n;
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;
  JobManager jobs;
  mutable std::shared_mutex networks_mutex;
  std::map<std::string, std::shared_ptr<const Network>> networks;
  std::uint64_t next_network = 1;

  explicit Impl(ServiceOptions opts) : options(std::move(opts)), jobs(options.workers) {
    if (options.data_dir) load_snapshots();
    routes();
  }

  std::shared_ptr<const Network> network(const std::string& id) const {
    std::shared_lock lock(networks_mutex);
    auto it = networks.find(id);
    if (it == networks.end()) throw Error(ErrorCode::UnknownNetwork, "no network '" + id + "'");
    return it->second;
  }

  std::string add_network(std::shared_ptr<const Network> net) {
    std::unique_lock lock(networks_mutex);
    auto id = "net-" + std::to_string(next_network++);
    if (options.data_dir) write_file(*options.data_dir / "networks" / (id + ".net"), serialize_pajek(*net));
    networks.emplace(id, std::move(net));
    return id;
  }

  void load_snapshots() {
    const auto& dir = *options.data_dir;
    fs::create_directories(dir / "networks");
    fs::create_directories(dir / "jobs");
    for (const auto& entry : fs::directory_iterator(dir / "networks")) {
      if (entry.path().extension() != ".net") continue;
      const auto id = entry.path().stem().string();
      networks.emplace(id, std::make_shared<const Network>(parse_pajek(read_file(entry.path()))));
      next_network = std::max(next_network, id_number(id, "net-") + 1);
    }
    for (const auto& entry : fs::directory_iterator(dir / "jobs")) {
      if (entry.path().extension() != ".json") continue;
      const auto doc = Json::parse(read_file(entry.path()));
      JobSnapshot job;
      job.id = doc.at("job_id").get<std::string>();
      job.network_id = doc.at("network_id").get<std::string>();
      job.kind = doc.at("kind").get<std::string>() == "sweep" ? JobRequest::Kind::Sweep : JobRequest::Kind::Solve;
      job.status = JobStatus::Done;
      job.progress = 1.0;
      job.iteration = doc.value("current_iteration", std::size_t{0});
      job.created_ms = doc.value("created_ms", std::int64_t{0});
      job.started_ms = doc.value("started_ms", std::int64_t{0});
      job.finished_ms = doc.value("finished_ms", std::int64_t{0});
      job.config = doc.at("config");
      job.result = doc.at("result");
      if (job.kind == JobRequest::Kind::Solve) job.solution = solution_from_json(job.result);
      jobs.restore(std::move(job));
    }
    jobs.set_done_sink([dir](const JobSnapshot& job) {
      write_file(dir / "jobs" / (job.id + ".json"), job_json(job).dump());
    });
  }

  template <typename Fn>
  auto guarded(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        send_error(res, ErrorCode::Internal, e.what());
      }
    };
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty() && res.status == 404) {
        res.set_content(error_json(ErrorCode::BadRequest, "no route for " + req.method + " " + req.path).dump(),
                        "application/json");
      }
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, Json{{"status", "ok"}});
    });

    server.Post("/networks", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto net = std::make_shared<const Network>(parse_pajek(req.body));
      const auto id = add_network(net);
      send_json(res, 201, Json{{"network_id", id}, {"n_nodes", net->node_count()}, {"n_edges", net->edge_count()}});
    }));

    server.Get("/networks", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      std::shared_lock lock(networks_mutex);
      for (const auto& [id, net] : networks) {
        list.push_back(Json{{"network_id", id}, {"n_nodes", net->node_count()}, {"n_edges", net->edge_count()}});
      }
      send_json(res, 200, list);
    }));

    server.Get(R"(/networks/([^/]+)/graph)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto net = network(req.matches[1]);
      const auto flag = req.get_param_value("with_betweenness");
      auto transform = DistanceTransform::Reciprocal;
      if (req.has_param("transform")) {
        try {
          transform = parse_transform(req.get_param_value("transform"));
        } catch (const Error& e) {
          throw Error(ErrorCode::BadRequest, e.what());
        }
      }
      if (flag == "true" || flag == "1") {
        const auto scores = betweenness_all(*net, transform, options.solver_threads);
        auto body = graph_json(*net, &scores);
        body["transform"] = std::string(to_string(transform));
        send_json(res, 200, body);
      } else {
        send_json(res, 200, graph_json(*net));
      }
    }));

    server.Post(R"(/networks/([^/]+)/jobs)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string network_id = req.matches[1];
      const auto net = network(network_id);
      auto body = parse_body(req);
      JobRequest request;
      const auto kind = body.value("kind", std::string("solve"));
      if (kind == "sweep") {
        request.kind = JobRequest::Kind::Sweep;
        if (!body.contains("budgets")) throw Error(ErrorCode::InvalidConfig, "sweep needs 'budgets'");
        const auto& b = body.at("budgets");
        if (b.is_string()) {
          request.budgets = parse_budget_range(b.get<std::string>());
        } else if (b.is_array() && !b.empty()) {
          for (const auto& x : b) {
            if (!x.is_number_integer() || x.get<std::int64_t>() < 1) {
              throw Error(ErrorCode::InvalidConfig, "budgets must be positive integers");
            }
            request.budgets.push_back(x.get<Weight>());
          }
        } else {
          throw Error(ErrorCode::InvalidConfig, "budgets must be a non-empty list or start:stop:step");
        }
        if (!body.contains("budget")) body["budget"] = request.budgets.front();
      } else if (kind != "solve") {
        throw Error(ErrorCode::InvalidConfig, "kind must be 'solve' or 'sweep'");
      }
      request.config = config_from_json(*net, body);
      request.config.threads = options.solver_threads;
      const auto id = jobs.submit(network_id, net, std::move(request));
      send_json(res, 202, Json{{"job_id", id}, {"status", "QUEUED"}});
    }));

    server.Get(R"(/jobs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto job = jobs.get(req.matches[1]);
      if (!job) throw Error(ErrorCode::UnknownJob, "no job '" + std::string(req.matches[1]) + "'");
      send_json(res, 200, job_json(*job));
    }));

    server.Post(R"(/jobs/([^/]+)/cancel)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto status = jobs.cancel(id);
      if (!status) throw Error(ErrorCode::UnknownJob, "no job '" + id + "'");
      send_json(res, 200, Json{{"job_id", id}, {"status", std::string(to_string(*status))}, {"acknowledged", true}});
    }));

    server.Post(R"(/networks/([^/]+)/shortest-paths)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string network_id = req.matches[1];
      const auto net = network(network_id);
      const auto body = parse_body(req);
      if (!body.contains("s") || !body.contains("t")) throw Error(ErrorCode::BadRequest, "need 's' and 't'");
      const auto s = node_from_json(*net, body.at("s"));
      const auto t = node_from_json(*net, body.at("t"));
      auto transform = DistanceTransform::Reciprocal;
      std::optional<Solution> solution;
      if (body.contains("job_id") && !body.at("job_id").is_null()) {
        const auto job_id = body.at("job_id").get<std::string>();
        const auto job = jobs.get(job_id);
        if (!job) throw Error(ErrorCode::UnknownJob, "no job '" + job_id + "'");
        if (job->network_id != network_id) throw Error(ErrorCode::BadRequest, "job belongs to another network");
        if (job->status != JobStatus::Done || !job->solution) {
          throw Error(ErrorCode::BadRequest, "job " + job_id + " has no finished solution");
        }
        solution = job->solution;
        transform = parse_transform(job->config.value("transform", std::string("reciprocal")));
      }
      transform = transform_field(body, transform);
      std::size_t max_paths = options.default_max_paths;
      if (body.contains("max_paths")) {
        const auto m = body.at("max_paths");
        if (!m.is_number_integer() || m.get<std::int64_t>() < 1) throw Error(ErrorCode::BadRequest, "max_paths must be positive");
        max_paths = m.get<std::size_t>();
      }
      const auto report = paths_report(*net, solution ? &*solution : nullptr, s, t, transform, max_paths);
      send_json(res, 200, paths_report_to_json(*net, report));
    }));

    server.Post(R"(/networks/([^/]+)/what-if)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto net = network(req.matches[1]);
      const auto body = parse_body(req);
      if (!body.contains("a") || !body.contains("b") || !body.contains("new_weight")) {
        throw Error(ErrorCode::BadRequest, "need 'a', 'b' and 'new_weight'");
      }
      const auto a = node_from_json(*net, body.at("a"));
      const auto b = node_from_json(*net, body.at("b"));
      const auto& w = body.at("new_weight");
      if (!w.is_number_integer() || w.get<std::int64_t>() < 0) {
        throw Error(ErrorCode::BadRequest, "new_weight must be a nonnegative integer");
      }
      const auto report = what_if_edge(*net, a, b, w.get<Weight>(), transform_field(body, DistanceTransform::Reciprocal));
      send_json(res, 200, what_if_to_json(*net, report));
    }));
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::InvalidConfig, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
  impl_->server.stop();
  impl_->jobs.shutdown();
}

JobManager& Service::jobs() { return impl_->jobs; }

}  // namespace netboost
