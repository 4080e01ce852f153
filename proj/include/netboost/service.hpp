#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "netboost/job_manager.hpp"

namespace netboost {

/// "host:port", ":port" or "port". Throws Error(InvalidConfig).
std::pair<std::string, int> parse_listen_address(std::string_view text);

struct ServiceOptions {
  unsigned workers = 2;
  unsigned solver_threads = 1;
  std::optional<std::filesystem::path> data_dir;
  std::size_t default_max_paths = 1000;
};

/// HTTP front end: networks, solver jobs and scenario analyses.
///
///   POST /networks                        NET document -> {network_id, n_nodes, n_edges}
///   GET  /networks                        summaries
///   GET  /networks/{id}/graph             ?with_betweenness=true&transform=...
///   POST /networks/{id}/jobs              solve or sweep request -> 202 {job_id}
///   GET  /jobs/{id}                       job record
///   POST /jobs/{id}/cancel
///   POST /networks/{id}/shortest-paths    {s, t, job_id?, max_paths?, transform?}
///   POST /networks/{id}/what-if           {a, b, new_weight, transform?}
///
/// Errors are {code, message} with 400, 404 or 500.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; port 0 picks a free one. Returns the bound port.
  /// Throws Error(InvalidConfig) when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void run();
  /// Stops accepting requests and cancels running jobs. Safe from any thread.
  void stop();

  JobManager& jobs();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netboost
