#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"
#include "netboost/json_io.hpp"
#include "netboost/service.hpp"

namespace testsupport {

/// A Service on an ephemeral loopback port, served from a background thread.
class RunningService {
 public:
  explicit RunningService(netboost::ServiceOptions options = {})
      : service_(std::move(options)), port_(service_.bind("127.0.0.1", 0)), thread_([this] { service_.run(); }) {}

  ~RunningService() {
    service_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  netboost::Service& service() { return service_; }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(5);
    c.set_read_timeout(30);
    return c;
  }

 private:
  netboost::Service service_;
  int port_;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  netboost::Json body;
  std::string raw;
};

inline Reply to_reply(const httplib::Result& res) {
  if (!res) throw std::runtime_error("HTTP request failed: " + httplib::to_string(res.error()));
  Reply r{res->status, nullptr, res->body};
  if (!res->body.empty()) r.body = netboost::Json::parse(res->body, nullptr, false);
  return r;
}

inline Reply get(httplib::Client& c, const std::string& path) { return to_reply(c.Get(path)); }

inline Reply post(httplib::Client& c, const std::string& path, const std::string& body,
                  const char* type = "application/json") {
  return to_reply(c.Post(path, body, type));
}

inline Reply post_json(httplib::Client& c, const std::string& path, const netboost::Json& body) {
  return post(c, path, body.dump());
}

/// Polls GET /jobs/{id} until the job is terminal. Returns the last record.
inline netboost::Json poll_until_terminal(httplib::Client& c, const std::string& job_id,
                                          std::chrono::milliseconds limit = std::chrono::seconds(60)) {
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (true) {
    auto r = get(c, "/jobs/" + job_id);
    const auto status = r.body.value("status", std::string());
    if (status == "DONE" || status == "FAILED" || status == "CANCELLED") return r.body;
    if (std::chrono::steady_clock::now() > deadline) throw std::runtime_error("job " + job_id + " did not finish");
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

}  // namespace testsupport
