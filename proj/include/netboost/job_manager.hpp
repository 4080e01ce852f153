#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "netboost/json_io.hpp"
#include "netboost/network.hpp"
#include "netboost/solver.hpp"

namespace netboost {

enum class JobStatus { Queued, Running, Done, Failed, Cancelled };

std::string_view to_string(JobStatus status);
bool is_terminal(JobStatus status);
/// QUEUED -> RUNNING -> {DONE, FAILED, CANCELLED}, plus QUEUED -> CANCELLED.
bool is_legal_transition(JobStatus from, JobStatus to);

struct JobRequest {
  enum class Kind { Solve, Sweep };
  Kind kind = Kind::Solve;
  SolverConfig config;
  std::vector<Weight> budgets;  // sweep only
};

struct JobSnapshot {
  std::string id;
  std::string network_id;
  JobRequest::Kind kind = JobRequest::Kind::Solve;
  JobStatus status = JobStatus::Queued;
  double progress = 0.0;
  std::size_t iteration = 0;
  std::int64_t created_ms = 0;
  std::int64_t started_ms = 0;   // 0 until RUNNING
  std::int64_t finished_ms = 0;  // 0 until terminal
  Json config;
  std::optional<Solution> solution;  // DONE solve jobs
  Json result;                       // DONE payload
  std::string error_code;            // FAILED
  std::string error_message;
};

/// Serialized job record. Stable once the job is terminal.
Json job_json(const JobSnapshot& job);

/// Runs solver jobs on a fixed pool of workers. Each job owns an immutable
/// network snapshot and a stop source; cancellation is cooperative.
class JobManager {
 public:
  using TransitionObserver = std::function<void(const std::string& id, JobStatus from, JobStatus to)>;
  using DoneSink = std::function<void(const JobSnapshot&)>;

  explicit JobManager(unsigned workers = 2);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  /// Called under the manager lock for every status change; must not call back in.
  void set_transition_observer(TransitionObserver observer);
  /// Called (outside the lock) once per job that reaches DONE.
  void set_done_sink(DoneSink sink);

  std::string submit(std::string network_id, std::shared_ptr<const Network> net, JobRequest request);

  /// Registers a finished job restored from storage.
  void restore(JobSnapshot done);

  std::optional<JobSnapshot> get(const std::string& id) const;
  std::shared_ptr<const Network> network_of(const std::string& id) const;

  /// Returns the status after the request; nullopt for unknown ids.
  /// QUEUED jobs are cancelled at once, RUNNING jobs at their next poll
  /// point, terminal jobs are left as they are.
  std::optional<JobStatus> cancel(const std::string& id);

  /// Blocks until the job is terminal or the timeout passes.
  std::optional<JobSnapshot> wait(const std::string& id, std::chrono::milliseconds timeout) const;

  /// Cancels everything and joins the workers. Idempotent.
  void shutdown();

 private:
  struct Job;

  void worker_loop(std::stop_token stop);
  void run(Job& job);
  void set_status(Job& job, JobStatus to);
  JobSnapshot snapshot(const Job& job) const;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::condition_variable_any work_ready_;
  std::map<std::string, std::unique_ptr<Job>> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_id_ = 1;
  bool stopping_ = false;
  TransitionObserver observer_;
  DoneSink done_sink_;
  std::vector<std::jthread> workers_;
};

}  // namespace netboost
