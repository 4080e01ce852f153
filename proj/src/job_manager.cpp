#include "netboost/job_manager.hpp"

#include <algorithm>
#include <chrono>

#include "netboost/error.hpp"
#include "netboost/scenario.hpp"

namespace netboost {
namespace {

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::Queued: return "QUEUED";
    case JobStatus::Running: return "RUNNING";
    case JobStatus::Done: return "DONE";
    case JobStatus::Failed: return "FAILED";
    case JobStatus::Cancelled: return "CANCELLED";
  }
  return "FAILED";
}

bool is_terminal(JobStatus status) {
  return status == JobStatus::Done || status == JobStatus::Failed || status == JobStatus::Cancelled;
}

bool is_legal_transition(JobStatus from, JobStatus to) {
  switch (from) {
    case JobStatus::Queued: return to == JobStatus::Running || to == JobStatus::Cancelled;
    case JobStatus::Running: return is_terminal(to);
    default: return false;
  }
}

Json job_json(const JobSnapshot& job) {
  Json out{{"job_id", job.id},
           {"network_id", job.network_id},
           {"kind", job.kind == JobRequest::Kind::Solve ? "solve" : "sweep"},
           {"status", std::string(to_string(job.status))},
           {"progress", job.progress},
           {"current_iteration", job.iteration},
           {"created_ms", job.created_ms},
           {"started_ms", job.started_ms},
           {"finished_ms", job.finished_ms},
           {"config", job.config}};
  if (job.status == JobStatus::Done) out["result"] = job.result;
  if (job.status == JobStatus::Failed) out["error"] = Json{{"code", job.error_code}, {"message", job.error_message}};
  return out;
}

struct JobManager::Job {
  JobSnapshot state;
  std::shared_ptr<const Network> net;
  JobRequest request;
  std::stop_source stop;
};

JobManager::JobManager(unsigned workers) {
  workers = std::max(1u, workers);
  for (unsigned i = 0; i < workers; ++i) {
    workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
  }
}

JobManager::~JobManager() { shutdown(); }

void JobManager::set_transition_observer(TransitionObserver observer) {
  std::lock_guard lock(mutex_);
  observer_ = std::move(observer);
}

void JobManager::set_done_sink(DoneSink sink) {
  std::lock_guard lock(mutex_);
  done_sink_ = std::move(sink);
}

std::string JobManager::submit(std::string network_id, std::shared_ptr<const Network> net,
                               JobRequest request) {
  auto job = std::make_unique<Job>();
  job->state.network_id = std::move(network_id);
  job->state.kind = request.kind;
  job->state.created_ms = now_ms();
  job->state.config = config_to_json(*net, request.config);
  if (request.kind == JobRequest::Kind::Sweep) job->state.config["budgets"] = request.budgets;
  job->net = std::move(net);
  job->request = std::move(request);

  std::lock_guard lock(mutex_);
  if (stopping_) throw Error(ErrorCode::Internal, "job manager is shutting down");
  job->state.id = "job-" + std::to_string(next_id_++);
  const auto id = job->state.id;
  jobs_.emplace(id, std::move(job));
  queue_.push_back(id);
  work_ready_.notify_one();
  return id;
}

void JobManager::restore(JobSnapshot done) {
  std::lock_guard lock(mutex_);
  if (done.id.rfind("job-", 0) == 0) {
    try {
      next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(done.id.substr(4)) + 1);
    } catch (const std::exception&) {
    }
  }
  auto job = std::make_unique<Job>();
  job->state = std::move(done);
  const auto id = job->state.id;
  jobs_[id] = std::move(job);
}

std::optional<JobSnapshot> JobManager::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return snapshot(*it->second);
}

std::shared_ptr<const Network> JobManager::network_of(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second->net;
}

std::optional<JobStatus> JobManager::cancel(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  auto& job = *it->second;
  if (job.state.status == JobStatus::Queued) {
    std::erase(queue_, id);
    set_status(job, JobStatus::Cancelled);
  } else if (job.state.status == JobStatus::Running) {
    job.stop.request_stop();
  }
  return job.state.status;
}

std::optional<JobSnapshot> JobManager::wait(const std::string& id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  const auto& job = *it->second;
  changed_.wait_for(lock, timeout, [&] { return is_terminal(job.state.status); });
  return snapshot(job);
}

void JobManager::shutdown() {
  {
    std::lock_guard lock(mutex_);
    if (stopping_ && workers_.empty()) return;
    stopping_ = true;
    for (auto& id : queue_) set_status(*jobs_.at(id), JobStatus::Cancelled);
    queue_.clear();
    for (auto& [id, job] : jobs_) {
      if (job->state.status == JobStatus::Running) job->stop.request_stop();
    }
  }
  for (auto& w : workers_) w.request_stop();
  work_ready_.notify_all();
  workers_.clear();
}

void JobManager::set_status(Job& job, JobStatus to) {
  const auto from = job.state.status;
  if (!is_legal_transition(from, to)) {
    throw Error(ErrorCode::Internal, "illegal job transition " + std::string(to_string(from)) + " -> " +
                                         std::string(to_string(to)));
  }
  job.state.status = to;
  if (to == JobStatus::Running) job.state.started_ms = now_ms();
  if (is_terminal(to)) {
    job.state.finished_ms = now_ms();
    if (to == JobStatus::Done) job.state.progress = 1.0;
  }
  if (observer_) observer_(job.state.id, from, to);
  changed_.notify_all();
}

JobSnapshot JobManager::snapshot(const Job& job) const { return job.state; }

void JobManager::worker_loop(std::stop_token stop) {
  while (true) {
    Job* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      if (!work_ready_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
      job = jobs_.at(queue_.front()).get();
      queue_.pop_front();
      set_status(*job, JobStatus::Running);
    }
    run(*job);
  }
}

void JobManager::run(Job& job) {
  const auto& net = *job.net;
  const auto& req = job.request;
  const auto token = job.stop.get_token();

  auto report = [&](double fraction, std::size_t iteration) {
    std::lock_guard lock(mutex_);
    if (job.state.status != JobStatus::Running) return;
    job.state.progress = std::clamp(std::max(job.state.progress, fraction), 0.0, 1.0);
    job.state.iteration = iteration;
  };

  JobStatus outcome = JobStatus::Done;
  Json result;
  std::optional<Solution> solution;
  std::string code;
  std::string message;
  try {
    if (req.kind == JobRequest::Kind::Solve) {
      auto sol = solve_co_mbi(net, req.config,
                              [&](const ProgressEvent& ev) {
                                report(static_cast<double>(ev.cost) / static_cast<double>(ev.budget), ev.iteration);
                              },
                              token);
      if (sol.terminated == TerminationReason::Cancelled) {
        outcome = JobStatus::Cancelled;
      } else if (auto bad = solution_violations(net, req.config, sol); !bad.empty()) {
        outcome = JobStatus::Failed;
        code = std::string(to_string(ErrorCode::Internal));
        message = "solution failed revalidation: " + bad.front();
      } else {
        result = solution_to_json(net, sol);
        solution = std::move(sol);
      }
    } else {
      const double runs = static_cast<double>(req.budgets.size());
      auto sweep = run_budget_sweep(net, req.config, req.budgets,
                                    [&](const SweepProgress& p) {
                                      const double inner = static_cast<double>(p.inner.cost) /
                                                           static_cast<double>(p.inner.budget);
                                      report((static_cast<double>(p.run) + inner) / runs, p.inner.iteration);
                                    },
                                    token);
      if (token.stop_requested()) {
        outcome = JobStatus::Cancelled;
      } else {
        for (const auto& run : sweep.runs) {
          if (!run.solution) continue;
          auto cfg = req.config;
          cfg.budget = run.budget;
          if (auto bad = solution_violations(net, cfg, *run.solution); !bad.empty()) {
            outcome = JobStatus::Failed;
            code = std::string(to_string(ErrorCode::Internal));
            message = "sweep run failed revalidation: " + bad.front();
            break;
          }
        }
        if (outcome == JobStatus::Done) result = sweep_to_json(net, sweep);
      }
    }
  } catch (const Error& e) {
    outcome = JobStatus::Failed;
    code = std::string(to_string(e.code()));
    message = e.what();
  } catch (const std::exception& e) {
    outcome = JobStatus::Failed;
    code = std::string(to_string(ErrorCode::Internal));
    message = e.what();
  }

  DoneSink sink;
  JobSnapshot done;
  {
    std::lock_guard lock(mutex_);
    job.state.result = std::move(result);
    job.state.solution = std::move(solution);
    job.state.error_code = std::move(code);
    job.state.error_message = std::move(message);
    set_status(job, outcome);
    if (outcome == JobStatus::Done && done_sink_) {
      sink = done_sink_;
      done = job.state;
    }
  }
  if (sink) sink(done);
}

}  // namespace netboost
