#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "fairsched/core_model.hpp"
#include "fairsched/engine.hpp"
#include "fairsched/random.hpp"
#include "fairsched/trials.hpp"

namespace fairsched {

struct DurationModel {
  enum class Kind { deterministic, exponential };
  Kind kind = Kind::deterministic;
  double mean = 10.0;

  friend bool operator==(const DurationModel&, const DurationModel&) = default;
};

// A submission group ("role"): queues of identical jobs. Each job is one framework.
struct RoleSpec {
  std::string name;
  ResourceVector executor_demand;
  std::int64_t tasks_per_job = 1;
  DurationModel duration;
  std::optional<std::int64_t> max_executors_per_job;  // unset: unlimited
  std::int64_t queues = 1;
  std::int64_t jobs_per_queue = 1;
  // CPUs one task occupies; unset means a task takes the whole executor. Concurrent
  // slots per executor = floor(executor CPUs / task CPUs), CPUs being resource 0.
  std::optional<Rational> task_cpus;

  std::int64_t slots_per_executor() const {
    if (!task_cpus) return 1;
    return std::max<std::int64_t>(1, (executor_demand[0] / *task_cpus).floor());
  }

  void validate() const {
    if (tasks_per_job < 1) throw config_error("role " + name + ": tasks_per_job must be >= 1");
    if (!(duration.mean > 0)) throw config_error("role " + name + ": task duration must be > 0");
    if (queues < 1 || jobs_per_queue < 1)
      throw config_error("role " + name + ": queues and jobs_per_queue must be >= 1");
    if (max_executors_per_job && *max_executors_per_job < 1)
      throw config_error("role " + name + ": max_executors_per_job must be >= 1");
    if (!executor_demand.any_positive()) throw invalid_framework("role " + name + " demands nothing");
    if (task_cpus && *task_cpus <= 0) throw config_error("role " + name + ": task_cpus must be > 0");
  }

  friend bool operator==(const RoleSpec&, const RoleSpec&) = default;
};

struct Registration {
  double time = 0;
  std::size_t server = 0;  // index into the scenario's server list

  friend bool operator==(const Registration&, const Registration&) = default;
};

struct OnlineScenario {
  std::vector<std::string> resources;
  std::vector<ResourceVector> servers;
  std::vector<RoleSpec> roles;
  std::vector<Registration> registrations;  // empty: every server registers at t = 0

  ResourceVector total_capacity() const {
    ResourceVector t(resources.size());
    for (const auto& s : servers) t += s;
    return t;
  }
  std::int64_t total_jobs() const {
    std::int64_t n = 0;
    for (const auto& r : roles) n += r.queues * r.jobs_per_queue;
    return n;
  }

  friend bool operator==(const OnlineScenario&, const OnlineScenario&) = default;
};

enum class AllocationMode { oblivious, characterized };
enum class ReleaseMode { pool, sequential };
// What the fairness criterion scores. Job: every job is its own framework. Role: the
// criterion picks a role (submission group) from the roles' aggregate allocations, and
// the role then hands the offer to its running job with the fewest executors.
enum class ShareLevel { job, role };

inline std::string_view to_string(ShareLevel s) { return s == ShareLevel::job ? "job" : "role"; }

inline std::string_view to_string(AllocationMode m) {
  return m == AllocationMode::oblivious ? "oblivious" : "characterized";
}
inline std::string_view to_string(ReleaseMode m) {
  return m == ReleaseMode::pool ? "pool" : "sequential";
}

struct SimConfig {
  AllocationMode mode = AllocationMode::characterized;
  ReleaseMode release = ReleaseMode::pool;
  ShareLevel share_level = ShareLevel::role;
  SchedulerConfig scheduler;
  std::vector<Registration> registration_schedule;  // overrides the scenario's when non-empty
  double horizon = 1e9;
  double sample_period = 1.0;
  std::uint64_t seed = 0;
  // Verify conservation and capacity at every event (slower).
  bool check_invariants = false;

  void validate() const {
    scheduler.validate();
    if (!(sample_period > 0)) throw config_error("sample_period must be > 0");
    if (mode == AllocationMode::oblivious) {
      // Without known demands there is no standalone task count and nothing to fit against.
      if (scheduler.criterion == CriterionKind::tsf)
        throw config_error("tsf needs per-task demands and is unavailable in oblivious mode");
      if (scheduler.policy == ServerPolicy::best_fit)
        throw config_error("best-fit needs per-task demands and is unavailable in oblivious mode");
    }
  }
};

struct ExecutorState {
  std::size_t server = 0;  // scenario server index
  ResourceVector allocation;
  std::int64_t slots = 1;
  std::int64_t busy = 0;
  bool released = false;
};

struct JobState {
  enum class Status { queued, running, done };
  std::size_t id = 0;
  std::size_t role = 0;
  std::size_t queue = 0;
  std::int64_t remaining_tasks = 0;  // not yet completed
  std::int64_t pending_tasks = 0;    // not yet started
  std::vector<ExecutorState> executors;
  std::int64_t live_executors = 0;
  Status status = Status::queued;
  double start = 0, end = 0;
};

struct UtilizationSample {
  double time = 0;
  std::vector<double> fraction;      // per resource, allocated / registered
  double framework_share_variance = 0;  // across running jobs, of dominant share

  friend bool operator==(const UtilizationSample&, const UtilizationSample&) = default;
};

struct JobRecord {
  std::size_t job_id = 0;
  std::size_t role = 0;
  std::size_t queue = 0;
  double start = 0, end = 0;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

struct EventTrace {
  std::vector<std::string> resources;
  std::vector<std::string> role_names;
  std::vector<UtilizationSample> samples;
  std::vector<JobRecord> job_completions;
  double makespan = 0;
  bool truncated = false;
  std::size_t executors_launched = 0;
  std::size_t offers = 0;  // placement decisions

  friend bool operator==(const EventTrace&, const EventTrace&) = default;
};

namespace detail {

class OnlineSimulator {
public:
  OnlineSimulator(const OnlineScenario& sc, const SimConfig& cfg)
      : sc_(sc),
        cfg_(cfg),
        select_rng_(derive_seed(cfg.seed, 1)),
        duration_rng_(derive_seed(cfg.seed, 2)),
        selector_(cfg.scheduler, select_rng_),
        state_(sc.resources.size()) {
    cfg_.validate();
    if (sc_.resources.empty()) throw config_error("scenario declares no resources");
    if (sc_.servers.empty()) throw config_error("scenario has no servers");
    if (sc_.roles.empty()) throw config_error("scenario has no roles");
    for (const auto& s : sc_.servers)
      if (s.size() != sc_.resources.size()) throw config_error("server capacity has wrong length");
    for (const auto& r : sc_.roles) {
      r.validate();
      if (r.executor_demand.size() != sc_.resources.size())
        throw config_error("role " + r.name + " demand has wrong length");
    }
    state_index_.assign(sc_.servers.size(), npos);
    if (cfg_.share_level == ShareLevel::role)
      for (std::size_t r = 0; r < sc_.roles.size(); ++r)
        state_.add_framework({r + 1, sc_.roles[r].executor_demand, 1});
    trace_.resources = sc_.resources;
    for (const auto& r : sc_.roles) trace_.role_names.push_back(r.name);
  }

  EventTrace run() {
    auto regs = cfg_.registration_schedule.empty() ? sc_.registrations : cfg_.registration_schedule;
    if (regs.empty())
      for (std::size_t i = 0; i < sc_.servers.size(); ++i) regs.push_back({0.0, i});
    for (const auto& r : regs) {
      if (r.server >= sc_.servers.size()) throw config_error("registration names unknown server");
      push({r.time, 0, Event::Kind::register_server, r.server, 0});
    }

    next_job_.assign(sc_.roles.size(), {});
    for (std::size_t r = 0; r < sc_.roles.size(); ++r) {
      next_job_[r].assign(static_cast<std::size_t>(sc_.roles[r].queues), 0);
      for (std::size_t q = 0; q < next_job_[r].size(); ++q) start_next_job(r, q, 0.0);
    }
    pool_cycle_pending_ = true;
    record_change(0.0);

    const auto total_jobs = static_cast<std::size_t>(sc_.total_jobs());
    while (!events_.empty()) {
      const double now = events_.top().time;
      if (now > cfg_.horizon) {
        trace_.truncated = true;
        break;
      }
      while (!events_.empty() && events_.top().time == now) {
        Event e = events_.top();
        events_.pop();
        handle(e, now);
        if (cfg_.check_invariants) check_invariants();
      }
      if (pool_cycle_pending_) {
        pool_cycle_pending_ = false;
        allocation_cycle(free_servers());
        if (cfg_.check_invariants) check_invariants();
      }
      record_change(now);
      if (completed_ == total_jobs && events_.empty()) break;
    }
    if (completed_ != total_jobs) trace_.truncated = true;
    build_samples();
    return trace_;
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Event {
    enum class Kind { register_server, task_done, release_executor, release_job, start_job };
    double time = 0;
    std::uint64_t seq = 0;
    Kind kind = Kind::register_server;
    std::size_t a = 0, b = 0;
  };
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      return x.time != y.time ? x.time > y.time : x.seq > y.seq;
    }
  };

  struct Change {
    double time;
    std::vector<double> fraction;
    double share_variance;
  };

  void push(Event e) {
    e.seq = seq_++;
    events_.push(e);
  }

  double draw_duration(const RoleSpec& r) {
    if (r.duration.kind == DurationModel::Kind::deterministic) return r.duration.mean;
    return exponential(duration_rng_, r.duration.mean);
  }

  void start_next_job(std::size_t role, std::size_t queue, double now) {
    const auto& spec = sc_.roles[role];
    auto& k = next_job_[role][queue];
    if (k >= spec.jobs_per_queue) return;
    ++k;
    JobState j;
    j.id = jobs_.size();
    j.role = role;
    j.queue = queue;
    j.remaining_tasks = spec.tasks_per_job;
    j.pending_tasks = spec.tasks_per_job;
    j.status = JobState::Status::running;
    j.start = now;
    jobs_.push_back(std::move(j));
    if (cfg_.share_level == ShareLevel::job) {
      state_.add_framework({jobs_.back().id, spec.executor_demand, 1});
      framework_jobs_.push_back(jobs_.back().id);
    }
    running_.push_back(jobs_.back().id);
    pool_cycle_pending_ = true;
  }

  // Row of the cluster state that a job's executors are charged to.
  std::size_t state_row(std::size_t job) const {
    if (cfg_.share_level == ShareLevel::role) return jobs_[job].role;
    auto it = std::find(framework_jobs_.begin(), framework_jobs_.end(), job);
    if (it == framework_jobs_.end()) throw std::logic_error("job has no framework entry");
    return static_cast<std::size_t>(it - framework_jobs_.begin());
  }

  // The job that receives an offer made to state row `row`, or npos.
  std::size_t receiving_job(std::size_t row) const {
    if (cfg_.share_level == ShareLevel::job)
      return wants_more(jobs_[framework_jobs_[row]]) ? framework_jobs_[row] : npos;
    std::size_t best = npos;
    for (std::size_t id : running_) {
      const auto& j = jobs_[id];
      if (j.role != row || !wants_more(j)) continue;
      if (best == npos || j.live_executors < jobs_[best].live_executors) best = id;
    }
    return best;
  }

  bool wants_more(const JobState& j) const {
    if (j.status != JobState::Status::running) return false;
    const auto& spec = sc_.roles[j.role];
    if (spec.max_executors_per_job &&
        j.live_executors >= *spec.max_executors_per_job)
      return false;
    // A characterized framework only asks for what its unstarted tasks can use; an
    // oblivious one takes whatever it is offered.
    return cfg_.mode == AllocationMode::oblivious || j.pending_tasks > 0;
  }

  std::vector<std::size_t> free_servers() const {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < state_.num_servers(); ++i)
      if (residual_capacity(state_, i).any_positive()) open.push_back(i);
    return open;
  }

  void allocation_cycle(std::vector<std::size_t> open) {
    std::vector<std::size_t> candidates;
    while (!open.empty()) {
      candidates.clear();
      for (std::size_t n = 0; n < state_.num_frameworks(); ++n)
        if (receiving_job(n) != npos) candidates.push_back(n);
      if (candidates.empty()) return;
      auto p = selector_.next(state_, candidates, open);
      if (!p) return;
      ++trace_.offers;
      JobState& job = jobs_[receiving_job(p->framework)];
      const auto& spec = sc_.roles[job.role];
      std::int64_t count = 1;
      if (cfg_.mode == AllocationMode::oblivious) {
        // The whole remaining agent is offered; the framework keeps as many executors
        // as fit, up to its cap, and declines the rest.
        count = tasks_that_fit(spec.executor_demand, residual_capacity(state_, p->server));
        if (spec.max_executors_per_job)
          count = std::min(count, *spec.max_executors_per_job - job.live_executors);
      }
      for (std::int64_t k = 0; k < count; ++k) launch_executor(job.id, p->framework, p->server);
    }
  }

  void launch_executor(std::size_t job_id, std::size_t row, std::size_t state_server) {
    state_.apply_task(row, state_server);
    JobState& job = jobs_[job_id];
    const auto& spec = sc_.roles[job.role];
    ExecutorState e;
    e.server = state_.server(state_server).id;
    e.allocation = spec.executor_demand;
    e.slots = spec.slots_per_executor();
    job.executors.push_back(std::move(e));
    ++job.live_executors;
    ++trace_.executors_launched;
    const std::size_t idx = job.executors.size() - 1;
    while (job.pending_tasks > 0 && job.executors[idx].busy < job.executors[idx].slots)
      start_task(job, idx);
  }

  void start_task(JobState& job, std::size_t executor) {
    --job.pending_tasks;
    ++job.executors[executor].busy;
    push({now_ + draw_duration(sc_.roles[job.role]), 0, Event::Kind::task_done, job.id, executor});
  }

  void handle(const Event& e, double now) {
    now_ = now;
    switch (e.kind) {
      case Event::Kind::register_server: {
        if (state_index_[e.a] != npos) return;
        ServerSpec s;
        s.id = e.a;
        s.capacity = sc_.servers[e.a];
        state_index_[e.a] = state_.add_server(std::move(s));
        pool_cycle_pending_ = true;
        return;
      }
      case Event::Kind::task_done: {
        JobState& job = jobs_[e.a];
        --job.executors[e.b].busy;
        --job.remaining_tasks;
        if (job.remaining_tasks == 0) finish_job(job, now);
        else if (job.pending_tasks > 0) start_task(job, e.b);
        return;
      }
      case Event::Kind::release_executor:
        if (jobs_[e.a].executors[e.b].released) return;
        release_executor(e.a, e.b);
        if (cfg_.release == ReleaseMode::sequential) {
          const std::size_t s = state_index_[jobs_[e.a].executors[e.b].server];
          allocation_cycle({s});
        } else {
          pool_cycle_pending_ = true;
        }
        return;
      case Event::Kind::release_job:
        for (std::size_t k = 0; k < jobs_[e.a].executors.size(); ++k) release_executor(e.a, k);
        pool_cycle_pending_ = true;
        return;
      case Event::Kind::start_job:
        start_next_job(e.a, e.b, now);
        return;
    }
  }

  void finish_job(JobState& job, double now) {
    job.status = JobState::Status::done;
    job.end = now;
    ++completed_;
    trace_.job_completions.push_back({job.id, job.role, job.queue, job.start, job.end});
    trace_.makespan = std::max(trace_.makespan, now);
    const std::size_t id = job.id, role = job.role, queue = job.queue;
    if (jobs_[id].live_executors == 0) {
      drop_framework(id);
    } else if (cfg_.release == ReleaseMode::pool) {
      push({now, 0, Event::Kind::release_job, id, 0});
    } else {
      for (std::size_t k = 0; k < jobs_[id].executors.size(); ++k)
        if (!jobs_[id].executors[k].released) push({now, 0, Event::Kind::release_executor, id, k});
    }
    // The successor is submitted once the released resources have been offered around.
    push({now, 0, Event::Kind::start_job, role, queue});
  }

  void release_executor(std::size_t job_id, std::size_t k) {
    auto& ex = jobs_[job_id].executors[k];
    if (ex.released) return;
    ex.released = true;
    state_.release_task(state_row(job_id), state_index_[ex.server]);
    auto& job = jobs_[job_id];
    --job.live_executors;
    if (job.live_executors == 0 && job.status == JobState::Status::done) drop_framework(job_id);
  }

  void drop_framework(std::size_t job_id) {
    running_.erase(std::find(running_.begin(), running_.end(), job_id));
    if (cfg_.share_level == ShareLevel::role) return;
    auto it = std::find(framework_jobs_.begin(), framework_jobs_.end(), job_id);
    if (it == framework_jobs_.end()) return;
    const auto n = static_cast<std::size_t>(it - framework_jobs_.begin());
    state_.remove_framework(n);
    framework_jobs_.erase(it);
  }

  void check_invariants() const {
    ResourceVector held(sc_.resources.size());
    for (const auto& job : jobs_)
      for (const auto& ex : job.executors)
        if (!ex.released) held += ex.allocation;
    ResourceVector used(sc_.resources.size()), free(sc_.resources.size());
    for (std::size_t i = 0; i < state_.num_servers(); ++i) {
      used += state_.used(i);
      free += residual_capacity(state_, i);  // throws if usage exceeds capacity
    }
    if (!(held == used)) throw std::logic_error("executor allocations disagree with cluster usage");
    if (!(used + free == state_.aggregate_capacity()))
      throw std::logic_error("allocated + free differs from registered capacity");
  }

  void record_change(double now) {
    Change c;
    c.time = now;
    const auto& cap = state_.aggregate_capacity();
    ResourceVector used(sc_.resources.size());
    for (std::size_t i = 0; i < state_.num_servers(); ++i) used += state_.used(i);
    for (std::size_t r = 0; r < sc_.resources.size(); ++r)
      c.fraction.push_back(cap.size() && cap[r] > 0 ? (used[r] / cap[r]).to_double() : 0.0);

    std::vector<double> shares;
    for (std::size_t id : running_) {
      const auto& j = jobs_[id];
      if (j.status != JobState::Status::running) continue;
      Rational dom(0);
      const auto& d = sc_.roles[j.role].executor_demand;
      for (std::size_t r = 0; r < d.size(); ++r)
        if (cap.size() && cap[r] > 0) dom = std::max(dom, d[r] * j.live_executors / cap[r]);
      shares.push_back(dom.to_double());
    }
    c.share_variance = 0;
    if (shares.size() >= 2) {
      double sd = sample_stddev(std::span<const double>(shares));
      c.share_variance = sd * sd;
    }
    if (!changes_.empty() && changes_.back().time == now) changes_.back() = std::move(c);
    else changes_.push_back(std::move(c));
  }

  void build_samples() {
    const double end = trace_.truncated ? std::min(now_, cfg_.horizon) : trace_.makespan;
    std::size_t k = 0;
    for (std::int64_t step = 0;; ++step) {
      const double t = static_cast<double>(step) * cfg_.sample_period;
      if (t > end) break;
      while (k + 1 < changes_.size() && changes_[k + 1].time <= t) ++k;
      trace_.samples.push_back({t, changes_[k].fraction, changes_[k].share_variance});
    }
  }

  const OnlineScenario& sc_;
  SimConfig cfg_;
  Rng select_rng_;
  Rng duration_rng_;
  PlacementSelector selector_;
  ClusterState state_;
  std::vector<std::size_t> state_index_;     // scenario server -> state server, npos if absent
  std::vector<std::size_t> framework_jobs_;  // state row -> job id (job share level only)
  std::vector<std::size_t> running_;         // jobs still holding or wanting resources
  std::vector<JobState> jobs_;
  std::vector<std::vector<std::int64_t>> next_job_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::vector<Change> changes_;
  EventTrace trace_;
  std::uint64_t seq_ = 0;
  std::size_t completed_ = 0;
  double now_ = 0;
  bool pool_cycle_pending_ = false;
};

}  // namespace detail

inline EventTrace simulate(const OnlineScenario& scenario, const SimConfig& config) {
  return detail::OnlineSimulator(scenario, config).run();
}

struct SeriesPoint {
  double time;
  double value;
};

inline std::vector<SeriesPoint> utilization_series(const EventTrace& trace, std::size_t resource) {
  if (resource >= trace.resources.size()) throw config_error("resource index out of range");
  std::vector<SeriesPoint> out;
  out.reserve(trace.samples.size());
  for (const auto& s : trace.samples) out.push_back({s.time, s.fraction[resource]});
  return out;
}

inline double series_mean(const std::vector<SeriesPoint>& s, double from = -1e300,
                          double to = 1e300) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& p : s)
    if (p.time >= from && p.time <= to) {
      sum += p.value;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

// Population variance of the sampled values inside [from, to].
inline double series_variance(const std::vector<SeriesPoint>& s, double from = -1e300,
                              double to = 1e300) {
  const double m = series_mean(s, from, to);
  double ss = 0;
  std::size_t n = 0;
  for (const auto& p : s)
    if (p.time >= from && p.time <= to) {
      ss += (p.value - m) * (p.value - m);
      ++n;
    }
  return n ? ss / static_cast<double>(n) : 0.0;
}

inline void write_utilization_csv(std::ostream& os, const EventTrace& t) {
  os << "time,resource,allocated_fraction\n";
  for (const auto& s : t.samples)
    for (std::size_t r = 0; r < t.resources.size(); ++r)
      os << format_full(s.time) << ',' << t.resources[r] << ',' << format_full(s.fraction[r]) << '\n';
}

inline void write_completions_csv(std::ostream& os, const EventTrace& t) {
  os << "job_id,role,queue,start,end\n";
  for (const auto& j : t.job_completions)
    os << j.job_id + 1 << ',' << t.role_names.at(j.role) << ',' << j.queue + 1 << ','
       << format_full(j.start) << ',' << format_full(j.end) << '\n';
}

}  // namespace fairsched
