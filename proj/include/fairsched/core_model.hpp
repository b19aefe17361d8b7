#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairsched/rational.hpp"

namespace fairsched {

using Quantity = Rational;

class config_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class infeasible_allocation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class invalid_framework : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Non-negative quantities, one per resource kind. All vectors of one scenario share
// the same positional ordering of resources.
class ResourceVector {
public:
  ResourceVector() = default;
  explicit ResourceVector(std::size_t resources) : q_(resources) {}
  ResourceVector(std::initializer_list<Quantity> q) : q_(q) { check_non_negative(); }
  explicit ResourceVector(std::vector<Quantity> q) : q_(std::move(q)) { check_non_negative(); }

  std::size_t size() const { return q_.size(); }
  const Quantity& operator[](std::size_t r) const { return q_[r]; }
  std::span<const Quantity> values() const { return q_; }

  bool any_positive() const {
    for (const auto& v : q_)
      if (v > 0) return true;
    return false;
  }
  bool is_zero() const { return !any_positive(); }

  // Componentwise; callers guarantee the result stays non-negative.
  ResourceVector& operator+=(const ResourceVector& o) {
    require_same_size(o);
    for (std::size_t r = 0; r < q_.size(); ++r) q_[r] += o.q_[r];
    return *this;
  }
  ResourceVector& operator-=(const ResourceVector& o) {
    require_same_size(o);
    for (std::size_t r = 0; r < q_.size(); ++r) {
      q_[r] -= o.q_[r];
      if (q_[r] < 0) throw infeasible_allocation("resource quantity would become negative");
    }
    return *this;
  }
  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }

  ResourceVector scaled(std::int64_t k) const {
    if (k < 0) throw std::invalid_argument("negative scale");
    ResourceVector out(*this);
    for (auto& v : out.q_) v *= Quantity(k);
    return out;
  }

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t r = 0; r < q_.size(); ++r) {
      if (r) s += ", ";
      s += q_[r].to_string();
    }
    return s + ")";
  }

private:
  void require_same_size(const ResourceVector& o) const {
    if (o.size() != size()) throw config_error("resource vector length mismatch");
  }
  void check_non_negative() const {
    for (const auto& v : q_)
      if (v < 0) throw config_error("resource quantities must be non-negative");
  }

  std::vector<Quantity> q_;
};

struct ServerSpec {
  std::size_t id = 0;
  ResourceVector capacity;

  friend bool operator==(const ServerSpec&, const ServerSpec&) = default;
};

struct FrameworkSpec {
  std::size_t id = 0;
  ResourceVector demand;  // per task
  Rational weight{1};

  friend bool operator==(const FrameworkSpec&, const FrameworkSpec&) = default;
};

// x[n][i]: whole tasks of framework n placed on server i.
class AllocationMatrix {
public:
  AllocationMatrix() = default;
  AllocationMatrix(std::size_t frameworks, std::size_t servers)
      : frameworks_(frameworks), servers_(servers), x_(frameworks * servers, 0) {}

  std::size_t frameworks() const { return frameworks_; }
  std::size_t servers() const { return servers_; }

  std::int64_t operator()(std::size_t n, std::size_t i) const { return x_[n * servers_ + i]; }
  std::int64_t& operator()(std::size_t n, std::size_t i) { return x_[n * servers_ + i]; }

  std::int64_t framework_total(std::size_t n) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < servers_; ++i) s += (*this)(n, i);
    return s;
  }
  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto v : x_) s += v;
    return s;
  }

  void add_framework_row() {
    x_.resize(x_.size() + servers_, 0);
    ++frameworks_;
  }
  void erase_framework_row(std::size_t n) {
    auto first = x_.begin() + static_cast<std::ptrdiff_t>(n * servers_);
    x_.erase(first, first + static_cast<std::ptrdiff_t>(servers_));
    --frameworks_;
  }
  void add_server_column() {
    std::vector<std::int64_t> grown(frameworks_ * (servers_ + 1), 0);
    for (std::size_t n = 0; n < frameworks_; ++n)
      for (std::size_t i = 0; i < servers_; ++i) grown[n * (servers_ + 1) + i] = (*this)(n, i);
    x_ = std::move(grown);
    ++servers_;
  }

  friend bool operator==(const AllocationMatrix&, const AllocationMatrix&) = default;

private:
  std::size_t frameworks_ = 0;
  std::size_t servers_ = 0;
  std::vector<std::int64_t> x_;
};

// Servers, frameworks and the integer allocation between them. Per-server usage is
// cached so residuals are exact without re-summing.
class ClusterState {
public:
  ClusterState() = default;
  explicit ClusterState(std::size_t resources) : resources_(resources) {}
  ClusterState(std::vector<ServerSpec> servers, std::vector<FrameworkSpec> frameworks) {
    if (servers.empty()) throw config_error("at least one server is required");
    resources_ = servers.front().capacity.size();
    for (auto& s : servers) add_server(std::move(s));
    for (auto& f : frameworks) add_framework(std::move(f));
  }

  std::size_t resource_count() const { return resources_; }
  std::size_t num_servers() const { return servers_.size(); }
  std::size_t num_frameworks() const { return frameworks_.size(); }

  const std::vector<ServerSpec>& servers() const { return servers_; }
  const std::vector<FrameworkSpec>& frameworks() const { return frameworks_; }
  const ServerSpec& server(std::size_t i) const { return servers_.at(i); }
  const FrameworkSpec& framework(std::size_t n) const { return frameworks_.at(n); }
  const AllocationMatrix& alloc() const { return alloc_; }

  std::int64_t tasks(std::size_t n, std::size_t i) const { return alloc_(n, i); }
  std::int64_t total_tasks(std::size_t n) const { return totals_.at(n); }
  const ResourceVector& used(std::size_t i) const { return used_.at(i); }
  const ResourceVector& aggregate_capacity() const { return aggregate_; }

  std::size_t add_server(ServerSpec s) {
    if (resources_ == 0) resources_ = s.capacity.size();
    if (s.capacity.size() != resources_) throw config_error("server capacity has wrong length");
    if (!s.capacity.any_positive())
      throw config_error("server " + std::to_string(s.id) + " has no positive capacity");
    aggregate_ = aggregate_.size() ? aggregate_ + s.capacity : s.capacity;
    used_.emplace_back(resources_);
    servers_.push_back(std::move(s));
    alloc_.add_server_column();
    return servers_.size() - 1;
  }

  std::size_t add_framework(FrameworkSpec f) {
    if (resources_ == 0) resources_ = f.demand.size();
    if (f.demand.size() != resources_) throw config_error("framework demand has wrong length");
    if (!f.demand.any_positive())
      throw invalid_framework("framework " + std::to_string(f.id) + " demands nothing");
    if (f.weight <= 0) throw invalid_framework("framework weight must be positive");
    frameworks_.push_back(std::move(f));
    totals_.push_back(0);
    alloc_.add_framework_row();
    return frameworks_.size() - 1;
  }

  // Drops framework n, returning its tasks' resources to their servers.
  void remove_framework(std::size_t n) {
    const auto& d = frameworks_.at(n).demand;
    for (std::size_t i = 0; i < servers_.size(); ++i)
      if (auto k = alloc_(n, i); k > 0) used_[i] -= d.scaled(k);
    frameworks_.erase(frameworks_.begin() + static_cast<std::ptrdiff_t>(n));
    totals_.erase(totals_.begin() + static_cast<std::ptrdiff_t>(n));
    alloc_.erase_framework_row(n);
  }

  void apply_task(std::size_t n, std::size_t i);
  void release_task(std::size_t n, std::size_t i);

  friend bool operator==(const ClusterState&, const ClusterState&) = default;

private:
  std::size_t resources_ = 0;
  std::vector<ServerSpec> servers_;
  std::vector<FrameworkSpec> frameworks_;
  AllocationMatrix alloc_;
  std::vector<std::int64_t> totals_;
  std::vector<ResourceVector> used_;
  ResourceVector aggregate_;
};

// Static allocation instance: resource names, servers and frameworks.
struct Scenario {
  std::vector<std::string> resources;
  std::vector<ServerSpec> servers;
  std::vector<FrameworkSpec> frameworks;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline ClusterState make_state(const Scenario& sc) {
  for (const auto& s : sc.servers)
    if (s.capacity.size() != sc.resources.size())
      throw config_error("server " + std::to_string(s.id) + " capacity length differs from resources");
  for (const auto& f : sc.frameworks)
    if (f.demand.size() != sc.resources.size())
      throw config_error("framework " + std::to_string(f.id) + " demand length differs from resources");
  return ClusterState(sc.servers, sc.frameworks);
}

inline ResourceVector residual_capacity(const ClusterState& state, std::size_t i) {
  return state.server(i).capacity - state.used(i);
}

inline bool task_fits(const ResourceVector& demand, const ResourceVector& residual) {
  if (demand.size() != residual.size()) throw config_error("resource vector length mismatch");
  for (std::size_t r = 0; r < demand.size(); ++r)
    if (demand[r] > residual[r]) return false;
  return true;
}

inline bool task_fits(const ClusterState& state, std::size_t n, std::size_t i) {
  return task_fits(state.framework(n).demand, residual_capacity(state, i));
}

// Whole tasks of one framework that fit on a single server; resources the framework
// does not demand are ignored.
inline std::int64_t tasks_that_fit(const ResourceVector& demand, const ResourceVector& space) {
  if (!demand.any_positive()) throw invalid_framework("framework demands nothing");
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t r = 0; r < demand.size(); ++r) {
    if (demand[r] == 0) continue;
    best = std::min(best, (space[r] / demand[r]).floor());
  }
  return best;
}

// Tasks the framework would run if it had the whole cluster to itself.
inline std::int64_t max_standalone_tasks(const FrameworkSpec& framework,
                                         std::span<const ServerSpec> servers) {
  if (servers.empty()) throw config_error("no servers");
  std::int64_t total = 0;
  for (const auto& s : servers) total += tasks_that_fit(framework.demand, s.capacity);
  return total;
}

inline void ClusterState::apply_task(std::size_t n, std::size_t i) {
  const auto& d = framework(n).demand;
  if (!task_fits(d, residual_capacity(*this, i)))
    throw infeasible_allocation("task of framework " + std::to_string(n) +
                                " does not fit on server " + std::to_string(i));
  used_[i] += d;
  ++alloc_(n, i);
  ++totals_[n];
}

inline void ClusterState::release_task(std::size_t n, std::size_t i) {
  if (alloc_(n, i) < 1)
    throw infeasible_allocation("no task of framework " + std::to_string(n) + " on server " +
                                std::to_string(i));
  used_[i] -= framework(n).demand;
  --alloc_(n, i);
  --totals_[n];
}

inline void apply_task(ClusterState& state, std::size_t n, std::size_t i) { state.apply_task(n, i); }
inline void release_task(ClusterState& state, std::size_t n, std::size_t i) {
  state.release_task(n, i);
}

}  // namespace fairsched
