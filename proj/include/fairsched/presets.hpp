#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairsched/core_model.hpp"
#include "fairsched/online_sim.hpp"

namespace fairsched {

// Two frameworks with mirrored demands on two mirrored servers.
inline Scenario illustrative_scenario() {
  Scenario s;
  s.resources = {"r1", "r2"};
  s.servers = {{1, {100, 30}}, {2, {30, 100}}};
  s.frameworks = {{1, {5, 1}, 1}, {2, {1, 5}, 1}};
  return s;
}

namespace presets {

inline const ResourceVector type1{4, 14};
inline const ResourceVector type2{8, 8};
inline const ResourceVector type3{6, 11};

inline RoleSpec pi_role(std::int64_t jobs_per_queue) {
  RoleSpec r;
  r.name = "pi";
  r.executor_demand = ResourceVector{2, 2};
  r.tasks_per_job = 12;
  r.duration = {DurationModel::Kind::deterministic, 10.0};
  r.max_executors_per_job = 6;
  r.queues = 5;
  r.jobs_per_queue = jobs_per_queue;
  return r;
}

inline RoleSpec wordcount_role(std::int64_t jobs_per_queue) {
  RoleSpec r;
  r.name = "wordcount";
  r.executor_demand = ResourceVector{1, Rational(7, 2)};
  r.tasks_per_job = 12;
  r.duration = {DurationModel::Kind::deterministic, 10.0};
  r.max_executors_per_job = 6;
  r.queues = 5;
  r.jobs_per_queue = jobs_per_queue;
  return r;
}

}  // namespace presets

// HETERO6: two servers of each type. HOMO6: six type-3 servers. STAGED3: one server of
// each type, registered one after another.
inline std::map<std::string, OnlineScenario> builtin_scenarios() {
  using namespace presets;
  std::map<std::string, OnlineScenario> out;

  OnlineScenario hetero;
  hetero.resources = {"cpu", "mem"};
  hetero.servers = {type1, type1, type2, type2, type3, type3};
  hetero.roles = {pi_role(50), wordcount_role(50)};
  out.emplace("HETERO6", hetero);

  OnlineScenario homo = hetero;
  homo.servers = {type3, type3, type3, type3, type3, type3};
  out.emplace("HOMO6", homo);

  OnlineScenario staged;
  staged.resources = {"cpu", "mem"};
  staged.servers = {type1, type2, type3};
  staged.roles = {pi_role(20), wordcount_role(20)};
  staged.registrations = {{0.0, 0}, {5.0, 1}, {10.0, 2}};
  out.emplace("STAGED3", staged);
  return out;
}

}  // namespace fairsched
