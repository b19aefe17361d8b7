#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "fairsched/core_model.hpp"
#include "fairsched/online_sim.hpp"

namespace fairsched {

// Scenario files are YAML documents (plain JSON is accepted too):
//
//   schema_version: 1
//   resources: [cpu, mem]
//   servers:
//     - [100, 30]
//   frameworks:
//     - {demand: [5, 1], weight: 1}
//   online:                      # optional
//     roles:
//       - {name: pi, demand: [2, 2], tasks_per_job: 12, queues: 5, jobs_per_queue: 50,
//          max_executors: 4, duration: {model: deterministic, mean: 10}}
//     registrations:             # optional, 1-based server numbers
//       - {time: 0, server: 1}
//
// Quantities are exact: integers, finite decimals or "p/q".
inline constexpr int scenario_schema_version = 1;

class scenario_error : public std::runtime_error {
public:
  scenario_error(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_, column_;
};

struct ScenarioFile {
  Scenario scenario;
  std::optional<OnlineScenario> online;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

namespace detail {

[[noreturn]] inline void fail_at(const YAML::Node& node, const std::string& msg) {
  const auto m = node.Mark();
  const int line = m.line >= 0 ? m.line + 1 : 0;
  const int col = m.column >= 0 ? m.column + 1 : 0;
  throw scenario_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                           msg,
                       line, col);
}

inline YAML::Node require(const YAML::Node& parent, const char* key) {
  YAML::Node n = parent[key];
  if (!n) fail_at(parent, std::string("missing key '") + key + "'");
  return n;
}

inline Rational read_quantity(const YAML::Node& n) {
  if (!n.IsScalar()) fail_at(n, "expected a number");
  try {
    return Rational::parse(n.Scalar());
  } catch (const std::exception& e) {
    fail_at(n, e.what());
  }
}

inline std::int64_t read_int(const YAML::Node& n, std::int64_t min_value) {
  Rational q = read_quantity(n);
  if (!q.is_integer()) fail_at(n, "expected an integer");
  if (q.num() < min_value) fail_at(n, "value must be >= " + std::to_string(min_value));
  return q.num();
}

inline double read_real(const YAML::Node& n) {
  if (!n.IsScalar()) fail_at(n, "expected a number");
  try {
    std::size_t used = 0;
    double v = std::stod(n.Scalar(), &used);
    if (used != n.Scalar().size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(n, "not a number: '" + n.Scalar() + "'");
  }
}

inline ResourceVector read_vector(const YAML::Node& n, std::size_t expected, const char* what) {
  if (!n.IsSequence()) fail_at(n, std::string(what) + " must be a list");
  if (n.size() != expected)
    fail_at(n, std::string(what) + " has " + std::to_string(n.size()) + " entries, expected " +
                   std::to_string(expected));
  std::vector<Quantity> q;
  for (const auto& e : n) {
    Rational v = read_quantity(e);
    if (v < 0) fail_at(e, "quantities must be non-negative");
    q.push_back(v);
  }
  return ResourceVector(std::move(q));
}

inline RoleSpec read_role(const YAML::Node& n, std::size_t resources) {
  if (!n.IsMap()) fail_at(n, "role must be a mapping");
  RoleSpec r;
  const auto name = require(n, "name");
  if (!name.IsScalar()) fail_at(name, "role name must be a string");
  r.name = name.Scalar();
  r.executor_demand = read_vector(require(n, "demand"), resources, "demand");
  if (!r.executor_demand.any_positive()) fail_at(n["demand"], "demand must have a positive entry");
  r.tasks_per_job = read_int(require(n, "tasks_per_job"), 1);
  r.queues = read_int(require(n, "queues"), 1);
  r.jobs_per_queue = read_int(require(n, "jobs_per_queue"), 1);
  if (auto m = n["max_executors"]) {
    if (!(m.IsScalar() && m.Scalar() == "unlimited")) r.max_executors_per_job = read_int(m, 1);
  }
  if (auto c = n["task_cpus"]) {
    r.task_cpus = read_quantity(c);
    if (*r.task_cpus <= 0) fail_at(c, "task_cpus must be positive");
  }
  if (auto d = n["duration"]) {
    if (!d.IsMap()) fail_at(d, "duration must be a mapping");
    const auto model = require(d, "model");
    if (model.Scalar() == "deterministic") r.duration.kind = DurationModel::Kind::deterministic;
    else if (model.Scalar() == "exponential") r.duration.kind = DurationModel::Kind::exponential;
    else fail_at(model, "duration model must be deterministic or exponential");
    r.duration.mean = read_real(require(d, "mean"));
    if (!(r.duration.mean > 0)) fail_at(d["mean"], "duration must be positive");
  }
  return r;
}

inline void emit_vector(YAML::Emitter& out, const ResourceVector& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& q : v.values()) out << q.to_string();
  out << YAML::EndSeq;
}

}  // namespace detail

inline ScenarioFile parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw scenario_error("line " + std::to_string(e.mark.line + 1) + ", column " +
                             std::to_string(e.mark.column + 1) + ": " + e.msg,
                         e.mark.line + 1, e.mark.column + 1);
  }
  using namespace detail;
  if (!root.IsMap()) fail_at(root, "scenario must be a mapping");
  const auto version = require(root, "schema_version");
  if (read_int(version, 0) != scenario_schema_version)
    fail_at(version, "unsupported schema_version (expected " +
                         std::to_string(scenario_schema_version) + ")");

  ScenarioFile f;
  const auto res = require(root, "resources");
  if (!res.IsSequence() || res.size() == 0) fail_at(res, "resources must be a non-empty list");
  for (const auto& r : res) {
    if (!r.IsScalar()) fail_at(r, "resource names must be strings");
    f.scenario.resources.push_back(r.Scalar());
  }
  const std::size_t R = f.scenario.resources.size();

  const auto servers = require(root, "servers");
  if (!servers.IsSequence() || servers.size() == 0) fail_at(servers, "servers must be a non-empty list");
  for (const auto& s : servers) {
    ServerSpec spec;
    spec.id = f.scenario.servers.size() + 1;
    spec.capacity = read_vector(s, R, "server capacity");
    if (!spec.capacity.any_positive()) fail_at(s, "server needs a positive capacity");
    f.scenario.servers.push_back(std::move(spec));
  }

  if (auto fws = root["frameworks"]) {
    if (!fws.IsSequence()) fail_at(fws, "frameworks must be a list");
    for (const auto& n : fws) {
      if (!n.IsMap()) fail_at(n, "framework must be a mapping with 'demand'");
      FrameworkSpec spec;
      spec.id = f.scenario.frameworks.size() + 1;
      spec.demand = read_vector(require(n, "demand"), R, "demand");
      if (!spec.demand.any_positive()) fail_at(n["demand"], "demand must have a positive entry");
      if (auto w = n["weight"]) {
        spec.weight = read_quantity(w);
        if (spec.weight <= 0) fail_at(w, "weight must be positive");
      }
      f.scenario.frameworks.push_back(std::move(spec));
    }
  }

  if (auto on = root["online"]) {
    if (!on.IsMap()) fail_at(on, "online must be a mapping");
    OnlineScenario o;
    o.resources = f.scenario.resources;
    for (const auto& s : f.scenario.servers) o.servers.push_back(s.capacity);
    const auto roles = require(on, "roles");
    if (!roles.IsSequence() || roles.size() == 0) fail_at(roles, "roles must be a non-empty list");
    for (const auto& r : roles) o.roles.push_back(read_role(r, R));
    if (auto regs = on["registrations"]) {
      if (!regs.IsSequence()) fail_at(regs, "registrations must be a list");
      for (const auto& r : regs) {
        if (!r.IsMap()) fail_at(r, "registration must be a mapping");
        Registration g;
        g.time = read_real(require(r, "time"));
        const auto sn = require(r, "server");
        const auto idx = read_int(sn, 1);
        if (static_cast<std::size_t>(idx) > o.servers.size()) fail_at(sn, "no such server");
        g.server = static_cast<std::size_t>(idx - 1);
        o.registrations.push_back(g);
      }
    }
    f.online = std::move(o);
  }
  return f;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

inline std::string serialize_scenario(const ScenarioFile& f) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << scenario_schema_version;
  out << YAML::Key << "resources" << YAML::Value << YAML::Flow << f.scenario.resources;
  out << YAML::Key << "servers" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : f.scenario.servers) detail::emit_vector(out, s.capacity);
  out << YAML::EndSeq;
  out << YAML::Key << "frameworks" << YAML::Value << YAML::BeginSeq;
  for (const auto& fw : f.scenario.frameworks) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "demand" << YAML::Value;
    detail::emit_vector(out, fw.demand);
    out << YAML::Key << "weight" << YAML::Value << fw.weight.to_string() << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (f.online) {
    out << YAML::Key << "online" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "roles" << YAML::Value << YAML::BeginSeq;
    for (const auto& r : f.online->roles) {
      out << YAML::BeginMap;
      out << YAML::Key << "name" << YAML::Value << r.name;
      out << YAML::Key << "demand" << YAML::Value;
      detail::emit_vector(out, r.executor_demand);
      out << YAML::Key << "tasks_per_job" << YAML::Value << r.tasks_per_job;
      out << YAML::Key << "queues" << YAML::Value << r.queues;
      out << YAML::Key << "jobs_per_queue" << YAML::Value << r.jobs_per_queue;
      if (r.max_executors_per_job)
        out << YAML::Key << "max_executors" << YAML::Value << *r.max_executors_per_job;
      if (r.task_cpus) out << YAML::Key << "task_cpus" << YAML::Value << r.task_cpus->to_string();
      out << YAML::Key << "duration" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "model" << YAML::Value
          << (r.duration.kind == DurationModel::Kind::deterministic ? "deterministic"
                                                                    : "exponential");
      out << YAML::Key << "mean" << YAML::Value << format_full(r.duration.mean) << YAML::EndMap;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (!f.online->registrations.empty()) {
      out << YAML::Key << "registrations" << YAML::Value << YAML::BeginSeq;
      for (const auto& g : f.online->registrations)
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "time" << YAML::Value
            << format_full(g.time) << YAML::Key << "server" << YAML::Value << g.server + 1
            << YAML::EndMap;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fairsched
