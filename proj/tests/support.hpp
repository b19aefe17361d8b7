#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "fairsched/fairsched.hpp"
#include "oracle.hpp"

namespace testing_support {

inline fairsched::SchedulerConfig config(fairsched::CriterionKind c, fairsched::ServerPolicy p,
                                         fairsched::TieBreak tb = fairsched::TieBreak::lowest_index,
                                         std::uint64_t seed = 0) {
  fairsched::SchedulerConfig cfg;
  cfg.criterion = c;
  cfg.policy = p;
  cfg.tie_break = tb;
  cfg.seed = seed;
  return cfg;
}

// x in the order (1,1),(1,2),(2,1),(2,2).
inline std::vector<std::int64_t> flat(const fairsched::AllocationMatrix& a) {
  std::vector<std::int64_t> v;
  for (std::size_t n = 0; n < a.frameworks(); ++n)
    for (std::size_t i = 0; i < a.servers(); ++i) v.push_back(a(n, i));
  return v;
}

inline std::vector<fairsched::Rational> flat(const std::vector<fairsched::ResourceVector>& u) {
  std::vector<fairsched::Rational> v;
  for (const auto& s : u)
    for (const auto& q : s.values()) v.push_back(q);
  return v;
}

inline fairsched::Scenario to_scenario(const oracle::Instance& in) {
  fairsched::Scenario s;
  s.resources = {"r1", "r2"};
  for (std::size_t i = 0; i < in.capacity.size(); ++i)
    s.servers.push_back({i + 1, {in.capacity[i][0], in.capacity[i][1]}});
  for (std::size_t n = 0; n < in.demand.size(); ++n)
    s.frameworks.push_back({n + 1, {in.demand[n][0], in.demand[n][1]}, 1});
  return s;
}

inline oracle::Alloc to_oracle(const fairsched::AllocationMatrix& a) {
  oracle::Alloc x;
  for (auto v : flat(a)) x.push_back(static_cast<int>(v));
  return x;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;  // stdout only; stderr is folded in when `merge_stderr` is set
};

inline CommandResult run_command(const std::string& cmd, bool merge_stderr = false) {
  CommandResult r;
  const std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(full.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace testing_support
