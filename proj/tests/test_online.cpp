#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace fairsched;
using testing_support::config;

namespace {

OnlineScenario single_server(ResourceVector capacity, ResourceVector demand,
                             std::int64_t tasks, std::int64_t queues = 1) {
  OnlineScenario sc;
  sc.resources = {"cpu", "mem"};
  sc.servers = {std::move(capacity)};
  RoleSpec r;
  r.name = "work";
  r.executor_demand = std::move(demand);
  r.tasks_per_job = tasks;
  r.duration = {DurationModel::Kind::deterministic, 10.0};
  r.queues = queues;
  sc.roles = {r};
  return sc;
}

SimConfig sim(CriterionKind c, ServerPolicy p, AllocationMode m = AllocationMode::characterized,
              ReleaseMode rel = ReleaseMode::pool, std::uint64_t seed = 1) {
  SimConfig cfg;
  cfg.mode = m;
  cfg.release = rel;
  cfg.scheduler = config(c, p, TieBreak::seeded_random, seed);
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Simulate, FourTasksOnTwoSlotsTakeTwoDurations) {
  auto t = simulate(single_server({2, 2}, {1, 1}, 4),
                    sim(CriterionKind::drf, ServerPolicy::rrr));
  EXPECT_FALSE(t.truncated);
  EXPECT_DOUBLE_EQ(t.makespan, 20.0);
  ASSERT_EQ(t.job_completions.size(), 1u);
  EXPECT_DOUBLE_EQ(t.job_completions[0].end, 20.0);
}

TEST(Simulate, ZeroAllocationJobsAreServedFirst) {
  // Two single-job queues share a server with room for two executors: each job gets one.
  for (auto level : {ShareLevel::job, ShareLevel::role}) {
    auto cfg = sim(CriterionKind::drf, ServerPolicy::rrr);
    cfg.share_level = level;
    auto t = simulate(single_server({2, 2}, {1, 1}, 4, 2), cfg);
    ASSERT_EQ(t.job_completions.size(), 2u);
    for (const auto& j : t.job_completions) EXPECT_DOUBLE_EQ(j.end, 40.0) << to_string(level);
  }
}

TEST(Simulate, SaturatedClusterReportsFullUtilization) {
  auto cfg = sim(CriterionKind::psdsf, ServerPolicy::joint_min);
  cfg.sample_period = 0.5;
  auto t = simulate(single_server({2, 2}, {1, 1}, 4), cfg);
  const auto cpu = utilization_series(t, 0);
  ASSERT_FALSE(cpu.empty());
  for (const auto& p : cpu)
    if (p.time < 20.0) {
      EXPECT_DOUBLE_EQ(p.value, 1.0) << p.time;
    }
}

TEST(Simulate, IdleClusterReportsZeroAndTruncates) {
  auto cfg = sim(CriterionKind::drf, ServerPolicy::rrr);
  cfg.horizon = 50;
  auto t = simulate(single_server({1, 1}, {2, 2}, 3), cfg);
  EXPECT_TRUE(t.truncated);
  for (std::size_t r = 0; r < 2; ++r)
    for (const auto& p : utilization_series(t, r)) EXPECT_EQ(p.value, 0.0);
  EXPECT_THROW(utilization_series(t, 2), config_error);
}

TEST(Simulate, ObliviousModeRejectsDemandAwareChoices) {
  const auto sc = single_server({4, 4}, {1, 1}, 2);
  EXPECT_THROW(simulate(sc, sim(CriterionKind::tsf, ServerPolicy::rrr, AllocationMode::oblivious)),
               config_error);
  EXPECT_THROW(
      simulate(sc, sim(CriterionKind::drf, ServerPolicy::best_fit, AllocationMode::oblivious)),
      config_error);
  EXPECT_NO_THROW(
      simulate(sc, sim(CriterionKind::psdsf, ServerPolicy::joint_min, AllocationMode::oblivious)));
}

TEST(Simulate, ObliviousJobTakesTheWholeOffer) {
  // The single job accepts every executor that fits, so all four tasks run at once.
  auto t = simulate(single_server({4, 4}, {1, 1}, 4),
                    sim(CriterionKind::drf, ServerPolicy::rrr, AllocationMode::oblivious));
  EXPECT_DOUBLE_EQ(t.makespan, 10.0);
}

TEST(Simulate, ConservationHoldsAtEveryEvent) {
  const auto presets = builtin_scenarios();
  const std::pair<CriterionKind, ServerPolicy> oblivious_ok[] = {
      {CriterionKind::drf, ServerPolicy::rrr}, {CriterionKind::rpsdsf, ServerPolicy::joint_min}};
  const std::pair<CriterionKind, ServerPolicy> characterized_only[] = {
      {CriterionKind::tsf, ServerPolicy::best_fit}, {CriterionKind::drf, ServerPolicy::best_fit}};
  for (const char* name : {"STAGED3", "HETERO6"})
    for (auto mode : {AllocationMode::characterized, AllocationMode::oblivious})
      for (auto rel : {ReleaseMode::pool, ReleaseMode::sequential})
        for (auto level : {ShareLevel::role, ShareLevel::job}) {
          std::vector<std::pair<CriterionKind, ServerPolicy>> pairs(std::begin(oblivious_ok),
                                                                    std::end(oblivious_ok));
          if (mode == AllocationMode::characterized)
            pairs.insert(pairs.end(), std::begin(characterized_only), std::end(characterized_only));
          for (auto [c, p] : pairs) {
            auto cfg = sim(c, p, mode, rel, 4);
            cfg.share_level = level;
            cfg.check_invariants = true;
            EventTrace t;
            ASSERT_NO_THROW(t = simulate(presets.at(name), cfg))
                << name << ' ' << to_string(mode) << ' ' << to_string(rel) << ' ' << to_string(c);
            EXPECT_FALSE(t.truncated);
            EXPECT_EQ(t.job_completions.size(),
                      static_cast<std::size_t>(presets.at(name).total_jobs()));
            for (const auto& s : t.samples)
              for (double f : s.fraction) {
                EXPECT_GE(f, 0.0);
                EXPECT_LE(f, 1.0);
              }
          }
        }
}

TEST(Simulate, QueuesRunOneJobAtATime) {
  auto t = simulate(builtin_scenarios().at("STAGED3"),
                    sim(CriterionKind::rpsdsf, ServerPolicy::joint_min));
  std::map<std::pair<std::size_t, std::size_t>, double> last_end;
  std::vector<JobRecord> jobs = t.job_completions;
  std::sort(jobs.begin(), jobs.end(),
            [](const JobRecord& a, const JobRecord& b) { return a.job_id < b.job_id; });
  for (const auto& j : jobs) {
    auto key = std::make_pair(j.role, j.queue);
    if (last_end.count(key)) {
      EXPECT_GE(j.start, last_end[key]);
    }
    last_end[key] = j.end;
    EXPECT_LE(j.end, t.makespan);
  }
}

TEST(Simulate, SameSeedSameTrace) {
  const auto sc = builtin_scenarios().at("HETERO6");
  for (auto mode : {AllocationMode::characterized, AllocationMode::oblivious}) {
    auto cfg = sim(CriterionKind::psdsf, ServerPolicy::rrr, mode, ReleaseMode::sequential, 17);
    auto a = simulate(sc, cfg), b = simulate(sc, cfg);
    std::ostringstream ua, ub, ca, cb;
    write_utilization_csv(ua, a);
    write_utilization_csv(ub, b);
    write_completions_csv(ca, a);
    write_completions_csv(cb, b);
    EXPECT_EQ(ua.str(), ub.str());
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(a.makespan, b.makespan);
  }
}

TEST(Simulate, ExponentialDurationsDependOnTheSeed) {
  auto sc = single_server({4, 4}, {1, 1}, 20);
  sc.roles[0].duration = {DurationModel::Kind::exponential, 10.0};
  auto a = simulate(sc, sim(CriterionKind::drf, ServerPolicy::rrr, AllocationMode::characterized,
                            ReleaseMode::pool, 1));
  auto b = simulate(sc, sim(CriterionKind::drf, ServerPolicy::rrr, AllocationMode::characterized,
                            ReleaseMode::pool, 2));
  EXPECT_NE(a.makespan, b.makespan);
}

TEST(BuiltinScenarios, PresetShapes) {
  const auto p = builtin_scenarios();
  EXPECT_EQ(p.at("HETERO6").total_capacity(), (ResourceVector{36, 66}));
  EXPECT_EQ(p.at("HOMO6").total_capacity(), (ResourceVector{36, 66}));
  EXPECT_EQ(p.at("HETERO6").roles[0].executor_demand, (ResourceVector{2, 2}));
  EXPECT_EQ(p.at("HETERO6").roles[1].executor_demand, (ResourceVector{1, Rational(7, 2)}));
  EXPECT_EQ(p.at("HETERO6").total_jobs(), 500);
  EXPECT_EQ(p.at("STAGED3").total_jobs(), 200);
  EXPECT_EQ(p.at("STAGED3").registrations.size(), 3u);
}

TEST(TraceCsv, Headers) {
  auto t = simulate(single_server({2, 2}, {1, 1}, 4), sim(CriterionKind::drf, ServerPolicy::rrr));
  std::ostringstream u, c;
  write_utilization_csv(u, t);
  write_completions_csv(c, t);
  EXPECT_TRUE(u.str().starts_with("time,resource,allocated_fraction\n"));
  EXPECT_EQ(c.str(), "job_id,role,queue,start,end\n1,work,1,0,20\n");
}
