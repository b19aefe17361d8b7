#include <gtest/gtest.h>

#include <random>

#include "fairsched/core_model.hpp"
#include "fairsched/presets.hpp"

using namespace fairsched;

namespace {

ClusterState illustrative_state() { return make_state(illustrative_scenario()); }

}  // namespace

TEST(ResidualCapacity, EmptyAllocationIsFullCapacity) {
  auto s = illustrative_state();
  EXPECT_EQ(residual_capacity(s, 0), (ResourceVector{100, 30}));
  EXPECT_EQ(residual_capacity(s, 1), (ResourceVector{30, 100}));
}

TEST(ResidualCapacity, AfterNineteenAndTwoTasks) {
  auto s = illustrative_state();
  for (int k = 0; k < 19; ++k) s.apply_task(0, 0);
  for (int k = 0; k < 2; ++k) s.apply_task(1, 0);
  EXPECT_EQ(residual_capacity(s, 0), (ResourceVector{3, 1}));
}

TEST(ResidualCapacity, TwentyTasksOfFrameworkOne) {
  auto s = illustrative_state();
  for (int k = 0; k < 20; ++k) s.apply_task(0, 0);
  EXPECT_EQ(residual_capacity(s, 0), (ResourceVector{0, 10}));
  EXPECT_FALSE(task_fits(s, 0, 0));
  EXPECT_FALSE(task_fits(s, 1, 0));  // (1,5) needs 5 units of r2 and 10 remain, but no r1
}

TEST(TaskFits, ComponentwiseComparison) {
  EXPECT_FALSE(task_fits(ResourceVector{5, 1}, ResourceVector{3, 1}));
  EXPECT_TRUE(task_fits(ResourceVector{1, 5}, ResourceVector{1, 5}));
  EXPECT_TRUE(task_fits(ResourceVector{1, 5}, ResourceVector{11, 5}));
  EXPECT_THROW(task_fits(ResourceVector{1, 5}, ResourceVector{1, 5, 0}), config_error);
}

TEST(MaxStandaloneTasks, IllustrativeFrameworks) {
  const auto sc = illustrative_scenario();
  EXPECT_EQ(max_standalone_tasks(sc.frameworks[0], sc.servers), 26);
  EXPECT_EQ(max_standalone_tasks(sc.frameworks[1], sc.servers), 26);
  EXPECT_EQ(max_standalone_tasks({1, {1, 1}, 1}, std::vector<ServerSpec>{{1, {1, 1}}}), 1);
}

TEST(MaxStandaloneTasks, IgnoresResourcesWithZeroDemand) {
  EXPECT_EQ(max_standalone_tasks({1, {2, 0}, 1}, std::vector<ServerSpec>{{1, {7, 0}}, {2, {4, 3}}}), 5);
}

TEST(MaxStandaloneTasks, RejectsAllZeroDemand) {
  EXPECT_THROW(max_standalone_tasks({1, {0, 0}, 1}, std::vector<ServerSpec>{{1, {1, 1}}}),
               invalid_framework);
}

TEST(ApplyTask, UpdatesAllocationAndResidual) {
  auto s = illustrative_state();
  apply_task(s, 0, 0);
  EXPECT_EQ(s.tasks(0, 0), 1);
  EXPECT_EQ(residual_capacity(s, 0), (ResourceVector{95, 29}));
}

TEST(ApplyTask, ReleaseUndoesApply) {
  auto s = illustrative_state();
  const auto before = s;
  apply_task(s, 1, 1);
  release_task(s, 1, 1);
  EXPECT_EQ(s, before);
}

TEST(ApplyTask, PreconditionViolationsThrow) {
  auto s = illustrative_state();
  EXPECT_THROW(release_task(s, 0, 0), infeasible_allocation);
  for (int k = 0; k < 20; ++k) s.apply_task(0, 0);
  EXPECT_THROW(apply_task(s, 0, 0), infeasible_allocation);
}

TEST(ClusterStateValidation, RejectsBadSpecs) {
  EXPECT_THROW(ClusterState({{1, {0, 0}}}, {}), config_error);
  EXPECT_THROW(ClusterState({{1, {1, 1}}}, {{1, {0, 0}, 1}}), invalid_framework);
  EXPECT_THROW(ClusterState({{1, {1, 1}}}, {{1, {1, 1}, 0}}), invalid_framework);
  EXPECT_THROW(ClusterState({{1, {1, 1}}}, {{1, {1, 1, 1}, 1}}), config_error);
  EXPECT_THROW((ResourceVector{1, -1}), std::invalid_argument);
}

TEST(ClusterStateProperty, RandomApplyReleaseSequencesStayFeasible) {
  // Capacities include fractional values so exactness matters.
  ClusterState s({{1, {Rational(101, 4), 17}}, {2, {9, Rational(61, 2)}}, {3, {5, 5}}},
                 {{1, {2, Rational(1, 3)}, 1}, {2, {Rational(1, 2), 3}, 1}, {3, {1, 1}, 2}});
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> pickn(0, 2), picki(0, 2);
  std::bernoulli_distribution add(0.6);
  int applied = 0, released = 0;
  for (int step = 0; step < 10000; ++step) {
    const auto n = pickn(gen), i = picki(gen);
    const auto snapshot = s;
    if (add(gen)) {
      if (!task_fits(s, n, i)) continue;
      s.apply_task(n, i);
      ++applied;
      auto undo = s;
      undo.release_task(n, i);
      ASSERT_EQ(undo, snapshot);
    } else {
      if (s.tasks(n, i) == 0) continue;
      s.release_task(n, i);
      ++released;
    }
    for (std::size_t j = 0; j < s.num_servers(); ++j) {
      ResourceVector used(2);
      for (std::size_t m = 0; m < s.num_frameworks(); ++m)
        used += s.framework(m).demand.scaled(s.tasks(m, j));
      const auto res = residual_capacity(s, j);  // throws if negative
      ASSERT_EQ(res + used, s.server(j).capacity);
    }
  }
  EXPECT_GT(applied, 1000);
  EXPECT_GT(released, 1000);
}

TEST(ClusterStateDynamic, RemovingAFrameworkReturnsItsResources) {
  auto s = illustrative_state();
  s.apply_task(0, 0);
  s.apply_task(1, 0);
  s.remove_framework(0);
  EXPECT_EQ(s.num_frameworks(), 1u);
  EXPECT_EQ(residual_capacity(s, 0), (ResourceVector{99, 25}));
  EXPECT_EQ(s.tasks(0, 0), 1);
}
