#include <gtest/gtest.h>

#include "rmtraj/rrt.hpp"
#include "rmtraj/scenarios.hpp"
#include "support.hpp"

using namespace rmtraj;

namespace {
Scene empty_scene() { return {"empty", {}, {{-10, -10}, {10, 10}}, {}}; }
}  // namespace

TEST(Rrt, StartEqualsGoal) {
  const ArmModel arm = default_arm();
  const Configuration q = Configuration::Zero(arm.dof());
  const RrtResult r = rrt_plan(empty_scene(), arm, q, {q});
  EXPECT_TRUE(r.success);
  ASSERT_EQ(r.path.size(), 1u);
  EXPECT_EQ(r.path[0], q);
  EXPECT_THROW(rrt_plan(empty_scene(), arm, q, {}), std::invalid_argument);
}

TEST(Rrt, NearGoalsInFreeSpaceAreQuick) {
  const ArmModel arm = default_arm();
  Rng rng(81);
  for (int i = 0; i < 100; ++i) {
    const Configuration a = oracles::random_config(rng, arm);
    const Configuration b = arm.clamp_to_limits(
        a + Configuration::NullaryExpr(arm.dof(), [&] { return rng.uniform(-0.5, 0.5); }));
    RrtParams p;
    p.max_iters = 1000;
    p.rng_seed = i;
    const RrtResult r = rrt_plan(empty_scene(), arm, a, {b}, p);
    ASSERT_TRUE(r.success) << "trial " << i;
    EXPECT_LE(r.iterations, 1000);
    EXPECT_EQ(r.path.front(), a);
    EXPECT_EQ(r.path.back(), b);
  }
}

TEST(Rrt, PathsAreValidAndDeterministic) {
  const Scene scene = build_scene("kitchen");
  const ArmModel arm = default_arm();
  const TestSuite suite = generate_test_suite(scene, arm, 10, 82);
  for (size_t i = 0; i < suite.cases.size(); ++i) {
    const TestCase& c = suite.cases[i];
    const auto goals = collision_free_ik(arm, scene, c.goal);
    RrtParams p;
    p.rng_seed = 7 + i;
    const RrtResult r = rrt_plan(scene, arm, c.start, goals, p);
    if (!r.success) continue;
    EXPECT_EQ(r.path.front(), c.start);
    EXPECT_TRUE(ik_satisfied(arm, r.path.back(), c.goal));
    for (size_t s = 1; s < r.path.size(); ++s) {
      EXPECT_LE(joint_distance(r.path[s - 1], r.path[s]), p.step + 1e-12);
      EXPECT_FALSE(edge_in_collision(arm, scene, r.path[s - 1], r.path[s]));
    }
    const RrtResult again = rrt_plan(scene, arm, c.start, goals, p);
    EXPECT_EQ(again.path, r.path);
    EXPECT_EQ(again.iterations, r.iterations);
  }
}
