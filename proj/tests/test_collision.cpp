#include <gtest/gtest.h>

#include "rmtraj/collision.hpp"
#include "rmtraj/scenarios.hpp"
#include "support.hpp"

using namespace rmtraj;

namespace {

constexpr double kPi = std::numbers::pi;
const Aabb kBig{{-100, -100}, {100, 100}};

ArmModel unit_arm() {
  return ArmModel({{0, 0}, 0.0}, std::vector<Link>(4, {1.0, 0.05}),
                  std::vector<JointLimit>(4, {-kPi, kPi}));
}

Scene empty_scene() { return {"empty", {}, kBig, {}}; }

bool sat_oracle(const ArmModel& arm, const Scene& scene, const Configuration& q) {
  for (const ConvexShape& link : link_shapes(arm, q)) {
    for (const Point2& p : link.vertices())
      if (!(p.x > scene.workspace_bounds.lo.x && p.x < scene.workspace_bounds.hi.x &&
            p.y > scene.workspace_bounds.lo.y && p.y < scene.workspace_bounds.hi.y))
        return true;
    for (const ConvexShape& obs : scene.obstacles)
      if (oracles::sat_overlap(link, obs)) return true;
  }
  return false;
}

}  // namespace

TEST(ConfigInCollision, EmptySceneIsFree) {
  Rng rng(31);
  const ArmModel arm = unit_arm();
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(config_in_collision(arm, empty_scene(), oracles::random_config(rng, arm)));
}

TEST(ConfigInCollision, CoincidentObstacle) {
  const ArmModel arm = unit_arm();
  const Configuration q = Configuration::Zero(4);
  Scene s = empty_scene();
  s.obstacles.push_back(link_shapes(arm, q)[0]);
  EXPECT_TRUE(config_in_collision(arm, s, q));
}

TEST(ConfigInCollision, LeavingBoundsCollides) {
  const ArmModel arm = unit_arm();
  Scene s{"tight", {}, {{-1, -1}, {3.5, 1}}, {}};
  EXPECT_TRUE(config_in_collision(arm, s, Configuration::Zero(4)));
  Configuration q = Configuration::Zero(4);
  q[1] = kPi / 2;  // folds the arm up to x <= 1.05
  s.workspace_bounds = {{-1, -1}, {1.5, 3.5}};
  EXPECT_FALSE(config_in_collision(arm, s, q));
}

TEST(ConfigInCollision, AgreesWithSatOracle) {
  Rng rng(32);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const ArmModel arm = oracles::random_arm(rng, 3 + static_cast<int>(rng.index(4)));
    Scene s{"random", {}, {{-2.5, -2.5}, {2.5, 2.5}}, {}};
    s.workspace_bounds.lo = s.workspace_bounds.lo + arm.base().position;
    s.workspace_bounds.hi = s.workspace_bounds.hi + arm.base().position;
    const int n_obs = static_cast<int>(rng.index(5));
    for (int o = 0; o < n_obs; ++o) {
      const Point2 c = arm.base().position + Point2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      s.obstacles.push_back(oracles::random_polygon(rng, c, rng.uniform(0.05, 0.4)));
    }
    const Configuration q = oracles::random_config(rng, arm);
    const bool got = config_in_collision(arm, s, q);
    EXPECT_EQ(got, sat_oracle(arm, s, q)) << "pair " << i;
    EXPECT_EQ(got, min_clearance(arm, s, q) <= 0.0) << "pair " << i;
    hits += got;
  }
  EXPECT_GT(hits, 100);
  EXPECT_LT(hits, 900);
}

TEST(MinClearance, SentinelAndKnownGap) {
  const ArmModel arm = unit_arm();
  EXPECT_EQ(min_clearance(arm, empty_scene(), Configuration::Zero(4)), kUnboundedClearance);
  Scene s = empty_scene();
  s.obstacles.push_back(ConvexShape::rectangle({1, 1.05}, {2, 1.5}));
  EXPECT_NEAR(min_clearance(arm, s, Configuration::Zero(4)), 1.0, 1e-3);
  s.obstacles.push_back(ConvexShape::rectangle({2.5, -0.5}, {2.6, 0.5}));
  EXPECT_LT(min_clearance(arm, s, Configuration::Zero(4)), 0.0);
}

TEST(EdgeInCollision, TrivialCases) {
  const ArmModel arm = unit_arm();
  Scene s = empty_scene();
  s.obstacles.push_back(ConvexShape::rectangle({-3, 3}, {-2, 4}));
  Configuration q1 = Configuration::Zero(4), q2 = q1;
  q2[0] = -0.5;
  EXPECT_FALSE(edge_in_collision(arm, s, q1, q2));
  EXPECT_FALSE(edge_in_collision(arm, s, q1, q1));
}

TEST(EdgeInCollision, ThinObstacleAcrossTheSweep) {
  const ArmModel arm = unit_arm();
  Scene s = empty_scene();
  // The tip sweeps through (4, 0) between q0 = -0.3 and +0.3.
  s.obstacles.push_back(ConvexShape::rectangle({3.7, -0.01}, {3.9, 0.01}));
  Configuration q1 = Configuration::Zero(4), q2 = q1;
  q1[0] = -0.3;
  q2[0] = 0.3;
  ASSERT_FALSE(config_in_collision(arm, s, q1));
  ASSERT_FALSE(config_in_collision(arm, s, q2));
  EXPECT_TRUE(edge_in_collision(arm, s, q1, q2));
  EXPECT_TRUE(edge_in_collision(arm, s, q2, q1));
  // Dense oracle: the colliding set of the sweep is non-empty.
  int dense_hits = 0;
  for (int i = 0; i <= 10000; ++i)
    dense_hits += config_in_collision(arm, s, q1 + (i / 10000.0) * (q2 - q1));
  EXPECT_GT(dense_hits, 0);
}

TEST(EdgeInCollision, SymmetricAndNested) {
  Rng rng(33);
  const Scene scene = build_scene("shelf_boxes");
  const ArmModel arm = default_arm();
  int coarse_hits = 0;
  for (int i = 0; i < 300; ++i) {
    const Configuration a = oracles::random_config(rng, arm);
    const Configuration b = a + 0.3 * (oracles::random_config(rng, arm) - a);
    EXPECT_EQ(edge_in_collision(arm, scene, a, b, 9), edge_in_collision(arm, scene, b, a, 9));
    if (edge_in_collision(arm, scene, a, b, 9)) {
      ++coarse_hits;
      // 9 interior points sit at i/10, all of which are among the 49 at i/50.
      EXPECT_TRUE(edge_in_collision(arm, scene, a, b, 49));
    }
  }
  EXPECT_GT(coarse_hits, 0);
}

TEST(TrajectoryInCollision, FreeAndFirstSegment) {
  const ArmModel arm = unit_arm();
  std::vector<Configuration> traj;
  for (int t = 0; t < 5; ++t) traj.push_back(Configuration::Constant(4, 0.1 * t));
  EXPECT_FALSE(trajectory_in_collision(arm, empty_scene(), traj).in_collision);
  EXPECT_FALSE(trajectory_in_collision(arm, empty_scene(), traj).segment.has_value());

  // Waypoint 3 is the only configuration inside the obstacle.
  Scene s = empty_scene();
  const auto fk = forward_kinematics(arm, traj[3]);
  const Point2 tip = fk.ee.position;
  s.obstacles.push_back(ConvexShape::rectangle({tip.x - 0.01, tip.y - 0.01}, {tip.x + 0.01, tip.y + 0.01}));
  ASSERT_TRUE(config_in_collision(arm, s, traj[3]));
  const auto check = trajectory_in_collision(arm, s, traj);
  EXPECT_TRUE(check.in_collision);
  ASSERT_TRUE(check.segment.has_value());
  EXPECT_TRUE(*check.segment == 2 || *check.segment == 3);
  const auto last = trajectory_in_collision(arm, s, std::span(traj).first(4));
  EXPECT_EQ(last.segment, std::optional<size_t>(2));
}

TEST(TrajectoryInCollision, DenserInterpolationAgrees) {
  Rng rng(34);
  const Scene scene = build_scene("shelf_boxes");
  const ArmModel arm = default_arm();
  auto sample_free = [&] {
    while (true) {
      Configuration q = oracles::random_config(rng, arm);
      if (!config_in_collision(arm, scene, q)) return q;
    }
  };
  int disagree = 0;
  for (int i = 0; i < 500; ++i) {
    const Configuration a = sample_free();
    const Configuration b = a + 0.5 * (sample_free() - a);
    std::vector<Configuration> traj;
    for (int t = 0; t < 10; ++t) traj.push_back(a + (t / 9.0) * (b - a));
    const bool coarse = trajectory_in_collision(arm, scene, traj).in_collision;
    const bool dense = trajectory_in_collision(arm, scene, traj, 10 * kValidationInterp).in_collision;
    disagree += coarse != dense;
  }
  EXPECT_LT(disagree, 5);
}

TEST(GoalIk, DeterministicSeedPerPose) {
  const EEPose a{{0.5, 0.5}, 0.1, true}, b{{0.5, 0.5}, 0.1, false};
  EXPECT_EQ(goal_ik_seed(a), goal_ik_seed(a));
  EXPECT_NE(goal_ik_seed(a), goal_ik_seed(b));
}
