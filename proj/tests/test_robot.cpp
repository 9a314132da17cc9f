#include <gtest/gtest.h>

#include "rmtraj/robot.hpp"
#include "support.hpp"

using namespace rmtraj;

namespace {

constexpr double kPi = std::numbers::pi;

ArmModel unit_arm(int k, double base_heading = 0.0) {
  return ArmModel({{0, 0}, base_heading}, std::vector<Link>(k, {1.0, 0.05}),
                  std::vector<JointLimit>(k, {-kPi, kPi}));
}

Configuration zeros(int k) { return Configuration::Zero(k); }

}  // namespace

TEST(ArmModel, Validation) {
  EXPECT_THROW(unit_arm(2), std::invalid_argument);
  EXPECT_THROW(unit_arm(9), std::invalid_argument);
  EXPECT_THROW(ArmModel({}, {{1, .1}, {1, .1}, {0, .1}}, {{-1, 1}, {-1, 1}, {-1, 1}}),
               std::invalid_argument);
  EXPECT_THROW(ArmModel({}, {{1, .1}, {1, .1}, {1, .1}}, {{-1, 1}, {1, -1}, {-1, 1}}),
               std::invalid_argument);
  EXPECT_THROW(ArmModel({}, {{1, .1}, {1, .1}, {1, .1}}, {{-1, 1}, {-1, 1}}), std::invalid_argument);
  for (int k = 3; k <= 8; ++k) EXPECT_EQ(unit_arm(k).dof(), k);
}

TEST(ArmModel, DistalDefaultsToMidpoint) {
  const ArmModel arm({}, std::vector<Link>(6, {1.0, 0.05}),
                     {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {0.0, 1.0}, {-2.0, 1.0}});
  // A full configuration; only the joints past the sampled ones matter.
  ASSERT_EQ(arm.distal_fixed_values().size(), 6);
  EXPECT_DOUBLE_EQ(arm.distal_fixed_values()[4], 0.5);
  EXPECT_DOUBLE_EQ(arm.distal_fixed_values()[5], -0.5);
}

TEST(ForwardKinematics, StraightChainExamples) {
  const ArmModel arm = unit_arm(4);
  EEPose ee = forward_kinematics(arm, zeros(4)).ee;
  EXPECT_NEAR(ee.position.x, 4.0, 1e-15);
  EXPECT_NEAR(ee.position.y, 0.0, 1e-15);
  EXPECT_NEAR(ee.heading, 0.0, 1e-15);

  Configuration q = zeros(4);
  q[0] = kPi / 2;
  ee = forward_kinematics(arm, q).ee;
  EXPECT_NEAR(ee.position.x, 0.0, 1e-12);
  EXPECT_NEAR(ee.position.y, 4.0, 1e-12);
  EXPECT_NEAR(ee.heading, kPi / 2, 1e-15);
}

TEST(ForwardKinematics, MatchesComplexOracle) {
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const ArmModel arm = oracles::random_arm(rng, 3 + static_cast<int>(rng.index(6)));
    const Configuration q = oracles::random_config(rng, arm);
    const EEPose ee = forward_kinematics(arm, q).ee;
    const EEPose ref = oracles::fk_oracle(arm, q);
    EXPECT_NEAR(ee.position.x, ref.position.x, 1e-9);
    EXPECT_NEAR(ee.position.y, ref.position.y, 1e-9);
    EXPECT_NEAR(normalize_angle(ee.heading - ref.heading), 0.0, 1e-9);
  }
}

TEST(ForwardKinematics, PeriodicInEachJoint) {
  Rng rng(22);
  const ArmModel arm = oracles::random_arm(rng, 5);
  for (int i = 0; i < 50; ++i) {
    const Configuration q = oracles::random_config(rng, arm);
    const EEPose ee = forward_kinematics(arm, q).ee;
    for (int j = 0; j < arm.dof(); ++j) {
      Configuration w = q;
      w[j] += 2 * kPi;
      const EEPose ew = forward_kinematics(arm, w).ee;
      EXPECT_NEAR(ew.position.x, ee.position.x, 1e-9);
      EXPECT_NEAR(ew.position.y, ee.position.y, 1e-9);
      EXPECT_NEAR(normalize_angle(ew.heading - ee.heading), 0.0, 1e-9);
    }
  }
}

TEST(ForwardKinematics, DimensionMismatchThrows) {
  EXPECT_THROW(forward_kinematics(unit_arm(4), zeros(3)), std::invalid_argument);
}

TEST(LinkShapes, ZeroConfigurationEndToEnd) {
  const ArmModel arm = unit_arm(4);
  const auto shapes = link_shapes(arm, zeros(4));
  ASSERT_EQ(shapes.size(), 4u);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(shapes[j].bounds().lo.x, j, 1e-12);
    EXPECT_NEAR(shapes[j].bounds().hi.x, j + 1, 1e-12);
    EXPECT_NEAR(shapes[j].bounds().lo.y, -0.05, 1e-12);
    EXPECT_NEAR(shapes[j].bounds().hi.y, 0.05, 1e-12);
  }
}

TEST(LinkShapes, CentroidsAtLinkMidpoints) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const ArmModel arm = oracles::random_arm(rng, 3 + static_cast<int>(rng.index(6)));
    const Configuration q = oracles::random_config(rng, arm);
    const auto shapes = link_shapes(arm, q);
    const auto fk = forward_kinematics(arm, q);
    ASSERT_EQ(static_cast<int>(shapes.size()), arm.dof());
    for (int j = 0; j < arm.dof(); ++j) {
      const Point2 start = fk.link_poses[j].position;
      const Point2 end = j + 1 < arm.dof() ? fk.link_poses[j + 1].position : fk.ee.position;
      const Point2 mid = 0.5 * (start + end);
      EXPECT_NEAR(shapes[j].centroid().x, mid.x, 1e-9);
      EXPECT_NEAR(shapes[j].centroid().y, mid.y, 1e-9);
    }
  }
}

TEST(Jacobian, StraightChainLevers) {
  for (int k = 3; k <= 8; ++k) {
    const auto jac = ee_jacobian(unit_arm(k), zeros(k));
    for (int j = 0; j < k; ++j) {
      EXPECT_NEAR(jac(0, j), 0.0, 1e-12);
      EXPECT_NEAR(jac(1, j), k - j, 1e-12);
      EXPECT_EQ(jac(2, j), 1.0);
    }
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  Rng rng(24);
  constexpr double h = 1e-6;
  for (int k = 3; k <= 8; ++k) {
    for (int i = 0; i < 100; ++i) {
      const ArmModel arm = oracles::random_arm(rng, k);
      const Configuration q = oracles::random_config(rng, arm);
      const auto jac = ee_jacobian(arm, q);
      for (int j = 0; j < k; ++j) {
        Configuration qp = q, qm = q;
        qp[j] += h;
        qm[j] -= h;
        const EEPose p = forward_kinematics(arm, qp).ee, m = forward_kinematics(arm, qm).ee;
        const Eigen::Vector3d fd((p.position.x - m.position.x) / (2 * h),
                                 (p.position.y - m.position.y) / (2 * h),
                                 normalize_angle(p.heading - m.heading) / (2 * h));
        const Eigen::Vector3d col = jac.col(j);
        EXPECT_LE((fd - col).norm(), 1e-5 * std::max(1.0, col.norm())) << "k " << k << " j " << j;
      }
    }
  }
}

TEST(SolveIk, RoundTripThroughFk) {
  Rng rng(25);
  for (int i = 0; i < 100; ++i) {
    const ArmModel arm = oracles::random_arm(rng, 3 + static_cast<int>(rng.index(4)));
    const Configuration q = oracles::random_config(rng, arm);
    const EEPose target = forward_kinematics(arm, q).ee;
    const auto sols = solve_ik(arm, target, 16, 1000 + i);
    ASSERT_FALSE(sols.empty()) << "case " << i;
    for (const auto& s : sols) {
      EXPECT_TRUE(arm.within_limits(s));
      EXPECT_TRUE(ik_satisfied(arm, s, target));
      const EEPose ee = forward_kinematics(arm, s).ee;
      EXPECT_LT(norm(ee.position - target.position), 1e-4);
      EXPECT_LT(std::abs(normalize_angle(ee.heading - target.heading)), 1e-3);
    }
  }
}

TEST(SolveIk, UnreachableIsEmpty) {
  const ArmModel arm = unit_arm(4);
  EXPECT_TRUE(solve_ik(arm, {{4.01, 0}, 0, false}, 8, 1).empty());
  EXPECT_TRUE(solve_ik(arm, {{3, 3}, 0, true}, 8, 1).empty());
}

TEST(SolveIk, FullyStretchedIsZero) {
  const ArmModel arm = unit_arm(4);
  const auto sols = solve_ik(arm, {{4.0, 0.0}, 0.0, false}, 8, 3);
  ASSERT_FALSE(sols.empty());
  for (const auto& s : sols) EXPECT_LT(s.cwiseAbs().maxCoeff(), 0.05);
}

TEST(SolveIk, DeterministicAndDistinct) {
  const ArmModel arm = unit_arm(5);
  const EEPose target{{1.5, 1.0}, 0.3, true};
  const auto a = solve_ik(arm, target, 8, 77), b = solve_ik(arm, target, 8, 77);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) EXPECT_GE(joint_distance(a[i], a[j]), 1e-3);
  EXPECT_TRUE(solve_ik(arm, target, 0, 77).empty());
}

TEST(PathLength, SumsSegmentNorms) {
  std::vector<Configuration> path{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(3, 4, 0),
                                  Eigen::Vector3d(3, 4, 1)};
  EXPECT_DOUBLE_EQ(path_length(path), 6.0);
  EXPECT_DOUBLE_EQ(path_length(std::span<const Configuration>()), 0.0);
}
