#pragma once

// Authored desk-scale environments, feasible test-case generation and the
// scene / test-suite file formats.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rmtraj/collision.hpp"
#include "rmtraj/errors.hpp"
#include "rmtraj/robot.hpp"
#include "rmtraj/rrt.hpp"

namespace rmtraj {

inline constexpr int kSceneFormatVersion = 1;
inline constexpr int kSuiteFormatVersion = 1;

/// Names accepted by build_scene, easiest to hardest.
const std::vector<std::string>& scene_names();

/// Throws std::invalid_argument for an unknown name.
Scene build_scene(std::string_view name);

/// Four-link arm shared by every authored scene: base on a pedestal above the
/// table, pointing straight up at the zero configuration.
ArmModel default_arm();

struct TestCase {
  std::string id;
  Configuration start;
  EEPose goal;
  std::string scene_name;
};

struct TestSuite {
  std::string scene_name;
  uint64_t rng_seed = 0;
  ArmModel arm;
  std::vector<TestCase> cases;
};

struct SuiteOptions {
  long max_attempts = 1'000'000;  ///< total configuration samples
  /// Probability that a case's goal is drawn with the end effector inside
  /// one of the scene's goal regions rather than anywhere in free space.
  double targeted_goal_fraction = 0.5;
  RrtParams rrt;                  ///< solvability oracle; rng_seed is derived per case
};

/// Samples `count` cases whose start is collision-free, whose goal pose is the
/// FK of a collision-free configuration, and which the RRT baseline solves.
/// Targeted goals reject configurations until the end effector lies in a
/// goal region.
/// Throws GenerationError when options.max_attempts samples are exhausted.
TestSuite generate_test_suite(const Scene& scene, const ArmModel& arm, int count, uint64_t rng_seed,
                              const SuiteOptions& options = {});

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(std::string_view text);
std::string suite_to_json(const TestSuite& suite);
TestSuite suite_from_json(std::string_view text);

void save_scene(const Scene& scene, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);
void save_suite(const TestSuite& suite, const std::filesystem::path& path);
TestSuite load_suite(const std::filesystem::path& path);

}  // namespace rmtraj
