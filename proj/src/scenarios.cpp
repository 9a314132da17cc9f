#include "rmtraj/scenarios.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rmtraj/random.hpp"

namespace rmtraj {

namespace {

using nlohmann::json;

// Shared desk layout (meters). The arm base sits on a pedestal 0.12 m above
// the table top; y points up.
constexpr double kTableTop = -0.12;
constexpr Aabb kWorkspace{{-1.3, -0.35}, {1.3, 1.3}};

ConvexShape box(double x0, double y0, double x1, double y1) {
  return ConvexShape::rectangle({x0, y0}, {x1, y1});
}

ConvexShape table() { return box(-1.3, -0.35, 1.3, kTableTop); }

Scene tabletop_pole() {
  return {"tabletop_pole",
          {table(), box(0.42, kTableTop, 0.47, 0.50), box(0.72, kTableTop, 0.88, 0.02)},
          kWorkspace,
          {{{0.10, -0.10}, {0.38, 0.40}},    // in front of the pole
           {{0.50, -0.10}, {1.05, 0.40}}}};  // behind it
}

Scene tabletop_container() {
  return {"tabletop_container",
          {table(),
           box(0.35, kTableTop, 0.39, 0.45),    // container walls
           box(0.95, kTableTop, 0.99, 0.45),
           box(0.58, kTableTop, 0.72, 0.0),     // box inside
           box(-0.75, kTableTop, -0.58, 0.04)}, // box outside
          kWorkspace,
          {{{0.41, -0.10}, {0.93, 0.28}}}};    // container interior
}

Scene kitchen() {
  return {"kitchen",
          {table(),
           box(0.35, 0.72, 1.0, 0.95),          // upper cabinets
           box(-1.0, 0.78, -0.45, 1.0),
           box(0.55, 0.28, 1.1, 0.32),          // ledge over the counter
           box(0.75, kTableTop, 1.05, 0.12),    // appliance on the counter
           ConvexShape({{-0.70, kTableTop},     // pot
                        {-0.45, kTableTop},
                        {-0.40, -0.02},
                        {-0.50, 0.08},
                        {-0.65, 0.08},
                        {-0.75, -0.02}})},
          kWorkspace,
          {{{0.50, -0.10}, {1.05, 0.26}},      // under the ledge
           {{0.45, 0.34}, {1.00, 0.70}}}};     // between ledge and cabinet
}

Scene shelf_boxes() {
  Scene s{"shelf_boxes", {table(), box(1.12, kTableTop, 1.16, 1.2)}, kWorkspace, {}};
  // Five boards over the table give five slots of 0.175 m clear height. Each
  // slot holds a 0.06 m box, leaving 0.115 m above it.
  constexpr double kBoardThickness = 0.025;
  const double boards[] = {0.10, 0.30, 0.50, 0.70, 0.90};
  const double box_x[] = {0.80, 0.62, 0.90, 0.70, 0.85};
  double floor = kTableTop;
  for (int i = 0; i < 5; ++i) {
    s.obstacles.push_back(box(0.45, boards[i], 1.12, boards[i] + kBoardThickness));
    s.obstacles.push_back(box(box_x[i], floor, box_x[i] + 0.12, floor + 0.06));
    s.goal_regions.push_back({{0.50, floor + 0.01}, {1.08, boards[i] - 0.01}});
    floor = boards[i] + kBoardThickness;
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json shape_json(const ConvexShape& shape) {
  json verts = json::array();
  for (const Point2& p : shape.vertices()) verts.push_back({p.x, p.y});
  return {{"vertices", verts}};
}

json arm_json(const ArmModel& arm) {
  json links = json::array();
  json limits = json::array();
  for (const Link& l : arm.links()) links.push_back({{"length", l.length}, {"half_width", l.half_width}});
  for (const JointLimit& l : arm.limits()) limits.push_back({l.lo, l.hi});
  return {{"base", {arm.base().position.x, arm.base().position.y, arm.base().heading}},
          {"links", links},
          {"joint_limits", limits}};
}

ArmModel arm_from_json(const json& j) {
  const auto base = j.at("base").get<std::vector<double>>();
  if (base.size() != 3) throw FormatError("arm.base must be [x, y, heading]");
  std::vector<Link> links;
  for (const json& l : j.at("links")) {
    links.push_back({l.at("length").get<double>(), l.at("half_width").get<double>()});
  }
  std::vector<JointLimit> limits;
  for (const json& l : j.at("joint_limits")) {
    const auto pair = l.get<std::vector<double>>();
    if (pair.size() != 2) throw FormatError("joint limit must be [lo, hi]");
    limits.push_back({pair[0], pair[1]});
  }
  return ArmModel({{base[0], base[1]}, base[2]}, std::move(links), std::move(limits));
}

void check_version(const json& j, int expected, const char* what) {
  const int v = j.at("format_version").get<int>();
  if (v != expected) {
    throw FormatError(std::string(what) + " format_version " + std::to_string(v) +
                      " unsupported (expected " + std::to_string(expected) + ")");
  }
}

Aabb box_from_json(const json& j, const char* what) {
  const auto b = j.get<std::vector<std::vector<double>>>();
  if (b.size() != 2 || b[0].size() != 2 || b[1].size() != 2) {
    throw FormatError(std::string(what) + " must be [[xlo, ylo], [xhi, yhi]]");
  }
  return {{b[0][0], b[0][1]}, {b[1][0], b[1][1]}};
}

template <typename F>
auto parse_guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid ") + what + ": " + e.what());
  }
}

bool in_goal_region(const Scene& scene, const Point2& p) {
  for (const Aabb& r : scene.goal_regions)
    if (r.contains(p)) return true;
  return false;
}

Configuration sample_free(const ArmModel& arm, const Scene& scene, Rng& rng, long& attempts,
                          long max_attempts, bool targeted = false) {
  Configuration q(arm.dof());
  while (true) {
    if (++attempts > max_attempts) {
      throw GenerationError("scene '" + scene.name + "': no collision-free sample after " +
                            std::to_string(max_attempts) + " attempts");
    }
    for (int j = 0; j < arm.dof(); ++j) q[j] = rng.uniform(arm.limits()[j].lo, arm.limits()[j].hi);
    if (targeted && !in_goal_region(scene, forward_kinematics(arm, q).ee.position)) continue;
    if (!config_in_collision(arm, scene, q)) return q;
  }
}

}  // namespace

const std::vector<std::string>& scene_names() {
  static const std::vector<std::string> names{"tabletop_pole", "tabletop_container", "kitchen",
                                              "shelf_boxes"};
  return names;
}

Scene build_scene(std::string_view name) {
  if (name == "tabletop_pole") return tabletop_pole();
  if (name == "tabletop_container") return tabletop_container();
  if (name == "kitchen") return kitchen();
  if (name == "shelf_boxes") return shelf_boxes();
  throw std::invalid_argument("unknown scene '" + std::string(name) + "'");
}

ArmModel default_arm() {
  return ArmModel({{0.0, 0.0}, std::numbers::pi / 2},
                  {{0.40, 0.030}, {0.32, 0.025}, {0.24, 0.020}, {0.14, 0.015}},
                  {{-2.2, 2.2}, {-2.6, 2.6}, {-2.6, 2.6}, {-2.6, 2.6}});
}

TestSuite generate_test_suite(const Scene& scene, const ArmModel& arm, int count, uint64_t rng_seed,
                              const SuiteOptions& options) {
  if (count < 1) throw std::invalid_argument("generate_test_suite: count must be >= 1");
  TestSuite suite{scene.name, rng_seed, arm, {}};
  Rng rng(rng_seed);
  long attempts = 0;
  for (uint64_t candidate = 0; static_cast<int>(suite.cases.size()) < count; ++candidate) {
    Configuration start = sample_free(arm, scene, rng, attempts, options.max_attempts);
    const bool targeted =
        !scene.goal_regions.empty() && rng.uniform() < options.targeted_goal_fraction;
    const Configuration goal_q =
        sample_free(arm, scene, rng, attempts, options.max_attempts, targeted);
    EEPose goal = forward_kinematics(arm, goal_q).ee;
    goal.heading_matters = true;

    // Planners resolve the goal through the same seeded IK, so require that
    // it yields a usable joint goal here.
    if (collision_free_ik(arm, scene, goal).empty()) continue;
    RrtParams rrt = options.rrt;
    rrt.rng_seed = mix_seed(rng_seed, candidate);
    if (!rrt_plan(scene, arm, start, {goal_q}, rrt).success) continue;

    char id[32];
    std::snprintf(id, sizeof id, "%s-%04zu", scene.name.c_str(), suite.cases.size());
    suite.cases.push_back({id, std::move(start), goal, scene.name});
  }
  return suite;
}

std::string scene_to_json(const Scene& scene) {
  json obstacles = json::array();
  for (const ConvexShape& s : scene.obstacles) obstacles.push_back(shape_json(s));
  const Aabb& b = scene.workspace_bounds;
  json j = {{"format_version", kSceneFormatVersion},
            {"name", scene.name},
            {"workspace_bounds", {{b.lo.x, b.lo.y}, {b.hi.x, b.hi.y}}},
            {"obstacles", obstacles}};
  if (!scene.goal_regions.empty()) {
    json regions = json::array();
    for (const Aabb& r : scene.goal_regions) regions.push_back({{r.lo.x, r.lo.y}, {r.hi.x, r.hi.y}});
    j["goal_regions"] = regions;
  }
  return j.dump(2) + "\n";
}

Scene scene_from_json(std::string_view text) {
  return parse_guarded("scene", [&] {
    const json j = json::parse(text);
    check_version(j, kSceneFormatVersion, "scene");
    Scene scene;
    scene.name = j.at("name").get<std::string>();
    scene.workspace_bounds = box_from_json(j.at("workspace_bounds"), "workspace_bounds");
    if (j.contains("goal_regions")) {
      for (const json& r : j.at("goal_regions"))
        scene.goal_regions.push_back(box_from_json(r, "goal region"));
    }
    for (const json& o : j.at("obstacles")) {
      std::vector<Point2> verts;
      for (const json& v : o.at("vertices")) {
        const auto xy = v.get<std::vector<double>>();
        if (xy.size() != 2) throw FormatError("vertex must be [x, y]");
        verts.push_back({xy[0], xy[1]});
      }
      scene.obstacles.emplace_back(std::move(verts));
    }
    return scene;
  });
}

std::string suite_to_json(const TestSuite& suite) {
  json cases = json::array();
  for (const TestCase& c : suite.cases) {
    cases.push_back({{"id", c.id},
                     {"start", std::vector<double>(c.start.begin(), c.start.end())},
                     {"goal",
                      {{"x", c.goal.position.x},
                       {"y", c.goal.position.y},
                       {"heading", c.goal.heading},
                       {"heading_matters", c.goal.heading_matters}}}});
  }
  json j = {{"format_version", kSuiteFormatVersion},
            {"scene_name", suite.scene_name},
            {"rng_seed", suite.rng_seed},
            {"arm", arm_json(suite.arm)},
            {"cases", cases}};
  return j.dump(2) + "\n";
}

TestSuite suite_from_json(std::string_view text) {
  return parse_guarded("test suite", [&] {
    const json j = json::parse(text);
    check_version(j, kSuiteFormatVersion, "test suite");
    TestSuite suite{j.at("scene_name").get<std::string>(), j.at("rng_seed").get<uint64_t>(),
                    arm_from_json(j.at("arm")), {}};
    for (const json& c : j.at("cases")) {
      const auto start = c.at("start").get<std::vector<double>>();
      if (static_cast<int>(start.size()) != suite.arm.dof()) {
        throw FormatError("case start has wrong joint count");
      }
      const json& g = c.at("goal");
      suite.cases.push_back({c.at("id").get<std::string>(),
                             Eigen::Map<const Eigen::VectorXd>(start.data(), start.size()),
                             {{g.at("x").get<double>(), g.at("y").get<double>()},
                              g.at("heading").get<double>(),
                              g.at("heading_matters").get<bool>()},
                             suite.scene_name});
    }
    return suite;
  });
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  write_file(path, scene_to_json(scene));
}
Scene load_scene(const std::filesystem::path& path) { return scene_from_json(read_file(path)); }
void save_suite(const TestSuite& suite, const std::filesystem::path& path) {
  write_file(path, suite_to_json(suite));
}
TestSuite load_suite(const std::filesystem::path& path) { return suite_from_json(read_file(path)); }

}  // namespace rmtraj
