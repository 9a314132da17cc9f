#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "rmtraj/bench.hpp"

using namespace rmtraj;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(RMTRAJ_TEST_DATA_DIR) + "/" + name, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

RunRecord record(std::string planner, Outcome outcome, double pt, double ot,
                 std::optional<double> seed, std::optional<double> final_len) {
  RunRecord r;
  r.case_id = "c";
  r.scene = "tabletop_pole";
  r.planner = std::move(planner);
  r.outcome = outcome;
  r.planner_time = pt;
  r.opt_time = ot;
  r.seed_length = seed;
  r.final_length = final_len;
  return r;
}

std::vector<RunRecord> fixture() {
  return {record("roadmap+opt", Outcome::kOk, 0.1, 0.2, 2.0, 1.5),
          record("roadmap+opt", Outcome::kCollisionFailure, 0.1, 0.3, 3.0, std::nullopt),
          record("rrt", Outcome::kOk, 0.05, 0.0, std::nullopt, 1.25),
          record("roadmap+opt", Outcome::kPlannerFailure, 0.4, 0.0, std::nullopt, std::nullopt),
          record("roadmap+opt", Outcome::kOk, 0.2, 0.1, 1.0, 0.5)};
}

Scene empty_scene() { return {"empty", {}, {{-10, -10}, {10, 10}}, {}}; }

}  // namespace

TEST(PlannerSpec, NamesRoundTrip) {
  for (auto s : {PlannerSpec::kRrt, PlannerSpec::kRoadmap, PlannerSpec::kStraightlineOpt,
                 PlannerSpec::kRrtOpt, PlannerSpec::kRoadmapOpt})
    EXPECT_EQ(parse_planner(to_string(s)), s);
  EXPECT_EQ(parse_planner("roadmap+opt"), PlannerSpec::kRoadmapOpt);
  EXPECT_FALSE(parse_planner("prm").has_value());
  EXPECT_TRUE(is_seeded(PlannerSpec::kStraightlineOpt));
  EXPECT_FALSE(is_seeded(PlannerSpec::kRoadmap));
  EXPECT_TRUE(uses_roadmap(PlannerSpec::kRoadmap));
  EXPECT_FALSE(uses_roadmap(PlannerSpec::kRrtOpt));
  for (auto o : {Outcome::kOk, Outcome::kPlannerFailure, Outcome::kCollisionFailure})
    EXPECT_EQ(parse_outcome(to_string(o)), o);
}

TEST(Summarize, OneFailureInTwoHundred) {
  std::vector<RunRecord> recs(200, record("rrt", Outcome::kOk, 0.01, 0.0, std::nullopt, 1.0));
  recs[17].outcome = Outcome::kPlannerFailure;
  recs[17].final_length.reset();
  const auto rows = summarize(recs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].cases, 200u);
  EXPECT_DOUBLE_EQ(rows[0].failure_rate, 0.005);
  EXPECT_DOUBLE_EQ(rows[0].avg_path_length, 1.0);
  EXPECT_EQ(rows[0].collision_rate, 0.0);
  EXPECT_TRUE(std::isnan(rows[0].avg_seed_length));
}

TEST(Summarize, MixedOutcomesFixture) {
  const auto rows = summarize(fixture());
  ASSERT_EQ(rows.size(), 2u);
  const SummaryRow& r = rows[0];
  EXPECT_EQ(r.planner, "roadmap+opt");
  EXPECT_EQ(r.cases, 4u);
  EXPECT_DOUBLE_EQ(r.failure_rate, 0.5);
  EXPECT_NEAR(r.avg_runtime, 0.35, 1e-15);
  EXPECT_DOUBLE_EQ(r.avg_seed_length, 2.0);
  EXPECT_DOUBLE_EQ(r.avg_path_length, 1.0);
  // One collision among the three cases that produced a path.
  EXPECT_DOUBLE_EQ(r.collision_rate, 1.0 / 3.0);
  EXPECT_EQ(rows[1].planner, "rrt");
}

TEST(Report, GoldenFiles) {
  const auto rows = summarize(fixture());
  EXPECT_EQ(emit_report(rows, ReportFormat::kCsv), read_data("summary_golden.csv"));
  EXPECT_EQ(emit_report(rows, ReportFormat::kMarkdown), read_data("summary_golden.md"));
}

TEST(Report, EmptyAndRoundTrip) {
  EXPECT_EQ(emit_report({}, ReportFormat::kCsv),
            "scene,planner,cases,failure_rate,avg_runtime_s,avg_seed_len_rad,avg_path_len_rad,"
            "collision_rate\n");
  EXPECT_TRUE(parse_summary_csv(emit_report({}, ReportFormat::kCsv)).empty());
  const std::string csv = emit_report(summarize(fixture()), ReportFormat::kCsv);
  EXPECT_EQ(emit_report(parse_summary_csv(csv), ReportFormat::kCsv), csv);
  EXPECT_THROW(parse_summary_csv("nope\n"), FormatError);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::kMarkdown);
  EXPECT_FALSE(parse_report_format("html").has_value());
}

TEST(Records, CsvRoundTripIsExact) {
  auto recs = fixture();
  recs[0].planner_time = 0.1 + 1e-17;
  recs[1].detail = "validator";
  const auto back = records_from_csv(records_to_csv(recs));
  ASSERT_EQ(back.size(), recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    EXPECT_TRUE(back[i].same_result(recs[i]));
    EXPECT_EQ(back[i].planner_time, recs[i].planner_time);
    EXPECT_EQ(back[i].opt_time, recs[i].opt_time);
  }
  EXPECT_THROW(records_from_csv("bad\n"), FormatError);
  auto commas = recs;
  commas[0].detail = "a,b";
  EXPECT_THROW(records_to_csv(commas), std::invalid_argument);
}

TEST(RunBenchmark, StraightLineInEmptySceneAlwaysSucceeds) {
  const Scene scene = empty_scene();
  const TestSuite suite = generate_test_suite(scene, default_arm(), 15, 91);
  const auto recs = run_benchmark(suite, scene, PlannerSpec::kStraightlineOpt, nullptr, {});
  ASSERT_EQ(recs.size(), 15u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.outcome, Outcome::kOk) << r.case_id << " " << r.detail;
    ASSERT_TRUE(r.seed_length && r.final_length);
    // Nothing to avoid, so the straight seed is already optimal.
    EXPECT_NEAR(*r.final_length, *r.seed_length, 1e-6);
  }
}

TEST(RunBenchmark, ArgumentChecks) {
  const Scene scene = build_scene("tabletop_pole");
  const TestSuite suite = generate_test_suite(scene, default_arm(), 2, 92);
  EXPECT_THROW(run_benchmark(suite, scene, PlannerSpec::kRoadmap, nullptr, {}), std::invalid_argument);
  EXPECT_THROW(run_benchmark(suite, empty_scene(), PlannerSpec::kRrt, nullptr, {}), std::invalid_argument);
}

TEST(RunBenchmark, IndependentOfWorkerCount) {
  const Scene scene = build_scene("tabletop_container");
  const TestSuite suite = generate_test_suite(scene, default_arm(), 12, 93);
  BenchParams one, many;
  many.workers = 4;
  for (auto spec : {PlannerSpec::kRrt, PlannerSpec::kRrtOpt}) {
    const auto a = run_benchmark(suite, scene, spec, nullptr, one);
    const auto b = run_benchmark(suite, scene, spec, nullptr, many);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i].same_result(b[i])) << i;
  }
}
