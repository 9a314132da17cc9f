#pragma once

// Benchmark harness: runs a planner specification over a test suite with the
// independent collision validator, aggregates per (scene, planner), and
// renders CSV / markdown reports.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmtraj/optimizer.hpp"
#include "rmtraj/roadmap.hpp"
#include "rmtraj/rrt.hpp"
#include "rmtraj/scenarios.hpp"

namespace rmtraj {

enum class PlannerSpec { kRrt, kRoadmap, kStraightlineOpt, kRrtOpt, kRoadmapOpt };

const char* to_string(PlannerSpec spec);
std::optional<PlannerSpec> parse_planner(std::string_view text);
bool is_seeded(PlannerSpec spec);
bool uses_roadmap(PlannerSpec spec);

enum class Outcome { kOk, kPlannerFailure, kCollisionFailure };
const char* to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view text);

struct RunRecord {
  std::string case_id;
  std::string scene;
  std::string planner;
  Outcome outcome = Outcome::kOk;
  double planner_time = 0.0;  ///< s, includes goal IK
  double opt_time = 0.0;      ///< s, zero for unseeded specs
  std::optional<double> seed_length;   ///< rad, seeded specs that produced a seed
  std::optional<double> final_length;  ///< rad, present iff outcome == ok
  std::string detail;                  ///< failure sub-kind, e.g. "goal-connect"

  /// Outcome and lengths; everything except timings.
  bool same_result(const RunRecord& o) const {
    return case_id == o.case_id && scene == o.scene && planner == o.planner &&
           outcome == o.outcome && seed_length == o.seed_length &&
           final_length == o.final_length && detail == o.detail;
  }
};

struct BenchParams {
  uint64_t seed = 42;     ///< per-case planner seeds derive from this
  unsigned workers = 1;   ///< cases run in parallel, results are order independent
  int straightline_waypoints = kDefaultWaypoints;
  double max_spacing = kDefaultMaxSpacing;
  RrtParams rrt;
  OptParams opt;
  QueryOptions query;
};

/// Throws std::invalid_argument when a roadmap spec gets no roadmap, or the
/// roadmap was built for a different scene.
std::vector<RunRecord> run_benchmark(const TestSuite& suite, const Scene& scene, PlannerSpec planner,
                                     const Roadmap* roadmap, const BenchParams& params);

struct SummaryRow {
  std::string scene;
  std::string planner;
  size_t cases = 0;
  double failure_rate = 0.0;    ///< (planner + collision failures) / cases
  double avg_runtime = 0.0;     ///< s, planner + optimizer, over all cases
  double avg_seed_length = 0.0; ///< rad, NaN for unseeded specs
  double avg_path_length = 0.0; ///< rad, over successful cases, NaN if none
  double collision_rate = 0.0;  ///< collision failures / cases that produced a path
};

/// One row per (scene, planner) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

enum class ReportFormat { kCsv, kMarkdown };
std::optional<ReportFormat> parse_report_format(std::string_view text);
std::string emit_report(const std::vector<SummaryRow>& rows, ReportFormat format);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

std::string records_to_csv(const std::vector<RunRecord>& records);
/// Throws FormatError on a malformed header or row.
std::vector<RunRecord> records_from_csv(std::string_view text);

}  // namespace rmtraj
