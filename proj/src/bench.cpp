#include "rmtraj/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rmtraj/errors.hpp"
#include "rmtraj/random.hpp"

namespace rmtraj {

namespace {

constexpr const char* kPlannerNames[] = {"rrt", "roadmap", "straightline+opt", "rrt+opt",
                                         "roadmap+opt"};
constexpr const char* kOutcomeNames[] = {"ok", "planner_failure", "collision_failure"};

constexpr const char* kSummaryHeader =
    "scene,planner,cases,failure_rate,avg_runtime_s,avg_seed_len_rad,avg_path_len_rad,"
    "collision_rate";
constexpr const char* kRecordsHeader =
    "case_id,scene,planner,outcome,planner_time_s,opt_time_s,seed_length_rad,final_length_rad,"
    "detail";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Configuration& nearest_to(const std::vector<Configuration>& qs, const Configuration& ref) {
  size_t best = 0;
  for (size_t i = 1; i < qs.size(); ++i)
    if ((qs[i] - ref).norm() < (qs[best] - ref).norm()) best = i;
  return qs[best];
}

struct CaseContext {
  const Scene& scene;
  const ArmModel& arm;
  PlannerSpec planner;
  const Roadmap* roadmap;
  const BenchParams& params;
};

RunRecord run_case(const CaseContext& ctx, const TestCase& tc, size_t index) {
  RunRecord rec;
  rec.case_id = tc.id;
  rec.scene = ctx.scene.name;
  rec.planner = to_string(ctx.planner);

  // Planner stage: a joint-space path (or seed) from start to a goal IK solution.
  std::vector<Configuration> path;
  Trajectory seed;
  auto t0 = Clock::now();
  switch (ctx.planner) {
    case PlannerSpec::kRrt:
    case PlannerSpec::kRrtOpt: {
      auto goals = collision_free_ik(ctx.arm, ctx.scene, tc.goal, ctx.params.query.ik_restarts);
      if (goals.empty()) {
        rec.detail = "no-ik";
        break;
      }
      RrtParams rp = ctx.params.rrt;
      rp.rng_seed = mix_seed(ctx.params.seed, index);
      auto res = rrt_plan(ctx.scene, ctx.arm, tc.start, goals, rp);
      if (res.success)
        path = std::move(res.path);
      else
        rec.detail = "rrt-exhausted";
      break;
    }
    case PlannerSpec::kRoadmap:
    case PlannerSpec::kRoadmapOpt: {
      auto res = query(*ctx.roadmap, ctx.arm, ctx.scene, tc.start, tc.goal, ctx.params.query);
      if (res.ok())
        path = std::move(res.path);
      else
        rec.detail = to_string(res.failure);
      break;
    }
    case PlannerSpec::kStraightlineOpt: {
      auto goals = collision_free_ik(ctx.arm, ctx.scene, tc.goal, ctx.params.query.ik_restarts);
      if (goals.empty()) {
        rec.detail = "no-ik";
        break;
      }
      seed = straight_line_seed(tc.start, nearest_to(goals, tc.start),
                                ctx.params.straightline_waypoints);
      break;
    }
  }
  rec.planner_time = seconds_since(t0);

  const bool have_path = !path.empty() || seed.size() > 0;
  if (!have_path) {
    rec.outcome = Outcome::kPlannerFailure;
    return rec;
  }

  if (!is_seeded(ctx.planner)) {
    auto check = trajectory_in_collision(ctx.arm, ctx.scene, path);
    if (check.in_collision) {
      rec.outcome = Outcome::kCollisionFailure;
      rec.detail = "validator";
    } else {
      rec.outcome = Outcome::kOk;
      rec.final_length = path_length(path);
    }
    return rec;
  }

  if (seed.size() == 0) {
    if (path.size() == 1) path.push_back(path.front());
    seed = resample_path(path, ctx.params.max_spacing);
  }
  rec.seed_length = seed.length();

  auto opt = optimize(seed, ctx.arm, ctx.scene, ctx.params.opt);
  rec.opt_time = opt.wall_time;
  if (opt.collision_free) {
    rec.outcome = Outcome::kOk;
    rec.final_length = opt.trajectory.length();
  } else {
    rec.outcome = Outcome::kCollisionFailure;
    rec.detail = "validator";
  }
  return rec;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (start < text.size()) {
    size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError(std::string("bad ") + what + ": '" + s + "'");
  }
  if (used != s.size()) throw FormatError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, what);
}

// Shortest representation that round-trips; empty for NaN / missing.
std::string fmt_exact(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_md(double v, int digits, const char* suffix = "") {
  if (std::isnan(v)) return "-";
  return fmt_fixed(v, digits) + suffix;
}

}  // namespace

const char* to_string(PlannerSpec spec) { return kPlannerNames[static_cast<int>(spec)]; }

std::optional<PlannerSpec> parse_planner(std::string_view text) {
  for (int i = 0; i < 5; ++i)
    if (text == kPlannerNames[i]) return static_cast<PlannerSpec>(i);
  return std::nullopt;
}

bool is_seeded(PlannerSpec spec) {
  return spec == PlannerSpec::kStraightlineOpt || spec == PlannerSpec::kRrtOpt ||
         spec == PlannerSpec::kRoadmapOpt;
}

bool uses_roadmap(PlannerSpec spec) {
  return spec == PlannerSpec::kRoadmap || spec == PlannerSpec::kRoadmapOpt;
}

const char* to_string(Outcome outcome) { return kOutcomeNames[static_cast<int>(outcome)]; }

std::optional<Outcome> parse_outcome(std::string_view text) {
  for (int i = 0; i < 3; ++i)
    if (text == kOutcomeNames[i]) return static_cast<Outcome>(i);
  return std::nullopt;
}

std::vector<RunRecord> run_benchmark(const TestSuite& suite, const Scene& scene, PlannerSpec planner,
                                     const Roadmap* roadmap, const BenchParams& params) {
  if (uses_roadmap(planner)) {
    if (!roadmap) throw std::invalid_argument(std::string(to_string(planner)) + " needs a roadmap");
    if (roadmap->scene_name() != scene.name)
      throw std::invalid_argument("roadmap was built for scene '" + roadmap->scene_name() +
                                  "', not '" + scene.name + "'");
  }
  if (suite.scene_name != scene.name)
    throw std::invalid_argument("suite is for scene '" + suite.scene_name + "', not '" +
                                scene.name + "'");

  CaseContext ctx{scene, suite.arm, planner, roadmap, params};
  std::vector<RunRecord> records(suite.cases.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < records.size(); i = next++)
      records[i] = run_case(ctx, suite.cases[i], i);
  };

  unsigned n_workers = std::max(1u, std::min<unsigned>(params.workers, records.size()));
  if (n_workers == 1) {
    worker();
    return records;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned w = 0; w < n_workers; ++w)
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = records.size();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  struct Acc {
    size_t cases = 0, failures = 0, collisions = 0, attempted = 0;
    double runtime = 0, seed = 0, path = 0;
    size_t n_seed = 0, n_path = 0;
  };
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const auto& r : records) {
    auto key = std::make_pair(r.scene, r.planner);
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) order.push_back(key);
    Acc& a = it->second;
    ++a.cases;
    a.runtime += r.planner_time + r.opt_time;
    if (r.outcome != Outcome::kOk) ++a.failures;
    if (r.outcome != Outcome::kPlannerFailure) ++a.attempted;
    if (r.outcome == Outcome::kCollisionFailure) ++a.collisions;
    if (r.seed_length) {
      a.seed += *r.seed_length;
      ++a.n_seed;
    }
    if (r.outcome == Outcome::kOk && r.final_length) {
      a.path += *r.final_length;
      ++a.n_path;
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const Acc& a = acc.at(key);
    SummaryRow row;
    row.scene = key.first;
    row.planner = key.second;
    row.cases = a.cases;
    row.failure_rate = double(a.failures) / a.cases;
    row.avg_runtime = a.runtime / a.cases;
    row.avg_seed_length = a.n_seed ? a.seed / a.n_seed : nan;
    row.avg_path_length = a.n_path ? a.path / a.n_path : nan;
    row.collision_rate = a.attempted ? double(a.collisions) / a.attempted : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "markdown" || text == "md") return ReportFormat::kMarkdown;
  return std::nullopt;
}

std::string emit_report(const std::vector<SummaryRow>& rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << kSummaryHeader << '\n';
    for (const auto& r : rows)
      out << r.scene << ',' << r.planner << ',' << r.cases << ',' << fmt_fixed(r.failure_rate, 6)
          << ',' << fmt_fixed(r.avg_runtime, 6) << ',' << fmt_fixed(r.avg_seed_length, 6) << ','
          << fmt_fixed(r.avg_path_length, 6) << ',' << fmt_fixed(r.collision_rate, 6) << '\n';
    return out.str();
  }

  out << "| Environment | Planner | Cases | Failure Rate | Average Runtime (s) | "
         "Average Seed Length (rad) | Average Path Length (rad) | Collision Rate |\n";
  out << "|---|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows)
    out << "| " << r.scene << " | " << r.planner << " | " << r.cases << " | "
        << fmt_md(100.0 * r.failure_rate, 2, "%") << " | " << fmt_md(r.avg_runtime, 3) << " | "
        << fmt_md(r.avg_seed_length, 2) << " | " << fmt_md(r.avg_path_length, 2) << " | "
        << fmt_md(100.0 * r.collision_rate, 2, "%") << " |\n";
  return out.str();
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kSummaryHeader) throw FormatError("bad summary header");
  std::vector<SummaryRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i], ',');
    if (f.size() != 8) throw FormatError("summary row " + std::to_string(i) + ": expected 8 fields");
    SummaryRow r;
    r.scene = f[0];
    r.planner = f[1];
    double cases = parse_double(f[2], "cases");
    if (!(cases >= 0) || cases != std::floor(cases)) throw FormatError("bad cases: '" + f[2] + "'");
    r.cases = static_cast<size_t>(cases);
    r.failure_rate = parse_double(f[3], "failure_rate");
    r.avg_runtime = parse_double(f[4], "avg_runtime_s");
    r.avg_seed_length = parse_double(f[5], "avg_seed_len_rad");
    r.avg_path_length = parse_double(f[6], "avg_path_len_rad");
    r.collision_rate = parse_double(f[7], "collision_rate");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    for (const auto* s : {&r.case_id, &r.scene, &r.planner, &r.detail})
      if (s->find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument("record field contains a separator: '" + *s + "'");
    out << r.case_id << ',' << r.scene << ',' << r.planner << ',' << to_string(r.outcome) << ','
        << fmt_exact(r.planner_time) << ',' << fmt_exact(r.opt_time) << ','
        << (r.seed_length ? fmt_exact(*r.seed_length) : "") << ','
        << (r.final_length ? fmt_exact(*r.final_length) : "") << ',' << r.detail << '\n';
  }
  return out.str();
}

std::vector<RunRecord> records_from_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kRecordsHeader) throw FormatError("bad results header");
  std::vector<RunRecord> records;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i], ',');
    if (f.size() != 9) throw FormatError("results row " + std::to_string(i) + ": expected 9 fields");
    RunRecord r;
    r.case_id = f[0];
    r.scene = f[1];
    r.planner = f[2];
    auto outcome = parse_outcome(f[3]);
    if (!outcome) throw FormatError("results row " + std::to_string(i) + ": bad outcome '" + f[3] + "'");
    r.outcome = *outcome;
    r.planner_time = parse_double(f[4], "planner_time_s");
    r.opt_time = parse_double(f[5], "opt_time_s");
    if (std::isnan(r.planner_time) || std::isnan(r.opt_time))
      throw FormatError("results row " + std::to_string(i) + ": missing timing");
    r.seed_length = parse_optional(f[6], "seed_length_rad");
    r.final_length = parse_optional(f[7], "final_length_rad");
    r.detail = f[8];
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace rmtraj
