// Command-line front end over the rmtraj C API.
//
//   rmtraj roadmap build --scene shelf_boxes --nodes 1000 --k 10 --kpaths 3 --seed 0 --out shelf.rdm
//   rmtraj bench gen-cases --scene shelf_boxes --count 200 --seed 42 --out shelf_cases.json
//   rmtraj bench run --scene shelf_boxes --cases shelf_cases.json --planner roadmap+opt
//       --roadmap shelf.rdm --seed 42 --out results.csv
//   rmtraj bench report --in results.csv --format markdown

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmtraj/rmtraj.h"

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(rmtraj_status status, const std::string& what) {
  if (status != RMTRAJ_OK)
    throw Failure(what + ": " + rmtraj_status_string(status) + ": " + rmtraj_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ScenePtr = std::unique_ptr<rmtraj_scene, Deleter<rmtraj_scene, rmtraj_scene_free>>;
using SuitePtr = std::unique_ptr<rmtraj_suite, Deleter<rmtraj_suite, rmtraj_suite_free>>;
using RoadmapPtr = std::unique_ptr<rmtraj_roadmap, Deleter<rmtraj_roadmap, rmtraj_roadmap_free>>;
using RecordsPtr = std::unique_ptr<rmtraj_records, Deleter<rmtraj_records, rmtraj_records_free>>;

// A built-in scene name, or a path to a scene JSON file.
ScenePtr open_scene(const std::string& arg) {
  rmtraj_scene* s = nullptr;
  if (std::filesystem::is_regular_file(arg))
    check(rmtraj_scene_load(arg.c_str(), &s), "loading scene " + arg);
  else
    check(rmtraj_scene_build(arg.c_str(), &s), "scene " + arg);
  return ScenePtr(s);
}

// A suite JSON file, or a case count to generate with `seed`.
SuitePtr open_suite(const std::string& arg, const rmtraj_scene* scene, uint64_t seed) {
  rmtraj_suite* s = nullptr;
  if (std::filesystem::is_regular_file(arg)) {
    check(rmtraj_suite_load(arg.c_str(), &s), "loading cases " + arg);
    return SuitePtr(s);
  }
  int count = 0;
  try {
    size_t used = 0;
    count = std::stoi(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw Failure("--cases: '" + arg + "' is neither a file nor a case count");
  }
  check(rmtraj_suite_generate(scene, count, seed, &s), "generating cases");
  return SuitePtr(s);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Failure("cannot open " + path + " for writing");
  bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw Failure("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roadmap-seeded trajectory optimization benchmarks"};
  app.set_version_flag("--version", std::string(rmtraj_version()));
  app.require_subcommand(1);

  // roadmap build
  auto* roadmap_cmd = app.add_subcommand("roadmap", "Roadmap construction");
  roadmap_cmd->require_subcommand(1);
  auto* build_cmd = roadmap_cmd->add_subcommand("build", "Build a roadmap and save it");
  rmtraj_roadmap_params rp;
  rmtraj_roadmap_params_default(&rp);
  std::string rm_scene, rm_out;
  build_cmd->add_option("--scene", rm_scene, "Scene name or scene JSON")->required();
  build_cmd->add_option("--nodes", rp.n_nodes, "Collision-free samples")->capture_default_str();
  build_cmd->add_option("--k", rp.k_neighbors, "Neighbors per node")->capture_default_str();
  build_cmd->add_option("--kpaths", rp.k_paths, "Cached paths per node pair")->capture_default_str();
  build_cmd->add_option("--seed", rp.seed, "Sampling seed")->capture_default_str();
  build_cmd->add_option("--out", rm_out, "Output roadmap file")->required();

  // bench gen-cases | run | report
  auto* bench_cmd = app.add_subcommand("bench", "Test suites and benchmark runs");
  bench_cmd->require_subcommand(1);

  auto* gen_cmd = bench_cmd->add_subcommand("gen-cases", "Generate a feasible test suite");
  std::string gen_scene, gen_out;
  int gen_count = 200;
  uint64_t gen_seed = 42;
  gen_cmd->add_option("--scene", gen_scene, "Scene name or scene JSON")->required();
  gen_cmd->add_option("--count", gen_count, "Number of cases")->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "Generation seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output suite JSON")->required();

  auto* run_cmd = bench_cmd->add_subcommand("run", "Run one planner over a test suite");
  std::string run_scene, run_cases = "200", run_planner, run_roadmap, run_out;
  rmtraj_bench_options bo;
  rmtraj_bench_options_default(&bo);
  run_cmd->add_option("--scene", run_scene, "Scene name or scene JSON")->required();
  run_cmd->add_option("--cases", run_cases, "Suite JSON, or a case count to generate")
      ->capture_default_str();
  run_cmd->add_option("--planner", run_planner, "rrt | roadmap | straightline+opt | rrt+opt | roadmap+opt")
      ->required();
  run_cmd->add_option("--roadmap", run_roadmap, "Roadmap file (roadmap specs)");
  run_cmd->add_option("--seed", bo.seed, "Planner seed; also the generation seed for a count")
      ->capture_default_str();
  run_cmd->add_option("--workers", bo.workers, "Parallel cases")->capture_default_str();
  run_cmd->add_option("--out", run_out, "Per-case results CSV")->required();

  auto* report_cmd = bench_cmd->add_subcommand("report", "Summarize per-case results");
  std::vector<std::string> report_in;
  std::string report_format = "markdown", report_out;
  report_cmd->add_option("--in", report_in, "Results CSV (repeatable)")->required();
  report_cmd->add_option("--format", report_format, "markdown | csv")->capture_default_str();
  report_cmd->add_option("--out", report_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build_cmd->parsed()) {
      auto scene = open_scene(rm_scene);
      rmtraj_roadmap* r = nullptr;
      check(rmtraj_roadmap_build(scene.get(), &rp, &r), "building roadmap");
      RoadmapPtr roadmap(r);
      check(rmtraj_roadmap_save(roadmap.get(), rm_out.c_str()), "saving roadmap");
      rmtraj_roadmap_stats stats;
      check(rmtraj_roadmap_get_stats(roadmap.get(), &stats), "roadmap stats");
      std::fprintf(stderr, "roadmap %s: %zu nodes, %zu edges, %zu pruned -> %s\n",
                   rmtraj_scene_name(scene.get()), stats.node_count, stats.edge_count,
                   stats.pruned_count, rm_out.c_str());
    } else if (gen_cmd->parsed()) {
      auto scene = open_scene(gen_scene);
      rmtraj_suite* s = nullptr;
      check(rmtraj_suite_generate(scene.get(), gen_count, gen_seed, &s), "generating cases");
      SuitePtr suite(s);
      check(rmtraj_suite_save(suite.get(), gen_out.c_str()), "saving cases");
      std::fprintf(stderr, "%zu cases for %s -> %s\n", rmtraj_suite_case_count(suite.get()),
                   rmtraj_scene_name(scene.get()), gen_out.c_str());
    } else if (run_cmd->parsed()) {
      auto scene = open_scene(run_scene);
      auto suite = open_suite(run_cases, scene.get(), bo.seed);
      RoadmapPtr roadmap;
      if (!run_roadmap.empty()) {
        rmtraj_roadmap* r = nullptr;
        check(rmtraj_roadmap_load(run_roadmap.c_str(), &r), "loading roadmap " + run_roadmap);
        roadmap.reset(r);
      }
      rmtraj_records* rec = nullptr;
      check(rmtraj_bench_run(suite.get(), scene.get(), run_planner.c_str(), roadmap.get(), &bo, &rec),
            "bench run");
      RecordsPtr records(rec);
      check(rmtraj_records_save(records.get(), run_out.c_str()), "saving results");
      char* summary = nullptr;
      check(rmtraj_records_report(records.get(), "markdown", &summary), "report");
      std::fputs(summary, stderr);
      rmtraj_string_free(summary);
    } else if (report_cmd->parsed()) {
      rmtraj_records* all = nullptr;
      check(rmtraj_records_create(&all), "records");
      RecordsPtr records(all);
      for (const auto& path : report_in) {
        rmtraj_records* r = nullptr;
        check(rmtraj_records_load(path.c_str(), &r), "loading " + path);
        RecordsPtr part(r);
        check(rmtraj_records_append(records.get(), part.get()), "merging " + path);
      }
      char* text = nullptr;
      check(rmtraj_records_report(records.get(), report_format.c_str(), &text), "report");
      std::string out(text);
      rmtraj_string_free(text);
      write_text(report_out, out);
    }
  } catch (const Failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
