#include "rmtraj/rmtraj.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "rmtraj/bench.hpp"
#include "rmtraj/errors.hpp"
#include "rmtraj/roadmap.hpp"
#include "rmtraj/scenarios.hpp"

struct rmtraj_scene {
  rmtraj::Scene scene;
};
struct rmtraj_suite {
  rmtraj::TestSuite suite;
};
struct rmtraj_roadmap {
  rmtraj::Roadmap roadmap;
};
struct rmtraj_records {
  std::vector<rmtraj::RunRecord> records;
};

namespace {

thread_local std::string g_last_error;

rmtraj_status fail(rmtraj_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the core's exception types onto status codes.
template <typename F>
rmtraj_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RMTRAJ_OK;
  } catch (const rmtraj::IoError& e) {
    return fail(RMTRAJ_ERR_IO, e.what());
  } catch (const rmtraj::FormatError& e) {
    return fail(RMTRAJ_ERR_FORMAT, e.what());
  } catch (const rmtraj::GenerationError& e) {
    return fail(RMTRAJ_ERR_GENERATION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RMTRAJ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RMTRAJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RMTRAJ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RMTRAJ_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define RMTRAJ_REQUIRE(cond, what) \
  if (!(cond)) return fail(RMTRAJ_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* rmtraj_version(void) { return "0.1.0"; }

const char* rmtraj_last_error(void) { return g_last_error.c_str(); }

const char* rmtraj_status_string(rmtraj_status status) {
  switch (status) {
    case RMTRAJ_OK: return "ok";
    case RMTRAJ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RMTRAJ_ERR_IO: return "i/o error";
    case RMTRAJ_ERR_FORMAT: return "format error";
    case RMTRAJ_ERR_GENERATION: return "generation failed";
    case RMTRAJ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rmtraj_string_free(char* s) { std::free(s); }

size_t rmtraj_builtin_scene_count(void) { return rmtraj::scene_names().size(); }

const char* rmtraj_builtin_scene_name(size_t index) {
  const auto& names = rmtraj::scene_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

rmtraj_status rmtraj_scene_build(const char* name, rmtraj_scene** out) {
  RMTRAJ_REQUIRE(name && out, "null argument");
  return guarded([&] { *out = new rmtraj_scene{rmtraj::build_scene(name)}; });
}

rmtraj_status rmtraj_scene_load(const char* path, rmtraj_scene** out) {
  RMTRAJ_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new rmtraj_scene{rmtraj::load_scene(path)}; });
}

rmtraj_status rmtraj_scene_save(const rmtraj_scene* scene, const char* path) {
  RMTRAJ_REQUIRE(scene && path, "null argument");
  return guarded([&] { rmtraj::save_scene(scene->scene, path); });
}

const char* rmtraj_scene_name(const rmtraj_scene* scene) {
  return scene ? scene->scene.name.c_str() : nullptr;
}

size_t rmtraj_scene_obstacle_count(const rmtraj_scene* scene) {
  return scene ? scene->scene.obstacles.size() : 0;
}

void rmtraj_scene_free(rmtraj_scene* scene) { delete scene; }

rmtraj_status rmtraj_suite_generate(const rmtraj_scene* scene, int count, uint64_t seed,
                                    rmtraj_suite** out) {
  RMTRAJ_REQUIRE(scene && out, "null argument");
  RMTRAJ_REQUIRE(count >= 0, "count must be non-negative");
  return guarded([&] {
    *out = new rmtraj_suite{
        rmtraj::generate_test_suite(scene->scene, rmtraj::default_arm(), count, seed)};
  });
}

rmtraj_status rmtraj_suite_load(const char* path, rmtraj_suite** out) {
  RMTRAJ_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new rmtraj_suite{rmtraj::load_suite(path)}; });
}

rmtraj_status rmtraj_suite_save(const rmtraj_suite* suite, const char* path) {
  RMTRAJ_REQUIRE(suite && path, "null argument");
  return guarded([&] { rmtraj::save_suite(suite->suite, path); });
}

size_t rmtraj_suite_case_count(const rmtraj_suite* suite) {
  return suite ? suite->suite.cases.size() : 0;
}

const char* rmtraj_suite_scene_name(const rmtraj_suite* suite) {
  return suite ? suite->suite.scene_name.c_str() : nullptr;
}

void rmtraj_suite_free(rmtraj_suite* suite) { delete suite; }

void rmtraj_roadmap_params_default(rmtraj_roadmap_params* params) {
  if (!params) return;
  rmtraj::RoadmapParams d;
  *params = {d.n_nodes, d.k_neighbors, d.k_paths, d.rng_seed};
}

rmtraj_status rmtraj_roadmap_build(const rmtraj_scene* scene, const rmtraj_roadmap_params* params,
                                   rmtraj_roadmap** out) {
  RMTRAJ_REQUIRE(scene && params && out, "null argument");
  rmtraj::RoadmapParams p{params->n_nodes, params->k_neighbors, params->k_paths, params->seed};
  return guarded([&] {
    *out = new rmtraj_roadmap{rmtraj::build_roadmap(scene->scene, rmtraj::default_arm(), p)};
  });
}

rmtraj_status rmtraj_roadmap_load(const char* path, rmtraj_roadmap** out) {
  RMTRAJ_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new rmtraj_roadmap{rmtraj::load_roadmap(path)}; });
}

rmtraj_status rmtraj_roadmap_save(const rmtraj_roadmap* roadmap, const char* path) {
  RMTRAJ_REQUIRE(roadmap && path, "null argument");
  return guarded([&] { rmtraj::save_roadmap(roadmap->roadmap, path); });
}

rmtraj_status rmtraj_roadmap_get_stats(const rmtraj_roadmap* roadmap, rmtraj_roadmap_stats* out) {
  RMTRAJ_REQUIRE(roadmap && out, "null argument");
  const auto& r = roadmap->roadmap;
  *out = {r.node_count(), r.graph().edge_count(), r.pruned_count()};
  return RMTRAJ_OK;
}

const char* rmtraj_roadmap_scene_name(const rmtraj_roadmap* roadmap) {
  return roadmap ? roadmap->roadmap.scene_name().c_str() : nullptr;
}

void rmtraj_roadmap_free(rmtraj_roadmap* roadmap) { delete roadmap; }

void rmtraj_bench_options_default(rmtraj_bench_options* options) {
  if (!options) return;
  rmtraj::BenchParams d;
  *options = {d.seed, d.workers};
}

rmtraj_status rmtraj_bench_run(const rmtraj_suite* suite, const rmtraj_scene* scene,
                               const char* planner, const rmtraj_roadmap* roadmap,
                               const rmtraj_bench_options* options, rmtraj_records** out) {
  RMTRAJ_REQUIRE(suite && scene && planner && options && out, "null argument");
  auto spec = rmtraj::parse_planner(planner);
  if (!spec)
    return fail(RMTRAJ_ERR_INVALID_ARGUMENT, std::string("unknown planner '") + planner + "'");
  return guarded([&] {
    rmtraj::BenchParams params;
    params.seed = options->seed;
    params.workers = options->workers;
    auto records = rmtraj::run_benchmark(suite->suite, scene->scene, *spec,
                                         roadmap ? &roadmap->roadmap : nullptr, params);
    *out = new rmtraj_records{std::move(records)};
  });
}

rmtraj_status rmtraj_records_create(rmtraj_records** out) {
  RMTRAJ_REQUIRE(out, "null argument");
  return guarded([&] { *out = new rmtraj_records{}; });
}

rmtraj_status rmtraj_records_load(const char* path, rmtraj_records** out) {
  RMTRAJ_REQUIRE(path && out, "null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rmtraj::IoError(std::string("cannot open ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw rmtraj::IoError(std::string("cannot read ") + path);
    *out = new rmtraj_records{rmtraj::records_from_csv(text.str())};
  });
}

rmtraj_status rmtraj_records_save(const rmtraj_records* records, const char* path) {
  RMTRAJ_REQUIRE(records && path, "null argument");
  return guarded([&] {
    auto text = rmtraj::records_to_csv(records->records);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw rmtraj::IoError(std::string("cannot open ") + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw rmtraj::IoError(std::string("cannot write ") + path);
  });
}

rmtraj_status rmtraj_records_append(rmtraj_records* dst, const rmtraj_records* src) {
  RMTRAJ_REQUIRE(dst && src, "null argument");
  return guarded([&] {
    auto copy = src->records;  // src may alias dst
    dst->records.insert(dst->records.end(), copy.begin(), copy.end());
  });
}

size_t rmtraj_records_count(const rmtraj_records* records) {
  return records ? records->records.size() : 0;
}

rmtraj_status rmtraj_records_report(const rmtraj_records* records, const char* format, char** out) {
  RMTRAJ_REQUIRE(records && format && out, "null argument");
  auto fmt = rmtraj::parse_report_format(format);
  if (!fmt) return fail(RMTRAJ_ERR_INVALID_ARGUMENT, std::string("unknown format '") + format + "'");
  return guarded([&] {
    *out = dup_string(rmtraj::emit_report(rmtraj::summarize(records->records), *fmt));
  });
}

void rmtraj_records_free(rmtraj_records* records) { delete records; }

}  // extern "C"
