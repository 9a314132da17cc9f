/* rmtraj C API: scenes, test suites, roadmaps and benchmark runs behind
 * opaque handles. Every fallible call returns an rmtraj_status; on failure
 * rmtraj_last_error() describes it (thread-local, valid until the next call
 * on the same thread). Handles are freed with their *_free function, which
 * accepts NULL. Strings returned through char** are freed with
 * rmtraj_string_free. */
#ifndef RMTRAJ_H
#define RMTRAJ_H

#include <stddef.h>
#include <stdint.h>

#if defined(RMTRAJ_BUILDING_LIBRARY)
#define RMTRAJ_API __attribute__((visibility("default")))
#else
#define RMTRAJ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmtraj_status {
  RMTRAJ_OK = 0,
  RMTRAJ_ERR_INVALID_ARGUMENT = 1,
  RMTRAJ_ERR_IO = 2,
  RMTRAJ_ERR_FORMAT = 3,
  RMTRAJ_ERR_GENERATION = 4,
  RMTRAJ_ERR_INTERNAL = 5
} rmtraj_status;

typedef struct rmtraj_scene rmtraj_scene;
typedef struct rmtraj_suite rmtraj_suite;
typedef struct rmtraj_roadmap rmtraj_roadmap;
typedef struct rmtraj_records rmtraj_records;

RMTRAJ_API const char* rmtraj_version(void);
RMTRAJ_API const char* rmtraj_last_error(void);
RMTRAJ_API const char* rmtraj_status_string(rmtraj_status status);
RMTRAJ_API void rmtraj_string_free(char* s);

/* Scenes */
RMTRAJ_API size_t rmtraj_builtin_scene_count(void);
RMTRAJ_API const char* rmtraj_builtin_scene_name(size_t index); /* NULL when out of range */
RMTRAJ_API rmtraj_status rmtraj_scene_build(const char* name, rmtraj_scene** out);
RMTRAJ_API rmtraj_status rmtraj_scene_load(const char* path, rmtraj_scene** out);
RMTRAJ_API rmtraj_status rmtraj_scene_save(const rmtraj_scene* scene, const char* path);
RMTRAJ_API const char* rmtraj_scene_name(const rmtraj_scene* scene);
RMTRAJ_API size_t rmtraj_scene_obstacle_count(const rmtraj_scene* scene);
RMTRAJ_API void rmtraj_scene_free(rmtraj_scene* scene);

/* Test suites; generation uses the default arm. */
RMTRAJ_API rmtraj_status rmtraj_suite_generate(const rmtraj_scene* scene, int count, uint64_t seed,
                                               rmtraj_suite** out);
RMTRAJ_API rmtraj_status rmtraj_suite_load(const char* path, rmtraj_suite** out);
RMTRAJ_API rmtraj_status rmtraj_suite_save(const rmtraj_suite* suite, const char* path);
RMTRAJ_API size_t rmtraj_suite_case_count(const rmtraj_suite* suite);
RMTRAJ_API const char* rmtraj_suite_scene_name(const rmtraj_suite* suite);
RMTRAJ_API void rmtraj_suite_free(rmtraj_suite* suite);

/* Roadmaps */
typedef struct rmtraj_roadmap_params {
  int n_nodes;
  int k_neighbors;
  int k_paths;
  uint64_t seed;
} rmtraj_roadmap_params;

typedef struct rmtraj_roadmap_stats {
  size_t node_count;
  size_t edge_count;
  size_t pruned_count;
} rmtraj_roadmap_stats;

RMTRAJ_API void rmtraj_roadmap_params_default(rmtraj_roadmap_params* params);
RMTRAJ_API rmtraj_status rmtraj_roadmap_build(const rmtraj_scene* scene,
                                              const rmtraj_roadmap_params* params,
                                              rmtraj_roadmap** out);
RMTRAJ_API rmtraj_status rmtraj_roadmap_load(const char* path, rmtraj_roadmap** out);
RMTRAJ_API rmtraj_status rmtraj_roadmap_save(const rmtraj_roadmap* roadmap, const char* path);
RMTRAJ_API rmtraj_status rmtraj_roadmap_get_stats(const rmtraj_roadmap* roadmap,
                                                  rmtraj_roadmap_stats* out);
RMTRAJ_API const char* rmtraj_roadmap_scene_name(const rmtraj_roadmap* roadmap);
RMTRAJ_API void rmtraj_roadmap_free(rmtraj_roadmap* roadmap);

/* Benchmark runs. Planner specs: rrt, roadmap, straightline+opt, rrt+opt,
 * roadmap+opt. The roadmap may be NULL for specs that do not use one. */
typedef struct rmtraj_bench_options {
  uint64_t seed;
  unsigned workers;
} rmtraj_bench_options;

RMTRAJ_API void rmtraj_bench_options_default(rmtraj_bench_options* options);
RMTRAJ_API rmtraj_status rmtraj_bench_run(const rmtraj_suite* suite, const rmtraj_scene* scene,
                                          const char* planner, const rmtraj_roadmap* roadmap,
                                          const rmtraj_bench_options* options,
                                          rmtraj_records** out);

/* Per-case records */
RMTRAJ_API rmtraj_status rmtraj_records_create(rmtraj_records** out);
RMTRAJ_API rmtraj_status rmtraj_records_load(const char* path, rmtraj_records** out);
RMTRAJ_API rmtraj_status rmtraj_records_save(const rmtraj_records* records, const char* path);
/* Appends copies of every record in src to dst. */
RMTRAJ_API rmtraj_status rmtraj_records_append(rmtraj_records* dst, const rmtraj_records* src);
RMTRAJ_API size_t rmtraj_records_count(const rmtraj_records* records);
/* Summary table per (scene, planner); format is "csv" or "markdown". */
RMTRAJ_API rmtraj_status rmtraj_records_report(const rmtraj_records* records, const char* format,
                                               char** out);
RMTRAJ_API void rmtraj_records_free(rmtraj_records* records);

#ifdef __cplusplus
}
#endif

#endif /* RMTRAJ_H */
