#pragma once

// Sparse joint-space roadmap with cached all-pairs shortest paths and a
// k-shortest-paths cache used as redundancy when edges get invalidated.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rmtraj/collision.hpp"
#include "rmtraj/errors.hpp"
#include "rmtraj/graph.hpp"

namespace rmtraj {

inline constexpr uint32_t kRoadmapFormatVersion = 1;

struct RoadmapParams {
  int n_nodes = 1000;     ///< collision-free samples before pruning
  int k_neighbors = 10;   ///< collision-free edges sought per node
  int k_paths = 3;        ///< cached loopless paths per node pair
  uint64_t rng_seed = 0;
  friend bool operator==(const RoadmapParams&, const RoadmapParams&) = default;
};

using EdgeKey = std::pair<NodeId, NodeId>;
inline EdgeKey edge_key(NodeId u, NodeId v) { return u < v ? EdgeKey{u, v} : EdgeKey{v, u}; }
using EdgeSet = std::set<EdgeKey>;

class Roadmap {
 public:
  const RoadmapParams& params() const { return params_; }
  const std::string& scene_name() const { return scene_name_; }
  size_t node_count() const { return nodes_.size(); }
  const std::vector<Configuration>& nodes() const { return nodes_; }
  const Graph& graph() const { return graph_; }
  /// End-effector pose of a node, cached at build time.
  EEPose node_pose(NodeId n) const {
    return {{node_ee_[3 * n], node_ee_[3 * n + 1]}, node_ee_[3 * n + 2], true};
  }
  /// Nodes removed because they were outside the largest component.
  size_t pruned_count() const { return pruned_count_; }

  double distance(NodeId u, NodeId v) const { return dist_[u * node_count() + v]; }
  /// First node after u on the cached shortest u->v path (v itself when adjacent).
  NodeId next_hop(NodeId u, NodeId v) const { return next_[u * node_count() + v]; }
  /// Shortest path reconstructed from next-hop tables, u first.
  std::vector<NodeId> shortest_path(NodeId u, NodeId v) const;

  /// Cached loopless paths u->v in (length, node order); at most params().k_paths.
  std::vector<std::vector<NodeId>> cached_paths(NodeId u, NodeId v) const;

  friend bool operator==(const Roadmap&, const Roadmap&) = default;

 private:
  friend Roadmap build_roadmap(const Scene&, const ArmModel&, const RoadmapParams&);
  friend Roadmap load_roadmap(const std::filesystem::path&);
  friend class RoadmapCodec;

  size_t pair_index(NodeId u, NodeId v) const;  // u < v
  void build_tables();

  RoadmapParams params_;
  std::string scene_name_;
  std::vector<Configuration> nodes_;
  std::vector<double> node_ee_;  // x, y, heading per node
  Graph graph_;
  size_t pruned_count_ = 0;
  std::vector<double> dist_;
  std::vector<NodeId> next_;
  // ksp cache for u < v: pair -> [pair_offsets_[i], pair_offsets_[i+1]) paths,
  // path -> [path_offsets_[p], path_offsets_[p+1]) entries of path_nodes_.
  std::vector<uint32_t> pair_offsets_;
  std::vector<uint64_t> path_offsets_;
  std::vector<NodeId> path_nodes_;
};

/// Samples params.n_nodes collision-free nodes over the proximal joints,
/// connects each to its k nearest nodes reachable by a collision-free edge,
/// keeps the largest component, then fills the APSP and k-paths caches.
/// Throws GenerationError if 10^6 samples do not yield enough free nodes.
Roadmap build_roadmap(const Scene& scene, const ArmModel& arm, const RoadmapParams& params);

/// Up to `k_paths` loopless u->v paths in non-decreasing length. Served from
/// the cache when k_paths <= params().k_paths, otherwise computed.
std::vector<std::vector<NodeId>> k_shortest_paths(const Roadmap& roadmap, NodeId u, NodeId v,
                                                  int k_paths);

enum class QueryFailure { kNone, kNoIk, kStartConnect, kGoalConnect };
const char* to_string(QueryFailure f);

struct QueryOptions {
  int max_connect_candidates = 50;  ///< nearest nodes tried per endpoint
  int ik_restarts = kGoalIkRestarts;
};

struct QueryResult {
  QueryFailure failure = QueryFailure::kNone;
  std::vector<Configuration> path;  ///< start, roadmap nodes..., goal configuration
  std::vector<NodeId> node_path;
  bool ok() const { return failure == QueryFailure::kNone; }
};

QueryResult query(const Roadmap& roadmap, const ArmModel& arm, const Scene& scene,
                  const Configuration& start, const EEPose& goal, const QueryOptions& options = {});

/// First cached u->v path that uses none of `blocked`; nullopt when every
/// cached alternative is blocked. The roadmap is not modified.
std::optional<std::vector<NodeId>> invalidate_and_requery(const Roadmap& roadmap,
                                                          const EdgeSet& blocked, NodeId u,
                                                          NodeId v);

void save_roadmap(const Roadmap& roadmap, const std::filesystem::path& path);
/// Throws IoError / FormatError.
Roadmap load_roadmap(const std::filesystem::path& path);

}  // namespace rmtraj
