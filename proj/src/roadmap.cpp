#include "rmtraj/roadmap.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "rmtraj/random.hpp"

namespace rmtraj {

namespace {

constexpr long kMaxSampleAttempts = 1'000'000;

std::vector<Configuration> sample_nodes(const Scene& scene, const ArmModel& arm,
                                        const RoadmapParams& params) {
  Rng rng(params.rng_seed);
  const int sampled = std::min(arm.dof(), ArmModel::kSampledJoints);
  std::vector<Configuration> nodes;
  nodes.reserve(params.n_nodes);
  Configuration q = arm.distal_fixed_values();
  long attempts = 0;
  while (static_cast<int>(nodes.size()) < params.n_nodes) {
    if (++attempts > kMaxSampleAttempts) {
      throw GenerationError("roadmap: only " + std::to_string(nodes.size()) + " of " +
                            std::to_string(params.n_nodes) + " collision-free nodes after " +
                            std::to_string(kMaxSampleAttempts) + " samples in scene '" +
                            scene.name + "'");
    }
    for (int j = 0; j < sampled; ++j) q[j] = rng.uniform(arm.limits()[j].lo, arm.limits()[j].hi);
    if (!config_in_collision(arm, scene, q)) nodes.push_back(q);
  }
  return nodes;
}

Graph connect_nodes(const Scene& scene, const ArmModel& arm, const std::vector<Configuration>& nodes,
                    int k_neighbors) {
  const size_t n = nodes.size();
  Graph graph(n);
  std::unordered_set<uint64_t> rejected;
  std::vector<std::pair<double, NodeId>> order(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) order[j] = {joint_distance(nodes[i], nodes[j]), j};
    std::sort(order.begin(), order.end());
    int connected = 0;
    for (const auto& [d, j] : order) {
      if (connected >= k_neighbors) break;
      if (j == i) continue;
      if (graph.has_edge(i, j)) {
        ++connected;
        continue;
      }
      const auto [a, b] = edge_key(i, j);
      const uint64_t key = (static_cast<uint64_t>(a) << 32) | b;
      if (rejected.contains(key)) continue;
      if (edge_in_collision(arm, scene, nodes[i], nodes[j])) {
        rejected.insert(key);
        continue;
      }
      graph.add_edge(i, j, d);
      ++connected;
    }
  }
  return graph;
}

}  // namespace

size_t Roadmap::pair_index(NodeId u, NodeId v) const {
  const size_t n = node_count();
  return static_cast<size_t>(u) * n - static_cast<size_t>(u) * (u + 1) / 2 + (v - u - 1);
}

std::vector<NodeId> Roadmap::shortest_path(NodeId u, NodeId v) const {
  std::vector<NodeId> path{u};
  while (u != v) {
    u = next_hop(u, v);
    if (u == kNoNode) return {};
    path.push_back(u);
  }
  return path;
}

std::vector<std::vector<NodeId>> Roadmap::cached_paths(NodeId u, NodeId v) const {
  if (u == v) return {{u}};
  const bool reversed = v < u;
  const size_t pair = reversed ? pair_index(v, u) : pair_index(u, v);
  std::vector<std::vector<NodeId>> out;
  for (uint32_t p = pair_offsets_[pair]; p < pair_offsets_[pair + 1]; ++p) {
    std::vector<NodeId> path(path_nodes_.begin() + path_offsets_[p],
                             path_nodes_.begin() + path_offsets_[p + 1]);
    if (reversed) std::reverse(path.begin(), path.end());
    out.push_back(std::move(path));
  }
  return out;
}

void Roadmap::build_tables() {
  const size_t n = node_count();
  dist_.assign(n * n, 0.0);
  next_.assign(n * n, kNoNode);
  for (NodeId s = 0; s < n; ++s) {
    const ShortestPathTree tree = dijkstra(graph_, s);
    for (NodeId t = 0; t < n; ++t) {
      // The lower-indexed source is authoritative so the table is exactly symmetric.
      if (t >= s) {
        dist_[s * n + t] = tree.dist[t];
        dist_[t * n + s] = tree.dist[t];
      }
      // pred of t toward s is the first hop of the t->s path.
      next_[t * n + s] = t == s ? s : tree.pred[t];
    }
  }

  const size_t pairs = n * (n - 1) / 2;
  pair_offsets_.assign(1, 0);
  pair_offsets_.reserve(pairs + 1);
  path_offsets_.assign(1, 0);
  path_nodes_.clear();
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      std::vector<NodeId> first_nodes = shortest_path(u, v);
      const WeightedPath first{graph_.path_weight(first_nodes), std::move(first_nodes)};
      const std::span<const double> to_v(&dist_[static_cast<size_t>(v) * n], n);
      for (const WeightedPath& p : yen_k_shortest_paths(graph_, u, v, params_.k_paths, to_v, &first)) {
        path_nodes_.insert(path_nodes_.end(), p.nodes.begin(), p.nodes.end());
        path_offsets_.push_back(path_nodes_.size());
      }
      pair_offsets_.push_back(static_cast<uint32_t>(path_offsets_.size() - 1));
    }
  }
}

Roadmap build_roadmap(const Scene& scene, const ArmModel& arm, const RoadmapParams& params) {
  if (params.n_nodes < 2 || params.k_neighbors < 1 || params.k_paths < 1) {
    throw std::invalid_argument("roadmap: need n_nodes >= 2, k_neighbors >= 1, k_paths >= 1");
  }
  const std::vector<Configuration> sampled = sample_nodes(scene, arm, params);
  const Graph full = connect_nodes(scene, arm, sampled, params.k_neighbors);

  // Keep the largest component, preserving sample order.
  const Components comps = connected_components(full);
  std::vector<NodeId> remap(sampled.size(), kNoNode);
  Roadmap rm;
  rm.params_ = params;
  rm.scene_name_ = scene.name;
  for (NodeId i = 0; i < sampled.size(); ++i) {
    if (comps.label[i] != comps.largest) continue;
    remap[i] = static_cast<NodeId>(rm.nodes_.size());
    rm.nodes_.push_back(sampled[i]);
    const EEPose ee = forward_kinematics(arm, sampled[i]).ee;
    rm.node_ee_.insert(rm.node_ee_.end(), {ee.position.x, ee.position.y, ee.heading});
  }
  rm.pruned_count_ = sampled.size() - rm.nodes_.size();
  rm.graph_ = Graph(rm.nodes_.size());
  for (NodeId i = 0; i < sampled.size(); ++i) {
    if (remap[i] == kNoNode) continue;
    for (const GraphEdge& e : full.neighbors(i)) {
      if (i < e.to && remap[e.to] != kNoNode) rm.graph_.add_edge(remap[i], remap[e.to], e.weight);
    }
  }
  rm.build_tables();
  return rm;
}

std::vector<std::vector<NodeId>> k_shortest_paths(const Roadmap& roadmap, NodeId u, NodeId v,
                                                  int k_paths) {
  if (u >= roadmap.node_count() || v >= roadmap.node_count()) {
    throw std::out_of_range("k_shortest_paths: node index out of range");
  }
  if (k_paths < 1) return {};
  if (k_paths <= roadmap.params().k_paths) {
    auto paths = roadmap.cached_paths(u, v);
    if (static_cast<int>(paths.size()) > k_paths) paths.resize(k_paths);
    return paths;
  }
  const size_t n = roadmap.node_count();
  std::vector<double> to_v(n);
  for (NodeId x = 0; x < n; ++x) to_v[x] = roadmap.distance(x, v);
  std::vector<std::vector<NodeId>> out;
  for (auto& p : yen_k_shortest_paths(roadmap.graph(), u, v, k_paths, to_v)) {
    out.push_back(std::move(p.nodes));
  }
  return out;
}

const char* to_string(QueryFailure f) {
  switch (f) {
    case QueryFailure::kNone: return "none";
    case QueryFailure::kNoIk: return "no-ik";
    case QueryFailure::kStartConnect: return "start-connect";
    case QueryFailure::kGoalConnect: return "goal-connect";
  }
  return "unknown";
}

namespace {

struct Connection {
  NodeId node = kNoNode;
  double length = 0.0;
};

using Candidates = std::vector<std::pair<double, NodeId>>;

// Nearest max_candidates nodes, closest first.
Candidates nearest_nodes(const Roadmap& rm, const Configuration& q, int max_candidates) {
  Candidates order(rm.node_count());
  const Eigen::Index k = q.size();
  for (NodeId i = 0; i < rm.node_count(); ++i) {
    const double* n = rm.nodes()[i].data();
    double sq = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) sq += (q[j] - n[j]) * (q[j] - n[j]);
    order[i] = {std::sqrt(sq), i};
  }
  const size_t limit = std::min<size_t>(order.size(), static_cast<size_t>(max_candidates));
  std::partial_sort(order.begin(), order.begin() + limit, order.end());
  order.resize(limit);
  return order;
}

// Nearest candidate reachable from q by a collision-free straight edge.
Connection connect(const Roadmap& rm, const ArmModel& arm, const Scene& scene, const Configuration& q,
                   const Candidates& candidates) {
  for (const auto& [d, node] : candidates) {
    if (d == 0.0 || !edge_in_collision(arm, scene, q, rm.nodes()[node])) return {node, d};
  }
  return {};
}

}  // namespace

QueryResult query(const Roadmap& roadmap, const ArmModel& arm, const Scene& scene,
                  const Configuration& start, const EEPose& goal, const QueryOptions& options) {
  QueryResult result;
  std::vector<Configuration> goals = collision_free_ik(arm, scene, goal, options.ik_restarts);
  // Roadmap nodes that already realize the goal pose need no IK connector.
  // The cached tip poses prefilter; ik_satisfied has the final word.
  const IkOptions tol;
  for (NodeId n = 0; n < roadmap.node_count(); ++n) {
    const EEPose ee = roadmap.node_pose(n);
    if (std::abs(ee.position.x - goal.position.x) >= tol.position_tolerance ||
        std::abs(ee.position.y - goal.position.y) >= tol.position_tolerance) {
      continue;
    }
    if (ik_satisfied(arm, roadmap.nodes()[n], goal)) goals.push_back(roadmap.nodes()[n]);
  }
  if (goals.empty()) {
    result.failure = QueryFailure::kNoIk;
    return result;
  }
  const Connection from = connect(roadmap, arm, scene, start,
                                  nearest_nodes(roadmap, start, options.max_connect_candidates));
  if (from.node == kNoNode) {
    result.failure = QueryFailure::kStartConnect;
    return result;
  }

  double best = std::numeric_limits<double>::infinity();
  size_t best_goal = 0;
  Connection to;
  // Whatever candidate a goal connects to, its total is at least the best
  // total over all of its candidates. Goals are tried in order of that bound
  // and the edge checks stop once no remaining goal can win.
  std::vector<Candidates> cands(goals.size());
  std::vector<std::pair<double, size_t>> bound(goals.size());
  for (size_t g = 0; g < goals.size(); ++g) {
    cands[g] = nearest_nodes(roadmap, goals[g], options.max_connect_candidates);
    double lb = std::numeric_limits<double>::infinity();
    for (const auto& [d, node] : cands[g]) lb = std::min(lb, roadmap.distance(from.node, node) + d);
    bound[g] = {from.length + lb, g};
  }
  std::sort(bound.begin(), bound.end());
  for (const auto& [lb, g] : bound) {
    if (lb > best) break;
    const Connection c = connect(roadmap, arm, scene, goals[g], cands[g]);
    if (c.node == kNoNode) continue;
    const double total = from.length + roadmap.distance(from.node, c.node) + c.length;
    if (total < best || (total == best && g < best_goal)) {
      best = total;
      best_goal = g;
      to = c;
    }
  }
  if (to.node == kNoNode) {
    result.failure = QueryFailure::kGoalConnect;
    return result;
  }

  result.node_path = roadmap.shortest_path(from.node, to.node);
  auto append = [&](const Configuration& q) {
    if (result.path.empty() || joint_distance(result.path.back(), q) > 0.0) result.path.push_back(q);
  };
  append(start);
  for (NodeId n : result.node_path) append(roadmap.nodes()[n]);
  append(goals[best_goal]);
  return result;
}

std::optional<std::vector<NodeId>> invalidate_and_requery(const Roadmap& roadmap,
                                                          const EdgeSet& blocked, NodeId u,
                                                          NodeId v) {
  for (auto& path : roadmap.cached_paths(u, v)) {
    bool clear = true;
    for (size_t i = 1; i < path.size() && clear; ++i) {
      clear = !blocked.contains(edge_key(path[i - 1], path[i]));
    }
    if (clear) return std::move(path);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Binary format (host byte order, little-endian on supported platforms):
//   "RMTRDMAP" u32 version, params, scene name, nodes, edges, dist and
//   next-hop tables, ksp cache offsets and node pool.

class RoadmapCodec {
 public:
  static void write(const Roadmap& rm, std::ostream& out);
  static Roadmap read(std::istream& in);
};

namespace {

constexpr char kMagic[8] = {'R', 'M', 'T', 'R', 'D', 'M', 'A', 'P'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v) {
  put<uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("roadmap file truncated");
  return v;
}
template <typename T>
std::vector<T> get_vec(std::istream& in, uint64_t max_elems) {
  const uint64_t n = get<uint64_t>(in);
  if (n > max_elems) throw FormatError("roadmap file has implausible array length");
  std::vector<T> v(n);
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)))) {
    throw FormatError("roadmap file truncated");
  }
  return v;
}

}  // namespace

void RoadmapCodec::write(const Roadmap& rm, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put<uint32_t>(out, kRoadmapFormatVersion);
  put<int32_t>(out, rm.params_.n_nodes);
  put<int32_t>(out, rm.params_.k_neighbors);
  put<int32_t>(out, rm.params_.k_paths);
  put<uint64_t>(out, rm.params_.rng_seed);
  put<uint32_t>(out, static_cast<uint32_t>(rm.scene_name_.size()));
  out.write(rm.scene_name_.data(), static_cast<std::streamsize>(rm.scene_name_.size()));
  put<uint64_t>(out, rm.pruned_count_);
  const uint32_t dof = rm.nodes_.empty() ? 0 : static_cast<uint32_t>(rm.nodes_[0].size());
  put<uint32_t>(out, dof);
  std::vector<double> flat;
  flat.reserve(rm.nodes_.size() * dof);
  for (const auto& q : rm.nodes_) flat.insert(flat.end(), q.begin(), q.end());
  put_vec(out, flat);
  put_vec(out, rm.node_ee_);
  std::vector<NodeId> ends;
  std::vector<double> weights;
  for (NodeId u = 0; u < rm.node_count(); ++u) {
    for (const GraphEdge& e : rm.graph_.neighbors(u)) {
      if (u < e.to) {
        ends.push_back(u);
        ends.push_back(e.to);
        weights.push_back(e.weight);
      }
    }
  }
  put_vec(out, ends);
  put_vec(out, weights);
  put_vec(out, rm.dist_);
  put_vec(out, rm.next_);
  put_vec(out, rm.pair_offsets_);
  put_vec(out, rm.path_offsets_);
  put_vec(out, rm.path_nodes_);
}

Roadmap RoadmapCodec::read(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw FormatError("not a roadmap file");
  }
  const uint32_t version = get<uint32_t>(in);
  if (version != kRoadmapFormatVersion) {
    throw FormatError("roadmap format version " + std::to_string(version) + " unsupported");
  }
  constexpr uint64_t kMax = 1ULL << 34;
  Roadmap rm;
  rm.params_.n_nodes = get<int32_t>(in);
  rm.params_.k_neighbors = get<int32_t>(in);
  rm.params_.k_paths = get<int32_t>(in);
  rm.params_.rng_seed = get<uint64_t>(in);
  const uint32_t name_len = get<uint32_t>(in);
  if (name_len > 4096) throw FormatError("roadmap scene name too long");
  rm.scene_name_.resize(name_len);
  if (!in.read(rm.scene_name_.data(), name_len)) throw FormatError("roadmap file truncated");
  rm.pruned_count_ = get<uint64_t>(in);
  const uint32_t dof = get<uint32_t>(in);
  const auto flat = get_vec<double>(in, kMax);
  if (dof == 0 || flat.size() % dof != 0) throw FormatError("roadmap node block malformed");
  const size_t n = flat.size() / dof;
  for (size_t i = 0; i < n; ++i) {
    rm.nodes_.push_back(Eigen::Map<const Eigen::VectorXd>(flat.data() + i * dof, dof));
  }
  rm.node_ee_ = get_vec<double>(in, kMax);
  if (rm.node_ee_.size() != 3 * n) throw FormatError("roadmap node pose block malformed");
  const auto ends = get_vec<NodeId>(in, kMax);
  const auto weights = get_vec<double>(in, kMax);
  if (ends.size() != 2 * weights.size()) throw FormatError("roadmap edge block malformed");
  rm.graph_ = Graph(n);
  for (size_t e = 0; e < weights.size(); ++e) {
    if (ends[2 * e] >= n || ends[2 * e + 1] >= n) throw FormatError("roadmap edge out of range");
    rm.graph_.add_edge(ends[2 * e], ends[2 * e + 1], weights[e]);
  }
  rm.dist_ = get_vec<double>(in, kMax);
  rm.next_ = get_vec<NodeId>(in, kMax);
  rm.pair_offsets_ = get_vec<uint32_t>(in, kMax);
  rm.path_offsets_ = get_vec<uint64_t>(in, kMax);
  rm.path_nodes_ = get_vec<NodeId>(in, kMax);
  const size_t pairs = n * (n - 1) / 2;
  if (rm.dist_.size() != n * n || rm.next_.size() != n * n || rm.pair_offsets_.size() != pairs + 1 ||
      rm.pair_offsets_.back() + 1 != rm.path_offsets_.size() ||
      rm.path_offsets_.back() != rm.path_nodes_.size()) {
    throw FormatError("roadmap tables inconsistent with node count");
  }
  return rm;
}

void save_roadmap(const Roadmap& roadmap, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  RoadmapCodec::write(roadmap, out);
  if (!out) throw IoError("write failed for " + path.string());
}

Roadmap load_roadmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return RoadmapCodec::read(in);
}

}  // namespace rmtraj
