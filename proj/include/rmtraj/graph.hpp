#pragma once

// Undirected weighted graph with Dijkstra and Yen's loopless k-shortest paths.

#include <cstdint>
#include <span>
#include <vector>

namespace rmtraj {

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = UINT32_MAX;

struct GraphEdge {
  NodeId to;
  double weight;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class Graph {
 public:
  explicit Graph(size_t node_count = 0) : adj_(node_count) {}

  size_t node_count() const { return adj_.size(); }
  size_t edge_count() const { return edge_count_; }

  /// Adds u-v once; repeated or self edges are ignored. Returns true if added.
  bool add_edge(NodeId u, NodeId v, double weight);
  bool has_edge(NodeId u, NodeId v) const;
  /// Weight of u-v; negative when absent.
  double weight(NodeId u, NodeId v) const;
  /// Neighbors sorted by node index.
  std::span<const GraphEdge> neighbors(NodeId u) const { return adj_[u]; }

  /// Sum of edge weights along the node sequence, accumulated front to back.
  double path_weight(std::span<const NodeId> path) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<GraphEdge>> adj_;
  size_t edge_count_ = 0;
};

struct ShortestPathTree {
  std::vector<double> dist;  ///< +inf when unreachable
  std::vector<NodeId> pred;  ///< predecessor toward the source, kNoNode at the source
};

/// pred is the lowest-index tight neighbor, so following pred from any node
/// gives the lexicographically smallest shortest path to the source.
ShortestPathTree dijkstra(const Graph& g, NodeId source);

/// Node-index labels of connected components, plus the label of the largest
/// (lowest label on ties).
struct Components {
  std::vector<int> label;
  int largest = -1;
};
Components connected_components(const Graph& g);

struct WeightedPath {
  double length = 0.0;
  std::vector<NodeId> nodes;

  friend bool operator<(const WeightedPath& a, const WeightedPath& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.nodes < b.nodes;
  }
  friend bool operator==(const WeightedPath&, const WeightedPath&) = default;
};

/// Yen's algorithm. Spur searches are A* guided by `dist_to_target` (exact
/// distances to `target` in the unmodified graph; pass an empty span for
/// plain Dijkstra). If `first` is given it is used as the shortest path.
/// Returns up to k loopless paths ordered by (length, node sequence).
std::vector<WeightedPath> yen_k_shortest_paths(const Graph& g, NodeId source, NodeId target, int k,
                                               std::span<const double> dist_to_target = {},
                                               const WeightedPath* first = nullptr);

}  // namespace rmtraj
