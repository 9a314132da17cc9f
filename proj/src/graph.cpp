#include "rmtraj/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

namespace rmtraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QueueItem = std::pair<double, NodeId>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

// Reusable per-thread buffers; stamps avoid clearing O(n) arrays per search.
struct SearchScratch {
  std::vector<double> g;
  std::vector<NodeId> pred;
  std::vector<uint32_t> seen;
  std::vector<uint32_t> closed;
  std::vector<uint32_t> forbidden;
  uint32_t stamp = 0;

  void prepare(size_t n) {
    if (g.size() < n) {
      g.resize(n);
      pred.resize(n);
      seen.assign(n, 0);
      closed.assign(n, 0);
      forbidden.assign(n, 0);
      stamp = 0;
    }
    if (++stamp == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      std::fill(forbidden.begin(), forbidden.end(), 0);
      stamp = 1;
    }
  }
};

SearchScratch& scratch() {
  thread_local SearchScratch s;
  return s;
}

// Root-first comparison of (chain to a) + v against (chain to b) + v.
bool prefix_less(const std::vector<NodeId>& pred, NodeId a, NodeId b, NodeId v) {
  std::vector<NodeId> pa{v}, pb{v};
  for (NodeId v = a; v != kNoNode; v = pred[v]) pa.push_back(v);
  for (NodeId v = b; v != kNoNode; v = pred[v]) pb.push_back(v);
  return std::lexicographical_compare(pa.rbegin(), pa.rend(), pb.rbegin(), pb.rend());
}

// Shortest spur path from `spur` to `target` avoiding `forbidden` nodes and
// the edges spur->b for b in `blocked`; among equal lengths the
// lexicographically smallest. Empty when none exists.
std::vector<NodeId> spur_search(const Graph& g, NodeId spur, NodeId target,
                                std::span<const NodeId> forbidden, std::span<const NodeId> blocked,
                                std::span<const double> h) {
  SearchScratch& s = scratch();
  s.prepare(g.node_count());
  const uint32_t stamp = s.stamp;
  for (NodeId f : forbidden) s.forbidden[f] = stamp;
  auto heuristic = [&](NodeId v) { return h.empty() ? 0.0 : h[v]; };

  // (f, g, node): a tight predecessor always has the smaller g, so it is
  // closed before any node it ties into.
  using Item = std::tuple<double, double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  s.g[spur] = 0.0;
  s.pred[spur] = kNoNode;
  s.seen[spur] = stamp;
  open.push({heuristic(spur), 0.0, spur});
  while (!open.empty()) {
    const NodeId u = std::get<2>(open.top());
    open.pop();
    if (s.closed[u] == stamp) continue;
    s.closed[u] = stamp;
    if (u == target) break;
    for (const GraphEdge& e : g.neighbors(u)) {
      const NodeId v = e.to;
      if (s.forbidden[v] == stamp || s.closed[v] == stamp) continue;
      if (u == spur && std::find(blocked.begin(), blocked.end(), v) != blocked.end()) continue;
      const double hv = heuristic(v);
      if (hv == kInf) continue;
      const double cand = s.g[u] + e.weight;
      if (s.seen[v] != stamp || cand < s.g[v]) {
        s.seen[v] = stamp;
        s.g[v] = cand;
        s.pred[v] = u;
        open.push({cand + hv, cand, v});
      } else if (cand == s.g[v] && prefix_less(s.pred, u, s.pred[v], v)) {
        s.pred[v] = u;  // equal length, lexicographically smaller prefix
      }
    }
  }
  std::vector<NodeId> path;
  if (s.closed[target] != stamp) return path;
  for (NodeId v = target; v != kNoNode; v = s.pred[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

bool Graph::add_edge(NodeId u, NodeId v, double weight) {
  if (u == v || has_edge(u, v)) return false;
  auto insert = [](std::vector<GraphEdge>& list, GraphEdge e) {
    auto it = std::lower_bound(list.begin(), list.end(), e.to,
                               [](const GraphEdge& a, NodeId id) { return a.to < id; });
    list.insert(it, e);
  };
  insert(adj_[u], {v, weight});
  insert(adj_[v], {u, weight});
  ++edge_count_;
  return true;
}

double Graph::weight(NodeId u, NodeId v) const {
  const auto& list = adj_[u];
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const GraphEdge& a, NodeId id) { return a.to < id; });
  return (it != list.end() && it->to == v) ? it->weight : -1.0;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return weight(u, v) >= 0.0; }

double Graph::path_weight(std::span<const NodeId> path) const {
  double total = 0.0;
  for (size_t i = 1; i < path.size(); ++i) total += weight(path[i - 1], path[i]);
  return total;
}

ShortestPathTree dijkstra(const Graph& g, NodeId source) {
  const size_t n = g.node_count();
  ShortestPathTree tree{std::vector<double>(n, kInf), std::vector<NodeId>(n, kNoNode)};
  std::vector<char> done(n, 0);
  MinQueue open;
  tree.dist[source] = 0.0;
  open.push({0.0, source});
  while (!open.empty()) {
    const NodeId u = open.top().second;
    open.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const GraphEdge& e : g.neighbors(u)) {
      const double cand = tree.dist[u] + e.weight;
      if (cand < tree.dist[e.to]) {
        tree.dist[e.to] = cand;
        tree.pred[e.to] = u;
        open.push({cand, e.to});
      } else if (cand == tree.dist[e.to] && u < tree.pred[e.to]) {
        tree.pred[e.to] = u;
      }
    }
  }
  return tree;
}

Components connected_components(const Graph& g) {
  const size_t n = g.node_count();
  Components c{std::vector<int>(n, -1), -1};
  std::vector<size_t> sizes;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (c.label[s] >= 0) continue;
    const int label = static_cast<int>(sizes.size());
    size_t size = 0;
    stack.push_back(s);
    c.label[s] = label;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (const GraphEdge& e : g.neighbors(u)) {
        if (c.label[e.to] < 0) {
          c.label[e.to] = label;
          stack.push_back(e.to);
        }
      }
    }
    sizes.push_back(size);
  }
  if (!sizes.empty()) {
    c.largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  }
  return c;
}

std::vector<WeightedPath> yen_k_shortest_paths(const Graph& g, NodeId source, NodeId target, int k,
                                               std::span<const double> dist_to_target,
                                               const WeightedPath* first) {
  std::vector<WeightedPath> accepted;
  if (k < 1) return accepted;
  if (source == target) {
    accepted.push_back({0.0, {source}});
    return accepted;
  }
  if (first != nullptr) {
    accepted.push_back(*first);
  } else {
    std::vector<NodeId> p = spur_search(g, source, target, {}, {}, dist_to_target);
    if (p.empty()) return accepted;
    const double len = g.path_weight(p);
    accepted.push_back({len, std::move(p)});
  }

  std::set<WeightedPath> candidates;
  std::vector<NodeId> blocked;
  while (static_cast<int>(accepted.size()) < k) {
    const std::vector<NodeId> prev = accepted.back().nodes;
    for (size_t j = 0; j + 1 < prev.size(); ++j) {
      const NodeId spur = prev[j];
      blocked.clear();
      for (const WeightedPath& p : accepted) {
        if (p.nodes.size() > j + 1 && std::equal(prev.begin(), prev.begin() + j + 1, p.nodes.begin())) {
          blocked.push_back(p.nodes[j + 1]);
        }
      }
      const std::span<const NodeId> root_before_spur(prev.data(), j);
      std::vector<NodeId> spur_path =
          spur_search(g, spur, target, root_before_spur, blocked, dist_to_target);
      if (spur_path.empty()) continue;
      WeightedPath cand;
      cand.nodes.reserve(j + spur_path.size());
      cand.nodes.assign(prev.begin(), prev.begin() + j);
      cand.nodes.insert(cand.nodes.end(), spur_path.begin(), spur_path.end());
      cand.length = g.path_weight(cand.nodes);
      candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

}  // namespace rmtraj
