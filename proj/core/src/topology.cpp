#include "mirrorplace/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "mirrorplace/errors.hpp"

namespace mirrorplace {
namespace {

std::string edge_name(const EdgeRecord& edge, std::size_t index) {
  std::ostringstream out;
  out << "edge " << index << " (" << edge.source << "-" << edge.target << ")";
  return out.str();
}

std::string describe_components(const std::vector<std::vector<NodeId>>& components) {
  std::ostringstream out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    out << (c ? "; " : "") << "{";
    const auto& comp = components[c];
    const std::size_t shown = std::min<std::size_t>(comp.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) out << (i ? "," : "") << comp[i];
    if (shown < comp.size()) out << ",... (" << comp.size() << " nodes)";
    out << "}";
  }
  return out.str();
}

}  // namespace

LinkScale link_scale(std::span<const EdgeRecord> edges) {
  LinkScale scale;
  for (const auto& e : edges) {
    if (e.delay) scale.delay_max = std::max(scale.delay_max, *e.delay);
    if (e.bandwidth) scale.bandwidth_max = std::max(scale.bandwidth_max, *e.bandwidth);
  }
  return scale;
}

void validate_edge(const EdgeRecord& edge, std::size_t index) {
  if (edge.utilization &&
      !(std::isfinite(*edge.utilization) && *edge.utilization >= 0.0 && *edge.utilization <= 1.0)) {
    throw ValidationError(edge_name(edge, index) + ": utilization " +
                          std::to_string(*edge.utilization) + " outside [0,1]");
  }
  if (edge.bandwidth && !(std::isfinite(*edge.bandwidth) && *edge.bandwidth > 0.0)) {
    throw ValidationError(edge_name(edge, index) + ": bandwidth must be positive");
  }
  if (edge.delay && !(std::isfinite(*edge.delay) && *edge.delay >= 0.0)) {
    throw ValidationError(edge_name(edge, index) + ": delay must be non-negative");
  }
}

double compute_virtual_length(const EdgeRecord& edge, const QualityWeights& weights,
                              const LinkScale& scale, std::size_t index) {
  validate_edge(edge, index);
  double penalty = 0.0;
  if (edge.utilization) penalty += weights.utilization * *edge.utilization;
  if (edge.delay && scale.delay_max > 0.0) penalty += weights.delay * (*edge.delay / scale.delay_max);
  if (edge.bandwidth && scale.bandwidth_max > 0.0) {
    penalty += weights.bandwidth * (1.0 - *edge.bandwidth / scale.bandwidth_max);
  }
  return 1.0 + std::max(penalty, 0.0);
}

std::vector<std::vector<NodeId>> connected_components(std::size_t node_count,
                                                      std::span<const EdgeRecord> edges) {
  std::vector<NodeId> parent(node_count);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    const NodeId a = find(e.source), b = find(e.target);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<NodeId>> by_root(node_count);
  for (NodeId v = 0; v < node_count; ++v) by_root[find(v)].push_back(v);
  std::vector<std::vector<NodeId>> components;
  for (auto& c : by_root) {
    if (!c.empty()) components.push_back(std::move(c));
  }
  return components;
}

Topology::Topology(std::string name, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                   QualityWeights weights)
    : name_(std::move(name)), nodes_(std::move(nodes)), edges_(std::move(edges)), weights_(weights) {
  if (nodes_.empty()) throw ValidationError("topology has no nodes");
  if (weights_.utilization < 0 || weights_.delay < 0 || weights_.bandwidth < 0) {
    throw ValidationError("quality weights must be non-negative");
  }
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (node.id != i) {
      throw ValidationError("node ids must be contiguous 0..n-1; position " + std::to_string(i) +
                            " holds id " + std::to_string(node.id));
    }
    if (!(std::isfinite(node.priority) && node.priority > 0.0)) {
      throw ValidationError("node " + std::to_string(i) + ": priority must be positive");
    }
    if (node.customer_count == 0) {
      throw ValidationError("node " + std::to_string(i) + ": customer_count must be positive");
    }
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.source >= n || e.target >= n) {
      throw ValidationError(edge_name(e, i) + ": endpoint does not exist");
    }
    if (e.source == e.target) throw ValidationError(edge_name(e, i) + ": self-loop");
    if (!seen.emplace(std::min(e.source, e.target), std::max(e.source, e.target)).second) {
      throw ValidationError(edge_name(e, i) + ": duplicate link");
    }
    validate_edge(e, i);
  }

  const LinkScale scale = link_scale(edges_);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edges_[i].virtual_length = compute_virtual_length(edges_[i], weights_, scale, i);
  }

  auto components = connected_components(n, edges_);
  if (components.size() > 1) {
    components.erase(components.begin());
    throw DisconnectedGraphError(
        "topology is not connected; unreachable from node 0: " + describe_components(components),
        std::move(components));
  }

  adjacency_.assign(n, {});
  for (const auto& e : edges_) {
    adjacency_[e.source].push_back(e.target);
    adjacency_[e.target].push_back(e.source);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::vector<double> Topology::priorities() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.priority);
  return out;
}

std::vector<std::uint64_t> Topology::customer_counts() const {
  std::vector<std::uint64_t> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.customer_count);
  return out;
}

bool Topology::has_coordinates() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.has_coordinates(); });
}

DistanceMatrix all_pairs_distances(const Topology& topology) {
  return all_pairs_distances(topology.size(), topology.edges());
}

DistanceMatrix all_pairs_distances(std::size_t node_count, std::span<const EdgeRecord> edges) {
  struct Arc {
    NodeId to;
    double length;
  };
  std::vector<std::vector<Arc>> arcs(node_count);
  for (const auto& e : edges) {
    arcs[e.source].push_back({e.target, e.virtual_length});
    arcs[e.target].push_back({e.source, e.virtual_length});
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix dist(node_count, inf);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (NodeId source = 0; source < node_count; ++source) {
    dist.at(source, source) = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist(source, u)) continue;
      for (const auto& arc : arcs[u]) {
        const double nd = d + arc.length;
        if (nd < dist(source, arc.to)) {
          dist.at(source, arc.to) = nd;
          queue.emplace(nd, arc.to);
        }
      }
    }
  }

  // Dijkstra sums in path order, so d(i,j) and d(j,i) can differ in the last
  // bit; keep the matrix exactly symmetric.
  for (NodeId i = 0; i < node_count; ++i) {
    for (NodeId j = i + 1; j < node_count; ++j) {
      const double v = std::min(dist(i, j), dist(j, i));
      dist.at(i, j) = v;
      dist.at(j, i) = v;
    }
  }

  if (node_count > 0) {
    for (NodeId j = 0; j < node_count; ++j) {
      if (dist(0, j) == inf) {
        auto components = connected_components(node_count, edges);
        components.erase(components.begin());
        throw DisconnectedGraphError(
            "graph is not connected; unreachable from node 0: " + describe_components(components),
            std::move(components));
      }
    }
  }
  return dist;
}

CenterResult one_center(const DistanceMatrix& dist, std::span<const double> priorities) {
  std::vector<NodeId> all(dist.size());
  std::iota(all.begin(), all.end(), NodeId{0});
  return one_center(dist, priorities, all, all);
}

CenterResult one_center(const DistanceMatrix& dist, std::span<const double> priorities,
                        std::span<const NodeId> clients, std::span<const NodeId> candidates,
                        std::optional<NodeId> prefer) {
  if (candidates.empty()) throw ValidationError("one_center: no candidate nodes");
  if (priorities.size() != dist.size()) {
    throw ValidationError("one_center: priority vector size does not match distance matrix");
  }
  CenterResult best{candidates.front(), std::numeric_limits<double>::infinity()};
  bool have = false;
  for (NodeId c : candidates) {
    double radius = 0.0;
    for (NodeId i : clients) {
      radius = std::max(radius, priorities[i] * dist(i, c));
      if (have && radius > best.radius) break;
    }
    const bool better = !have || radius < best.radius ||
                        (radius == best.radius &&
                         (prefer ? (c == *prefer || (best.node != *prefer && c < best.node))
                                 : c < best.node));
    if (better) {
      best = {c, radius};
      have = true;
    }
  }
  return best;
}

}  // namespace mirrorplace
