#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mirrorplace {

using NodeId = std::size_t;

/// A network node: one access point with its aggregated customer group.
struct NodeRecord {
  NodeId id = 0;
  std::string label;
  std::optional<double> latitude;
  std::optional<double> longitude;
  double priority = 1.0;
  std::uint64_t customer_count = 1;

  bool has_coordinates() const { return latitude.has_value() && longitude.has_value(); }
  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

/// An undirected link. `virtual_length` is derived from the optional
/// quality attributes when the owning Topology is built.
struct EdgeRecord {
  NodeId source = 0;
  NodeId target = 0;
  std::optional<double> bandwidth;    // Mbit/s, > 0
  std::optional<double> utilization;  // [0, 1]
  std::optional<double> delay;        // ms, >= 0
  double virtual_length = 1.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Weights of the link-quality penalty terms.
struct QualityWeights {
  double utilization = 0.4;
  double delay = 0.3;
  double bandwidth = 0.3;

  friend bool operator==(const QualityWeights&, const QualityWeights&) = default;
};

/// Topology-wide normalizers for the delay and bandwidth terms.
/// A zero maximum disables the corresponding term.
struct LinkScale {
  double delay_max = 0.0;
  double bandwidth_max = 0.0;
};

/// Maxima over every edge that carries the attribute.
LinkScale link_scale(std::span<const EdgeRecord> edges);

/// Throws ValidationError naming edge `index` if an attribute is out of range.
void validate_edge(const EdgeRecord& edge, std::size_t index);

/// 1 + w_u*utilization + w_d*delay/delay_max + w_b*(1 - bandwidth/bandwidth_max).
/// Absent attributes contribute nothing, so a bare link has length exactly 1.
double compute_virtual_length(const EdgeRecord& edge, const QualityWeights& weights,
                              const LinkScale& scale, std::size_t index = 0);

/// Connected components of an undirected graph, each sorted, ordered by
/// their smallest node id.
std::vector<std::vector<NodeId>> connected_components(std::size_t node_count,
                                                      std::span<const EdgeRecord> edges);

/// Immutable, connected, undirected infrastructure graph.
class Topology {
 public:
  /// Validates nodes and edges, computes virtual lengths and adjacency.
  /// Throws ValidationError on bad records and DisconnectedGraphError if the
  /// graph is not connected.
  Topology(std::string name, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
           QualityWeights weights = {});

  const std::string& name() const { return name_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const NodeRecord& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const QualityWeights& weights() const { return weights_; }

  /// Neighbor ids of `id`, ascending.
  std::span<const NodeId> neighbors(NodeId id) const { return adjacency_.at(id); }
  const std::vector<std::vector<NodeId>>& adjacency() const { return adjacency_; }

  std::vector<double> priorities() const;
  std::vector<std::uint64_t> customer_counts() const;
  bool has_coordinates() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::string name_;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  QualityWeights weights_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Dense symmetric matrix of shortest-path virtual lengths.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(NodeId i, NodeId j) const { return data_[i * n_ + j]; }
  double& at(NodeId i, NodeId j) { return data_[i * n_ + j]; }
  std::span<const double> row(NodeId i) const { return {data_.data() + i * n_, n_}; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Dijkstra from every source over the virtual lengths.
DistanceMatrix all_pairs_distances(const Topology& topology);

/// Same, over a raw edge list. Throws DisconnectedGraphError when some pair
/// is unreachable.
DistanceMatrix all_pairs_distances(std::size_t node_count, std::span<const EdgeRecord> edges);

struct CenterResult {
  NodeId node = 0;
  double radius = 0.0;
};

/// Priority-weighted 1-center: argmin_c max_i priority_i * d(i, c), lowest id on ties.
CenterResult one_center(const DistanceMatrix& dist, std::span<const double> priorities);

/// 1-center restricted to `clients`, choosing among `candidates`.
/// `prefer` wins ties when it is among the minimizers.
CenterResult one_center(const DistanceMatrix& dist, std::span<const double> priorities,
                        std::span<const NodeId> clients, std::span<const NodeId> candidates,
                        std::optional<NodeId> prefer = std::nullopt);

}  // namespace mirrorplace
