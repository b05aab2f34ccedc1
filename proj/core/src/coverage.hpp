#pragma once

#include <span>
#include <vector>

#include "mirrorplace/topology.hpp"

namespace mirrorplace::detail {

// Weighted distance of every node to its nearest and second-nearest server,
// so that "replace server s by c" can be scored in O(n) without a full
// reassignment. Nearest-server ties resolve to the lowest id.
class Coverage {
 public:
  Coverage(const DistanceMatrix& dist, std::span<const double> priorities);

  void assign(std::span<const NodeId> servers);
  void add(NodeId server);

  double weighted(NodeId i, NodeId s) const { return priorities_[i] * dist_(i, s); }
  const std::vector<double>& best() const { return best_; }
  NodeId nearest(NodeId i) const { return nearest_[i]; }

  // Values after adding `added` to the current set.
  void values_with(NodeId added, std::vector<double>& out) const;
  // Values after replacing `removed` by `added`.
  void values_swapped(NodeId removed, NodeId added, std::vector<double>& out) const;

  // Node maximizing the weighted distance to its nearest server, skipping
  // nodes flagged in `excluded`; lowest id on ties.
  NodeId farthest(const std::vector<bool>& excluded) const;

 private:
  const DistanceMatrix& dist_;
  std::span<const double> priorities_;
  std::vector<double> best_;
  std::vector<double> second_;
  std::vector<NodeId> nearest_;
};

}  // namespace mirrorplace::detail
