#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mirrorplace/rng.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace::testing {

/// Path 0-1-...-(n-1) with unit lengths.
Topology path_topology(std::size_t n, std::vector<double> priorities = {});

/// Hub 0 joined to `leaves` leaves.
Topology star_topology(std::size_t leaves);

/// Two complete graphs of `size` nodes joined by one edge between node
/// size-1 and node size.
Topology two_cliques(std::size_t size);

struct RandomGraphOptions {
  std::size_t nodes = 10;
  double extra_edge_probability = 0.2;
  bool quality_attributes = false;  // random multiples of 1/8
  double priority_min = 1.0;
  double priority_max = 1.0;
  bool with_coordinates = false;
};

/// Random spanning tree plus independent extra edges; always connected.
Topology random_topology(Rng& rng, const RandomGraphOptions& options);

/// Independent all-pairs oracle over the topology's stored virtual lengths.
DistanceMatrix floyd_warshall(const Topology& topology);

/// Unweighted hop counts by breadth-first search from every node.
std::vector<std::vector<std::size_t>> bfs_hops(const Topology& topology);

/// max_i min_{s in servers} priority_i * d(i, s), computed directly.
double k_center_value(const DistanceMatrix& dist, std::span<const double> priorities,
                      std::span<const std::size_t> servers);

/// Exact k-center optimum by plain enumeration of every k-subset.
double naive_optimum(const DistanceMatrix& dist, std::span<const double> priorities, std::size_t k);

/// DistanceMatrix built from explicit rows.
DistanceMatrix matrix(const std::vector<std::vector<double>>& rows);

}  // namespace mirrorplace::testing
