#include <algorithm>
#include <numeric>
#include <vector>

#include "coverage.hpp"
#include "mirrorplace/errors.hpp"
#include "mirrorplace/placement.hpp"

namespace mirrorplace {
namespace {

std::vector<NodeId> sorted_copy(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Initial server: the node farthest from the orientation mark, i.e. from the
// 1-center of the whole instance. The mark itself is discarded afterwards.
NodeId first_server(const Instance& instance, const DragoonParams& params) {
  const auto& dist = instance.dist();
  const std::size_t n = instance.size();
  const std::vector<double> ones(n, 1.0);
  const std::span<const double> prio = instance.priorities();
  const NodeId mark =
      one_center(dist, params.weighted_orientation ? prio : std::span<const double>(ones)).node;
  NodeId first = 0;
  double far = -1.0;
  for (NodeId i = 0; i < n; ++i) {
    const double d = (params.weighted_first_server ? prio[i] : 1.0) * dist(i, mark);
    if (d > far) {
      far = d;
      first = i;
    }
  }
  return first;
}

}  // namespace

PlacementResult dragoon(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  const std::size_t n = instance.size();
  const auto& adjacency = instance.adjacency();
  if (adjacency.size() != n) throw ValidationError("dragoon: instance has no adjacency information");
  const auto counts = instance.evaluation().customer_counts;

  std::vector<NodeId> servers = config.fixed_servers;
  std::vector<bool> is_server(n, false);
  std::vector<bool> movable;
  if (servers.empty()) servers.push_back(first_server(instance, config.dragoon));

  detail::Coverage coverage(instance.dist(), instance.priorities());
  for (NodeId s : servers) {
    is_server[s] = true;
    coverage.add(s);
  }
  while (servers.size() < config.k) {
    const NodeId next = coverage.farthest(is_server);
    servers.push_back(next);
    is_server[next] = true;
    coverage.add(next);
  }
  movable.assign(servers.size(), true);
  for (std::size_t slot = 0; slot < config.fixed_servers.size(); ++slot) movable[slot] = false;

  PlacementResult result;
  FitnessReport current = summarize(coverage.best(), counts);
  result.trace.records.push_back({0, sorted_copy(servers), current});
  result.trace.termination = Termination::iteration_cap;

  std::vector<double> values;
  std::vector<double> served_max(n);
  for (std::size_t iteration = 1; iteration <= config.dragoon.max_iterations; ++iteration) {
    // Servers whose farthest assigned customer is farthest move first.
    std::fill(served_max.begin(), served_max.end(), 0.0);
    for (NodeId i = 0; i < n; ++i) {
      const NodeId s = coverage.nearest(i);
      served_max[s] = std::max(served_max[s], coverage.best()[i]);
    }
    std::vector<std::size_t> order;
    for (std::size_t slot = 0; slot < servers.size(); ++slot) {
      if (movable[slot]) order.push_back(slot);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ma = served_max[servers[a]], mb = served_max[servers[b]];
      return ma != mb ? ma > mb : servers[a] < servers[b];
    });

    bool moved = false;
    for (std::size_t slot : order) {
      const NodeId from = servers[slot];
      NodeId to = from;
      FitnessReport best = current;
      for (NodeId candidate : adjacency[from]) {
        if (is_server[candidate]) continue;
        coverage.values_swapped(from, candidate, values);
        const FitnessReport report = summarize(values, counts);
        if (improves(report, best, config.criteria)) {
          best = report;
          to = candidate;
        }
      }
      if (to != from) {
        servers[slot] = to;
        is_server[from] = false;
        is_server[to] = true;
        coverage.assign(servers);
        current = best;
        moved = true;
      }
    }
    if (!moved) {
      result.trace.termination = Termination::converged;
      break;
    }
    result.trace.records.push_back({iteration, sorted_copy(servers), current});
  }

  result.placement = instance.place(servers);
  return result;
}

}  // namespace mirrorplace
