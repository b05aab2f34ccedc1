#include <algorithm>
#include <vector>

#include "mirrorplace/caching_sim.hpp"
#include "mirrorplace/errors.hpp"

namespace mirrorplace {

Placement optimize_profile_assignment(const DistanceMatrix& dist, std::span<const double> priorities,
                                      const ProfileSet& profiles, const Placement& initial,
                                      const ProfileAssignmentConfig& config) {
  const std::size_t n = dist.size();
  const std::size_t k = initial.servers.size();
  if (k == 0 || initial.assignment.size() != n || profiles.profiles.size() != n ||
      priorities.size() != n) {
    throw ValidationError("optimize_profile_assignment: inconsistent initial placement");
  }

  std::vector<NodeId> location = initial.servers;
  std::vector<std::size_t> slot(n);
  for (NodeId i = 0; i < n; ++i) {
    const auto it = std::find(location.begin(), location.end(), initial.assignment[i]);
    if (it == location.end()) {
      throw ValidationError("optimize_profile_assignment: node assigned to a non-server");
    }
    slot[i] = static_cast<std::size_t>(it - location.begin());
  }

  auto members_of = [&](std::size_t s) {
    std::vector<NodeId> members;
    for (NodeId i = 0; i < n; ++i) {
      if (slot[i] == s) members.push_back(i);
    }
    return members;
  };
  std::vector<std::vector<std::size_t>> aggregate(k);
  for (std::size_t s = 0; s < k; ++s) aggregate[s] = aggregate_ranks(members_of(s), priorities, profiles);

  for (std::size_t iteration = 0; iteration < config.max_iterations; ++iteration) {
    // (1) Best-correlated server; ties keep the current server, then the nearer one.
    std::vector<std::size_t> next_slot(n);
    for (NodeId i = 0; i < n; ++i) {
      std::size_t best = slot[i];
      double best_rho = spearman(profiles.profiles[i].ranks, aggregate[best]);
      for (std::size_t s = 0; s < k; ++s) {
        if (s == slot[i]) continue;
        const double rho = spearman(profiles.profiles[i].ranks, aggregate[s]);
        const bool tie = rho == best_rho && best != slot[i] &&
                         (dist(i, location[s]) < dist(i, location[best]) ||
                          (dist(i, location[s]) == dist(i, location[best]) && location[s] < location[best]));
        if (rho > best_rho || tie) {
          best = s;
          best_rho = rho;
        }
      }
      next_slot[i] = best;
    }
    const bool assignment_stable = next_slot == slot;
    slot = std::move(next_slot);

    // (2) Every non-empty cluster moves its server to the cluster's 1-center.
    bool moved = false;
    for (std::size_t s = 0; s < k; ++s) {
      const auto members = members_of(s);
      if (members.empty()) continue;
      std::vector<NodeId> candidates;
      for (NodeId v = 0; v < n; ++v) {
        if (v == location[s] || std::find(location.begin(), location.end(), v) == location.end()) {
          candidates.push_back(v);
        }
      }
      const NodeId target = one_center(dist, priorities, members, candidates, location[s]).node;
      if (target != location[s]) {
        location[s] = target;
        moved = true;
      }
      aggregate[s] = aggregate_ranks(members, priorities, profiles);
    }
    if (assignment_stable && !moved) break;
  }

  Placement result;
  result.assignment.resize(n);
  for (NodeId i = 0; i < n; ++i) result.assignment[i] = location[slot[i]];
  result.servers = location;
  std::sort(result.servers.begin(), result.servers.end());
  result.fitness = evaluate_assignment(dist, priorities, result.assignment);

  if (within_cluster_correlation(result.assignment, profiles) <
      within_cluster_correlation(initial.assignment, profiles)) {
    return initial;
  }
  return result;
}

}  // namespace mirrorplace
