#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mirrorplace/objective.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace {

/// p(r) = r^-alpha / sum_{j=1..M} j^-alpha for ranks r = 1..M (index r-1).
std::vector<double> zipf_pmf(std::size_t catalog_size, double alpha);

/// A node's content popularity order over the catalog.
struct ContentProfile {
  std::vector<std::size_t> order;  // order[r] = item at rank r (0 = most popular)
  std::vector<std::size_t> ranks;  // ranks[item] = rank of item

  static ContentProfile from_order(std::vector<std::size_t> order);
  std::size_t catalog_size() const { return order.size(); }
};

/// How nodes are split into camps that share a base ranking.
enum class CampLayout {
  regional,   // graph-Voronoi regions around farthest-first seeds
  scattered,  // independent uniform camp per node
};

struct ProfileOptions {
  std::size_t catalog_size = 1000;
  double alpha = 0.8;
  double similarity = 0.6;  // 1: node ranking equals its camp's base; 0: independent permutation
  std::size_t camps = 2;
  CampLayout layout = CampLayout::regional;
  std::uint64_t seed = 0;
};

struct ProfileSet {
  std::vector<double> pmf;  // Zipf probabilities by rank, shared by all nodes
  std::vector<ContentProfile> profiles;
  std::vector<std::size_t> camp;
};

/// One profile per node: a partial shuffle of its camp's base ranking where
/// each rank position is released with probability 1 - similarity and the
/// released items are permuted uniformly among the released positions.
ProfileSet generate_profiles(const DistanceMatrix& dist, const ProfileOptions& options);

/// Spearman's rho = 1 - 6 sum d_i^2 / (M (M^2 - 1)) over two rank vectors,
/// each a permutation of the same contiguous range (0- or 1-based).
double spearman(std::span<const std::size_t> rank_a, std::span<const std::size_t> rank_b);

/// Least-frequently-used cache. Frequencies count hits since insertion;
/// eviction removes the lowest frequency, oldest insertion first on ties.
class LfuCache {
 public:
  explicit LfuCache(std::size_t capacity);

  /// Returns true on a hit. A miss inserts the item, evicting if full.
  bool request(std::size_t item);

  bool contains(std::size_t item) const { return entries_.contains(item); }
  std::uint64_t frequency(std::size_t item) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  struct Entry {
    std::uint64_t frequency;
    std::uint64_t inserted;
  };
  std::size_t capacity_;
  std::unordered_map<std::size_t, Entry> entries_;
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::size_t>> by_priority_;
  std::uint64_t clock_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

struct SimulationConfig {
  std::size_t rounds = 10'000;
  std::size_t cache_capacity = 50;
  double p_none = 0.2;
  double p_profile = 0.7;
  double p_novel = 0.1;
  std::uint64_t seed = 0;
};

struct ServerStats {
  NodeId server = 0;
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
};

struct SimReport {
  double cache_miss_ratio = 0.0;
  double average_request_distance = 0.0;  // unweighted virtual length per request
  std::uint64_t total_requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::vector<ServerStats> per_server;
};

/// Every round each node issues no request, a profile request or a novel
/// (uniform) request to its assigned server's LFU cache.
SimReport run_simulation(const DistanceMatrix& dist, const Placement& placement,
                         const ProfileSet& profiles, const SimulationConfig& config);

/// Ranks of the cluster's aggregate profile: item score is the
/// priority-weighted sum of member probabilities, ties by item id.
std::vector<std::size_t> aggregate_ranks(std::span<const NodeId> members,
                                         std::span<const double> priorities,
                                         const ProfileSet& profiles);

/// Mean Spearman correlation over all node pairs sharing a server
/// (1 when no cluster has two members).
double within_cluster_correlation(std::span<const NodeId> assignment, const ProfileSet& profiles);

struct ProfileAssignmentConfig {
  std::size_t max_iterations = 100;
};

/// Alternates (1) reassigning each node to the server whose aggregate
/// profile correlates best with its own and (2) moving each server to the
/// 1-center of its customers. Empty clusters keep location and aggregate.
/// Never returns a placement with lower within-cluster correlation than
/// `initial`.
Placement optimize_profile_assignment(const DistanceMatrix& dist, std::span<const double> priorities,
                                      const ProfileSet& profiles, const Placement& initial,
                                      const ProfileAssignmentConfig& config = {});

}  // namespace mirrorplace
