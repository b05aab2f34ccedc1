#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mirrorplace/objective.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace {

/// Planar position (longitude, latitude in degrees) used by coordinate-space k-means.
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Everything an optimizer reads: the metric, node priorities, the link
/// structure (for Dragoon's one-hop moves) and optional coordinates.
class Instance {
 public:
  Instance(DistanceMatrix dist, std::vector<double> priorities,
           std::vector<std::vector<NodeId>> adjacency = {}, std::vector<GeoPoint> coordinates = {});
  Instance(const Topology& topology, DistanceMatrix dist);
  explicit Instance(const Topology& topology);

  std::size_t size() const { return dist_.size(); }
  const DistanceMatrix& dist() const { return dist_; }
  std::span<const double> priorities() const { return priorities_; }
  const std::vector<std::vector<NodeId>>& adjacency() const { return adjacency_; }
  std::span<const GeoPoint> coordinates() const { return coordinates_; }
  bool has_coordinates() const { return !coordinates_.empty(); }

  /// Optional customer-count weighting of quantile/median/mean.
  void set_customer_counts(std::vector<std::uint64_t> counts);
  EvaluationOptions evaluation() const { return {customer_counts_}; }

  FitnessReport evaluate(std::span<const NodeId> servers) const;
  Placement place(std::vector<NodeId> servers) const;

 private:
  DistanceMatrix dist_;
  std::vector<double> priorities_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<GeoPoint> coordinates_;
  std::vector<std::uint64_t> customer_counts_;
};

enum class Algorithm { dragoon, two_approx, greedy, macqueen, kmeans_pp, monte_carlo, genetic };

inline constexpr std::array kAllAlgorithms{Algorithm::dragoon,  Algorithm::two_approx,
                                           Algorithm::greedy,   Algorithm::macqueen,
                                           Algorithm::kmeans_pp, Algorithm::monte_carlo,
                                           Algorithm::genetic};

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);
/// Dragoon and Greedy ignore the seed.
bool is_deterministic(Algorithm algorithm);

enum class MappingMode { every_step, at_end };
enum class KMeansSpace { graph, coordinates };

struct DragoonParams {
  std::size_t max_iterations = 10'000;
  bool weighted_orientation = true;   // orientation mark = priority-weighted 1-center
  bool weighted_first_server = true;  // "farthest" measured with priority weighting
};

struct MonteCarloParams {
  std::size_t trials = 1000;
};

struct GeneticParams {
  std::size_t population_size = 25;
  std::size_t generations = 80;
  double mutation_rate = 0.1;
  double crossover_rate = 0.9;
  std::size_t tournament_size = 3;
  std::size_t elitism = 1;
};

struct KMeansParams {
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
  MappingMode mapping_mode = MappingMode::every_step;
  KMeansSpace space = KMeansSpace::graph;
};

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::dragoon;
  std::uint64_t seed = 0;
  std::size_t k = 1;
  std::vector<NodeId> fixed_servers;
  Criteria criteria;
  DragoonParams dragoon;
  MonteCarloParams monte_carlo;
  GeneticParams genetic;
  KMeansParams kmeans;
};

/// Throws ValidationError unless 1 <= k <= n, fixed servers are distinct
/// valid ids no more than k, and the algorithm parameters are in range.
void validate(const AlgorithmConfig& config, std::size_t node_count);

enum class Termination { converged, iteration_cap, trial_budget };
std::string_view to_string(Termination termination);

struct TraceRecord {
  std::size_t iteration = 0;
  std::vector<NodeId> servers;
  FitnessReport fitness;
};

/// Per-iteration best-so-far history. Record 0 is the initial solution.
struct RunTrace {
  std::vector<TraceRecord> records;
  Termination termination = Termination::converged;
};

struct PlacementResult {
  Placement placement;
  RunTrace trace;
};

/// Random first server (unless fixed servers exist), then farthest-first.
PlacementResult two_approx(const Instance& instance, const AlgorithmConfig& config);

/// Orientation-mark initialization, farthest-first completion, then
/// one-hop local refinement until no server moves.
PlacementResult dragoon(const Instance& instance, const AlgorithmConfig& config);

/// Adds the server that minimizes the primary metric, one at a time.
PlacementResult greedy(const Instance& instance, const AlgorithmConfig& config);

/// Lloyd iteration with MacQueen (uniform) or k-means++ seeding, chosen by
/// config.algorithm; best of config.kmeans.restarts runs.
PlacementResult kmeans(const Instance& instance, const AlgorithmConfig& config);

/// Best of config.monte_carlo.trials uniformly random k-subsets.
PlacementResult monte_carlo(const Instance& instance, const AlgorithmConfig& config);

/// Subset-genome GA with tournament selection, set crossover and elitism.
PlacementResult genetic(const Instance& instance, const AlgorithmConfig& config);

/// Dispatches on config.algorithm after validating the configuration.
PlacementResult run_algorithm(const Instance& instance, const AlgorithmConfig& config);

/// k-means++ selection weights: squared distance of every node to its
/// nearest already-chosen center.
std::vector<double> kmeanspp_weights(const DistanceMatrix& dist, std::span<const NodeId> centers);

}  // namespace mirrorplace
