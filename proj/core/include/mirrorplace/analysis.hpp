#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mirrorplace/exact_oracle.hpp"
#include "mirrorplace/placement.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace {

struct Scenario {
  std::string name;
  Topology topology;
  Instance instance;
};

Scenario make_scenario(Topology topology);

/// One optimizer run inside a sweep.
struct SweepRun {
  std::size_t scenario = 0;
  Algorithm algorithm = Algorithm::dragoon;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  FitnessReport fitness;
  std::vector<NodeId> servers;
  Termination termination = Termination::converged;
  std::size_t trace_length = 0;
};

/// Aggregate for one (algorithm, k) pair.
struct SweepCell {
  Algorithm algorithm = Algorithm::dragoon;
  std::size_t k = 0;
  FitnessReport mean;                      // over every scenario and seed
  std::vector<FitnessReport> per_scenario; // mean over seeds, scenario order
  std::optional<double> improvement_percent;  // of the primary metric vs the previous k
};

struct SweepResult {
  std::vector<std::string> scenarios;
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> k_values;
  std::vector<std::uint64_t> seeds;
  Metric metric = Metric::maximum;
  std::vector<SweepCell> cells;  // algorithm-major, k ascending
  std::vector<SweepRun> runs;

  const SweepCell& cell(Algorithm algorithm, std::size_t k) const;
  /// Mean primary metric per k for one algorithm.
  std::vector<double> series(Algorithm algorithm) const;
};

struct SweepOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Runs every (scenario, algorithm, k, seed) combination. `algorithms`
/// supplies per-algorithm parameters; their k and seed fields are
/// overwritten. Deterministic algorithms run once per (scenario, k). A failing
/// run is rethrown with its scenario, algorithm, k and seed in the message.
SweepResult sweep(std::span<const Scenario> scenarios, std::span<const AlgorithmConfig> algorithms,
                  std::span<const std::size_t> k_values, std::span<const std::uint64_t> seeds,
                  const SweepOptions& options = {});

/// (previous - current) / previous * 100; 0 when previous is 0.
double improvement_percent(double previous, double current);

struct Saturation {
  std::size_t k = 0;
  bool saturated = false;           // false: never dropped below threshold
  std::vector<double> improvements; // improvements[i] = step k[i-1] -> k[i]; [0] = 0
};

/// Smallest k whose improvement over its predecessor, and that of every
/// later recorded step, is below `threshold_percent`. Without such k the
/// largest k is returned with saturated = false. `k_values` must ascend.
Saturation saturation_point(std::span<const std::size_t> k_values, std::span<const double> values,
                            double threshold_percent = 1.0);

/// Smallest k whose placement meets `limit` on the maximum, scanning k
/// upward with the configured algorithm.
std::size_t servers_needed(const Instance& instance, AlgorithmConfig config, double limit);

/// Same question answered exactly with the brute-force oracle (binary search
/// over k, valid because the optimum is non-increasing in k).
std::size_t servers_needed_exact(const DistanceMatrix& dist, std::span<const double> priorities,
                                 double limit, std::uint64_t budget = kDefaultOracleBudget);

}  // namespace mirrorplace
