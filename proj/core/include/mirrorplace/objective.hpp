#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mirrorplace/topology.hpp"

namespace mirrorplace {

enum class Metric { maximum, quantile95, median, mean };

std::string_view to_string(Metric metric);
/// Accepts "max", "q95", "median", "mean" and the long names.
std::optional<Metric> parse_metric(std::string_view text);

/// Summary of the priority-weighted customer-to-server distances.
struct FitnessReport {
  double maximum = 0.0;
  double quantile95 = 0.0;
  double median = 0.0;
  double mean = 0.0;

  double value(Metric metric) const;
  friend bool operator==(const FitnessReport&, const FitnessReport&) = default;
};

/// Lexicographic ranking: `primary` decides, `secondary` breaks ties.
struct Criteria {
  Metric primary = Metric::maximum;
  Metric secondary = Metric::mean;
};

/// `less` means `a` is better than `b`. Values within a relative 1e-12 of each
/// other compare equal so that summation-order noise never counts as progress.
std::weak_ordering compare(const FitnessReport& a, const FitnessReport& b, Criteria criteria = {});

inline bool improves(const FitnessReport& candidate, const FitnessReport& incumbent,
                     Criteria criteria = {}) {
  return compare(candidate, incumbent, criteria) == std::weak_ordering::less;
}

/// Servers plus the customer assignment they induce.
struct Placement {
  std::vector<NodeId> servers;     // ascending, distinct
  std::vector<NodeId> assignment;  // node -> serving node
  FitnessReport fitness;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// When `customer_counts` is non-empty each node's distance enters the
/// quantile, median and mean with that multiplicity; otherwise once per node.
struct EvaluationOptions {
  std::span<const std::uint64_t> customer_counts;
};

/// Each node goes to the server minimizing priority * distance; ties go to
/// the lowest server id.
std::vector<NodeId> assign_nearest(const DistanceMatrix& dist, std::span<const double> priorities,
                                   std::span<const NodeId> servers);

FitnessReport evaluate(const DistanceMatrix& dist, std::span<const double> priorities,
                       std::span<const NodeId> servers, const EvaluationOptions& options = {});

/// Fitness of an explicit (not necessarily nearest) assignment.
FitnessReport evaluate_assignment(const DistanceMatrix& dist, std::span<const double> priorities,
                                  std::span<const NodeId> assignment,
                                  const EvaluationOptions& options = {});

/// Summary statistics of a weighted-distance multiset. The 95% quantile uses
/// nearest rank; the median averages the two middle values for even sizes.
FitnessReport summarize(std::vector<double> values, std::span<const std::uint64_t> multiplicity = {});

/// Sorts and validates `servers`, assigns every node and evaluates.
Placement make_placement(const DistanceMatrix& dist, std::span<const double> priorities,
                         std::vector<NodeId> servers, const EvaluationOptions& options = {});

/// True when every weighted distance is within `limit`.
bool meets_quality(const FitnessReport& report, double limit);

}  // namespace mirrorplace
