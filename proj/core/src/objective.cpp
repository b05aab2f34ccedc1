#include "mirrorplace/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mirrorplace/errors.hpp"

namespace mirrorplace {
namespace {

void check_servers(std::size_t n, std::span<const double> priorities,
                   std::span<const NodeId> servers) {
  if (servers.empty()) throw ValidationError("server set is empty");
  if (priorities.size() != n) {
    throw ValidationError("priority vector size does not match distance matrix");
  }
  for (NodeId s : servers) {
    if (s >= n) throw ValidationError("server id " + std::to_string(s) + " out of range");
  }
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Value at 1-based rank `rank` of the sorted multiset.
double at_rank(const std::vector<std::pair<double, std::uint64_t>>& sorted, std::uint64_t rank) {
  std::uint64_t seen = 0;
  for (const auto& [value, count] : sorted) {
    seen += count;
    if (seen >= rank) return value;
  }
  return sorted.back().first;
}

}  // namespace

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::maximum: return "max";
    case Metric::quantile95: return "q95";
    case Metric::median: return "median";
    case Metric::mean: return "mean";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "max" || text == "maximum") return Metric::maximum;
  if (text == "q95" || text == "quantile95") return Metric::quantile95;
  if (text == "median") return Metric::median;
  if (text == "mean" || text == "average") return Metric::mean;
  return std::nullopt;
}

double FitnessReport::value(Metric metric) const {
  switch (metric) {
    case Metric::maximum: return maximum;
    case Metric::quantile95: return quantile95;
    case Metric::median: return median;
    case Metric::mean: return mean;
  }
  return maximum;
}

std::weak_ordering compare(const FitnessReport& a, const FitnessReport& b, Criteria criteria) {
  for (Metric m : {criteria.primary, criteria.secondary}) {
    const double x = a.value(m), y = b.value(m);
    if (close(x, y)) continue;
    return x < y ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  return std::weak_ordering::equivalent;
}

std::vector<NodeId> assign_nearest(const DistanceMatrix& dist, std::span<const double> priorities,
                                   std::span<const NodeId> servers) {
  const std::size_t n = dist.size();
  check_servers(n, priorities, servers);
  std::vector<NodeId> sorted(servers.begin(), servers.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<NodeId> assignment(n);
  for (NodeId i = 0; i < n; ++i) {
    NodeId best = sorted.front();
    double best_d = priorities[i] * dist(i, best);
    for (NodeId s : sorted) {
      const double d = priorities[i] * dist(i, s);
      if (d < best_d) {
        best = s;
        best_d = d;
      }
    }
    assignment[i] = best;
  }
  return assignment;
}

FitnessReport summarize(std::vector<double> values, std::span<const std::uint64_t> multiplicity) {
  FitnessReport report;
  if (values.empty()) return report;
  if (!multiplicity.empty() && multiplicity.size() != values.size()) {
    throw ValidationError("multiplicity vector size does not match value count");
  }
  std::vector<std::pair<double, std::uint64_t>> weighted(values.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t count = multiplicity.empty() ? 1 : multiplicity[i];
    weighted[i] = {values[i], count};
    total += count;
  }
  std::sort(weighted.begin(), weighted.end());
  if (total == 0) return report;

  // Summing the sorted values makes the mean independent of node order.
  double sum = 0.0;
  for (const auto& [value, count] : weighted) sum += value * static_cast<double>(count);

  report.maximum = weighted.back().first;
  report.mean = sum / static_cast<double>(total);
  const auto q_rank = static_cast<std::uint64_t>(std::ceil(0.95 * static_cast<double>(total)));
  report.quantile95 = at_rank(weighted, std::max<std::uint64_t>(q_rank, 1));
  if (total % 2 == 1) {
    report.median = at_rank(weighted, total / 2 + 1);
  } else {
    report.median = 0.5 * (at_rank(weighted, total / 2) + at_rank(weighted, total / 2 + 1));
  }
  return report;
}

FitnessReport evaluate_assignment(const DistanceMatrix& dist, std::span<const double> priorities,
                                  std::span<const NodeId> assignment,
                                  const EvaluationOptions& options) {
  const std::size_t n = dist.size();
  if (assignment.size() != n || priorities.size() != n) {
    throw ValidationError("assignment/priority size does not match distance matrix");
  }
  std::vector<double> values(n);
  for (NodeId i = 0; i < n; ++i) {
    if (assignment[i] >= n) throw ValidationError("assignment refers to unknown node");
    values[i] = priorities[i] * dist(i, assignment[i]);
  }
  return summarize(std::move(values), options.customer_counts);
}

FitnessReport evaluate(const DistanceMatrix& dist, std::span<const double> priorities,
                       std::span<const NodeId> servers, const EvaluationOptions& options) {
  const std::size_t n = dist.size();
  check_servers(n, priorities, servers);
  std::vector<double> values(n);
  for (NodeId i = 0; i < n; ++i) {
    double best = priorities[i] * dist(i, servers.front());
    for (NodeId s : servers) best = std::min(best, priorities[i] * dist(i, s));
    values[i] = best;
  }
  return summarize(std::move(values), options.customer_counts);
}

Placement make_placement(const DistanceMatrix& dist, std::span<const double> priorities,
                         std::vector<NodeId> servers, const EvaluationOptions& options) {
  std::sort(servers.begin(), servers.end());
  if (std::adjacent_find(servers.begin(), servers.end()) != servers.end()) {
    throw ValidationError("server set contains duplicates");
  }
  Placement p;
  p.assignment = assign_nearest(dist, priorities, servers);
  p.fitness = evaluate_assignment(dist, priorities, p.assignment, options);
  p.servers = std::move(servers);
  return p;
}

bool meets_quality(const FitnessReport& report, double limit) {
  return report.maximum <= limit || close(report.maximum, limit);
}

}  // namespace mirrorplace
