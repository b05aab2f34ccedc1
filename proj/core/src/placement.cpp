#include "mirrorplace/placement.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "coverage.hpp"
#include "mirrorplace/errors.hpp"
#include "mirrorplace/rng.hpp"

namespace mirrorplace {

Instance::Instance(DistanceMatrix dist, std::vector<double> priorities,
                   std::vector<std::vector<NodeId>> adjacency, std::vector<GeoPoint> coordinates)
    : dist_(std::move(dist)),
      priorities_(std::move(priorities)),
      adjacency_(std::move(adjacency)),
      coordinates_(std::move(coordinates)) {
  if (priorities_.size() != dist_.size()) {
    throw ValidationError("priority vector size does not match distance matrix");
  }
  if (!adjacency_.empty() && adjacency_.size() != dist_.size()) {
    throw ValidationError("adjacency size does not match distance matrix");
  }
  if (!coordinates_.empty() && coordinates_.size() != dist_.size()) {
    throw ValidationError("coordinate count does not match distance matrix");
  }
}

Instance::Instance(const Topology& topology, DistanceMatrix dist)
    : Instance(std::move(dist), topology.priorities(), topology.adjacency()) {
  if (topology.has_coordinates()) {
    coordinates_.reserve(topology.size());
    for (const auto& node : topology.nodes()) coordinates_.push_back({*node.longitude, *node.latitude});
  }
}

Instance::Instance(const Topology& topology) : Instance(topology, all_pairs_distances(topology)) {}

void Instance::set_customer_counts(std::vector<std::uint64_t> counts) {
  if (!counts.empty() && counts.size() != size()) {
    throw ValidationError("customer count vector size does not match node count");
  }
  customer_counts_ = std::move(counts);
}

FitnessReport Instance::evaluate(std::span<const NodeId> servers) const {
  return mirrorplace::evaluate(dist_, priorities_, servers, evaluation());
}

Placement Instance::place(std::vector<NodeId> servers) const {
  return make_placement(dist_, priorities_, std::move(servers), evaluation());
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::dragoon: return "dragoon";
    case Algorithm::two_approx: return "two-approx";
    case Algorithm::greedy: return "greedy";
    case Algorithm::macqueen: return "macqueen";
    case Algorithm::kmeans_pp: return "kmeans++";
    case Algorithm::monte_carlo: return "monte-carlo";
    case Algorithm::genetic: return "genetic";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms) {
    if (text == to_string(a)) return a;
  }
  if (text == "two_approx" || text == "2-approx") return Algorithm::two_approx;
  if (text == "kmeans_pp" || text == "kmeanspp") return Algorithm::kmeans_pp;
  if (text == "monte_carlo") return Algorithm::monte_carlo;
  if (text == "ga") return Algorithm::genetic;
  return std::nullopt;
}

bool is_deterministic(Algorithm algorithm) {
  return algorithm == Algorithm::dragoon || algorithm == Algorithm::greedy;
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::converged: return "converged";
    case Termination::iteration_cap: return "iteration-cap";
    case Termination::trial_budget: return "trial-budget";
  }
  return "?";
}

void validate(const AlgorithmConfig& config, std::size_t node_count) {
  if (config.k < 1 || config.k > node_count) {
    throw ValidationError("k must satisfy 1 <= k <= n (k=" + std::to_string(config.k) +
                          ", n=" + std::to_string(node_count) + ")");
  }
  std::set<NodeId> fixed;
  for (NodeId f : config.fixed_servers) {
    if (f >= node_count) throw ValidationError("fixed server " + std::to_string(f) + " out of range");
    if (!fixed.insert(f).second) throw ValidationError("fixed server " + std::to_string(f) + " repeated");
  }
  if (fixed.size() > config.k) throw ValidationError("more fixed servers than k");

  const auto& ga = config.genetic;
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(ga.mutation_rate) || !rate_ok(ga.crossover_rate)) {
    throw ValidationError("genetic: mutation_rate and crossover_rate must lie in [0,1]");
  }
  if (ga.population_size < 2) throw ValidationError("genetic: population_size must be >= 2");
  if (ga.tournament_size < 1) throw ValidationError("genetic: tournament_size must be >= 1");
  if (ga.elitism >= ga.population_size) {
    throw ValidationError("genetic: elitism must be smaller than population_size");
  }
  if (config.monte_carlo.trials < 1) throw ValidationError("monte-carlo: trials must be >= 1");
  if (config.kmeans.restarts < 1) throw ValidationError("kmeans: restarts must be >= 1");
  if (config.dragoon.max_iterations < 1) throw ValidationError("dragoon: max_iterations must be >= 1");
}

namespace {

std::vector<NodeId> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Completes `servers` to k by farthest-first on weighted distances.
void farthest_first(detail::Coverage& coverage, std::vector<NodeId>& servers,
                    std::vector<bool>& is_server, std::size_t k, RunTrace* trace,
                    const Instance& instance) {
  while (servers.size() < k) {
    const NodeId next = coverage.farthest(is_server);
    servers.push_back(next);
    is_server[next] = true;
    coverage.add(next);
    if (trace) {
      trace->records.push_back({servers.size() - 1, sorted(servers),
                                summarize(coverage.best(), instance.evaluation().customer_counts)});
    }
  }
}

}  // namespace

PlacementResult two_approx(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  const std::size_t n = instance.size();
  detail::Coverage coverage(instance.dist(), instance.priorities());
  std::vector<bool> is_server(n, false);
  std::vector<NodeId> servers = config.fixed_servers;
  if (servers.empty()) {
    Rng rng(derive_seed(config.seed, "two-approx"));
    servers.push_back(static_cast<NodeId>(rng.below(n)));
  }
  for (NodeId s : servers) {
    is_server[s] = true;
    coverage.add(s);
  }
  PlacementResult result;
  result.trace.records.push_back(
      {0, sorted(servers), summarize(coverage.best(), instance.evaluation().customer_counts)});
  farthest_first(coverage, servers, is_server, config.k, &result.trace, instance);
  result.placement = instance.place(servers);
  result.trace.termination = Termination::converged;
  return result;
}

PlacementResult greedy(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  const std::size_t n = instance.size();
  const Metric metric = config.criteria.primary;
  const auto counts = instance.evaluation().customer_counts;
  detail::Coverage coverage(instance.dist(), instance.priorities());
  std::vector<bool> is_server(n, false);
  std::vector<NodeId> servers = config.fixed_servers;
  for (NodeId s : servers) {
    is_server[s] = true;
    coverage.add(s);
  }
  PlacementResult result;
  if (!servers.empty()) {
    result.trace.records.push_back({0, sorted(servers), summarize(coverage.best(), counts)});
  }
  std::vector<double> values;
  while (servers.size() < config.k) {
    NodeId pick = n;
    double pick_value = 0.0;
    FitnessReport pick_report;
    for (NodeId c = 0; c < n; ++c) {
      if (is_server[c]) continue;
      coverage.values_with(c, values);
      const FitnessReport report = summarize(values, counts);
      const double v = report.value(metric);
      if (pick == n || v < pick_value) {
        pick = c;
        pick_value = v;
        pick_report = report;
      }
    }
    servers.push_back(pick);
    is_server[pick] = true;
    coverage.add(pick);
    result.trace.records.push_back({result.trace.records.size(), sorted(servers), pick_report});
  }
  result.placement = instance.place(servers);
  result.trace.termination = Termination::converged;
  return result;
}

PlacementResult monte_carlo(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  const std::size_t n = instance.size();
  Rng rng(derive_seed(config.seed, "monte-carlo"));
  std::vector<bool> fixed(n, false);
  for (NodeId f : config.fixed_servers) fixed[f] = true;
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < n; ++v) {
    if (!fixed[v]) pool.push_back(v);
  }
  const std::size_t draw = config.k - config.fixed_servers.size();

  PlacementResult result;
  std::vector<NodeId> best_servers;
  FitnessReport best;
  for (std::size_t trial = 0; trial < config.monte_carlo.trials; ++trial) {
    // Partial Fisher-Yates: the first `draw` slots become a uniform subset.
    for (std::size_t i = 0; i < draw; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    }
    std::vector<NodeId> servers = config.fixed_servers;
    servers.insert(servers.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(draw));
    const FitnessReport report = instance.evaluate(servers);
    if (best_servers.empty() || improves(report, best, config.criteria)) {
      best = report;
      best_servers = sorted(std::move(servers));
      result.trace.records.push_back({trial, best_servers, best});
    }
  }
  result.placement = instance.place(best_servers);
  result.trace.termination = Termination::trial_budget;
  return result;
}

std::vector<double> kmeanspp_weights(const DistanceMatrix& dist, std::span<const NodeId> centers) {
  std::vector<double> w(dist.size(), 0.0);
  if (centers.empty()) return w;
  for (NodeId j = 0; j < dist.size(); ++j) {
    double d = dist(j, centers.front());
    for (NodeId c : centers) d = std::min(d, dist(j, c));
    w[j] = d * d;
  }
  return w;
}

PlacementResult run_algorithm(const Instance& instance, const AlgorithmConfig& config) {
  switch (config.algorithm) {
    case Algorithm::dragoon: return dragoon(instance, config);
    case Algorithm::two_approx: return two_approx(instance, config);
    case Algorithm::greedy: return greedy(instance, config);
    case Algorithm::macqueen:
    case Algorithm::kmeans_pp: return kmeans(instance, config);
    case Algorithm::monte_carlo: return monte_carlo(instance, config);
    case Algorithm::genetic: return genetic(instance, config);
  }
  throw ValidationError("unknown algorithm");
}

}  // namespace mirrorplace
