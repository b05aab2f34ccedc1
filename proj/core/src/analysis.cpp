#include "mirrorplace/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "mirrorplace/errors.hpp"

namespace mirrorplace {

Scenario make_scenario(Topology topology) {
  Instance instance(topology);
  std::string name = topology.name();
  return Scenario{std::move(name), std::move(topology), std::move(instance)};
}

namespace {

// Order-independent mean: summing sorted values makes the result identical
// whatever order parallel workers finished in.
double sorted_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

FitnessReport mean_report(const std::vector<const FitnessReport*>& reports) {
  std::vector<double> maximum, q95, median, mean;
  for (const FitnessReport* r : reports) {
    maximum.push_back(r->maximum);
    q95.push_back(r->quantile95);
    median.push_back(r->median);
    mean.push_back(r->mean);
  }
  return {sorted_mean(std::move(maximum)), sorted_mean(std::move(q95)),
          sorted_mean(std::move(median)), sorted_mean(std::move(mean))};
}

}  // namespace

const SweepCell& SweepResult::cell(Algorithm algorithm, std::size_t k) const {
  for (const SweepCell& c : cells)
    if (c.algorithm == algorithm && c.k == k) return c;
  throw ValidationError("no sweep cell for " + std::string(to_string(algorithm)) +
                        " at k=" + std::to_string(k));
}

std::vector<double> SweepResult::series(Algorithm algorithm) const {
  std::vector<double> out;
  for (std::size_t k : k_values) out.push_back(cell(algorithm, k).mean.value(metric));
  return out;
}

SweepResult sweep(std::span<const Scenario> scenarios, std::span<const AlgorithmConfig> algorithms,
                  std::span<const std::size_t> k_values, std::span<const std::uint64_t> seeds,
                  const SweepOptions& options) {
  if (scenarios.empty()) throw ValidationError("sweep needs at least one scenario");
  if (algorithms.empty()) throw ValidationError("sweep needs at least one algorithm");
  if (k_values.empty()) throw ValidationError("sweep needs at least one k");
  if (seeds.empty()) throw ValidationError("sweep needs at least one seed");
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      std::adjacent_find(k_values.begin(), k_values.end()) != k_values.end())
    throw ValidationError("k values must be strictly ascending");
  for (std::size_t a = 0; a < algorithms.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (algorithms[a].algorithm == algorithms[b].algorithm)
        throw ValidationError("algorithm listed twice: " +
                              std::string(to_string(algorithms[a].algorithm)));

  SweepResult result;
  for (const Scenario& s : scenarios) result.scenarios.push_back(s.name);
  for (const AlgorithmConfig& c : algorithms) result.algorithms.push_back(c.algorithm);
  result.k_values.assign(k_values.begin(), k_values.end());
  result.seeds.assign(seeds.begin(), seeds.end());
  result.metric = algorithms.front().criteria.primary;

  for (std::size_t si = 0; si < scenarios.size(); ++si)
    for (const AlgorithmConfig& c : algorithms)
      for (std::size_t k : k_values) {
        const std::size_t runs = is_deterministic(c.algorithm) ? 1 : seeds.size();
        for (std::size_t r = 0; r < runs; ++r) {
          SweepRun run;
          run.scenario = si;
          run.algorithm = c.algorithm;
          run.k = k;
          run.seed = is_deterministic(c.algorithm) ? 0 : seeds[r];
          result.runs.push_back(std::move(run));
        }
      }

  auto config_for = [&](Algorithm algorithm) -> const AlgorithmConfig& {
    for (const AlgorithmConfig& c : algorithms)
      if (c.algorithm == algorithm) return c;
    throw std::logic_error("unreachable");
  };

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = result.runs.size();

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.runs.size()) return;
      SweepRun& run = result.runs[i];
      const Scenario& scenario = scenarios[run.scenario];
      try {
        AlgorithmConfig config = config_for(run.algorithm);
        config.k = run.k;
        config.seed = run.seed;
        PlacementResult out = run_algorithm(scenario.instance, config);
        run.fitness = out.placement.fitness;
        run.servers = std::move(out.placement.servers);
        run.termination = out.trace.termination;
        run.trace_length = out.trace.records.size();
      } catch (const std::exception& e) {
        std::string context = "scenario '" + scenario.name + "', algorithm " +
                              std::string(to_string(run.algorithm)) + ", k=" +
                              std::to_string(run.k) + ", seed=" + std::to_string(run.seed) +
                              ": " + e.what();
        std::exception_ptr wrapped;
        if (dynamic_cast<const ValidationError*>(&e))
          wrapped = std::make_exception_ptr(ValidationError(context));
        else
          wrapped = std::make_exception_ptr(std::runtime_error(context));
        std::lock_guard lock(error_mutex);
        // Report the lowest-index failure so the message is reproducible.
        if (i < first_error_index) {
          first_error_index = i;
          first_error = wrapped;
        }
      }
    }
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, result.runs.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  for (const AlgorithmConfig& c : algorithms) {
    std::optional<double> previous;
    for (std::size_t k : k_values) {
      SweepCell cell;
      cell.algorithm = c.algorithm;
      cell.k = k;
      std::vector<const FitnessReport*> all;
      for (std::size_t si = 0; si < scenarios.size(); ++si) {
        std::vector<const FitnessReport*> mine;
        for (const SweepRun& run : result.runs)
          if (run.scenario == si && run.algorithm == c.algorithm && run.k == k) {
            mine.push_back(&run.fitness);
            all.push_back(&run.fitness);
          }
        cell.per_scenario.push_back(mean_report(mine));
      }
      cell.mean = mean_report(all);
      const double value = cell.mean.value(result.metric);
      if (previous) cell.improvement_percent = improvement_percent(*previous, value);
      previous = value;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

double improvement_percent(double previous, double current) {
  if (previous == 0.0) return 0.0;
  return (previous - current) / previous * 100.0;
}

Saturation saturation_point(std::span<const std::size_t> k_values, std::span<const double> values,
                            double threshold_percent) {
  if (k_values.empty()) throw ValidationError("saturation needs at least one k");
  if (k_values.size() != values.size())
    throw ValidationError("saturation: " + std::to_string(k_values.size()) + " k values but " +
                          std::to_string(values.size()) + " fitness values");
  for (std::size_t i = 1; i < k_values.size(); ++i)
    if (k_values[i] <= k_values[i - 1])
      throw ValidationError("saturation: k values must be strictly ascending");

  Saturation out;
  out.improvements.assign(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i)
    out.improvements[i] = improvement_percent(values[i - 1], values[i]);

  // Walk backwards to find where the tail of sub-threshold steps begins.
  std::size_t start = values.size();
  while (start > 1 && out.improvements[start - 1] < threshold_percent) --start;
  if (start == values.size()) {
    out.k = k_values.back();
    out.saturated = false;
  } else {
    out.k = k_values[start];
    out.saturated = true;
  }
  return out;
}

std::size_t servers_needed(const Instance& instance, AlgorithmConfig config, double limit) {
  if (!(limit >= 0.0)) throw ValidationError("quality limit must be non-negative");
  const std::size_t n = instance.size();
  for (std::size_t k = std::max<std::size_t>(1, config.fixed_servers.size()); k <= n; ++k) {
    config.k = k;
    if (meets_quality(run_algorithm(instance, config).placement.fitness, limit)) return k;
  }
  return n;  // every node a server gives zero distance
}

std::size_t servers_needed_exact(const DistanceMatrix& dist, std::span<const double> priorities,
                                 double limit, std::uint64_t budget) {
  if (!(limit >= 0.0)) throw ValidationError("quality limit must be non-negative");
  const std::size_t n = dist.size();
  if (n == 0) throw ValidationError("empty distance matrix");
  std::size_t lo = 1, hi = n;  // hi always feasible
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (brute_force_optimum(dist, priorities, mid, budget).optimum <= limit)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace mirrorplace
