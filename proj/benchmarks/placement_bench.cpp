#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "mirrorplace/caching_sim.hpp"
#include "mirrorplace/exact_oracle.hpp"
#include "mirrorplace/io.hpp"
#include "mirrorplace/placement.hpp"

namespace mp = mirrorplace;

namespace {

const mp::Topology& reference_topology() {
  static const mp::Topology topology =
      mp::import_graphml(std::filesystem::path(MIRRORPLACE_DATA_DIR) / "topologyzoo" / "VtlWavenet2011.graphml")
          .topology;
  return topology;
}

const mp::Instance& reference_instance() {
  static const mp::Instance instance(reference_topology());
  return instance;
}

void BM_AllPairsDistances(benchmark::State& state) {
  const mp::Topology& topology = reference_topology();
  for (auto _ : state) benchmark::DoNotOptimize(mp::all_pairs_distances(topology));
}
BENCHMARK(BM_AllPairsDistances);

template <mp::Algorithm A>
void BM_Placement(benchmark::State& state) {
  mp::AlgorithmConfig config;
  config.algorithm = A;
  config.k = static_cast<std::size_t>(state.range(0));
  config.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mp::run_algorithm(reference_instance(), config));
}
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::dragoon)->Arg(5)->Arg(20);
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::two_approx)->Arg(5)->Arg(20);
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::greedy)->Arg(5)->Arg(20);
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::kmeans_pp)->Arg(5);
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::monte_carlo)->Arg(5);
BENCHMARK_TEMPLATE(BM_Placement, mp::Algorithm::genetic)->Arg(5);

void BM_BruteForce(benchmark::State& state) {
  const mp::Instance& instance = reference_instance();
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mp::brute_force_optimum(instance.dist(), instance.priorities(), k));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(3);

void BM_LfuRequest(benchmark::State& state) {
  mp::LfuCache cache(50);
  std::size_t item = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.request(item));
    item = (item * 2654435761u + 1) % 1000;
  }
}
BENCHMARK(BM_LfuRequest);

void BM_Simulation(benchmark::State& state) {
  const mp::Instance& instance = reference_instance();
  mp::AlgorithmConfig config;
  config.k = 4;
  const mp::Placement placement = mp::dragoon(instance, config).placement;
  const mp::ProfileSet profiles = mp::generate_profiles(instance.dist(), {});
  mp::SimulationConfig sim;
  sim.rounds = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mp::run_simulation(instance.dist(), placement, profiles, sim));
}
BENCHMARK(BM_Simulation)->Arg(1000);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point is defined here.
BENCHMARK_MAIN();
