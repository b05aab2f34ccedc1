#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/placement.hpp"
#include "mirrorplace/rng.hpp"

namespace mirrorplace {
namespace {

using Genome = std::vector<NodeId>;  // sorted k-subset

struct Individual {
  Genome genome;
  FitnessReport fitness;
};

class Breeder {
 public:
  Breeder(const Instance& instance, const AlgorithmConfig& config, Rng& rng)
      : instance_(instance), config_(config), rng_(rng), fixed_(instance.size(), false) {
    for (NodeId f : config.fixed_servers) fixed_[f] = true;
    for (NodeId v = 0; v < instance.size(); ++v) {
      if (!fixed_[v]) free_.push_back(v);
    }
  }

  std::size_t open_slots() const { return config_.k - config_.fixed_servers.size(); }
  std::size_t free_nodes() const { return free_.size(); }

  Individual make(Genome genome) const {
    std::sort(genome.begin(), genome.end());
    Individual ind{std::move(genome), {}};
    ind.fitness = instance_.evaluate(ind.genome);
    return ind;
  }

  Genome random_genome() {
    std::vector<NodeId> pool = free_;
    Genome g = config_.fixed_servers;
    for (std::size_t i = 0; i < open_slots(); ++i) {
      std::swap(pool[i], pool[i + rng_.below(pool.size() - i)]);
      g.push_back(pool[i]);
    }
    return g;
  }

  // Best of `tournament_size` uniformly drawn individuals.
  const Individual& select(const std::vector<Individual>& population) {
    std::size_t pick = rng_.below(population.size());
    for (std::size_t t = 1; t < config_.genetic.tournament_size; ++t) {
      const std::size_t other = rng_.below(population.size());
      if (improves(population[other].fitness, population[pick].fitness, config_.criteria)) {
        pick = other;
      }
    }
    return population[pick];
  }

  // Shared genes are inherited; each gene present in only one parent is
  // inherited with probability 1/2. The child is then repaired to size k.
  Genome crossover(const Genome& a, const Genome& b) {
    Genome child;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(child));
    Genome diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    for (NodeId v : diff) {
      if (rng_.bernoulli(0.5)) child.push_back(v);
    }
    repair(child);
    return child;
  }

  // Replaces one non-fixed server by a random node outside the genome.
  void mutate(Genome& genome) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < genome.size(); ++i) {
      if (!fixed_[genome[i]]) slots.push_back(i);
    }
    std::vector<NodeId> outside;
    for (NodeId v : free_) {
      if (!std::binary_search(genome.begin(), genome.end(), v)) outside.push_back(v);
    }
    if (slots.empty() || outside.empty()) return;
    genome[slots[rng_.below(slots.size())]] = outside[rng_.below(outside.size())];
    std::sort(genome.begin(), genome.end());
  }

 private:
  void repair(Genome& genome) {
    std::sort(genome.begin(), genome.end());
    while (genome.size() > config_.k) {
      std::vector<std::size_t> droppable;
      for (std::size_t i = 0; i < genome.size(); ++i) {
        if (!fixed_[genome[i]]) droppable.push_back(i);
      }
      genome.erase(genome.begin() + static_cast<std::ptrdiff_t>(droppable[rng_.below(droppable.size())]));
    }
    while (genome.size() < config_.k) {
      std::vector<NodeId> outside;
      for (NodeId v : free_) {
        if (!std::binary_search(genome.begin(), genome.end(), v)) outside.push_back(v);
      }
      genome.push_back(outside[rng_.below(outside.size())]);
      std::sort(genome.begin(), genome.end());
    }
  }

  const Instance& instance_;
  const AlgorithmConfig& config_;
  Rng& rng_;
  std::vector<bool> fixed_;
  std::vector<NodeId> free_;
};

}  // namespace

PlacementResult genetic(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  const auto& params = config.genetic;
  Rng rng(derive_seed(config.seed, "genetic"));
  Breeder breeder(instance, config, rng);

  // Exact lexicographic order; the tolerance in compare() is not a strict weak ordering.
  const Criteria c = config.criteria;
  auto by_fitness = [c](const Individual& a, const Individual& b) {
    return std::pair(a.fitness.value(c.primary), a.fitness.value(c.secondary)) <
           std::pair(b.fitness.value(c.primary), b.fitness.value(c.secondary));
  };

  std::vector<Individual> population;
  population.reserve(params.population_size);
  for (std::size_t i = 0; i < params.population_size; ++i) {
    population.push_back(breeder.make(breeder.random_genome()));
  }
  std::stable_sort(population.begin(), population.end(), by_fitness);

  PlacementResult result;
  result.trace.records.push_back({0, population.front().genome, population.front().fitness});

  // Only one genome exists when every slot is fixed or every node is chosen.
  if (breeder.open_slots() == 0 || breeder.open_slots() == breeder.free_nodes()) {
    result.placement = instance.place(population.front().genome);
    result.trace.termination = Termination::converged;
    return result;
  }

  for (std::size_t generation = 1; generation <= params.generations; ++generation) {
    std::vector<Individual> next(population.begin(),
                                 population.begin() + static_cast<std::ptrdiff_t>(params.elitism));
    while (next.size() < params.population_size) {
      const Individual& a = breeder.select(population);
      const Individual& b = breeder.select(population);
      Genome child = rng.bernoulli(params.crossover_rate) ? breeder.crossover(a.genome, b.genome)
                                                          : a.genome;
      if (rng.bernoulli(params.mutation_rate)) breeder.mutate(child);
      next.push_back(breeder.make(std::move(child)));
    }
    std::stable_sort(next.begin(), next.end(), by_fitness);
    population = std::move(next);
    result.trace.records.push_back({generation, population.front().genome, population.front().fitness});
  }

  result.placement = instance.place(population.front().genome);
  result.trace.termination = Termination::iteration_cap;
  return result;
}

}  // namespace mirrorplace
