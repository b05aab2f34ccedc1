#include "mirrorplace/caching_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/rng.hpp"

namespace mirrorplace {

std::vector<double> zipf_pmf(std::size_t catalog_size, double alpha) {
  if (catalog_size == 0) throw ValidationError("zipf_pmf: catalog size must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("zipf_pmf: alpha must be >= 0");
  std::vector<double> pmf(catalog_size);
  for (std::size_t r = 0; r < catalog_size; ++r) {
    pmf[r] = std::pow(static_cast<double>(r + 1), -alpha);
  }
  // Summing from the tail keeps small terms from being swamped.
  double norm = 0.0;
  for (std::size_t r = catalog_size; r-- > 0;) norm += pmf[r];
  for (double& p : pmf) p /= norm;
  return pmf;
}

ContentProfile ContentProfile::from_order(std::vector<std::size_t> order) {
  ContentProfile profile;
  profile.ranks.assign(order.size(), 0);
  std::vector<bool> seen(order.size(), false);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (order[r] >= order.size() || seen[order[r]]) {
      throw ValidationError("content profile order is not a permutation");
    }
    seen[order[r]] = true;
    profile.ranks[order[r]] = r;
  }
  profile.order = std::move(order);
  return profile;
}

namespace {

std::vector<std::size_t> camp_layout(const DistanceMatrix& dist, const ProfileOptions& options) {
  const std::size_t n = dist.size();
  std::vector<std::size_t> camp(n, 0);
  if (options.camps <= 1 || n == 0) return camp;
  Rng rng(derive_seed(options.seed, "camps"));
  if (options.layout == CampLayout::scattered) {
    for (auto& c : camp) c = rng.below(options.camps);
    return camp;
  }
  // Farthest-first seeds, then every node joins its nearest seed.
  std::vector<NodeId> seeds{static_cast<NodeId>(rng.below(n))};
  std::vector<double> near(n);
  for (NodeId i = 0; i < n; ++i) near[i] = dist(i, seeds[0]);
  while (seeds.size() < std::min(options.camps, n)) {
    const NodeId far = static_cast<NodeId>(std::max_element(near.begin(), near.end()) - near.begin());
    seeds.push_back(far);
    for (NodeId i = 0; i < n; ++i) near[i] = std::min(near[i], dist(i, far));
  }
  for (NodeId i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < seeds.size(); ++s) {
      if (dist(i, seeds[s]) < dist(i, seeds[best])) best = s;
    }
    camp[i] = best;
  }
  return camp;
}

}  // namespace

ProfileSet generate_profiles(const DistanceMatrix& dist, const ProfileOptions& options) {
  if (!(options.similarity >= 0.0 && options.similarity <= 1.0)) {
    throw ValidationError("generate_profiles: similarity must lie in [0,1]");
  }
  if (options.camps == 0) throw ValidationError("generate_profiles: camps must be positive");
  const std::size_t m = options.catalog_size;
  ProfileSet set;
  set.pmf = zipf_pmf(m, options.alpha);
  set.camp = camp_layout(dist, options);

  std::vector<std::vector<std::size_t>> bases(options.camps, std::vector<std::size_t>(m));
  for (std::size_t c = 0; c < options.camps; ++c) {
    std::iota(bases[c].begin(), bases[c].end(), std::size_t{0});
    Rng rng(derive_seed(options.seed, "base-ranking", c));
    rng.shuffle(std::span(bases[c]));
  }

  set.profiles.reserve(dist.size());
  for (NodeId i = 0; i < dist.size(); ++i) {
    Rng rng(derive_seed(options.seed, "node-profile", i));
    std::vector<std::size_t> order = bases[set.camp[i]];
    std::vector<std::size_t> released;
    for (std::size_t r = 0; r < m; ++r) {
      if (!rng.bernoulli(options.similarity)) released.push_back(r);
    }
    std::vector<std::size_t> items;
    items.reserve(released.size());
    for (std::size_t r : released) items.push_back(order[r]);
    rng.shuffle(std::span(items));
    for (std::size_t j = 0; j < released.size(); ++j) order[released[j]] = items[j];
    set.profiles.push_back(ContentProfile::from_order(std::move(order)));
  }
  return set;
}

double spearman(std::span<const std::size_t> rank_a, std::span<const std::size_t> rank_b) {
  if (rank_a.size() != rank_b.size()) throw ValidationError("spearman: rankings differ in length");
  const std::size_t m = rank_a.size();
  if (m == 0) throw ValidationError("spearman: empty rankings");
  auto check = [m](std::span<const std::size_t> r) {
    const std::size_t base = *std::min_element(r.begin(), r.end());
    std::vector<bool> seen(m, false);
    for (std::size_t v : r) {
      if (v - base >= m || seen[v - base]) throw ValidationError("spearman: input is not a ranking");
      seen[v - base] = true;
    }
    return base;
  };
  if (check(rank_a) != check(rank_b)) throw ValidationError("spearman: rankings use different bases");
  if (m == 1) return 1.0;
  std::uint64_t sum_sq = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto d = static_cast<std::int64_t>(rank_a[i]) - static_cast<std::int64_t>(rank_b[i]);
    sum_sq += static_cast<std::uint64_t>(d * d);
  }
  const double md = static_cast<double>(m);
  return 1.0 - 6.0 * static_cast<double>(sum_sq) / (md * (md * md - 1.0));
}

LfuCache::LfuCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ValidationError("LfuCache: capacity must be positive");
}

std::uint64_t LfuCache::frequency(std::size_t item) const {
  const auto it = entries_.find(item);
  return it == entries_.end() ? 0 : it->second.frequency;
}

bool LfuCache::request(std::size_t item) {
  if (auto it = entries_.find(item); it != entries_.end()) {
    auto& e = it->second;
    by_priority_.erase({e.frequency, e.inserted, item});
    ++e.frequency;
    by_priority_.insert({e.frequency, e.inserted, item});
    ++hits_;
    return true;
  }
  ++misses_;
  if (entries_.size() == capacity_) {
    const auto victim = *by_priority_.begin();
    by_priority_.erase(by_priority_.begin());
    entries_.erase(std::get<2>(victim));
  }
  const Entry e{1, clock_++};
  entries_.emplace(item, e);
  by_priority_.insert({e.frequency, e.inserted, item});
  return false;
}

SimReport run_simulation(const DistanceMatrix& dist, const Placement& placement,
                         const ProfileSet& profiles, const SimulationConfig& config) {
  const std::size_t n = dist.size();
  for (double p : {config.p_none, config.p_profile, config.p_novel}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("simulation: probabilities must lie in [0,1]");
  }
  if (std::abs(config.p_none + config.p_profile + config.p_novel - 1.0) > 1e-9) {
    throw ValidationError("simulation: p_none + p_profile + p_novel must equal 1");
  }
  if (placement.assignment.size() != n || profiles.profiles.size() != n) {
    throw ValidationError("simulation: placement/profile sizes do not match the topology");
  }
  if (config.cache_capacity == 0) throw ValidationError("simulation: cache capacity must be positive");
  const std::size_t m = profiles.pmf.size();
  for (const auto& p : profiles.profiles) {
    if (p.catalog_size() != m) throw ValidationError("simulation: profile catalog sizes differ");
  }

  std::vector<std::size_t> slot_of(n, n);
  for (std::size_t s = 0; s < placement.servers.size(); ++s) slot_of[placement.servers[s]] = s;
  for (NodeId i = 0; i < n; ++i) {
    if (placement.assignment[i] >= n || slot_of[placement.assignment[i]] == n) {
      throw ValidationError("simulation: node " + std::to_string(i) + " is assigned to a non-server");
    }
  }

  std::vector<double> cdf(m);
  std::partial_sum(profiles.pmf.begin(), profiles.pmf.end(), cdf.begin());

  std::vector<LfuCache> caches(placement.servers.size(), LfuCache(config.cache_capacity));
  SimReport report;
  report.per_server.resize(placement.servers.size());
  for (std::size_t s = 0; s < placement.servers.size(); ++s) report.per_server[s].server = placement.servers[s];

  Rng rng(derive_seed(config.seed, "simulation"));
  const double profile_cut = config.p_none + config.p_profile;
  double distance_sum = 0.0;
  for (std::size_t round = 0; round < config.rounds; ++round) {
    for (NodeId i = 0; i < n; ++i) {
      const double u = rng.uniform();
      if (u < config.p_none) continue;
      std::size_t item;
      if (u < profile_cut) {
        const double v = rng.uniform() * cdf.back();
        const auto rank = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), v) - cdf.begin()), m - 1);
        item = profiles.profiles[i].order[rank];
      } else {
        item = rng.below(m);
      }
      const std::size_t slot = slot_of[placement.assignment[i]];
      const bool hit = caches[slot].request(item);
      auto& stats = report.per_server[slot];
      ++stats.requests;
      ++(hit ? stats.hits : stats.misses);
      distance_sum += dist(i, placement.assignment[i]);
    }
  }
  for (const auto& s : report.per_server) {
    report.total_requests += s.requests;
    report.hits += s.hits;
    report.misses += s.misses;
  }
  if (report.total_requests > 0) {
    const auto total = static_cast<double>(report.total_requests);
    report.cache_miss_ratio = static_cast<double>(report.misses) / total;
    report.average_request_distance = distance_sum / total;
  }
  return report;
}

std::vector<std::size_t> aggregate_ranks(std::span<const NodeId> members,
                                         std::span<const double> priorities,
                                         const ProfileSet& profiles) {
  const std::size_t m = profiles.pmf.size();
  std::vector<double> score(m, 0.0);
  for (NodeId i : members) {
    const auto& ranks = profiles.profiles[i].ranks;
    for (std::size_t item = 0; item < m; ++item) score[item] += priorities[i] * profiles.pmf[ranks[item]];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<std::size_t> ranks(m);
  for (std::size_t r = 0; r < m; ++r) ranks[order[r]] = r;
  return ranks;
}

double within_cluster_correlation(std::span<const NodeId> assignment, const ProfileSet& profiles) {
  const std::size_t n = assignment.size();
  double sum = 0.0;
  std::uint64_t pairs = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (assignment[i] != assignment[j]) continue;
      sum += spearman(profiles.profiles[i].ranks, profiles.profiles[j].ranks);
      ++pairs;
    }
  }
  return pairs == 0 ? 1.0 : sum / static_cast<double>(pairs);
}

}  // namespace mirrorplace
