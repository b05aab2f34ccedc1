#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/placement.hpp"
#include "mirrorplace/rng.hpp"

namespace mirrorplace {
namespace {

double sq_euclid(const GeoPoint& a, const GeoPoint& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Index drawn with probability proportional to `weights`; uniform over the
// non-excluded nodes when all weights vanish.
NodeId draw_weighted(Rng& rng, const std::vector<double>& weights, const std::vector<bool>& taken) {
  double total = 0.0;
  for (NodeId i = 0; i < weights.size(); ++i) {
    if (!taken[i]) total += weights[i];
  }
  if (total > 0.0) {
    const double target = rng.uniform() * total;
    double acc = 0.0;
    NodeId last = 0;
    for (NodeId i = 0; i < weights.size(); ++i) {
      if (taken[i] || weights[i] <= 0.0) continue;
      acc += weights[i];
      last = i;
      if (target < acc) return i;
    }
    return last;
  }
  std::vector<NodeId> open;
  for (NodeId i = 0; i < taken.size(); ++i) {
    if (!taken[i]) open.push_back(i);
  }
  return open[rng.below(open.size())];
}

// Initial centers: fixed servers first, then uniform (MacQueen) or
// D^2-weighted (k-means++) draws.
std::vector<NodeId> seed_centers(const Instance& instance, const AlgorithmConfig& config, Rng& rng) {
  const std::size_t n = instance.size();
  const bool coords = config.kmeans.space == KMeansSpace::coordinates;
  std::vector<NodeId> centers = config.fixed_servers;
  std::vector<bool> taken(n, false);
  for (NodeId c : centers) taken[c] = true;

  const std::vector<double> uniform(n, 1.0);
  while (centers.size() < config.k) {
    std::vector<double> weights;
    if (config.algorithm == Algorithm::kmeans_pp && !centers.empty()) {
      if (coords) {
        const auto pts = instance.coordinates();
        weights.assign(n, std::numeric_limits<double>::infinity());
        for (NodeId j = 0; j < n; ++j) {
          for (NodeId c : centers) weights[j] = std::min(weights[j], sq_euclid(pts[j], pts[c]));
        }
      } else {
        weights = kmeanspp_weights(instance.dist(), centers);
      }
    } else {
      weights = uniform;
    }
    const NodeId pick = draw_weighted(rng, weights, taken);
    taken[pick] = true;
    centers.push_back(pick);
  }
  return centers;
}

struct RunOutcome {
  std::vector<NodeId> servers;
  bool converged = false;
};

// Lloyd loop with medoid updates on the graph metric. A medoid is the
// cluster member minimizing the largest weighted distance inside the cluster.
RunOutcome lloyd_graph(const Instance& instance, const AlgorithmConfig& config,
                       std::vector<NodeId> centers) {
  const std::size_t n = instance.size();
  const std::size_t fixed = config.fixed_servers.size();
  for (std::size_t it = 0; it < config.kmeans.max_iterations; ++it) {
    const auto assignment = assign_nearest(instance.dist(), instance.priorities(), centers);
    std::vector<NodeId> next = centers;
    for (std::size_t slot = fixed; slot < centers.size(); ++slot) {
      std::vector<NodeId> members;
      for (NodeId i = 0; i < n; ++i) {
        if (assignment[i] == centers[slot]) members.push_back(i);
      }
      if (members.empty()) continue;
      next[slot] =
          one_center(instance.dist(), instance.priorities(), members, members, centers[slot]).node;
    }
    if (next == centers) return {centers, true};
    centers = std::move(next);
  }
  return {centers, false};
}

// Maps free centroids onto distinct graph nodes, nearest first; fixed slots
// keep their node.
std::vector<NodeId> map_to_nodes(std::span<const GeoPoint> points, const std::vector<GeoPoint>& centroids,
                                 const AlgorithmConfig& config) {
  const std::size_t fixed = config.fixed_servers.size();
  std::vector<bool> taken(points.size(), false);
  std::vector<NodeId> nodes(centroids.size());
  for (std::size_t slot = 0; slot < fixed; ++slot) {
    nodes[slot] = config.fixed_servers[slot];
    taken[nodes[slot]] = true;
  }
  for (std::size_t slot = fixed; slot < centroids.size(); ++slot) {
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < points.size(); ++v) {
      if (taken[v]) continue;
      const double d = sq_euclid(points[v], centroids[slot]);
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    nodes[slot] = best;
    taken[best] = true;
  }
  return nodes;
}

// Free-placement Lloyd loop in the coordinate plane: priority-weighted
// centroids, mapped to nodes after every update or once at the end.
RunOutcome lloyd_coordinates(const Instance& instance, const AlgorithmConfig& config,
                             const std::vector<NodeId>& seeds) {
  const auto pts = instance.coordinates();
  const auto prio = instance.priorities();
  const std::size_t n = instance.size();
  const std::size_t fixed = config.fixed_servers.size();
  const bool every_step = config.kmeans.mapping_mode == MappingMode::every_step;

  std::vector<GeoPoint> centroids;
  for (NodeId s : seeds) centroids.push_back(pts[s]);
  std::vector<NodeId> nodes = seeds;
  std::vector<std::size_t> cluster(n, 0), previous;

  for (std::size_t it = 0; it < config.kmeans.max_iterations; ++it) {
    for (NodeId i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t slot = 0; slot < centroids.size(); ++slot) {
        const double d = sq_euclid(pts[i], centroids[slot]);
        if (d < best_d) {
          best_d = d;
          best = slot;
        }
      }
      cluster[i] = best;
    }
    std::vector<GeoPoint> next = centroids;
    for (std::size_t slot = fixed; slot < centroids.size(); ++slot) {
      double wx = 0.0, wy = 0.0, w = 0.0;
      for (NodeId i = 0; i < n; ++i) {
        if (cluster[i] != slot) continue;
        wx += prio[i] * pts[i].x;
        wy += prio[i] * pts[i].y;
        w += prio[i];
      }
      if (w > 0.0) next[slot] = {wx / w, wy / w};
    }
    if (every_step) {
      const auto mapped = map_to_nodes(pts, next, config);
      for (std::size_t slot = 0; slot < next.size(); ++slot) next[slot] = pts[mapped[slot]];
      const bool stable = mapped == nodes;
      nodes = mapped;
      centroids = std::move(next);
      if (stable) return {nodes, true};
    } else {
      centroids = std::move(next);
      if (cluster == previous) return {map_to_nodes(pts, centroids, config), true};
      previous = cluster;
    }
  }
  return {every_step ? nodes : map_to_nodes(pts, centroids, config), false};
}

}  // namespace

PlacementResult kmeans(const Instance& instance, const AlgorithmConfig& config) {
  validate(config, instance.size());
  if (config.algorithm != Algorithm::macqueen && config.algorithm != Algorithm::kmeans_pp) {
    throw ValidationError("kmeans: algorithm must be macqueen or kmeans++");
  }
  const bool coords = config.kmeans.space == KMeansSpace::coordinates;
  if (coords && !instance.has_coordinates()) {
    throw ValidationError("kmeans: coordinate space requires coordinates for every node");
  }

  PlacementResult result;
  Placement best;
  bool best_converged = false;
  for (std::size_t restart = 0; restart < config.kmeans.restarts; ++restart) {
    Rng rng(derive_seed(config.seed, to_string(config.algorithm), restart));
    const auto seeds = seed_centers(instance, config, rng);
    const RunOutcome run =
        coords ? lloyd_coordinates(instance, config, seeds) : lloyd_graph(instance, config, seeds);
    Placement candidate = instance.place(run.servers);
    if (restart == 0 || improves(candidate.fitness, best.fitness, config.criteria)) {
      best = std::move(candidate);
      best_converged = run.converged;
      result.trace.records.push_back({restart, best.servers, best.fitness});
    }
  }
  result.placement = std::move(best);
  result.trace.termination = best_converged ? Termination::converged : Termination::iteration_cap;
  return result;
}

}  // namespace mirrorplace
