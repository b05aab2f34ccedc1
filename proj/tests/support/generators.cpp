#include "support/generators.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

namespace mirrorplace::testing {

Topology path_topology(std::size_t n, std::vector<double> priorities) {
  std::vector<NodeRecord> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].label = std::string(1, static_cast<char>('A' + i % 26));
    if (!priorities.empty()) nodes[i].priority = priorities.at(i);
  }
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Topology("path" + std::to_string(n), std::move(nodes), std::move(edges));
}

Topology star_topology(std::size_t leaves) {
  std::vector<NodeRecord> nodes(leaves + 1);
  for (std::size_t i = 0; i <= leaves; ++i) nodes[i].id = i;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Topology("star", std::move(nodes), std::move(edges));
}

Topology two_cliques(std::size_t size) {
  std::vector<NodeRecord> nodes(2 * size);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].id = i;
  std::vector<EdgeRecord> edges;
  for (std::size_t base : {std::size_t{0}, size})
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j) edges.push_back({base + i, base + j});
  edges.push_back({size - 1, size});
  return Topology("two-cliques", std::move(nodes), std::move(edges));
}

Topology random_topology(Rng& rng, const RandomGraphOptions& o) {
  const std::size_t n = o.nodes;
  std::vector<NodeRecord> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].priority = o.priority_min + (o.priority_max - o.priority_min) * rng.uniform();
    if (o.with_coordinates) {
      nodes[i].latitude = 40.0 + 10.0 * rng.uniform();
      nodes[i].longitude = 5.0 + 10.0 * rng.uniform();
    }
  }
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  std::vector<EdgeRecord> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || linked[a][b]) return;
    linked[a][b] = linked[b][a] = true;
    EdgeRecord e{std::min(a, b), std::max(a, b)};
    if (o.quality_attributes) {
      e.utilization = static_cast<double>(rng.below(9)) / 8.0;
      e.delay = static_cast<double>(rng.below(33)) / 8.0;
      e.bandwidth = static_cast<double>(1 + rng.below(80)) / 8.0;
    }
    edges.push_back(e);
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  for (std::size_t i = 1; i < n; ++i) add(order[i], order[rng.below(i)]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.bernoulli(o.extra_edge_probability)) add(a, b);
  return Topology("random", std::move(nodes), std::move(edges));
}

DistanceMatrix floyd_warshall(const Topology& topology) {
  const std::size_t n = topology.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const EdgeRecord& e : topology.edges()) {
    d[e.source][e.target] = std::min(d[e.source][e.target], e.virtual_length);
    d[e.target][e.source] = std::min(d[e.target][e.source], e.virtual_length);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
  return matrix(d);
}

std::vector<std::vector<std::size_t>> bfs_hops(const Topology& topology) {
  const std::size_t n = topology.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const EdgeRecord& e : topology.edges()) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::vector<std::vector<std::size_t>> hops(n, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    hops[s][s] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u])
        if (hops[s][v] == SIZE_MAX) {
          hops[s][v] = hops[s][u] + 1;
          queue.push_back(v);
        }
    }
  }
  return hops;
}

double k_center_value(const DistanceMatrix& dist, std::span<const double> priorities,
                      std::span<const std::size_t> servers) {
  double worst = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : servers) best = std::min(best, priorities[i] * dist(i, s));
    worst = std::max(worst, best);
  }
  return worst;
}

double naive_optimum(const DistanceMatrix& dist, std::span<const double> priorities, std::size_t k) {
  const std::size_t n = dist.size();
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<std::size_t> servers;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) servers.push_back(i);
    best = std::min(best, k_center_value(dist, priorities, servers));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

DistanceMatrix matrix(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i].at(j);
  return m;
}

}  // namespace mirrorplace::testing
