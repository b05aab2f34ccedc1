#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mirrorplace/objective.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace {

inline constexpr std::uint64_t kDefaultOracleBudget = 2'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

struct OracleResult {
  Placement placement;
  double optimum = 0.0;               // minimal maximum weighted distance
  std::uint64_t subsets_visited = 0;  // leaves reached after pruning
};

/// Exact k-center optimum by exhaustive enumeration of k-subsets in
/// lexicographic order with best-so-far pruning; the lexicographically
/// smallest optimal server set wins. Throws BudgetExceededError when
/// C(n, k) exceeds `budget` and ValidationError when k is out of range.
OracleResult brute_force_optimum(const DistanceMatrix& dist, std::span<const double> priorities,
                                 std::size_t k, std::uint64_t budget = kDefaultOracleBudget);

/// Integer program for the (priority-weighted) k-center problem:
///   u_j in {0,1}, sum_j u_j = k, x_ij in {0,1}, sum_j x_ij = 1 for all i,
///   x_ij <= u_j, dstc(ij) * x_ij <= z, minimize z.
struct IlpModel {
  std::size_t node_count = 0;
  std::size_t k = 0;
  std::vector<double> dstc;  // row-major n*n, priority_i * d(i, j)

  double cost(std::size_t i, std::size_t j) const { return dstc[i * node_count + j]; }
  std::size_t binary_count() const { return node_count + node_count * node_count; }
  std::size_t constraint_count() const { return 1 + node_count + 2 * node_count * node_count; }
};

IlpModel build_ilp(const DistanceMatrix& dist, std::span<const double> priorities, std::size_t k);

/// CPLEX LP text (Minimize / Subject To / Bounds / Binaries / End).
/// Variables are named u<j>, x_<i>_<j> and z.
std::string to_lp(const IlpModel& model);

inline std::string emit_ilp(const DistanceMatrix& dist, std::span<const double> priorities,
                            std::size_t k) {
  return to_lp(build_ilp(dist, priorities, k));
}

/// Lower bound s/2 on the optimum implied by a 2-approximate value s.
double theoretical_optimum(double two_approx_value);

}  // namespace mirrorplace
