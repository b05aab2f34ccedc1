#include "mirrorplace/exact_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "mirrorplace/errors.hpp"

namespace mirrorplace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t numerator = n - k + i;
    // result * numerator / i stays integral at every step.
    if (result > std::numeric_limits<std::uint64_t>::max() / numerator) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * numerator / i;
  }
  return result;
}

namespace {

class Enumerator {
 public:
  Enumerator(const DistanceMatrix& dist, std::span<const double> priorities, std::size_t k)
      : n_(dist.size()), k_(k), weighted_(n_ * n_), suffix_min_(n_ * (n_ + 1)), chosen_(k) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) weighted_[i * n_ + j] = priorities[i] * dist(i, j);
      // suffix_min_[i][j] = min over candidate servers j' >= j.
      suffix_min_[i * (n_ + 1) + n_] = std::numeric_limits<double>::infinity();
      for (std::size_t j = n_; j-- > 0;) {
        suffix_min_[i * (n_ + 1) + j] =
            std::min(suffix_min_[i * (n_ + 1) + j + 1], weighted_[i * n_ + j]);
      }
    }
    levels_.assign(k_ + 1, std::vector<double>(n_, std::numeric_limits<double>::infinity()));
  }

  void run() { descend(0, 0); }

  double best() const { return best_; }
  const std::vector<NodeId>& best_set() const { return best_set_; }
  std::uint64_t visited() const { return visited_; }

 private:
  void descend(std::size_t depth, std::size_t next) {
    const auto& cover = levels_[depth];
    if (depth == k_) {
      ++visited_;
      double worst = 0.0;
      for (std::size_t i = 0; i < n_ && worst < best_; ++i) worst = std::max(worst, cover[i]);
      if (worst < best_) {
        best_ = worst;
        best_set_ = chosen_;
      }
      return;
    }
    // Bound: every node can at best reach its closest remaining candidate.
    double bound = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      bound = std::max(bound, std::min(cover[i], suffix_min_[i * (n_ + 1) + next]));
      if (bound >= best_) return;
    }
    for (std::size_t c = next; c + (k_ - depth) <= n_; ++c) {
      chosen_[depth] = c;
      auto& child = levels_[depth + 1];
      for (std::size_t i = 0; i < n_; ++i) child[i] = std::min(cover[i], weighted_[i * n_ + c]);
      descend(depth + 1, c + 1);
    }
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<double> weighted_;
  std::vector<double> suffix_min_;
  std::vector<std::vector<double>> levels_;
  std::vector<NodeId> chosen_;
  std::vector<NodeId> best_set_;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint64_t visited_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Joins terms with " + ", breaking the line every eight terms.
class TermWriter {
 public:
  explicit TermWriter(std::ostringstream& out) : out_(out) {}
  void term(const std::string& text) {
    if (count_ > 0 && count_ % 8 == 0) out_ << "\n  ";
    out_ << (count_ > 0 ? " + " : "") << text;
    ++count_;
  }

 private:
  std::ostringstream& out_;
  std::size_t count_ = 0;
};

std::string x_name(std::size_t i, std::size_t j) {
  return "x_" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

OracleResult brute_force_optimum(const DistanceMatrix& dist, std::span<const double> priorities,
                                 std::size_t k, std::uint64_t budget) {
  const std::size_t n = dist.size();
  if (k < 1 || k > n) throw ValidationError("brute_force_optimum: k must satisfy 1 <= k <= n");
  if (priorities.size() != n) throw ValidationError("priority vector size does not match distances");
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > budget) {
    throw BudgetExceededError("brute_force_optimum: C(" + std::to_string(n) + "," + std::to_string(k) +
                              ") = " + std::to_string(subsets) + " subsets exceeds budget " +
                              std::to_string(budget));
  }
  Enumerator search(dist, priorities, k);
  search.run();
  OracleResult result;
  result.placement = make_placement(dist, priorities, search.best_set());
  result.optimum = search.best();
  result.subsets_visited = search.visited();
  return result;
}

IlpModel build_ilp(const DistanceMatrix& dist, std::span<const double> priorities, std::size_t k) {
  const std::size_t n = dist.size();
  if (priorities.size() != n) throw ValidationError("priority vector size does not match distances");
  IlpModel model;
  model.node_count = n;
  model.k = k;
  model.dstc.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) model.dstc[i * n + j] = priorities[i] * dist(i, j);
  }
  return model;
}

std::string to_lp(const IlpModel& model) {
  const std::size_t n = model.node_count;
  std::ostringstream out;
  out << "\\ k-center placement model: " << n << " nodes, k = " << model.k << "\n";
  out << "Minimize\n obj: z\n";
  out << "Subject To\n";

  out << " select: ";
  {
    TermWriter w(out);
    for (std::size_t j = 0; j < n; ++j) w.term("u" + std::to_string(j));
  }
  out << " = " << model.k << "\n";

  for (std::size_t i = 0; i < n; ++i) {
    out << " assign_" << i << ": ";
    TermWriter w(out);
    for (std::size_t j = 0; j < n; ++j) w.term(x_name(i, j));
    out << " = 1\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << " open_" << i << "_" << j << ": " << x_name(i, j) << " - u" << j << " <= 0\n";
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << " radius_" << i << "_" << j << ": " << format_number(model.cost(i, j)) << " "
          << x_name(i, j) << " - z <= 0\n";
    }
  }

  out << "Bounds\n z >= 0\n";
  out << "Binaries\n";
  for (std::size_t j = 0; j < n; ++j) out << " u" << j << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << " " << x_name(i, j) << "\n";
  }
  out << "End\n";
  return out.str();
}

double theoretical_optimum(double two_approx_value) {
  if (!(two_approx_value >= 0.0)) {
    throw ValidationError("theoretical_optimum: value must be non-negative");
  }
  return two_approx_value / 2.0;
}

}  // namespace mirrorplace
