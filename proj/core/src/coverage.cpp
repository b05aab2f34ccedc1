#include "coverage.hpp"

#include <algorithm>
#include <limits>

namespace mirrorplace::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr NodeId kNone = static_cast<NodeId>(-1);
}  // namespace

Coverage::Coverage(const DistanceMatrix& dist, std::span<const double> priorities)
    : dist_(dist),
      priorities_(priorities),
      best_(dist.size(), kInf),
      second_(dist.size(), kInf),
      nearest_(dist.size(), kNone) {}

void Coverage::assign(std::span<const NodeId> servers) {
  std::fill(best_.begin(), best_.end(), kInf);
  std::fill(second_.begin(), second_.end(), kInf);
  std::fill(nearest_.begin(), nearest_.end(), kNone);
  for (NodeId s : servers) add(s);
}

void Coverage::add(NodeId server) {
  for (NodeId i = 0; i < best_.size(); ++i) {
    const double d = weighted(i, server);
    if (d < best_[i] || (d == best_[i] && server < nearest_[i])) {
      second_[i] = best_[i];
      best_[i] = d;
      nearest_[i] = server;
    } else {
      second_[i] = std::min(second_[i], d);
    }
  }
}

void Coverage::values_with(NodeId added, std::vector<double>& out) const {
  out.resize(best_.size());
  for (NodeId i = 0; i < best_.size(); ++i) out[i] = std::min(best_[i], weighted(i, added));
}

void Coverage::values_swapped(NodeId removed, NodeId added, std::vector<double>& out) const {
  out.resize(best_.size());
  for (NodeId i = 0; i < best_.size(); ++i) {
    const double base = nearest_[i] == removed ? second_[i] : best_[i];
    out[i] = std::min(base, weighted(i, added));
  }
}

NodeId Coverage::farthest(const std::vector<bool>& excluded) const {
  NodeId pick = kNone;
  double far = -1.0;
  for (NodeId i = 0; i < best_.size(); ++i) {
    if (excluded[i]) continue;
    if (best_[i] > far) {
      far = best_[i];
      pick = i;
    }
  }
  return pick;
}

}  // namespace mirrorplace::detail
