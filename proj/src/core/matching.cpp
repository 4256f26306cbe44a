#include "matching.hpp"

#include <stdexcept>

#include "common.hpp"

namespace qsw {

std::vector<EdgeList> enumerateMatchings(const Topology& topo, StateMask state) {
  const int d = topo.requestTypes();
  std::vector<int> candidates;
  for (int e = 0; e < d; ++e) {
    auto [i, j] = topo.pairOf(e);
    if ((state >> i & 1) && (state >> j & 1)) candidates.push_back(e);
  }

  std::vector<EdgeList> out;
  EdgeList current;
  uint32_t used = 0;
  auto rec = [&](auto&& self, size_t from) -> void {
    out.push_back(current);
    for (size_t k = from; k < candidates.size(); ++k) {
      const int e = candidates[k];
      auto [i, j] = topo.pairOf(e);
      const uint32_t mask = (1u << i) | (1u << j);
      if (used & mask) continue;
      used |= mask;
      current.push_back(uint16_t(e));
      self(self, k + 1);
      current.pop_back();
      used &= ~mask;
    }
  };
  rec(rec, 0);
  return out;
}

bool servedLexLess(const EdgeList& a, const EdgeList& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
      continue;
    }
    // At position min(a[i], b[j]) exactly one vector has a 1; the one whose
    // next edge index is smaller is the lexicographically greater vector.
    return a[i] > b[j];
  }
  return i == a.size() && j < b.size();
}

const std::vector<EdgeList>& MatchingOracle::actionSet(StateMask state) {
  auto it = cache_.find(state);
  if (it == cache_.end()) {
    it = cache_.emplace(state, enumerateMatchings(*topo_, state)).first;
  }
  return it->second;
}

WeightedMatching MatchingOracle::maxWeight(StateMask state,
                                           std::span<const double> weights) {
  if (int(weights.size()) != topo_->requestTypes()) {
    throw std::invalid_argument("maxWeight: weight vector has wrong length");
  }
  const auto& actions = actionSet(state);
  const EdgeList* best = &actions.front();  // empty matching, value 0
  double bestValue = 0.0;
  for (const auto& m : actions) {
    double v = 0.0;
    bool eligible = true;
    for (uint16_t e : m) {
      if (weights[e] <= kCmpTol) {  // never serve a non-positive weight
        eligible = false;
        break;
      }
      v += weights[e];
    }
    if (!eligible) continue;
    if (v > bestValue || (v == bestValue && servedLexLess(m, *best))) {
      best = &m;
      bestValue = v;
    }
  }
  return {*best, bestValue};
}

WeightedMatching maxWeightMatching(const Topology& topo, StateMask state,
                                   std::span<const double> weights) {
  MatchingOracle oracle(topo);
  return oracle.maxWeight(state, weights);
}

}  // namespace qsw
