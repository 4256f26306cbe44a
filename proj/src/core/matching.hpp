#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "topology.hpp"

namespace qsw {

struct WeightedMatching {
  EdgeList edges;
  double value = 0.0;
};

// Every matching (empty set included, non-maximal included) on the edges whose
// endpoints are both active in `state`. Emitted in lexicographic edge-sequence
// order, so the empty matching comes first.
std::vector<EdgeList> enumerateMatchings(const Topology& topo, StateMask state);

// True iff a's dense served vector precedes b's lexicographically.
bool servedLexLess(const EdgeList& a, const EdgeList& b);

// Memoizes one action set per link state. Not thread-safe; give each
// simulation run or analysis pass its own instance.
class MatchingOracle {
 public:
  explicit MatchingOracle(const Topology& topo) : topo_(&topo) {}

  const std::vector<EdgeList>& actionSet(StateMask state);

  // Exact maximum-weight matching over actionSet(state). Edges with weight
  // <= kCmpTol never serve; among value ties the lexicographically smallest
  // served vector wins, so results are reproducible bit for bit.
  WeightedMatching maxWeight(StateMask state, std::span<const double> weights);

  const Topology& topology() const { return *topo_; }

 private:
  const Topology* topo_;
  std::unordered_map<StateMask, std::vector<EdgeList>> cache_;
};

// One-shot convenience wrapper around MatchingOracle.
WeightedMatching maxWeightMatching(const Topology& topo, StateMask state,
                                   std::span<const double> weights);

}  // namespace qsw
