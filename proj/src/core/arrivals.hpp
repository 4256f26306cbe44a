#pragma once

#include <array>
#include <span>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"

namespace qsw {

// Per-type Bernoulli arrival probabilities. lleProbs is empty in the
// per-slot-decoherence model and has one entry per client in the
// no-decoherence (congestion) model. Means equal probabilities.
struct ArrivalModel {
  std::vector<double> requestProbs;
  std::vector<double> lleProbs;
};

enum class ProfileKind { Uniform, Skewed };

// Request-load shape: uniform spreads totalLoad evenly; skewed gives the three
// heavy types skewFactor times the weight of the rest.
struct LoadProfile {
  ProfileKind kind = ProfileKind::Uniform;
  double totalLoad = 0.0;
  double skewFactor = 16.0;
  std::array<int, 3> heavyTypes{0, 1, 2};
};

// Default heavy types: the three disjoint pairs (0,1), (2,3), (4,5).
std::array<int, 3> defaultHeavyTypes(const Topology& topo);

// Per-type probabilities summing to totalLoad; throws if any exceeds 1.
std::vector<double> profileProbs(const Topology& topo, const LoadProfile& profile);

// One slot of Bernoulli draws, index-ascending so streams are reproducible.
void drawBernoulli(Rng& rng, std::span<const double> probs, std::vector<uint8_t>& out);

// Link state draw for the decoherent model (client j active w.p. tau[j]).
StateMask drawState(Rng& rng, std::span<const double> tau);

}  // namespace qsw
