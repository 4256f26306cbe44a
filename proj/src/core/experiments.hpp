#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "arrivals.hpp"
#include "capacity.hpp"
#include "table.hpp"
#include "topology.hpp"

namespace qsw {

// Load sweep for the per-slot-decoherence model: for each (profile, load)
// cell, run the online policy for `slots` slots across `seeds` independent
// seeds and record the final multiplier sum.
struct Experiment1Config {
  std::vector<ProfileKind> profiles{ProfileKind::Uniform, ProfileKind::Skewed};
  std::vector<double> loads;    // total expected requests per slot
  bool loadsRelative = false;   // interpret loads as fractions of the boundary
  int64_t slots = 50000;
  int seeds = 10;
  uint64_t seed = 1;
  std::array<int, 3> heavyTypes{-1, -1, -1};  // -1 = default disjoint pairs
  double boundaryTol = 1e-4;
};

// Columns: profile, total_load, seed, sum_lambda_final, is_aggregate,
// ci_halfwidth. Aggregate rows carry the seed mean and 2*stderr; the computed
// boundary load per profile is in the metadata.
Table experiment1(const Topology& topo, const LinkModel& model,
                  const Experiment1Config& config);

// Step-size sweep for the congestion-control model at symmetric arrival
// probability p. delta defaults to the lower end of the guaranteed regime for
// each alpha; memory is set to the required minimum.
struct Experiment2Config {
  std::vector<double> alphas{1.0, 0.1, 0.01};
  double p = 0.3;
  double gamma = 2.0;
  int64_t slots = 25000;
  int seeds = 10;
  uint64_t seed = 1;
  int64_t checkpointInterval = 500;
};

// Columns: alpha, delta, seed, slot, gap, avg_admission_req,
// avg_admission_lle, is_aggregate, ci_gap, ci_admission_req. Per-cell rows are
// the checkpoint series; aggregate rows summarize the final slot per alpha.
// Static optima per alpha are in the metadata.
Table experiment2(const Topology& topo, const Experiment2Config& config);

// Deterministic fan-out helper: runs jobs 0..count-1 on a few worker threads
// and keeps results ordered by index.
void parallelFor(int count, const std::function<void(int)>& job);

}  // namespace qsw
