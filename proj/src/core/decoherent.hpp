#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arrivals.hpp"
#include "capacity.hpp"
#include "matching.hpp"
#include "table.hpp"
#include "topology.hpp"

namespace qsw {

// Online state of the stochastic dual-ascent policy. With unit step size the
// multipliers are exactly the request queues, so lambda stays integer-valued
// under integer arrivals.
struct SlotPolicyState {
  std::vector<double> lambda;
  int64_t slot = 0;
  std::vector<int64_t> cumArrivals;
  std::vector<int64_t> cumService;

  explicit SlotPolicyState(int requestTypes)
      : lambda(requestTypes, 0.0),
        cumArrivals(requestTypes, 0),
        cumService(requestTypes, 0) {}
};

struct SlotObservation {
  StateMask state = 0;
  std::vector<uint8_t> arrivals;
};

// One slot: serve the max-weight matching under the current multipliers, then
// apply the clamped update lambda <- [lambda + step*(b - y)]+. Arrivals count
// before service within the same slot.
EdgeList slotStep(SlotPolicyState& policy, const SlotObservation& obs,
                  const Topology& topo, MatchingOracle& oracle, double stepSize = 1.0);

// K slots of i.i.d. link states and arrivals. Trace columns:
// slot, sum_lambda, residual_sq, served_total; one row per checkpoint plus the
// final slot. checkpointInterval <= 0 records the final slot only.
Table runDecoherent(const Topology& topo, const LinkModel& model,
                    const ArrivalModel& arrivals, int64_t slots, uint64_t seed,
                    int64_t checkpointInterval);

}  // namespace qsw
