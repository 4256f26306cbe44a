#include "decoherent.hpp"

#include <algorithm>
#include <stdexcept>

#include "common.hpp"

namespace qsw {

EdgeList slotStep(SlotPolicyState& policy, const SlotObservation& obs,
                  const Topology& topo, MatchingOracle& oracle, double stepSize) {
  const int d = topo.requestTypes();
  if (int(policy.lambda.size()) != d || int(obs.arrivals.size()) != d) {
    throw std::invalid_argument("slot step: dimension mismatch");
  }
  const WeightedMatching wm = oracle.maxWeight(obs.state, policy.lambda);
  std::vector<uint8_t> served(d, 0);
  for (uint16_t e : wm.edges) served[e] = 1;
  for (int e = 0; e < d; ++e) {
    policy.lambda[e] =
        std::max(0.0, policy.lambda[e] + stepSize * (double(obs.arrivals[e]) - served[e]));
    policy.cumArrivals[e] += obs.arrivals[e];
    policy.cumService[e] += served[e];
  }
  ++policy.slot;
  return wm.edges;
}

Table runDecoherent(const Topology& topo, const LinkModel& model,
                    const ArrivalModel& arrivals, int64_t slots, uint64_t seed,
                    int64_t checkpointInterval) {
  const int d = topo.requestTypes();
  if (int(model.tau.size()) != topo.clients()) {
    throw std::invalid_argument("run: tau length does not match client count");
  }
  if (int(arrivals.requestProbs.size()) != d) {
    throw std::invalid_argument("run: arrival probabilities do not match request types");
  }
  if (slots < 0) throw std::invalid_argument("run: negative slot count");

  Rng stateRng(subSeed(seed, 0));
  Rng requestRng(subSeed(seed, 1));

  SlotPolicyState policy(d);
  MatchingOracle oracle(topo);
  SlotObservation obs;

  Table trace;
  trace.columns = {"slot", "sum_lambda", "residual_sq", "served_total"};
  trace.meta.push_back("model=decoherent");
  trace.meta.push_back("seed=" + std::to_string(seed));

  int64_t servedTotal = 0;
  auto record = [&](int64_t k) {
    double sumLambda = 0.0;
    for (double v : policy.lambda) sumLambda += v;
    double residual = 0.0;
    for (int e = 0; e < d; ++e) {
      const double r =
          std::max(0.0, double(policy.cumArrivals[e] - policy.cumService[e]) / double(k));
      residual += r * r;
    }
    trace.addRow({double(k), sumLambda, residual, double(servedTotal)});
  };

  for (int64_t k = 1; k <= slots; ++k) {
    obs.state = drawState(stateRng, model.tau);
    drawBernoulli(requestRng, arrivals.requestProbs, obs.arrivals);
    servedTotal += int64_t(slotStep(policy, obs, topo, oracle).size());
    if ((checkpointInterval > 0 && k % checkpointInterval == 0) || k == slots) record(k);
  }
  return trace;
}

}  // namespace qsw
