#include "arrivals.hpp"

#include <stdexcept>
#include <string>

namespace qsw {

std::array<int, 3> defaultHeavyTypes(const Topology& topo) {
  if (topo.clients() < 6) {
    throw std::invalid_argument("skewed profile: default heavy types need >= 6 clients");
  }
  return {topo.indexOf(0, 1), topo.indexOf(2, 3), topo.indexOf(4, 5)};
}

std::vector<double> profileProbs(const Topology& topo, const LoadProfile& profile) {
  const int d = topo.requestTypes();
  if (!(profile.totalLoad >= 0.0)) {
    throw std::invalid_argument("load profile: total load must be >= 0");
  }
  std::vector<double> weight(d, 1.0);
  if (profile.kind == ProfileKind::Skewed) {
    if (!(profile.skewFactor > 0.0)) {
      throw std::invalid_argument("load profile: skew factor must be > 0");
    }
    for (size_t a = 0; a < profile.heavyTypes.size(); ++a) {
      const int h = profile.heavyTypes[a];
      if (h < 0 || h >= d) throw std::invalid_argument("load profile: heavy type out of range");
      for (size_t b = 0; b < a; ++b) {
        if (profile.heavyTypes[b] == h) {
          throw std::invalid_argument("load profile: duplicate heavy type");
        }
      }
      weight[h] = profile.skewFactor;
    }
  }
  double total = 0.0;
  for (double w : weight) total += w;
  std::vector<double> probs(d);
  for (int e = 0; e < d; ++e) {
    probs[e] = profile.totalLoad * weight[e] / total;
    if (probs[e] > 1.0) {
      throw std::invalid_argument("load profile: total load " +
                                  std::to_string(profile.totalLoad) +
                                  " pushes a per-type probability above 1");
    }
  }
  return probs;
}

void drawBernoulli(Rng& rng, std::span<const double> probs, std::vector<uint8_t>& out) {
  out.resize(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) out[i] = rng.bernoulli(probs[i]) ? 1 : 0;
}

StateMask drawState(Rng& rng, std::span<const double> tau) {
  StateMask s = 0;
  for (size_t j = 0; j < tau.size(); ++j) {
    if (rng.bernoulli(tau[j])) s |= StateMask(1) << j;
  }
  return s;
}

}  // namespace qsw
