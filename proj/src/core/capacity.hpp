#pragma once

#include <span>
#include <vector>

#include "matching.hpp"
#include "topology.hpp"

namespace qsw {

struct LinkModel {
  std::vector<double> tau;  // per-client LLE success probability, in [0,1]
};

// Product-Bernoulli distribution over all 2^N link states, indexed by mask.
std::vector<double> stateDistribution(const LinkModel& model);

enum class Verdict { Outside, Boundary, Inside };

struct MixtureEntry {
  StateMask state;
  EdgeList matching;
  double weight;
};

struct MembershipResult {
  Verdict verdict = Verdict::Outside;
  // Optimal uniform inflation t*: b + t*·1 is servable; sign decides the verdict.
  double slack = 0.0;
  // Certificate when not outside: per-state matching mixture and the long-run
  // service rate it induces.
  std::vector<MixtureEntry> mixture;
  std::vector<double> achievedRate;
};

// Enumerating (state, matching) columns is exponential in N; past this the
// membership LP is refused with TooLargeError.
inline constexpr int kMaxAnalysisClients = 8;

// Verdict threshold on the inflation variable.
inline constexpr double kInsideTol = 1e-6;

MembershipResult capacityMembership(const Topology& topo, const LinkModel& model,
                                    std::span<const double> b);

// Largest rho with rho*direction inside the capacity region, found by
// bisection on capacityMembership; result is within tol of the boundary.
double boundaryScaling(const Topology& topo, const LinkModel& model,
                       std::span<const double> direction, double tol);

// Dual function h(lambda) = 1 + <lambda,b> - sum_s p(s)·max_{y in Y(s)} <lambda,y>.
double dualValue(const Topology& topo, const LinkModel& model, std::span<const double> b,
                 std::span<const double> lambda, MatchingOracle& oracle);
double dualValue(const Topology& topo, const LinkModel& model, std::span<const double> b,
                 std::span<const double> lambda);

// Supergradient g = b - sum_s p(s)·y*(s, lambda).
std::vector<double> dualSupergradient(const Topology& topo, const LinkModel& model,
                                      std::span<const double> b,
                                      std::span<const double> lambda,
                                      MatchingOracle& oracle);
std::vector<double> dualSupergradient(const Topology& topo, const LinkModel& model,
                                      std::span<const double> b,
                                      std::span<const double> lambda);

struct PdgaResult {
  std::vector<std::vector<double>> lambda;  // iterates, lambda[0] = 0
  std::vector<double> h;                    // h at each iterate
  bool plateaued = false;
  int iterations = 0;
};

// Deterministic projected dual gradient ascent from lambda = 0. Stops at the
// iteration budget, or earlier once |h_{k+1}-h_k| < 1e-10 holds for 100
// consecutive iterations (when plateau detection is on).
PdgaResult pdgaRun(const Topology& topo, const LinkModel& model, std::span<const double> b,
                   double stepSize, int iterations, bool plateauDetection = true);

}  // namespace qsw
