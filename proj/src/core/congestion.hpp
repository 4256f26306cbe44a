#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arrivals.hpp"
#include "matching.hpp"
#include "table.hpp"
#include "topology.hpp"

namespace qsw {

// Step size, admission threshold and service threshold of the no-decoherence
// policy. The guaranteed-safe regime is delta in [2(gamma+alpha)+alpha,
// 3(gamma+alpha)) with per-client LLE memory of at least ceil(gamma/alpha)+1;
// inside it service only ever consumes queued LLEs.
struct CongestionParams {
  double alpha = 1.0;
  double gamma = 2.0;
  double delta = 7.0;
  int memoryCapacity = 3;

  // ceil(gamma/alpha + 1), evaluated with a comparison-tolerance guard so that
  // exact ratios survive floating-point division.
  static int requiredMemory(double alpha, double gamma);
  static double defaultDelta(double alpha, double gamma) {
    return 2.0 * (gamma + alpha) + alpha;
  }
  bool theoremValid() const;
  void validate() const;  // throws std::invalid_argument on nonsense values
};

// Multipliers are alpha-scaled integer queues; the integers are the state of
// record so threshold tests and cap checks stay exact for any step size.
struct CongestionState {
  std::vector<int64_t> queue;     // request queues, lambda = alpha*queue
  std::vector<int64_t> lleQueue;  // per-client LLE queues, lambdaHat = alpha*lleQueue
  int64_t slot = 0;

  std::vector<int64_t> cumAdmittedRequests;
  std::vector<int64_t> cumAdmittedLles;
  std::vector<int64_t> cumServed;
  std::vector<int64_t> cumLleConsumed;
  int64_t cumRequestArrivals = 0;
  int64_t cumLleArrivals = 0;

  int64_t underflows = 0;  // serve decisions that outran a queue (never in regime)
  int64_t maxQueueSeen = 0;
  int64_t maxLleQueueSeen = 0;

  CongestionState(int requestTypes, int clients)
      : queue(requestTypes, 0),
        lleQueue(clients, 0),
        cumAdmittedRequests(requestTypes, 0),
        cumAdmittedLles(clients, 0),
        cumServed(requestTypes, 0),
        cumLleConsumed(clients, 0) {}

  double lambda(int e, const CongestionParams& p) const { return p.alpha * double(queue[e]); }
  double lambdaHat(int j, const CongestionParams& p) const {
    return p.alpha * double(lleQueue[j]);
  }
};

struct CongestionObservation {
  std::vector<uint8_t> requestArrivals;  // length d, 0/1
  std::vector<uint8_t> lleArrivals;      // length N, 0/1
};

// Admission: take an arrival iff its multiplier is at most gamma (ties admit).
void admit(const CongestionState& state, const CongestionObservation& obs,
           const CongestionParams& params, std::vector<uint8_t>& requestsOut,
           std::vector<uint8_t>& llesOut);

// Service: max-weight matching over all request types with per-edge weight
// lambda_e + lambdaHat_i + lambdaHat_j - delta, nonpositive weights excluded.
// literalDelta charges delta per queue touched (three per request) instead of
// once per request; in the guaranteed regime that variant never serves.
EdgeList serve(const CongestionState& state, const CongestionParams& params,
               const Topology& topo, MatchingOracle& oracle, bool literalDelta = false);

struct CongestionStepResult {
  std::vector<uint8_t> admittedRequests;
  std::vector<uint8_t> admittedLles;
  EdgeList served;
};

// One slot: admit, serve (both against the slot-start multipliers), then the
// clamped multiplier update. Underflow with theorem-valid parameters is an
// internal invariant violation and throws std::logic_error.
CongestionStepResult congestionStep(CongestionState& state, const CongestionObservation& obs,
                                    const CongestionParams& params, const Topology& topo,
                                    MatchingOracle& oracle, bool literalDelta = false);

struct StaticCongestionSolution {
  double objective = 0.0;
  std::vector<double> x;     // service rates, a point of conv(Y)
  std::vector<double> z;     // admitted request rates, z <= min(b, x)
  std::vector<double> zHat;  // admitted LLE rates, zHat <= min(bHat, A x)
  std::vector<std::pair<EdgeList, double>> mixture;  // x as a matching mixture
};

// The static admission/service trade-off: minimize
//   delta*<1,[x;Ax]> - gamma*<1,[z;zHat]>  over x in conv(Y), z <= b, zHat <= bHat,
//   [z;zHat] <= [x;Ax].
StaticCongestionSolution staticCongestionSolve(const Topology& topo, std::span<const double> b,
                                               std::span<const double> bHat, double gamma,
                                               double delta);

enum class Lemma1Status { Holds, Violated, PreconditionsUnmet };

struct Lemma1Report {
  Lemma1Status status = Lemma1Status::PreconditionsUnmet;
  std::string detail;
  StaticCongestionSolution solution;  // populated unless preconditions fail
};

// Checks whether the static solution also solves the fluid problem
// { x in conv(Y) : b <= x, A x <= bHat }. Preconditions: gamma > delta > 0 and
// the fluid problem feasible; otherwise no verdict is given.
Lemma1Report lemma1Check(const Topology& topo, std::span<const double> b,
                         std::span<const double> bHat, double gamma, double delta,
                         double tol = 1e-6);

// Feasibility of the fluid problem above.
bool fluidFeasible(const Topology& topo, std::span<const double> b,
                   std::span<const double> bHat);

// K slots of Algorithm-3 dynamics. Trace columns: slot, gap,
// avg_admission_req, avg_admission_lle, max_qhat, underflows,
// window_admission_req, window_admission_lle. The gap is the static objective
// evaluated at running averages minus the static optimum.
Table runCongestion(const Topology& topo, const ArrivalModel& arrivals,
                    const CongestionParams& params, int64_t slots, uint64_t seed,
                    int64_t checkpointInterval, bool literalDelta = false);

}  // namespace qsw
