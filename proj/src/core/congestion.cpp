#include "congestion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "common.hpp"
#include "lp.hpp"

namespace qsw {

namespace {

void checkVector(std::span<const double> v, size_t want, const char* name) {
  if (v.size() != want) {
    throw std::invalid_argument(std::string(name) + ": wrong length");
  }
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(name) + ": entries must be finite and >= 0");
    }
  }
}

}  // namespace

int CongestionParams::requiredMemory(double alpha, double gamma) {
  return int(std::ceil(gamma / alpha + 1.0 - kCmpTol));
}

bool CongestionParams::theoremValid() const {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(gamma > 0.0)) return false;
  const double lo = 2.0 * (gamma + alpha) + alpha;
  const double hi = 3.0 * (gamma + alpha);
  if (!(delta >= lo - kCmpTol && delta < hi - kCmpTol)) return false;
  return memoryCapacity >= requiredMemory(alpha, gamma);
}

void CongestionParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("params: alpha must lie in (0,1]");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("params: gamma must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("params: delta must be > 0");
  if (memoryCapacity < 1) throw std::invalid_argument("params: memory must be >= 1");
}

void admit(const CongestionState& state, const CongestionObservation& obs,
           const CongestionParams& params, std::vector<uint8_t>& requestsOut,
           std::vector<uint8_t>& llesOut) {
  const size_t d = state.queue.size();
  const size_t n = state.lleQueue.size();
  if (obs.requestArrivals.size() != d || obs.lleArrivals.size() != n) {
    throw std::invalid_argument("admit: observation dimension mismatch");
  }
  requestsOut.assign(d, 0);
  llesOut.assign(n, 0);
  const double cap = params.gamma + kCmpTol;
  for (size_t e = 0; e < d; ++e) {
    requestsOut[e] = obs.requestArrivals[e] && state.lambda(int(e), params) <= cap;
  }
  for (size_t j = 0; j < n; ++j) {
    llesOut[j] = obs.lleArrivals[j] && state.lambdaHat(int(j), params) <= cap;
  }
}

EdgeList serve(const CongestionState& state, const CongestionParams& params,
               const Topology& topo, MatchingOracle& oracle, bool literalDelta) {
  const int d = topo.requestTypes();
  std::vector<double> weight(d);
  const double charge = literalDelta ? 3.0 * params.delta : params.delta;
  for (int e = 0; e < d; ++e) {
    auto [i, j] = topo.pairOf(e);
    weight[e] =
        params.alpha * double(state.queue[e] + state.lleQueue[i] + state.lleQueue[j]) - charge;
  }
  return oracle.maxWeight(topo.fullState(), weight).edges;
}

CongestionStepResult congestionStep(CongestionState& state, const CongestionObservation& obs,
                                    const CongestionParams& params, const Topology& topo,
                                    MatchingOracle& oracle, bool literalDelta) {
  const int d = topo.requestTypes();
  const int n = topo.clients();

  CongestionStepResult result;
  admit(state, obs, params, result.admittedRequests, result.admittedLles);
  result.served = serve(state, params, topo, oracle, literalDelta);

  const bool regime = params.theoremValid();
  std::vector<uint8_t> served(d, 0);
  for (uint16_t e : result.served) served[e] = 1;
  const std::vector<int> lleUse = topo.lleCost(result.served);

  // underflow accounting against the slot-start queues
  for (int e = 0; e < d; ++e) {
    if (served[e] > state.queue[e]) {
      ++state.underflows;
      if (regime) throw std::logic_error("congestion: request queue underflow in regime");
    }
  }
  for (int j = 0; j < n; ++j) {
    if (lleUse[j] > state.lleQueue[j]) {
      ++state.underflows;
      if (regime) throw std::logic_error("congestion: LLE queue underflow in regime");
    }
  }

  for (int e = 0; e < d; ++e) {
    int64_t q = state.queue[e] + result.admittedRequests[e] - served[e];
    if (q < 0) q = 0;
    state.queue[e] = q;
    if (q > state.maxQueueSeen) state.maxQueueSeen = q;
    state.cumAdmittedRequests[e] += result.admittedRequests[e];
    state.cumServed[e] += served[e];
    state.cumRequestArrivals += obs.requestArrivals[e];
  }
  for (int j = 0; j < n; ++j) {
    int64_t q = state.lleQueue[j] + result.admittedLles[j] - lleUse[j];
    if (q < 0) q = 0;
    state.lleQueue[j] = q;
    if (q > state.maxLleQueueSeen) state.maxLleQueueSeen = q;
    state.cumAdmittedLles[j] += result.admittedLles[j];
    state.cumLleConsumed[j] += lleUse[j];
    state.cumLleArrivals += obs.lleArrivals[j];
  }
  ++state.slot;
  return result;
}

StaticCongestionSolution staticCongestionSolve(const Topology& topo, std::span<const double> b,
                                               std::span<const double> bHat, double gamma,
                                               double delta) {
  const int d = topo.requestTypes();
  const int n = topo.clients();
  checkVector(b, size_t(d), "static solve: b");
  checkVector(bHat, size_t(n), "static solve: bHat");
  if (!(gamma >= 0.0) || !(delta >= 0.0)) {
    throw std::invalid_argument("static solve: gamma and delta must be >= 0");
  }

  MatchingOracle oracle(topo);
  const auto& actions = oracle.actionSet(topo.fullState());
  const int nTheta = int(actions.size());

  // variables: theta per matching, then z (d), then zHat (n)
  LinearProgram lp;
  for (int m = 0; m < nTheta; ++m) {
    lp.addVariable(0.0, kLpInf, delta * 3.0 * double(actions[m].size()));
  }
  const int zVar = lp.numVariables();
  for (int e = 0; e < d; ++e) lp.addVariable(0.0, b[e], -gamma);
  const int zHatVar = lp.numVariables();
  for (int j = 0; j < n; ++j) lp.addVariable(0.0, bHat[j], -gamma);

  {
    std::vector<double> row(lp.numVariables(), 0.0);
    for (int m = 0; m < nTheta; ++m) row[m] = 1.0;
    lp.addRow(std::move(row), RowSense::EQ, 1.0);
  }
  for (int e = 0; e < d; ++e) {  // z_e - x_e <= 0
    std::vector<double> row(lp.numVariables(), 0.0);
    row[zVar + e] = 1.0;
    for (int m = 0; m < nTheta; ++m) {
      for (uint16_t edge : actions[m]) {
        if (edge == e) row[m] -= 1.0;
      }
    }
    lp.addRow(std::move(row), RowSense::LE, 0.0);
  }
  for (int j = 0; j < n; ++j) {  // zHat_j - (A x)_j <= 0
    std::vector<double> row(lp.numVariables(), 0.0);
    row[zHatVar + j] = 1.0;
    for (int m = 0; m < nTheta; ++m) {
      for (uint16_t edge : actions[m]) {
        auto [a, c] = topo.pairOf(edge);
        if (a == j || c == j) row[m] -= 1.0;
      }
    }
    lp.addRow(std::move(row), RowSense::LE, 0.0);
  }

  const LpSolution sol = lpSolve(lp);
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("static solve: LP did not reach an optimum");
  }

  StaticCongestionSolution out;
  out.objective = sol.objective;
  out.x.assign(d, 0.0);
  for (int m = 0; m < nTheta; ++m) {
    const double w = sol.x[m];
    if (w <= kCmpTol) continue;
    out.mixture.emplace_back(actions[m], w);
    for (uint16_t e : actions[m]) out.x[e] += w;
  }
  out.z.assign(sol.x.begin() + zVar, sol.x.begin() + zVar + d);
  out.zHat.assign(sol.x.begin() + zHatVar, sol.x.begin() + zHatVar + n);
  return out;
}

bool fluidFeasible(const Topology& topo, std::span<const double> b,
                   std::span<const double> bHat) {
  const int d = topo.requestTypes();
  const int n = topo.clients();
  checkVector(b, size_t(d), "fluid: b");
  checkVector(bHat, size_t(n), "fluid: bHat");

  MatchingOracle oracle(topo);
  const auto& actions = oracle.actionSet(topo.fullState());
  const int nTheta = int(actions.size());

  LinearProgram lp;
  for (int m = 0; m < nTheta; ++m) lp.addVariable(0.0, kLpInf, 0.0);
  {
    std::vector<double> row(nTheta, 0.0);
    for (int m = 0; m < nTheta; ++m) row[m] = 1.0;
    lp.addRow(std::move(row), RowSense::EQ, 1.0);
  }
  for (int e = 0; e < d; ++e) {  // x_e >= b_e
    std::vector<double> row(nTheta, 0.0);
    for (int m = 0; m < nTheta; ++m) {
      for (uint16_t edge : actions[m]) {
        if (edge == e) row[m] += 1.0;
      }
    }
    lp.addRow(std::move(row), RowSense::GE, b[e]);
  }
  for (int j = 0; j < n; ++j) {  // (A x)_j <= bHat_j
    std::vector<double> row(nTheta, 0.0);
    for (int m = 0; m < nTheta; ++m) {
      for (uint16_t edge : actions[m]) {
        auto [a, c] = topo.pairOf(edge);
        if (a == j || c == j) row[m] += 1.0;
      }
    }
    lp.addRow(std::move(row), RowSense::LE, bHat[j]);
  }
  return lpFeasible(lp);
}

Lemma1Report lemma1Check(const Topology& topo, std::span<const double> b,
                         std::span<const double> bHat, double gamma, double delta,
                         double tol) {
  Lemma1Report report;
  if (!(gamma > delta && delta > 0.0)) {
    report.status = Lemma1Status::PreconditionsUnmet;
    report.detail = "requires gamma > delta > 0";
    return report;
  }
  if (!fluidFeasible(topo, b, bHat)) {
    report.status = Lemma1Status::PreconditionsUnmet;
    report.detail = "fluid problem infeasible";
    return report;
  }
  report.solution = staticCongestionSolve(topo, b, bHat, gamma, delta);

  double worst = 0.0;
  int worstIdx = -1;
  bool requestsSide = true;
  for (int e = 0; e < topo.requestTypes(); ++e) {
    const double gap = b[e] - report.solution.x[e];
    if (gap > worst) {
      worst = gap;
      worstIdx = e;
      requestsSide = true;
    }
  }
  const std::vector<double>& x = report.solution.x;
  for (int j = 0; j < topo.clients(); ++j) {
    double ax = 0.0;
    for (int e = 0; e < topo.requestTypes(); ++e) {
      auto [a, c] = topo.pairOf(e);
      if (a == j || c == j) ax += x[e];
    }
    const double gap = ax - bHat[j];
    if (gap > worst) {
      worst = gap;
      worstIdx = j;
      requestsSide = false;
    }
  }
  if (worst <= tol) {
    report.status = Lemma1Status::Holds;
    report.detail = "static solution solves the fluid problem";
  } else {
    report.status = Lemma1Status::Violated;
    report.detail = std::string(requestsSide ? "request coverage" : "LLE budget") +
                    " violated at index " + std::to_string(worstIdx) + " by " +
                    std::to_string(worst);
  }
  return report;
}

Table runCongestion(const Topology& topo, const ArrivalModel& arrivals,
                    const CongestionParams& params, int64_t slots, uint64_t seed,
                    int64_t checkpointInterval, bool literalDelta) {
  const int d = topo.requestTypes();
  const int n = topo.clients();
  params.validate();
  checkVector(arrivals.requestProbs, size_t(d), "run: request probabilities");
  checkVector(arrivals.lleProbs, size_t(n), "run: LLE probabilities");
  if (slots < 0) throw std::invalid_argument("run: negative slot count");

  const StaticCongestionSolution opt =
      staticCongestionSolve(topo, arrivals.requestProbs, arrivals.lleProbs, params.gamma,
                            params.delta);

  Rng requestRng(subSeed(seed, 1));
  Rng lleRng(subSeed(seed, 2));

  CongestionState state(d, n);
  MatchingOracle oracle(topo);
  CongestionObservation obs;

  Table trace;
  trace.columns = {"slot",      "gap",        "avg_admission_req",    "avg_admission_lle",
                   "max_qhat",  "underflows", "window_admission_req", "window_admission_lle"};
  trace.meta.push_back("model=congestion");
  trace.meta.push_back("seed=" + std::to_string(seed));
  trace.meta.push_back("static_objective=" + formatCell(opt.objective));

  int64_t windowReq = 0, windowLle = 0;
  auto record = [&](int64_t k) {
    int64_t admittedReq = 0, admittedLle = 0, servedTotal = 0;
    for (int e = 0; e < d; ++e) {
      admittedReq += state.cumAdmittedRequests[e];
      servedTotal += state.cumServed[e];
    }
    for (int j = 0; j < n; ++j) admittedLle += state.cumAdmittedLles[j];
    // static objective at the running averages; <1, A xbar> = 2 <1, xbar>
    const double xBar = double(servedTotal) / double(k);
    const double zBar = double(admittedReq) / double(k);
    const double zHatBar = double(admittedLle) / double(k);
    const double runningObjective =
        params.delta * 3.0 * xBar - params.gamma * (zBar + zHatBar);
    trace.addRow({double(k), runningObjective - opt.objective, zBar, zHatBar,
                  double(state.maxLleQueueSeen), double(state.underflows),
                  double(windowReq), double(windowLle)});
    windowReq = 0;
    windowLle = 0;
  };

  for (int64_t k = 1; k <= slots; ++k) {
    drawBernoulli(requestRng, arrivals.requestProbs, obs.requestArrivals);
    drawBernoulli(lleRng, arrivals.lleProbs, obs.lleArrivals);
    const auto step = congestionStep(state, obs, params, topo, oracle, literalDelta);
    for (uint8_t w : step.admittedRequests) windowReq += w;
    for (uint8_t w : step.admittedLles) windowLle += w;
    if ((checkpointInterval > 0 && k % checkpointInterval == 0) || k == slots) record(k);
  }
  return trace;
}

}  // namespace qsw
