#include "capacity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "common.hpp"
#include "lp.hpp"

namespace qsw {

namespace {

void checkModel(const Topology& topo, const LinkModel& model) {
  if (int(model.tau.size()) != topo.clients()) {
    throw std::invalid_argument("link model: tau length does not match client count");
  }
  for (double t : model.tau) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::invalid_argument("link model: tau entries must lie in [0,1]");
    }
  }
}

void checkRates(const Topology& topo, std::span<const double> b, const char* name) {
  if (int(b.size()) != topo.requestTypes()) {
    throw std::invalid_argument(std::string(name) + ": length does not match request types");
  }
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + ": entries must be finite and >= 0");
    }
  }
}

}  // namespace

std::vector<double> stateDistribution(const LinkModel& model) {
  const int n = int(model.tau.size());
  if (n < 1 || n > 30) throw std::invalid_argument("state distribution: bad client count");
  for (double t : model.tau) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::invalid_argument("state distribution: tau entries must lie in [0,1]");
    }
  }
  std::vector<double> p(size_t(1) << n, 1.0);
  for (StateMask s = 0; s < p.size(); ++s) {
    for (int j = 0; j < n; ++j) {
      p[s] *= (s >> j & 1) ? model.tau[j] : 1.0 - model.tau[j];
    }
  }
  return p;
}

MembershipResult capacityMembership(const Topology& topo, const LinkModel& model,
                                    std::span<const double> b) {
  checkModel(topo, model);
  checkRates(topo, b, "capacity membership");
  if (topo.clients() > kMaxAnalysisClients) {
    throw TooLargeError("capacity membership: supported up to " +
                        std::to_string(kMaxAnalysisClients) + " clients, got " +
                        std::to_string(topo.clients()));
  }

  const int d = topo.requestTypes();
  const auto p = stateDistribution(model);
  MatchingOracle oracle(topo);

  // Column per (state, matching) pair over states with positive probability,
  // plus the free inflation variable t. Maximize t subject to
  //   sum_m theta(m,s) = 1 per state,  sum_s p(s) x_e(s) - t >= b_e per type.
  struct Col {
    StateMask state;
    const EdgeList* matching;
  };
  std::vector<Col> cols;
  std::vector<StateMask> activeStates;
  for (StateMask s = 0; s < p.size(); ++s) {
    if (p[s] <= 0.0) continue;
    activeStates.push_back(s);
    for (const auto& m : oracle.actionSet(s)) cols.push_back({s, &m});
  }

  LinearProgram lp;
  lp.maximize = true;
  const int nTheta = int(cols.size());
  for (int c = 0; c < nTheta; ++c) lp.addVariable(0.0, kLpInf, 0.0);
  const int tVar = lp.addVariable(-kLpInf, kLpInf, 1.0);

  std::vector<int> stateRow(p.size(), -1);
  for (StateMask s : activeStates) {
    std::vector<double> row(lp.numVariables(), 0.0);
    stateRow[s] = lp.numRows();
    lp.addRow(std::move(row), RowSense::EQ, 1.0);
  }
  for (int e = 0; e < d; ++e) {
    std::vector<double> row(lp.numVariables(), 0.0);
    row[tVar] = -1.0;
    lp.addRow(std::move(row), RowSense::GE, b[e]);
  }
  const int edgeRow0 = int(activeStates.size());
  for (int c = 0; c < nTheta; ++c) {
    lp.rowCoeffs[stateRow[cols[c].state]][c] = 1.0;
    const double ps = p[cols[c].state];
    for (uint16_t e : *cols[c].matching) lp.rowCoeffs[edgeRow0 + e][c] = ps;
  }

  const LpSolution sol = lpSolve(lp);
  if (sol.status != LpStatus::Optimal) {
    // theta = point mass on the empty matching with t << 0 is always feasible
    throw std::runtime_error("capacity membership: inflation LP did not solve");
  }

  MembershipResult res;
  res.slack = sol.x[tVar];
  res.verdict = res.slack > kInsideTol    ? Verdict::Inside
                : res.slack >= -kInsideTol ? Verdict::Boundary
                                           : Verdict::Outside;
  if (res.verdict != Verdict::Outside) {
    res.achievedRate.assign(d, 0.0);
    for (int c = 0; c < nTheta; ++c) {
      const double w = sol.x[c];
      if (w <= kCmpTol) continue;
      res.mixture.push_back({cols[c].state, *cols[c].matching, w});
      for (uint16_t e : *cols[c].matching) res.achievedRate[e] += p[cols[c].state] * w;
    }
  }
  return res;
}

double boundaryScaling(const Topology& topo, const LinkModel& model,
                       std::span<const double> direction, double tol) {
  checkModel(topo, model);
  checkRates(topo, direction, "boundary scaling");
  if (!(tol > 0.0)) throw std::invalid_argument("boundary scaling: tol must be > 0");
  double norm = 0.0;
  for (double v : direction) norm += v;
  if (norm <= 0.0) {
    throw std::invalid_argument("boundary scaling: direction must be nonzero");
  }

  std::vector<double> b(direction.size());
  auto verdictAt = [&](double rho) {
    for (size_t e = 0; e < b.size(); ++e) b[e] = rho * direction[e];
    return capacityMembership(topo, model, b).verdict;
  };

  double lo = 0.0, hi = 1.0;
  while (verdictAt(hi) != Verdict::Outside) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) {
      throw std::runtime_error("boundary scaling: direction never leaves the region");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (verdictAt(mid) == Verdict::Outside) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double dualValue(const Topology& topo, const LinkModel& model, std::span<const double> b,
                 std::span<const double> lambda, MatchingOracle& oracle) {
  checkModel(topo, model);
  checkRates(topo, b, "dual value");
  checkRates(topo, lambda, "dual point");
  const auto p = stateDistribution(model);
  double lb = 0.0;
  for (int e = 0; e < topo.requestTypes(); ++e) lb += lambda[e] * b[e];
  double inner = 0.0;
  for (StateMask s = 0; s < p.size(); ++s) {
    if (p[s] <= 0.0) continue;
    inner += p[s] * oracle.maxWeight(s, lambda).value;
  }
  return 1.0 + lb - inner;
}

double dualValue(const Topology& topo, const LinkModel& model, std::span<const double> b,
                 std::span<const double> lambda) {
  MatchingOracle oracle(topo);
  return dualValue(topo, model, b, lambda, oracle);
}

std::vector<double> dualSupergradient(const Topology& topo, const LinkModel& model,
                                      std::span<const double> b,
                                      std::span<const double> lambda,
                                      MatchingOracle& oracle) {
  checkModel(topo, model);
  checkRates(topo, b, "dual supergradient");
  checkRates(topo, lambda, "dual point");
  const auto p = stateDistribution(model);
  std::vector<double> g(b.begin(), b.end());
  for (StateMask s = 0; s < p.size(); ++s) {
    if (p[s] <= 0.0) continue;
    for (uint16_t e : oracle.maxWeight(s, lambda).edges) g[e] -= p[s];
  }
  return g;
}

std::vector<double> dualSupergradient(const Topology& topo, const LinkModel& model,
                                      std::span<const double> b,
                                      std::span<const double> lambda) {
  MatchingOracle oracle(topo);
  return dualSupergradient(topo, model, b, lambda, oracle);
}

PdgaResult pdgaRun(const Topology& topo, const LinkModel& model, std::span<const double> b,
                   double stepSize, int iterations, bool plateauDetection) {
  if (!(stepSize > 0.0)) throw std::invalid_argument("pdga: step size must be > 0");
  if (iterations < 1) throw std::invalid_argument("pdga: need at least one iteration");
  MatchingOracle oracle(topo);

  PdgaResult res;
  std::vector<double> lambda(topo.requestTypes(), 0.0);
  res.lambda.push_back(lambda);
  res.h.push_back(dualValue(topo, model, b, lambda, oracle));
  int flat = 0;
  for (int k = 0; k < iterations; ++k) {
    const auto g = dualSupergradient(topo, model, b, lambda, oracle);
    for (size_t e = 0; e < lambda.size(); ++e) {
      lambda[e] = std::max(0.0, lambda[e] + stepSize * g[e]);
    }
    res.lambda.push_back(lambda);
    res.h.push_back(dualValue(topo, model, b, lambda, oracle));
    res.iterations = k + 1;
    if (plateauDetection) {
      flat = std::abs(res.h[k + 1] - res.h[k]) < 1e-10 ? flat + 1 : 0;
      if (flat >= 100) {
        res.plateaued = true;
        break;
      }
    }
  }
  return res;
}

}  // namespace qsw
