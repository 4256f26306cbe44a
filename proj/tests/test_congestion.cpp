#include "doctest.h"

#include <cmath>

#include "core/congestion.hpp"
#include "core/rng.hpp"
#include "test_helpers.hpp"

using namespace qsw;

namespace {

CongestionParams regimeParams(double alpha, double gamma) {
  CongestionParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.delta = CongestionParams::defaultDelta(alpha, gamma);
  p.memoryCapacity = CongestionParams::requiredMemory(alpha, gamma);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("congestion");

TEST_CASE("parameter regime checks") {
  CHECK(CongestionParams::requiredMemory(1.0, 2.0) == 3);
  CHECK(CongestionParams::requiredMemory(0.1, 2.0) == 21);
  CHECK(CongestionParams::requiredMemory(0.01, 2.0) == 201);
  CHECK(regimeParams(1.0, 2.0).delta == doctest::Approx(7.0));
  CHECK(regimeParams(1.0, 2.0).theoremValid());
  CHECK(regimeParams(0.1, 2.0).theoremValid());
  CHECK(regimeParams(0.01, 2.0).theoremValid());

  CongestionParams p = regimeParams(1.0, 2.0);
  p.delta = 9.0;  // = 3(gamma+alpha), exclusive upper end
  CHECK_FALSE(p.theoremValid());
  p.delta = 6.9;  // below the inclusive lower end
  CHECK_FALSE(p.theoremValid());
  p = regimeParams(1.0, 2.0);
  p.memoryCapacity = 2;
  CHECK_FALSE(p.theoremValid());
}

TEST_CASE("admission thresholds") {
  Topology t(3);
  CongestionParams p = regimeParams(1.0, 2.0);
  CongestionState st(3, 3);
  CongestionObservation obs{{1, 1, 1}, {1, 1, 1}};
  std::vector<uint8_t> w, wHat;

  SUBCASE("multiplier exactly gamma still admits") {
    st.queue = {2, 0, 0};  // lambda_0 = 2 = gamma
    admit(st, obs, p, w, wHat);
    CHECK(w == std::vector<uint8_t>{1, 1, 1});
  }
  SUBCASE("one step above gamma rejects") {
    st.queue = {3, 0, 0};  // lambda_0 = 3 = gamma + alpha
    admit(st, obs, p, w, wHat);
    CHECK(w == std::vector<uint8_t>{0, 1, 1});
  }
  SUBCASE("no arrival, no admission") {
    obs.requestArrivals = {0, 0, 0};
    admit(st, obs, p, w, wHat);
    CHECK(w == std::vector<uint8_t>{0, 0, 0});
  }
  SUBCASE("fractional steps keep the threshold exact") {
    CongestionParams q = regimeParams(0.01, 2.0);
    st.queue = {200, 201, 0};  // lambda = 2.00 (admit), 2.01 (reject)
    admit(st, obs, q, w, wHat);
    CHECK(w == std::vector<uint8_t>{1, 0, 1});
  }
}

TEST_CASE("service weights charge delta once per request") {
  Topology t(3);
  MatchingOracle oracle(t);
  CongestionParams p = regimeParams(1.0, 2.0);  // delta = 7
  CongestionState st(3, 3);

  SUBCASE("all three multipliers at the cap serve") {
    st.queue = {3, 0, 0};
    st.lleQueue = {3, 3, 0};  // edge 0 = (0,1): 3+3+3-7 = 2 > 0
    CHECK(serve(st, p, t, oracle) == EdgeList{0});
  }
  SUBCASE("weight zero does not serve") {
    st.queue = {2, 0, 0};
    st.lleQueue = {2, 3, 0};  // 2+2+3-7 = 0
    CHECK(serve(st, p, t, oracle).empty());
  }
  SUBCASE("all-zero multipliers never serve") {
    CHECK(serve(st, p, t, oracle).empty());
  }
  SUBCASE("the literal reading charges three deltas and stays idle in regime") {
    st.queue = {3, 3, 3};
    st.lleQueue = {3, 3, 3};
    CHECK(serve(st, p, t, oracle, /*literalDelta=*/true).empty());
    CHECK_FALSE(serve(st, p, t, oracle, /*literalDelta=*/false).empty());
  }
}

TEST_CASE("step updates and underflow accounting") {
  Topology t(3);
  MatchingOracle oracle(t);

  SUBCASE("admitted arrival lands in the queue") {
    CongestionParams p = regimeParams(1.0, 2.0);
    CongestionState st(3, 3);
    CongestionObservation obs{{1, 0, 0}, {0, 0, 0}};
    const auto r = congestionStep(st, obs, p, t, oracle);
    CHECK(r.admittedRequests == std::vector<uint8_t>{1, 0, 0});
    CHECK(r.served.empty());
    CHECK(st.queue == std::vector<int64_t>{1, 0, 0});
  }
  SUBCASE("forced out-of-regime service clamps and counts underflows") {
    CongestionParams p = regimeParams(1.0, 2.0);
    p.delta = 0.5;  // far below the safe band: serves empty queues
    CHECK_FALSE(p.theoremValid());
    CongestionState st(3, 3);
    st.queue = {1, 0, 0};
    st.lleQueue = {0, 0, 0};  // serving edge 0 must underflow both LLE queues
    CongestionObservation obs{{0, 0, 0}, {0, 0, 0}};
    const auto r = congestionStep(st, obs, p, t, oracle);
    CHECK(r.served == EdgeList{0});
    CHECK(st.underflows == 2);
    CHECK(st.queue == std::vector<int64_t>{0, 0, 0});
    CHECK(st.lleQueue == std::vector<int64_t>{0, 0, 0});
  }
}

TEST_CASE("long regime run: caps, memory bound, no underflow") {
  Topology t(4);
  MatchingOracle oracle(t);
  const double alpha = 0.1, gamma = 1.5;
  CongestionParams p = regimeParams(alpha, gamma);
  REQUIRE(p.theoremValid());
  const int64_t qCap = int64_t(std::floor((gamma + kCmpTol) / alpha)) + 1;

  CongestionState st(6, 4);
  CongestionObservation obs;
  Rng reqRng(subSeed(8, 1)), lleRng(subSeed(8, 2));
  const std::vector<double> pReq(6, 0.4), pLle(4, 0.5);
  int64_t capAttained = 0;
  for (int k = 0; k < 100000; ++k) {
    drawBernoulli(reqRng, pReq, obs.requestArrivals);
    drawBernoulli(lleRng, pLle, obs.lleArrivals);
    congestionStep(st, obs, p, t, oracle);
    for (int64_t q : st.queue) {
      CHECK(q <= qCap);
      capAttained = std::max(capAttained, q);
    }
    for (int64_t q : st.lleQueue) CHECK(q <= qCap);
  }
  CHECK(st.underflows == 0);
  CHECK(st.maxLleQueueSeen <= p.memoryCapacity);
  CHECK(capAttained == qCap);  // the gamma+alpha cap is actually reached
  // two-LLE accounting over the whole trace
  int64_t served = 0, lle = 0;
  for (int e = 0; e < 6; ++e) served += st.cumServed[e];
  for (int j = 0; j < 4; ++j) lle += st.cumLleConsumed[j];
  CHECK(lle == 2 * served);
}

TEST_CASE("admission dominance") {
  Topology t(3);
  MatchingOracle oracle(t);
  CongestionParams p = regimeParams(1.0, 2.0);
  CongestionState st(3, 3);
  CongestionObservation obs;
  Rng reqRng(subSeed(9, 1)), lleRng(subSeed(9, 2));
  const std::vector<double> pReq(3, 0.6), pLle(3, 0.6);
  for (int k = 0; k < 2000; ++k) {
    drawBernoulli(reqRng, pReq, obs.requestArrivals);
    drawBernoulli(lleRng, pLle, obs.lleArrivals);
    const auto r = congestionStep(st, obs, p, t, oracle);
    for (int e = 0; e < 3; ++e) CHECK(r.admittedRequests[e] <= obs.requestArrivals[e]);
    for (int j = 0; j < 3; ++j) CHECK(r.admittedLles[j] <= obs.lleArrivals[j]);
  }
}

TEST_CASE("static solve frozen instances") {
  SUBCASE("hand-solved two-client instance") {
    Topology t(2);
    const auto sol = staticCongestionSolve(t, std::vector<double>{0.2},
                                           std::vector<double>{0.5, 0.5}, 1.0, 0.1);
    CHECK(sol.objective == doctest::Approx(-1.05));
    CHECK(sol.x[0] == doctest::Approx(0.5));
    CHECK(sol.z[0] == doctest::Approx(0.2));
    CHECK(sol.zHat[0] == doctest::Approx(0.5));
    CHECK(sol.zHat[1] == doctest::Approx(0.5));
  }
  SUBCASE("zero arrivals give the zero solution") {
    Topology t(3);
    const auto sol = staticCongestionSolve(t, std::vector<double>(3, 0.0),
                                           std::vector<double>(3, 0.0), 1.0, 0.5);
    CHECK(sol.objective == doctest::Approx(0.0));
    for (double v : sol.x) CHECK(v == doctest::Approx(0.0));
  }
  SUBCASE("no admission reward means no service") {
    Topology t(3);
    const auto sol = staticCongestionSolve(t, std::vector<double>(3, 0.4),
                                           std::vector<double>(3, 0.9), 0.0, 0.3);
    CHECK(sol.objective == doctest::Approx(0.0));
    for (double v : sol.x) CHECK(v == doctest::Approx(0.0));
    for (double v : sol.z) CHECK(v == doctest::Approx(0.0));
  }
}

TEST_CASE("static objective is nonincreasing in gamma") {
  Topology t(3);
  Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> b(3), bHat(3);
    for (auto& x : b) x = rng.uniform();
    for (auto& x : bHat) x = rng.uniform();
    const double delta = 0.05 + rng.uniform();
    const double g1 = 0.1 + 2.0 * rng.uniform();
    const double g2 = g1 + rng.uniform();
    const double f1 = staticCongestionSolve(t, b, bHat, g1, delta).objective;
    const double f2 = staticCongestionSolve(t, b, bHat, g2, delta).objective;
    CHECK(f2 <= f1 + 1e-9);
  }
}

TEST_CASE("lemma oracle") {
  SUBCASE("the hand-solved instance satisfies the fluid constraints") {
    Topology t(2);
    const auto rep = lemma1Check(t, std::vector<double>{0.2},
                                 std::vector<double>{0.5, 0.5}, 1.0, 0.1);
    CHECK(rep.status == Lemma1Status::Holds);
  }
  SUBCASE("infeasible fluid problem reports preconditions") {
    Topology t(2);
    const auto rep = lemma1Check(t, std::vector<double>{1.0},
                                 std::vector<double>{0.5, 0.5}, 1.0, 0.5);
    CHECK(rep.status == Lemma1Status::PreconditionsUnmet);
    CHECK(rep.detail == "fluid problem infeasible");
  }
  SUBCASE("gamma <= delta reports preconditions") {
    Topology t(2);
    const auto rep = lemma1Check(t, std::vector<double>{0.1},
                                 std::vector<double>{0.5, 0.5}, 0.5, 0.5);
    CHECK(rep.status == Lemma1Status::PreconditionsUnmet);
  }
  SUBCASE("zero demand holds trivially") {
    Topology t(3);
    const auto rep = lemma1Check(t, std::vector<double>(3, 0.0),
                                 std::vector<double>{0.4, 0.9, 0.2}, 1.0, 0.5);
    CHECK(rep.status == Lemma1Status::Holds);
  }
}

TEST_CASE("run trace basics") {
  Topology t(3);
  CongestionParams p = regimeParams(1.0, 2.0);
  SUBCASE("zero arrival probabilities give an all-zero trace") {
    const ArrivalModel arr{std::vector<double>(3, 0.0), std::vector<double>(3, 0.0)};
    const auto trace = runCongestion(t, arr, p, 500, 3, 100);
    REQUIRE(trace.rows.size() == 5);
    for (const auto& row : trace.rows) {
      CHECK(row[2] == 0.0);  // avg_admission_req
      CHECK(row[3] == 0.0);
      CHECK(row[4] == 0.0);  // max_qhat
      CHECK(row[5] == 0.0);  // underflows
    }
  }
  SUBCASE("identical seeds reproduce identical traces") {
    const ArrivalModel arr{std::vector<double>(3, 0.3), std::vector<double>(3, 0.3)};
    const auto a = runCongestion(t, arr, p, 2000, 77, 250);
    const auto b = runCongestion(t, arr, p, 2000, 77, 250);
    CHECK(a.rows == b.rows);
    CHECK(a.toCsv() == b.toCsv());
  }
}

TEST_SUITE_END();
