#include "doctest.h"

#include <cmath>

#include "core/decoherent.hpp"
#include "test_helpers.hpp"

using namespace qsw;

TEST_SUITE_BEGIN("decoherent");

TEST_CASE("slot step frozen cases") {
  SUBCASE("serve and arrive cancel") {
    Topology t(3);
    MatchingOracle oracle(t);
    SlotPolicyState st(3);
    st.lambda = {2.0, 0.0, 0.0};
    SlotObservation obs{t.fullState(), {1, 0, 0}};
    const auto served = slotStep(st, obs, t, oracle);
    CHECK(served == EdgeList{0});
    CHECK(st.lambda == std::vector<double>{2.0, 0.0, 0.0});
  }
  SUBCASE("zero multipliers only queue the arrivals") {
    Topology t(3);
    MatchingOracle oracle(t);
    SlotPolicyState st(3);
    SlotObservation obs{t.fullState(), {1, 1, 0}};
    const auto served = slotStep(st, obs, t, oracle);
    CHECK(served.empty());
    CHECK(st.lambda == std::vector<double>{1.0, 1.0, 0.0});
  }
  SUBCASE("max-weight action at N=4") {
    Topology t(4);
    MatchingOracle oracle(t);
    SlotPolicyState st(6);
    st.lambda = {3.0, 1.0, 1.0, 1.0, 1.0, 3.0};
    SlotObservation obs{t.fullState(), {0, 0, 0, 0, 0, 0}};
    const auto served = slotStep(st, obs, t, oracle);
    CHECK(served == EdgeList{0, 5});
    CHECK(st.lambda == std::vector<double>{2.0, 1.0, 1.0, 1.0, 1.0, 2.0});
  }
}

TEST_CASE("multipliers never go negative and stay integer at unit step") {
  Topology t(4);
  MatchingOracle oracle(t);
  SlotPolicyState st(6);
  Rng stateRng(subSeed(11, 0)), reqRng(subSeed(11, 1));
  const std::vector<double> tau(4, 0.7), probs(6, 0.2);
  SlotObservation obs;
  for (int k = 0; k < 5000; ++k) {
    obs.state = drawState(stateRng, tau);
    drawBernoulli(reqRng, probs, obs.arrivals);
    slotStep(st, obs, t, oracle);
    for (double v : st.lambda) {
      CHECK(v >= 0.0);
      CHECK(v == std::floor(v));
    }
  }
}

TEST_CASE("multiplier recursion equals the plain queue recursion") {
  // same (b_k, y_k) stream, lambda_k == Q_k at every slot, exactly
  Topology t(4);
  MatchingOracle oracle(t);
  SlotPolicyState st(6);
  std::vector<double> queue(6, 0.0);
  Rng stateRng(subSeed(42, 0)), reqRng(subSeed(42, 1));
  const std::vector<double> tau(4, 0.8), probs(6, 0.15);
  SlotObservation obs;
  for (int k = 0; k < 20000; ++k) {
    obs.state = drawState(stateRng, tau);
    drawBernoulli(reqRng, probs, obs.arrivals);
    const auto served = slotStep(st, obs, t, oracle);
    std::vector<uint8_t> y(6, 0);
    for (uint16_t e : served) y[e] = 1;
    for (int e = 0; e < 6; ++e) {
      queue[e] = std::max(0.0, queue[e] + obs.arrivals[e] - y[e]);
    }
    CHECK(queue == st.lambda);
  }
}

TEST_CASE("stochastic gradient is unbiased at a frozen multiplier") {
  Topology t(4);
  MatchingOracle oracle(t);
  LinkModel model{std::vector<double>(4, 0.8)};
  Rng rng(subSeed(314, 7));
  std::vector<double> b(6), lambda(6);
  for (auto& x : b) x = rng.uniform() * 0.5;
  for (auto& x : lambda) x = rng.uniform() * 4.0;
  const auto g = dualSupergradient(t, model, b, lambda, oracle);

  const int slots = 100000;
  Rng stateRng(subSeed(314, 0)), reqRng(subSeed(314, 1));
  std::vector<double> sum(6, 0.0), sumSq(6, 0.0);
  std::vector<uint8_t> arrivals;
  for (int k = 0; k < slots; ++k) {
    const StateMask s = drawState(stateRng, model.tau);
    drawBernoulli(reqRng, b, arrivals);
    const auto wm = oracle.maxWeight(s, lambda);
    std::vector<double> inc(6, 0.0);
    for (int e = 0; e < 6; ++e) inc[e] = double(arrivals[e]);
    for (uint16_t e : wm.edges) inc[e] -= 1.0;
    for (int e = 0; e < 6; ++e) {
      sum[e] += inc[e];
      sumSq[e] += inc[e] * inc[e];
    }
  }
  for (int e = 0; e < 6; ++e) {
    const double mean = sum[e] / slots;
    const double var = sumSq[e] / slots - mean * mean;
    const double se = std::sqrt(std::max(var, 1e-12) / slots);
    CHECK(std::abs(mean - g[e]) <= 3.0 * se);
  }
}

TEST_CASE("run trace shapes and trivial processes") {
  Topology t(3);
  LinkModel model{{0.9, 0.9, 0.9}};
  SUBCASE("zero arrivals leave everything at zero") {
    const auto trace =
        runDecoherent(t, model, {std::vector<double>(3, 0.0), {}}, 1000, 5, 100);
    CHECK(trace.columns ==
          std::vector<std::string>{"slot", "sum_lambda", "residual_sq", "served_total"});
    REQUIRE(trace.rows.size() == 10);
    for (const auto& row : trace.rows) {
      CHECK(row[1] == 0.0);
      CHECK(row[2] == 0.0);
      CHECK(row[3] == 0.0);
    }
  }
  SUBCASE("zero slots produce an empty trace") {
    const auto trace = runDecoherent(t, model, {std::vector<double>(3, 0.1), {}}, 0, 5, 10);
    CHECK(trace.rows.empty());
  }
  SUBCASE("final slot is always recorded") {
    const auto trace = runDecoherent(t, model, {std::vector<double>(3, 0.1), {}}, 105, 5, 50);
    REQUIRE(trace.rows.size() == 3);
    CHECK(trace.rows.back()[0] == 105.0);
  }
}

TEST_CASE("feasibility residual decays for interior demand") {
  Topology t(4);
  LinkModel model{std::vector<double>(4, 0.8)};
  const std::vector<double> dir(6, 1.0 / 6.0);
  const double boundary = boundaryScaling(t, model, dir, 1e-4);
  std::vector<double> probs(6);
  for (int e = 0; e < 6; ++e) probs[e] = 0.8 * boundary * dir[e];

  // seed-averaged residual at k = 1e3 vs 1e4 vs 1e5 must be nonincreasing
  double res3 = 0.0, res4 = 0.0, res5 = 0.0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    const auto trace = runDecoherent(t, model, {probs, {}}, 100000, 1000 + s, 1000);
    for (const auto& row : trace.rows) {
      if (row[0] == 1000.0) res3 += row[2];
      if (row[0] == 10000.0) res4 += row[2];
      if (row[0] == 100000.0) res5 += row[2];
    }
  }
  CHECK(res4 <= res3);
  CHECK(res5 <= res4);
}

TEST_SUITE_END();
