#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/capacity.hpp"
#include "core/common.hpp"
#include "core/rng.hpp"
#include "test_helpers.hpp"

using namespace qsw;

namespace {

double hOf(const Topology& t, const LinkModel& m, const std::vector<double>& b,
           const std::vector<double>& lambda) {
  return dualValue(t, m, b, lambda);
}

}  // namespace

TEST_SUITE_BEGIN("capacity");

TEST_CASE("state distribution") {
  SUBCASE("six clients at 0.8: all-active mass") {
    LinkModel m{std::vector<double>(6, 0.8)};
    const auto p = stateDistribution(m);
    CHECK(p.size() == 64);
    CHECK(p[63] == doctest::Approx(0.262144).epsilon(1e-12));
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("perfect links concentrate on the full state") {
    LinkModel m{{1.0, 1.0, 1.0}};
    const auto p = stateDistribution(m);
    CHECK(p[7] == 1.0);
    for (StateMask s = 0; s < 7; ++s) CHECK(p[s] == 0.0);
  }
  SUBCASE("two clients, mixed probabilities") {
    LinkModel m{{0.5, 0.8}};
    const auto p = stateDistribution(m);
    CHECK(p[0b00] == doctest::Approx(0.1));
    CHECK(p[0b01] == doctest::Approx(0.1));  // client 0 only: 0.5 * 0.2
    CHECK(p[0b10] == doctest::Approx(0.4));  // client 1 only
    CHECK(p[0b11] == doctest::Approx(0.4));
  }
}

TEST_CASE("membership verdicts") {
  SUBCASE("perfect pair serves 0.9") {
    Topology t(2);
    LinkModel m{{1.0, 1.0}};
    CHECK(capacityMembership(t, m, std::vector<double>{0.9}).verdict == Verdict::Inside);
  }
  SUBCASE("single edge caps at the both-active probability") {
    Topology t(2);
    LinkModel m{{0.5, 0.8}};
    CHECK(capacityMembership(t, m, std::vector<double>{0.41}).verdict == Verdict::Outside);
    CHECK(capacityMembership(t, m, std::vector<double>{0.39}).verdict == Verdict::Inside);
  }
  SUBCASE("triangle serves at most one request per slot") {
    Topology t(3);
    LinkModel m{{1.0, 1.0, 1.0}};
    CHECK(capacityMembership(t, m, std::vector<double>{0.4, 0.4, 0.4}).verdict ==
          Verdict::Outside);
    CHECK(capacityMembership(t, m, std::vector<double>{0.3, 0.3, 0.3}).verdict ==
          Verdict::Inside);
  }
  SUBCASE("zero load is always servable") {
    Topology t(4);
    LinkModel m{{0.3, 0.0, 0.9, 0.5}};
    CHECK(capacityMembership(t, m, std::vector<double>(6, 0.0)).verdict != Verdict::Outside);
  }
  SUBCASE("the analysis ceiling is enforced") {
    Topology t(9);
    LinkModel m{std::vector<double>(9, 0.5)};
    CHECK_THROWS_AS(capacityMembership(t, m, std::vector<double>(36, 0.0)), TooLargeError);
  }
}

TEST_CASE("membership certificates cover the demand") {
  Topology t(4);
  Rng rng(99);
  int insides = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> tau(4);
    for (auto& x : tau) x = rng.uniform();
    LinkModel m{tau};
    std::vector<double> b(6);
    for (auto& x : b) x = 0.25 * rng.uniform();
    const auto res = capacityMembership(t, m, b);
    if (res.verdict == Verdict::Outside) continue;
    ++insides;
    REQUIRE(res.achievedRate.size() == 6);
    for (int e = 0; e < 6; ++e) CHECK(res.achievedRate[e] >= b[e] - kFeasTol);
    // per-state mixture weights are a distribution
    std::vector<double> perState(16, 0.0);
    for (const auto& entry : res.mixture) {
      CHECK(entry.weight >= 0.0);
      perState[entry.state] += entry.weight;
    }
    for (double w : perState) CHECK(w <= 1.0 + kFeasTol);
  }
  CHECK(insides > 3);
}

TEST_CASE("membership is invariant under client permutation") {
  Topology t(4);
  Rng rng(7);
  const int perm[4] = {2, 0, 3, 1};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> tau(4), b(6);
    for (auto& x : tau) x = rng.uniform();
    for (auto& x : b) x = 0.3 * rng.uniform();
    std::vector<double> tauP(4), bP(6);
    for (int j = 0; j < 4; ++j) tauP[perm[j]] = tau[j];
    for (int e = 0; e < 6; ++e) {
      auto [i, j] = t.pairOf(e);
      bP[t.indexOf(perm[i], perm[j])] = b[e];
    }
    LinkModel m{tau}, mP{tauP};
    CHECK(capacityMembership(t, m, b).verdict == capacityMembership(t, mP, bP).verdict);
  }
}

TEST_CASE("membership is monotone in the demand") {
  Topology t(3);
  LinkModel m{{0.9, 0.7, 0.8}};
  Rng rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<double> b(3), smaller(3);
    for (int e = 0; e < 3; ++e) {
      b[e] = 0.4 * rng.uniform();
      smaller[e] = b[e] * rng.uniform();
    }
    if (capacityMembership(t, m, b).verdict == Verdict::Inside) {
      CHECK(capacityMembership(t, m, smaller).verdict == Verdict::Inside);
    }
  }
}

TEST_CASE("boundary scaling") {
  SUBCASE("two clients, mixed links") {
    Topology t(2);
    LinkModel m{{0.5, 0.8}};
    const double rho = boundaryScaling(t, m, std::vector<double>{1.0}, 1e-5);
    CHECK(rho == doctest::Approx(0.4).epsilon(1e-3));
  }
  SUBCASE("doubling the direction halves the scale") {
    Topology t(2);
    LinkModel m{{0.5, 0.8}};
    const double rho1 = boundaryScaling(t, m, std::vector<double>{1.0}, 1e-6);
    const double rho2 = boundaryScaling(t, m, std::vector<double>{2.0}, 1e-6);
    CHECK(rho2 == doctest::Approx(0.5 * rho1).epsilon(1e-3));
  }
  SUBCASE("uniform direction in the perfect triangle") {
    Topology t(3);
    LinkModel m{{1.0, 1.0, 1.0}};
    const std::vector<double> dir(3, 1.0 / 3.0);
    CHECK(boundaryScaling(t, m, dir, 1e-5) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("zero direction is rejected") {
    Topology t(2);
    LinkModel m{{0.5, 0.8}};
    CHECK_THROWS_AS(boundaryScaling(t, m, std::vector<double>{0.0}, 1e-5),
                    std::invalid_argument);
  }
}

TEST_CASE("dual value frozen points") {
  SUBCASE("lambda zero gives h = 1") {
    Topology t(3);
    LinkModel m{{0.3, 0.6, 0.9}};
    CHECK(hOf(t, m, {0.2, 0.1, 0.0}, {0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  }
  SUBCASE("perfect pair at lambda = 2") {
    Topology t(2);
    LinkModel m{{1.0, 1.0}};
    CHECK(hOf(t, m, {0.5}, {2.0}) == doctest::Approx(0.0));
  }
}

TEST_CASE("supergradient frozen points") {
  SUBCASE("at lambda = 0 the gradient is the demand") {
    Topology t(3);
    LinkModel m{{0.5, 0.5, 0.5}};
    const std::vector<double> b = {0.2, 0.05, 0.1};
    CHECK(dualSupergradient(t, m, b, {0.0, 0.0, 0.0}) == b);
  }
  SUBCASE("perfect pair serves the edge") {
    Topology t(2);
    LinkModel m{{1.0, 1.0}};
    const auto g = dualSupergradient(t, m, {0.5}, {1.0});
    CHECK(g[0] == doctest::Approx(-0.5));
  }
  SUBCASE("dead links never serve") {
    Topology t(3);
    LinkModel m{{0.0, 0.0, 0.0}};
    const std::vector<double> b = {0.4, 0.4, 0.4};
    CHECK(dualSupergradient(t, m, b, {3.0, 1.0, 2.0}) == b);
  }
}

TEST_CASE("supergradient inequality holds at random pairs") {
  Topology t(4);
  Rng rng(12345);
  std::vector<double> tau(4);
  for (auto& x : tau) x = 0.2 + 0.8 * rng.uniform();
  LinkModel m{tau};
  MatchingOracle oracle(t);
  std::vector<double> b(6);
  for (auto& x : b) x = 0.3 * rng.uniform();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> lam(6), mu(6);
    for (auto& x : lam) x = 3.0 * rng.uniform();
    for (auto& x : mu) x = 3.0 * rng.uniform();
    const double hLam = dualValue(t, m, b, lam, oracle);
    const double hMu = dualValue(t, m, b, mu, oracle);
    const auto g = dualSupergradient(t, m, b, lam, oracle);
    double bound = hLam;
    for (int e = 0; e < 6; ++e) bound += g[e] * (mu[e] - lam[e]);
    CHECK(hMu <= bound + 1e-9);
  }
}

TEST_CASE("deterministic dual ascent") {
  Topology t(4);
  LinkModel m{std::vector<double>(4, 0.8)};
  const std::vector<double> dir(6, 1.0 / 6.0);
  const double boundary = boundaryScaling(t, m, dir, 1e-4);

  SUBCASE("zero demand keeps the multipliers at zero") {
    const auto res = pdgaRun(t, m, std::vector<double>(6, 0.0), 1.0, 50);
    for (const auto& lam : res.lambda) {
      for (double v : lam) CHECK(v == 0.0);
    }
    CHECK(res.h.back() == doctest::Approx(1.0));
  }
  SUBCASE("interior demand keeps iterates bounded") {
    std::vector<double> b(6);
    for (int e = 0; e < 6; ++e) b[e] = 0.9 * boundary * dir[e];
    const auto res = pdgaRun(t, m, b, 0.5, 4000);
    double sup = 0.0;
    for (const auto& lam : res.lambda) {
      double s = 0.0;
      for (double v : lam) s += v;
      sup = std::max(sup, s);
    }
    CHECK(sup < 25.0);  // measured ~= the dual optimum scale; diverges if unstable
  }
  SUBCASE("exterior demand drifts upward linearly") {
    std::vector<double> b(6);
    for (int e = 0; e < 6; ++e) b[e] = 1.1 * boundary * dir[e];
    const auto res = pdgaRun(t, m, b, 0.5, 2000, /*plateauDetection=*/false);
    std::vector<double> sums;
    for (const auto& lam : res.lambda) {
      double s = 0.0;
      for (double v : lam) s += v;
      sums.push_back(s);
    }
    // least-squares slope over the trajectory must be clearly positive
    const double n = double(sums.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < sums.size(); ++k) {
      sx += double(k);
      sy += sums[k];
      sxx += double(k) * double(k);
      sxy += double(k) * sums[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 0.001);
  }
}

TEST_SUITE_END();
