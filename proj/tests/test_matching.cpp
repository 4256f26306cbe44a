#include "doctest.h"

#include <algorithm>
#include <set>

#include "core/matching.hpp"
#include "core/rng.hpp"
#include "test_helpers.hpp"

using namespace qsw;

namespace {

std::set<EdgeList> asSet(const std::vector<EdgeList>& ms) {
  return {ms.begin(), ms.end()};
}

}  // namespace

TEST_SUITE_BEGIN("matching");

TEST_CASE("triangle with all links active has four matchings") {
  Topology t(3);
  const auto ms = enumerateMatchings(t, t.fullState());
  CHECK(ms.size() == 4);  // empty + the three single edges
  CHECK(asSet(ms) == std::set<EdgeList>{{}, {0}, {1}, {2}});
}

TEST_CASE("K4 has ten matchings") {
  // brute-force subset count: 1 empty + 6 singles + 3 perfect
  Topology t(4);
  const auto ms = enumerateMatchings(t, t.fullState());
  CHECK(ms.size() == 10);
  for (const auto& m : ms) CHECK(t.isMatching(m));
  CHECK(asSet(ms) == asSet(test::oracleMatchings(t, t.fullState())));
}

TEST_CASE("inactive clients disable their edges") {
  Topology t(4);
  const auto ms = enumerateMatchings(t, 0b0011);  // only clients 0 and 1 active
  CHECK(asSet(ms) == std::set<EdgeList>{{}, {uint16_t(t.indexOf(0, 1))}});
}

TEST_CASE("action sets grow monotonically with the state") {
  Topology t(5);
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const StateMask s = StateMask(rng.next()) & t.fullState();
    const StateMask extra = StateMask(rng.next()) & t.fullState();
    const auto small = asSet(enumerateMatchings(t, s));
    const auto large = asSet(enumerateMatchings(t, s | extra));
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("max weight: frozen examples") {
  SUBCASE("two disjoint heavy edges at N=4") {
    Topology t(4);
    const std::vector<double> w = {3, 1, 1, 1, 1, 3};
    const auto wm = maxWeightMatching(t, t.fullState(), w);
    CHECK(wm.value == 6.0);  // brute force over all 10 matchings
    CHECK(wm.edges == EdgeList{0, 5});
  }
  SUBCASE("single dominant edge in the triangle") {
    Topology t(3);
    const std::vector<double> w = {5, 1, 1};
    const auto wm = maxWeightMatching(t, t.fullState(), w);
    CHECK(wm.value == 5.0);  // brute force over the 4 matchings
    CHECK(wm.edges == EdgeList{0});
  }
  SUBCASE("all-zero weights give the empty matching") {
    Topology t(4);
    const std::vector<double> w(6, 0.0);
    const auto wm = maxWeightMatching(t, t.fullState(), w);
    CHECK(wm.edges.empty());
    CHECK(wm.value == 0.0);
  }
  SUBCASE("ties break to the lexicographically smallest served vector") {
    Topology t(3);
    const std::vector<double> w = {1, 1, 1};
    // the three singles tie at value 1; served vector (0,0,1) is smallest
    CHECK(maxWeightMatching(t, t.fullState(), w).edges == EdgeList{2});
  }
  SUBCASE("negative weights never serve") {
    Topology t(3);
    const std::vector<double> w = {-1, -5, -0.5};
    CHECK(maxWeightMatching(t, t.fullState(), w).edges.empty());
  }
}

TEST_CASE("max weight equals the enumeration oracle exactly") {
  Rng rng(7);
  for (int n = 2; n <= 5; ++n) {
    Topology t(n);
    MatchingOracle oracle(t);
    for (StateMask s = 0; s <= t.fullState(); ++s) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto w = test::randomWeights(rng, t.requestTypes());
        const auto wm = oracle.maxWeight(s, w);
        CHECK(wm.value == test::oracleMaxWeight(t, s, w));
        CHECK(t.isMatching(wm.edges));
        for (uint16_t e : wm.edges) {
          auto [i, j] = t.pairOf(e);
          CHECK(bool(s >> i & 1));
          CHECK(bool(s >> j & 1));
          CHECK(w[e] > 0.0);
        }
      }
    }
  }
}

TEST_CASE("served lexicographic order") {
  CHECK(servedLexLess({}, {0}));
  CHECK(servedLexLess({1}, {0}));     // (0,1,..) < (1,0,..)
  CHECK(servedLexLess({0}, {0, 3}));  // prefix is smaller
  CHECK_FALSE(servedLexLess({0}, {0}));
  CHECK_FALSE(servedLexLess({0, 3}, {0}));
}

TEST_SUITE_END();
