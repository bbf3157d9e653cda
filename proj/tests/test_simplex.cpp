#include <catch2/catch_amalgamated.hpp>

#include "crncert/simplex.hpp"
#include "helpers.hpp"

using namespace crncert;

TEST_CASE("lp_min solves a textbook problem exactly") {
  // min x1 + x2  s.t.  x1 + 2 x2 = 4, x >= 0  -> x = (0,2), obj 2
  RatMat a{{1, 2}};
  LpResult r = lp_min(a, {Rat(4)}, {Rat(1), Rat(1)});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == 2);
  CHECK(r.x == RatVec{Rat(0), Rat(2)});
}

TEST_CASE("infeasible and unbounded problems are classified") {
  RatMat a{{1, 1}};
  CHECK(lp_min(a, {Rat(-1)}, {Rat(0), Rat(0)}).status == LpStatus::Infeasible);

  // min -x1 s.t. x1 - x2 = 0: x1 arbitrary large
  RatMat b{{1, -1}};
  CHECK(lp_min(b, {Rat(0)}, {Rat(-1), Rat(0)}).status == LpStatus::Unbounded);
}

TEST_CASE("redundant rows are tolerated") {
  RatMat a{{1, 1}, {2, 2}};
  RatVec b{Rat(2), Rat(4)};
  LpResult r = lp_min(a, b, {Rat(1), Rat(0)});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == 0);
}

TEST_CASE("lp_feasible witnesses satisfy the constraints") {
  std::mt19937_64 rng(21);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 1 + int(rng() % 3), n = 1 + int(rng() % 5);
    RatMat a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = testutil::random_rat(rng, 4, 3);
    RatVec b(m);
    if (trial % 2) {
      // feasible by construction: b = A z for a random z >= 0
      RatVec z(n);
      for (int j = 0; j < n; ++j) z[j] = testutil::random_nonneg_rat(rng, 4, 3);
      b = a * z;
    } else {
      for (int i = 0; i < m; ++i) b[i] = testutil::random_rat(rng, 5, 3);
    }
    RatVec w;
    bool ok = lp_feasible(a, b, &w);
    if (trial % 2) CHECK(ok);
    if (ok) {
      ++feasible_seen;
      REQUIRE(int(w.size()) == n);
      for (const auto& q : w) CHECK(q >= 0);
      CHECK(a * w == b);
    } else {
      ++infeasible_seen;
    }
  }
  CHECK(feasible_seen > 0);
  CHECK(infeasible_seen > 0);
}

TEST_CASE("optimal objectives are invariant under row scaling") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 2, n = 4;
    RatMat a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = testutil::random_rat(rng, 3, 2);
    RatVec z(n);
    for (int j = 0; j < n; ++j) z[j] = testutil::random_nonneg_rat(rng, 3, 2);
    RatVec b = a * z;
    RatVec c(n);
    for (int j = 0; j < n; ++j) c[j] = testutil::random_nonneg_rat(rng, 3, 2);
    LpResult r1 = lp_min(a, b, c);
    REQUIRE(r1.status == LpStatus::Optimal);
    CHECK(r1.objective <= dot(c, z));  // z is feasible

    RatMat a2 = a;
    RatVec b2 = b;
    for (int j = 0; j < n; ++j) a2(0, j) *= Rat(-3);
    b2[0] *= Rat(-3);
    LpResult r2 = lp_min(a2, b2, c);
    REQUIRE(r2.status == LpStatus::Optimal);
    CHECK(r2.objective == r1.objective);
  }
}

TEST_CASE("lp_max negates consistently") {
  RatMat a{{1, 1}};
  LpResult r = lp_max(a, {Rat(3)}, {Rat(2), Rat(1)});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == 6);
}
