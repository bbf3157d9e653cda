#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crncert/cone.hpp"
#include "crncert/network.hpp"
#include "helpers.hpp"

using namespace crncert;

namespace {

CubicCone family_cone(int k) {
  RatMat gamma = stoichiometric_matrix(family_network(k));
  return build_cubic_cone(gamma, unit_vec(k + 1, k - 1));  // c = e_{k} in 1-based terms
}

RatMat random_q0_matrix(const RatMat& gamma, std::mt19937_64& rng) {
  // random member of Q0(-Gamma^T)
  RatMat v(gamma.cols(), gamma.rows());
  for (int i = 0; i < gamma.rows(); ++i)
    for (int j = 0; j < gamma.cols(); ++j) {
      int s = sgn(-gamma(i, j));
      if (s != 0) v(j, i) = Rat(s) * testutil::random_nonneg_rat(rng, 5, 3);
    }
  return v;
}

}  // namespace

TEST_CASE("kernel covector matches the cofactor oracle for the family") {
  for (int k = 2; k <= 8; ++k) {
    CubicCone cone = family_cone(k);
    RatVec oracle = primitive_integer(testutil::cofactor_kernel(cone.gamma));
    if (dot(oracle, cone.c) < 0)
      for (auto& q : oracle) q = -q;
    CHECK(cone.r == oracle);
    CHECK(is_zero(cone.gamma.transpose() * cone.r));
    CHECK(dot(cone.r, cone.c) > 0);
  }
  CHECK(family_cone(2).r == RatVec{Rat(2), Rat(1), Rat(1)});
  CHECK(family_cone(3).r == RatVec{Rat(2), Rat(1), Rat(1), Rat(1)});
}

TEST_CASE("cone construction rejects degenerate inputs") {
  RatMat wide{{1, 0}, {0, 1}};  // m = n
  CHECK_THROWS_AS(build_cubic_cone(wide, RatVec{Rat(1), Rat(0)}), std::invalid_argument);
  RatMat rank_def{{1, 1}, {1, 1}, {0, 0}};
  CHECK_THROWS_AS(build_cubic_cone(rank_def, unit_vec(3, 2)), std::invalid_argument);
  RatMat g{{1, 0}, {0, 1}, {0, 0}};
  CHECK_THROWS_AS(build_cubic_cone(g, RatVec{Rat(1), Rat(1), Rat(0)}), std::invalid_argument);  // c in Im
  CHECK_NOTHROW(build_cubic_cone(g, unit_vec(3, 2)));
}

TEST_CASE("r dualizes every generator to the same positive value") {
  for (int k = 2; k <= 6; ++k) {
    CubicCone cone = family_cone(k);
    Rat rc = dot(cone.r, cone.c);
    CHECK(rc > 0);
    for (long j = 1; j <= cone.lambda.cols(); ++j) CHECK(dot(cone.r, cone.generator(j)) == rc);
  }
}

TEST_CASE("generator columns are extreme rays for k <= 4") {
  for (int k = 2; k <= 4; ++k) {
    CubicCone cone = family_cone(k);
    // scale-invariant extremality via the convex-combination test on the
    // dual-normalized generators (all have r . Lambda_j equal already)
    CHECK(verify_vertex_extremality(cone.lambda));
  }
}

TEST_CASE("right inverse exists for the family and validates exactly") {
  for (int k = 2; k <= 8; ++k) {
    CubicCone cone = family_cone(k);
    auto p = find_nonneg_right_inverse(cone.lambda);
    REQUIRE(p.has_value());
    CHECK(cone.lambda * p->p == RatMat::identity(cone.m));
    for (int i = 0; i < p->p.rows(); ++i)
      for (int j = 0; j < p->p.cols(); ++j) CHECK(p->p(i, j) >= 0);
  }
}

TEST_CASE("right inverse is refused when some axis leaves the cone") {
  // c = e_1 gives generators (1,0) and (2,-2); e_2 is not a nonnegative
  // combination of them
  RatMat g{{1}, {-2}};
  CubicCone cone = build_cubic_cone(g, unit_vec(2, 0));
  auto p = find_nonneg_right_inverse(cone.lambda);
  CHECK(!p.has_value());
}

TEST_CASE("diagonal rescale witnesses") {
  for (int k = 2; k <= 6; ++k) {
    CubicCone cone = family_cone(k);
    auto d = find_diagonal_rescale(cone.lambda);
    REQUIRE(d.has_value());
    for (int i = 0; i < cone.m; ++i) {
      CHECK(d->d[i] > 0);
      for (int j = 0; j < cone.lambda.cols(); ++j) {
        Rat e = d->d[i] * cone.lambda(i, j);
        CHECK((e == 0 || e == 1 || e == -1));
      }
    }
  }
  RatMat bad{{1, 2}, {0, 1}, {1, 0}};  // row with two distinct magnitudes
  CHECK(!find_diagonal_rescale(bad).has_value());
}

TEST_CASE("membership and interior membership against constructed points") {
  std::mt19937_64 rng(61);
  for (int k = 2; k <= 4; ++k) {
    CubicCone cone = family_cone(k);
    Rat rr = dot(cone.r, cone.r);
    for (int trial = 0; trial < 40; ++trial) {
      // members: nonnegative combinations of the generators
      RatVec z(cone.lambda.cols());
      for (auto& q : z) q = testutil::random_nonneg_rat(rng, 4, 3);
      RatVec y = cone.lambda * z;
      CHECK(cone_member(cone, y));

      // non-members: force r . y < 0 (r is a supporting functional)
      RatVec bad(cone.m);
      for (auto& q : bad) q = testutil::random_rat(rng, 4, 3);
      Rat shift = (dot(cone.r, bad) + 1) / rr;
      bad = bad - shift * cone.r;
      CHECK(dot(cone.r, bad) < 0);
      CHECK(!cone_member(cone, bad));
    }
    // strict combinations are interior, single generators are not
    RatVec ones(cone.lambda.cols(), Rat(1));
    InteriorResult in = cone_interior_member(cone, cone.lambda * ones);
    CHECK(in.interior);
    CHECK(in.margin > 0);
    InteriorResult edge = cone_interior_member(cone, cone.generator(1));
    CHECK(!edge.interior);
    CHECK(!cone_interior_member(cone, RatVec(cone.m, Rat(0))).interior);
  }
}

TEST_CASE("quasipositivity identity holds for seeded Q0 matrices, k = 2..5") {
  std::mt19937_64 rng(62);
  for (int k = 2; k <= 5; ++k) {
    CubicCone cone = family_cone(k);
    for (int trial = 0; trial < 100; ++trial) {
      RatMat v = random_q0_matrix(cone.gamma, rng);
      // the witness routine re-verifies the identity exactly and throws on
      // any violation
      QuasipositivityWitness w = quasipositivity_witness(cone, v);
      for (long i = 1; i <= cone.lambda.cols(); ++i) {
        Rat row_sum = 0;
        for (int kk = 1; kk <= cone.n; ++kk) {
          RatVec vk(cone.m);
          for (int s = 0; s < cone.m; ++s) vk[s] = v(kk - 1, s);
          CHECK(w.alpha_ik(int(i - 1), kk - 1) == abs(dot(vk, cone.generator(i))));
          row_sum += w.alpha_ik(int(i - 1), kk - 1);
        }
        CHECK(w.alpha_i[i - 1] == row_sum);
      }
    }
  }
}

TEST_CASE("quasipositivity witness rejects matrices outside Q0") {
  CubicCone cone = family_cone(2);
  RatMat v(cone.n, cone.m);
  for (int j = 0; j < cone.m; ++j) v(0, j) = 1;  // wrong signs
  CHECK_THROWS_AS(quasipositivity_witness(cone, v), std::invalid_argument);
}

TEST_CASE("Gamma V is K-quasipositive and matches the constructive alpha bound") {
  std::mt19937_64 rng(63);
  for (int k = 2; k <= 4; ++k) {
    CubicCone cone = family_cone(k);
    for (int trial = 0; trial < 10; ++trial) {
      RatMat v = random_q0_matrix(cone.gamma, rng);
      QuasipositivityCheck chk = check_K_quasipositive(cone, cone.gamma * v);
      CHECK(chk.quasipositive);
      // the LP alpha never exceeds the constructive witness alpha
      CHECK(chk.alpha <= quasipositivity_witness(cone, v).alpha);
    }
  }
}

TEST_CASE("a rank-one inward collapse map is not K-quasipositive") {
  CubicCone cone = family_cone(2);
  // J y = -(r.y / r.c) w with w interior: J Lambda_i = -w for every
  // generator, and no alpha can pull -w back into K along an extreme ray
  RatVec ones(cone.lambda.cols(), Rat(1));
  RatVec w = cone.lambda * ones;
  Rat rc = dot(cone.r, cone.c);
  RatMat j(cone.m, cone.m);
  for (int a = 0; a < cone.m; ++a)
    for (int b = 0; b < cone.m; ++b) j(a, b) = -w[a] * cone.r[b] / (Rat(cone.lambda.cols()) * rc);
  QuasipositivityCheck chk = check_K_quasipositive(cone, j);
  CHECK(!chk.quasipositive);
}

TEST_CASE("K-irreducibility separates generic positive maps from the identity") {
  std::mt19937_64 rng(64);
  CubicCone cone = family_cone(2);
  // identity: K-positive, every face invariant
  CHECK(!check_K_irreducible(cone, RatMat::identity(cone.m)));

  // a I + Gamma V at a generic interior V with a at the witness alpha is
  // K-positive; irreducibility then reflects the connectivity of the network
  RatMat v = random_q0_matrix(cone.gamma, rng);
  bool generic = true;
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (-sgn(cone.gamma(j, i)) != sgn(v(i, j))) generic = false;
  if (generic) {
    QuasipositivityWitness wit = quasipositivity_witness(cone, v);
    RatMat m = cone.gamma * v;
    Rat a = wit.alpha + 1;
    for (int i = 0; i < cone.m; ++i) m(i, i) += a;
    CHECK(check_K_irreducible(cone, m));
  }
}
