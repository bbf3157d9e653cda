#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "crncert/cube.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/linalg.hpp"
#include "crncert/rational.hpp"
#include "crncert/simplex.hpp"

namespace crncert {

// Lemma-6(ii) covector: the primitive integer generator of ker Gamma^T,
// signed so r^T c > 0. Requires the (n+1) x n certification setting where
// the kernel is one-dimensional.
inline RatVec kernel_covector(const RatMat& gamma, const RatVec& c) {
  auto basis = nullspace(gamma.transpose());
  if (basis.size() != 1)
    throw std::invalid_argument("kernel_covector: dim ker Gamma^T = " + std::to_string(basis.size()) +
                                ", expected 1");
  RatVec r = primitive_integer(basis[0]);
  Rat rc = dot(r, c);
  if (rc == 0) throw std::invalid_argument("kernel_covector: c lies in Im Gamma");
  if (rc < 0)
    for (auto& q : r) q = -q;
  return r;
}

// The cubic cone K = {Lambda z | z >= 0} with Lambda = c 1^T + Gamma B.
struct CubicCone {
  RatMat gamma;   // m x n, rank n, m > n
  RatVec c;       // not in Im Gamma
  RatMat lambda;  // m x 2^n
  RatVec r;       // ker Gamma^T, r^T c > 0
  int m = 0, n = 0;

  RatVec generator(long i) const { return lambda.col(int(i - 1)); }  // 1-based
};

inline CubicCone build_cubic_cone(const RatMat& gamma, const RatVec& c) {
  CubicCone cone;
  cone.m = gamma.rows();
  cone.n = gamma.cols();
  if (cone.m <= cone.n) throw std::invalid_argument("build_cubic_cone: need m > n");
  if (int(c.size()) != cone.m) throw std::invalid_argument("build_cubic_cone: c dimension mismatch");
  if (rank(gamma) != cone.n) throw std::invalid_argument("build_cubic_cone: Gamma is rank deficient");
  if (in_column_space(gamma, c)) throw std::invalid_argument("build_cubic_cone: c lies in Im Gamma");
  cone.gamma = gamma;
  cone.c = c;

  CubeMatrix b(cone.n);
  cone.lambda = RatMat(cone.m, int(b.cols()));
  for (int j = 1; j <= b.cols(); ++j) {
    RatVec col = c + gamma * b.column(j);
    for (int i = 0; i < cone.m; ++i) cone.lambda(i, j - 1) = col[i];
  }

  if (cone.m == cone.n + 1) {
    cone.r = kernel_covector(gamma, c);
  } else {
    // any r in ker Gamma^T with r^T c > 0: combine a kernel basis weighted
    // by its inner products with c
    auto basis = nullspace(gamma.transpose());
    cone.r.assign(cone.m, Rat(0));
    for (const auto& v : basis) {
      Rat g = dot(v, c);
      if (g != 0) cone.r = cone.r + g * v;
    }
    cone.r = primitive_integer(cone.r);
    if (dot(cone.r, c) < 0)
      for (auto& q : cone.r) q = -q;
  }
  return cone;
}

struct RightInverseWitness {
  RatMat p;  // 2^n x m, entrywise >= 0, Lambda P = I
};

/// Theorem-4 condition 1(a): solve Lambda z = e_i, z >= 0 column by column.
inline std::optional<RightInverseWitness> find_nonneg_right_inverse(const RatMat& lambda) {
  const int m = lambda.rows(), w = lambda.cols();
  RightInverseWitness wit{RatMat(w, m)};
  for (int i = 0; i < m; ++i) {
    RatVec z;
    if (!lp_feasible(lambda, unit_vec(m, i), &z)) return std::nullopt;
    for (int l = 0; l < w; ++l) wit.p(l, i) = z[l];
  }
  return wit;
}

struct DiagonalRescaleWitness {
  RatVec d;  // positive diagonal of D; D Lambda is a (-1,0,1)-matrix
};

// Theorem-4 condition 1(b): exists iff within each row all nonzero entries of
// Lambda share one absolute value.
inline std::optional<DiagonalRescaleWitness> find_diagonal_rescale(const RatMat& lambda) {
  DiagonalRescaleWitness wit{RatVec(lambda.rows(), Rat(1))};
  for (int i = 0; i < lambda.rows(); ++i) {
    Rat v = 0;
    for (int j = 0; j < lambda.cols(); ++j) {
      Rat a = abs(lambda(i, j));
      if (a == 0) continue;
      if (v == 0)
        v = a;
      else if (a != v)
        return std::nullopt;
    }
    if (v != 0) wit.d[i] = 1 / v;
  }
  return wit;
}

inline bool cone_member(const CubicCone& cone, const RatVec& x) {
  if (int(x.size()) != cone.m) throw std::invalid_argument("cone_member: dimension mismatch");
  return lp_feasible(cone.lambda, x);
}

struct InteriorResult {
  bool interior = false;
  Rat margin;  // achieved delta
};

// x in int K iff  max { delta | Lambda z = x - delta Lambda 1, z >= 0 } > 0.
// delta is bounded above since K is pointed.
inline InteriorResult cone_interior_member(const CubicCone& cone, const RatVec& x) {
  if (int(x.size()) != cone.m) throw std::invalid_argument("cone_interior_member: dimension mismatch");
  const int w = cone.lambda.cols();
  RatMat a(cone.m, w + 1);
  for (int i = 0; i < cone.m; ++i) {
    for (int j = 0; j < w; ++j) {
      a(i, j) = cone.lambda(i, j);
      a(i, w) += cone.lambda(i, j);  // column for delta: Lambda 1
    }
  }
  RatVec obj(w + 1);
  obj[w] = 1;
  LpResult r = lp_max(a, x, obj);
  if (r.status == LpStatus::Infeasible) return {false, Rat(0)};
  if (r.status == LpStatus::Unbounded)
    throw std::logic_error("cone_interior_member: unbounded margin on a pointed cone");
  return {r.objective > 0, r.objective};
}

struct QuasipositivityWitness {
  RatMat alpha_ik;  // 2^n x n, alpha_{ik} = |V^k Lambda_i|
  RatVec alpha_i;   // row sums
  Rat alpha;        // max_i alpha_i
};

// Constructive alpha of Theorem 4 part 4a. The edge identity
//   Gamma V Lambda_i + alpha_i Lambda_i = sum_k alpha_{ik} Lambda_{j(i,k)}
// is re-verified exactly for every generator before returning.
inline QuasipositivityWitness quasipositivity_witness(const CubicCone& cone, const RatMat& v) {
  if (v.rows() != cone.n || v.cols() != cone.m)
    throw std::invalid_argument("quasipositivity_witness: V must be n x m");
  RatMat neg_gt(cone.n, cone.m);
  for (int i = 0; i < cone.m; ++i)
    for (int j = 0; j < cone.n; ++j) neg_gt(j, i) = -cone.gamma(i, j);
  if (!qualitative_class_member(neg_gt, v, QualClass::Q0))
    throw std::invalid_argument("quasipositivity_witness: V not in Q0(-Gamma^T)");

  const long w = cone.lambda.cols();
  QuasipositivityWitness wit{RatMat(int(w), cone.n), RatVec(w), Rat(0)};
  RatMat gv = cone.gamma * v;
  for (long i = 1; i <= w; ++i) {
    RatVec li = cone.generator(i);
    RatVec lhs = gv * li;
    RatVec rhs(cone.m);
    for (int k = 1; k <= cone.n; ++k) {
      Rat vk_li = 0;
      for (int s = 0; s < cone.m; ++s) vk_li += v(k - 1, s) * li[s];
      Rat a = abs(vk_li);
      wit.alpha_ik(int(i - 1), k - 1) = a;
      wit.alpha_i[i - 1] += a;
      rhs = rhs + a * cone.generator(edge_partner(i, k, cone.n).j);
    }
    lhs = lhs + wit.alpha_i[i - 1] * li;
    if (lhs != rhs)
      throw std::logic_error("quasipositivity identity violated at generator " + std::to_string(i));
    if (wit.alpha_i[i - 1] > wit.alpha) wit.alpha = wit.alpha_i[i - 1];
  }
  return wit;
}

struct QuasipositivityCheck {
  bool quasipositive = false;
  Rat alpha;  // smallest uniform alpha over the generators, when quasipositive
};

// J is K-quasipositive iff for each generator some alpha >= 0 gives
// (J + alpha I) Lambda_i in K; the feasible alpha set per generator is
// upward closed, so max of the per-generator minima is a uniform alpha
// valid on all of K by conic combination.
inline QuasipositivityCheck check_K_quasipositive(const CubicCone& cone, const RatMat& j) {
  if (j.rows() != cone.m || j.cols() != cone.m)
    throw std::invalid_argument("check_K_quasipositive: J must be m x m");
  const int w = cone.lambda.cols();
  QuasipositivityCheck res;
  res.alpha = 0;
  for (long i = 1; i <= w; ++i) {
    RatVec li = cone.generator(i);
    // variables (z, alpha): Lambda z - alpha Lambda_i = J Lambda_i, minimize alpha
    RatMat a(cone.m, w + 1);
    for (int s = 0; s < cone.m; ++s) {
      for (int l = 0; l < w; ++l) a(s, l) = cone.lambda(s, l);
      a(s, w) = -li[s];
    }
    RatVec obj(w + 1);
    obj[w] = 1;
    LpResult lp = lp_min(a, j * li, obj);
    if (lp.status != LpStatus::Optimal) return {false, Rat(0)};
    if (lp.objective > res.alpha) res.alpha = lp.objective;
  }
  res.quasipositive = true;
  return res;
}

namespace detail {

// generator indices (1-based) of the cube face with coordinates fixed per
// assignment: 0 / 1 / -1 (free)
inline std::vector<long> face_generators(int n, const std::vector<int>& assign) {
  std::vector<long> gens;
  for (long j = 1; j <= (1L << n); ++j) {
    bool ok = true;
    for (int k = 1; k <= n && ok; ++k) {
      int bit = int((j - 1) >> (k - 1) & 1);
      if (assign[k - 1] >= 0 && bit != assign[k - 1]) ok = false;
    }
    if (ok) gens.push_back(j);
  }
  return gens;
}

}  // namespace detail

// K-irreducibility of a K-positive M by exhaustive enumeration of the 3^n - 1
// nontrivial cube faces: M is K-irreducible iff no such face F satisfies
// M(F) subset of F.
inline bool check_K_irreducible(const CubicCone& cone, const RatMat& mat) {
  if (cone.n > 5) throw std::invalid_argument("check_K_irreducible capped at n = 5");
  const int w = cone.lambda.cols();
  for (int i = 1; i <= w; ++i)
    if (!cone_member(cone, mat * cone.generator(i)))
      throw std::invalid_argument("check_K_irreducible: M is not K-positive");

  std::vector<int> assign(cone.n, -1);
  long total = 1;
  for (int k = 0; k < cone.n; ++k) total *= 3;
  for (long code = 0; code < total; ++code) {
    long t = code;
    bool all_free = true;
    for (int k = 0; k < cone.n; ++k) {
      int d = int(t % 3);
      t /= 3;
      assign[k] = d - 1;  // -1 free, 0, 1
      if (assign[k] >= 0) all_free = false;
    }
    if (all_free) continue;  // the face K itself
    auto gens = detail::face_generators(cone.n, assign);
    RatMat lf(cone.m, int(gens.size()));
    for (std::size_t g = 0; g < gens.size(); ++g) {
      RatVec col = cone.generator(gens[g]);
      for (int s = 0; s < cone.m; ++s) lf(s, int(g)) = col[s];
    }
    bool invariant = true;
    for (long gi : gens)
      if (!lp_feasible(lf, mat * cone.generator(gi))) {
        invariant = false;
        break;
      }
    if (invariant) return false;
  }
  return true;
}

}  // namespace crncert
