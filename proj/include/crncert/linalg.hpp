#pragma once

#include <optional>
#include <vector>

#include "crncert/rational.hpp"

namespace crncert {

/// Reduced row echelon form in place; returns pivot column per pivot row.
inline std::vector<int> rref(RatMat& a) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < a.cols(); ++j) swap(a(p, j), a(r, j));
    Rat inv = 1 / a(r, c);
    for (int j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(RatMat a) { return int(rref(a).size()); }

/// Basis of {x | Ax = 0}.
inline std::vector<RatVec> nullspace(RatMat a) {
  std::vector<int> pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (int c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    RatVec v(a.cols());
    v[c] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(int(r), c);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Any particular solution of Ax = b, or nullopt when inconsistent.
inline std::optional<RatVec> solve_consistent(const RatMat& a, const RatVec& b) {
  if (a.rows() != int(b.size())) throw std::invalid_argument("solve dimension mismatch");
  RatMat aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  std::vector<int> pivots = rref(aug);
  for (int c : pivots)
    if (c == a.cols()) return std::nullopt;
  RatVec x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(int(r), a.cols());
  return x;
}

inline bool in_column_space(const RatMat& a, const RatVec& b) {
  return solve_consistent(a, b).has_value();
}

/// Scale a nonzero rational vector to integer entries with gcd 1, sign preserved.
inline RatVec primitive_integer(const RatVec& v) {
  mpz_class l = 1;
  for (const auto& q : v) {
    Rat c = q;
    c.canonicalize();
    mpz_class d = c.get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    l = l / g * d;
  }
  RatVec w(v.size());
  mpz_class g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i] * Rat(l);
    w[i].canonicalize();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w[i].get_num().get_mpz_t());
  }
  if (g == 0) throw std::invalid_argument("primitive_integer: zero vector");
  for (auto& q : w) {
    q /= Rat(g);
    q.canonicalize();
  }
  return w;
}

}  // namespace crncert
