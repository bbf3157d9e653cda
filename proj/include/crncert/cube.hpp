#pragma once

#include <stdexcept>

#include "crncert/rational.hpp"
#include "crncert/simplex.hpp"

namespace crncert {

// The n x 2^n vertex matrix of the n-cube: column j read bottom-to-top as a
// binary string is the number j-1. Public indices are 1-based throughout to
// line up with the edge-pairing formula j(i,k).
class CubeMatrix {
 public:
  explicit CubeMatrix(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("cube dimension must be >= 1");
    if (n > 20) throw std::invalid_argument("cube dimension capped at 20");
  }

  int dim() const { return n_; }
  long cols() const { return 1L << n_; }

  /// B_{ij}, 1 <= i <= n, 1 <= j <= 2^n.
  int entry(int i, int j) const {
    check(i, j);
    return int((j - 1) >> (i - 1) & 1);
  }

  RatVec column(int j) const {
    check(1, j);
    RatVec v(n_);
    for (int i = 1; i <= n_; ++i) v[i - 1] = entry(i, j);
    return v;
  }

  RatMat as_matrix() const {
    RatMat b(n_, int(cols()));
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= cols(); ++j) b(i - 1, j - 1) = entry(i, j);
    return b;
  }

 private:
  void check(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > cols())
      throw std::out_of_range("cube matrix index out of range");
  }
  int n_;
};

inline CubeMatrix build_cube_matrix(int n) { return CubeMatrix(n); }

struct EdgePartner {
  long j = 0;    // 1-based partner column
  int sign = 0;  // sign(j - i); B_max - B_min = e_k
};

/// The column adjacent to column i along coordinate k.
inline EdgePartner edge_partner(long i, int k, int n) {
  if (k < 1 || k > n || i < 1 || i > (1L << n))
    throw std::out_of_range("edge_partner index out of range");
  long half = 1L << (k - 1);
  if ((i - 1) % (2 * half) >= half) return {i - half, -1};
  return {i + half, +1};
}

// No column lies in the convex hull of the others; decided per column by
// exact feasibility of  sum_{l != j} p_l B_l = B_j, sum p_l = 1, p >= 0.
inline bool verify_vertex_extremality(const RatMat& cols) {
  const int n = cols.rows(), w = cols.cols();
  for (int j = 0; j < w; ++j) {
    RatMat a(n + 1, w - 1);
    RatVec rhs(n + 1);
    int cc = 0;
    for (int l = 0; l < w; ++l) {
      if (l == j) continue;
      for (int i = 0; i < n; ++i) a(i, cc) = cols(i, l);
      a(n, cc) = 1;
      ++cc;
    }
    for (int i = 0; i < n; ++i) rhs[i] = cols(i, j);
    rhs[n] = 1;
    if (lp_feasible(a, rhs)) return false;  // j is a convex combination
  }
  return true;
}

inline bool verify_vertex_extremality(const CubeMatrix& b) {
  if (b.dim() > 6) throw std::invalid_argument("verify_vertex_extremality capped at n = 6");
  return verify_vertex_extremality(b.as_matrix());
}

}  // namespace crncert
