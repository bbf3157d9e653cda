#pragma once

// Shared oracles for the test suite. Everything here is implemented
// independently of the library routines it checks.

#include <random>
#include <vector>

#include "crncert/network.hpp"
#include "crncert/rational.hpp"

namespace testutil {

using crncert::Rat;
using crncert::RatMat;
using crncert::RatVec;

// Determinant by plain Gaussian elimination (exact).
inline Rat det(RatMat a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det: square only");
  const int n = a.rows();
  Rat d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) swap(a(p, j), a(c, j));
      d = -d;
    }
    d *= a(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rat f = a(i, c) / a(c, c);
      for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

// Cofactor oracle for the kernel of Gamma^T when Gamma is (n+1) x n of rank
// n: r_i = (-1)^i det(Gamma with row i removed) spans ker Gamma^T.
inline RatVec cofactor_kernel(const RatMat& gamma) {
  const int m = gamma.rows(), n = gamma.cols();
  if (m != n + 1) throw std::invalid_argument("cofactor_kernel: need (n+1) x n");
  RatVec r(m);
  for (int drop = 0; drop < m; ++drop) {
    RatMat sub(n, n);
    int ri = 0;
    for (int i = 0; i < m; ++i) {
      if (i == drop) continue;
      for (int j = 0; j < n; ++j) sub(ri, j) = gamma(i, j);
      ++ri;
    }
    r[drop] = (drop % 2 ? Rat(-1) : Rat(1)) * det(sub);
  }
  return r;
}

inline Rat random_rat(std::mt19937_64& rng, long num_range = 6, long den_range = 4) {
  std::uniform_int_distribution<long> num(-num_range, num_range), den(1, den_range);
  Rat q(num(rng), den(rng));
  q.canonicalize();  // the two-argument mpq constructor does not reduce
  return q;
}

inline Rat random_nonneg_rat(std::mt19937_64& rng, long num_range = 6, long den_range = 4) {
  std::uniform_int_distribution<long> num(0, num_range), den(1, den_range);
  Rat q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// All-pairs reachability by boolean closure; the SCC oracle.
inline std::vector<std::vector<bool>> reach_closure(const std::vector<std::vector<int>>& adj) {
  const int n = int(adj.size());
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) {
    r[v][v] = true;
    for (int w : adj[v]) r[v][w] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace testutil
