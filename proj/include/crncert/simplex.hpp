#pragma once

#include <vector>

#include "crncert/linalg.hpp"
#include "crncert/rational.hpp"

namespace crncert {

// Exact phase-one/phase-two simplex over the rationals with Bland's rule,
// for standard-form problems  min c^T x  s.t.  Ax = b, x >= 0.

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec x;       // valid when Optimal
  Rat objective;  // valid when Optimal
};

namespace detail {

class Tableau {
 public:
  // columns: nvars variables then rhs
  Tableau(int m, int nvars) : m_(m), nvars_(nvars), t_(m, RatVec(nvars + 1)), basis_(m, -1) {}

  Rat& at(int i, int j) { return t_[i][j]; }
  Rat& rhs(int i) { return t_[i][nvars_]; }
  int rows() const { return m_; }
  int vars() const { return nvars_; }
  int basis(int i) const { return basis_[i]; }
  void set_basis(int i, int v) { basis_[i] = v; }

  void pivot(int row, int col) {
    Rat inv = 1 / t_[row][col];
    for (auto& v : t_[row]) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == row || t_[i][col] == 0) continue;
      Rat f = t_[i][col];
      for (int j = 0; j <= nvars_; ++j) t_[i][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  // Bland's rule: entering = lowest-index negative reduced cost, leaving =
  // lowest-index basic variable among the ratio-test minimisers. Terminates
  // without anti-cycling tolerances.
  LpStatus minimize(const RatVec& cost, int enter_limit = -1) {
    if (enter_limit < 0) enter_limit = nvars_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        Rat r = cost[j];
        for (int i = 0; i < m_; ++i)
          if (t_[i][j] != 0 && cost[basis_[i]] != 0) r -= cost[basis_[i]] * t_[i][j];
        if (r < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rat ratio = rhs(i) / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  void drop_row(int i) {
    t_.erase(t_.begin() + i);
    basis_.erase(basis_.begin() + i);
    --m_;
  }

 private:
  int m_, nvars_;
  std::vector<RatVec> t_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpResult lp_min(const RatMat& a, RatVec b, const RatVec& c) {
  const int m = a.rows(), n = a.cols();
  if (int(b.size()) != m || int(c.size()) != n)
    throw std::invalid_argument("lp dimension mismatch");

  detail::Tableau t(m, n + m);
  for (int i = 0; i < m; ++i) {
    Rat s = (b[i] < 0) ? -1 : 1;
    for (int j = 0; j < n; ++j) t.at(i, j) = s * a(i, j);
    t.at(i, n + i) = 1;
    t.rhs(i) = s * b[i];
    t.set_basis(i, n + i);
  }

  RatVec phase1(n + m + 1);
  for (int j = n; j < n + m; ++j) phase1[j] = 1;
  t.minimize(phase1);
  for (int i = 0; i < t.rows(); ++i)
    if (t.basis(i) >= n && t.rhs(i) != 0) return {LpStatus::Infeasible, {}, 0};

  // Drive remaining zero-level artificials out of the basis.
  for (int i = t.rows() - 1; i >= 0; --i) {
    if (t.basis(i) < n) continue;
    int piv = -1;
    for (int j = 0; j < n; ++j)
      if (t.at(i, j) != 0) {
        piv = j;
        break;
      }
    if (piv >= 0)
      t.pivot(i, piv);
    else
      t.drop_row(i);  // redundant constraint
  }

  RatVec phase2(n + m + 1);
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  LpStatus st = t.minimize(phase2, n);  // artificials may not re-enter
  if (st != LpStatus::Optimal) return {st, {}, 0};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(n, Rat(0));
  for (int i = 0; i < t.rows(); ++i)
    if (t.basis(i) < n) res.x[t.basis(i)] = t.rhs(i);
  res.objective = dot(c, res.x);
  return res;
}

inline LpResult lp_max(const RatMat& a, const RatVec& b, const RatVec& c) {
  RatVec neg(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
  LpResult r = lp_min(a, b, neg);
  if (r.status == LpStatus::Optimal) r.objective = -r.objective;
  return r;
}

/// Is {x >= 0 | Ax = b} nonempty?  Optionally returns a witness.
inline bool lp_feasible(const RatMat& a, const RatVec& b, RatVec* witness = nullptr) {
  LpResult r = lp_min(a, b, RatVec(a.cols(), Rat(0)));
  if (r.status != LpStatus::Optimal) return false;
  if (witness) *witness = r.x;
  return true;
}

}  // namespace crncert
