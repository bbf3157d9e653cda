#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "crncert/network.hpp"
#include "crncert/rational.hpp"

namespace crncert {

// Mass-action kinetics. The evaluation routines are templated on the scalar
// so the same closed forms run in double for simulation and in exact
// rationals for sign-level checks.
struct KineticModel {
  const ReactionNetwork* net = nullptr;
  RatVec kf, kr;  // kr entry unused for irreversible reactions

  static KineticModel unit_rates(const ReactionNetwork& net) {
    KineticModel m;
    m.net = &net;
    m.kf.assign(net.reaction_count(), Rat(1));
    m.kr.assign(net.reaction_count(), Rat(1));
    for (int j = 0; j < net.reaction_count(); ++j)
      if (!net.reactions[j].reversible) m.kr[j] = 0;
    return m;
  }

  void validate() const {
    if (!net) throw std::invalid_argument("kinetic model without network");
    if (int(kf.size()) != net->reaction_count() || int(kr.size()) != net->reaction_count())
      throw std::invalid_argument("rate constant count mismatch");
    for (int j = 0; j < net->reaction_count(); ++j) {
      if (kf[j] <= 0) throw std::invalid_argument("nonpositive forward rate constant");
      if (net->reactions[j].reversible && kr[j] <= 0)
        throw std::invalid_argument("nonpositive reverse rate constant");
      if (!net->reactions[j].reversible && kr[j] != 0)
        throw std::invalid_argument("irreversible reaction with reverse rate constant");
    }
  }
};

namespace detail {

template <typename T>
T scalar_of(const Rat& q);
template <>
inline Rat scalar_of<Rat>(const Rat& q) {
  return q;
}
template <>
inline double scalar_of<double>(const Rat& q) {
  return q.get_d();
}

template <typename T>
T ipow(const T& x, long e) {
  T r(1);
  for (long i = 0; i < e; ++i) r = r * x;
  return r;
}

template <typename T>
T side_product(const std::vector<Term>& side, const std::vector<T>& x) {
  T p(1);
  for (const auto& t : side) p = p * ipow(x[t.species], t.coeff);
  return p;
}

}  // namespace detail

/// v_j(x) = kf_j prod_left x^a - [reversible] kr_j prod_right x^b.
template <typename T>
std::vector<T> rate_vector(const KineticModel& model, const std::vector<T>& x) {
  const ReactionNetwork& net = *model.net;
  if (int(x.size()) != net.species_count()) throw std::invalid_argument("rate_vector dimension mismatch");
  for (const auto& xi : x)
    if (xi < 0) throw std::domain_error("negative concentration");
  std::vector<T> v(net.reaction_count());
  for (int j = 0; j < net.reaction_count(); ++j) {
    const Reaction& r = net.reactions[j];
    v[j] = detail::scalar_of<T>(model.kf[j]) * detail::side_product(r.left, x);
    if (r.reversible) v[j] = v[j] - detail::scalar_of<T>(model.kr[j]) * detail::side_product(r.right, x);
  }
  return v;
}

/// V(x): row j = reaction, column i = species.
template <typename T>
std::vector<std::vector<T>> jacobian(const KineticModel& model, const std::vector<T>& x) {
  const ReactionNetwork& net = *model.net;
  if (int(x.size()) != net.species_count()) throw std::invalid_argument("jacobian dimension mismatch");
  for (const auto& xi : x)
    if (xi < 0) throw std::domain_error("negative concentration");
  std::vector<std::vector<T>> V(net.reaction_count(), std::vector<T>(net.species_count(), T(0)));
  auto add_side = [&](int j, const std::vector<Term>& side, const T& k, int sign) {
    for (const auto& t : side) {
      T d = k * T(sign) * T(t.coeff) * detail::ipow(x[t.species], t.coeff - 1);
      for (const auto& o : side)
        if (o.species != t.species) d = d * detail::ipow(x[o.species], o.coeff);
      V[j][t.species] = V[j][t.species] + d;
    }
  };
  for (int j = 0; j < net.reaction_count(); ++j) {
    const Reaction& r = net.reactions[j];
    add_side(j, r.left, detail::scalar_of<T>(model.kf[j]), +1);
    if (r.reversible) add_side(j, r.right, detail::scalar_of<T>(model.kr[j]), -1);
  }
  return V;
}

inline RatMat jacobian_matrix(const KineticModel& model, const RatVec& x) {
  auto V = jacobian<Rat>(model, x);
  RatMat M(int(V.size()), V.empty() ? 0 : int(V[0].size()));
  for (int j = 0; j < M.rows(); ++j)
    for (int i = 0; i < M.cols(); ++i) M(j, i) = V[j][i];
  return M;
}

enum class QualClass { Q, Q0, Q1 };

// Q:  sign(N) = sign(M) everywhere.
// Q0: weak agreement, zeros of M forced on N.
// Q1: weak agreement only where M is nonzero.
inline bool qualitative_class_member(const RatMat& m, const RatMat& n, QualClass tag) {
  if (m.rows() != n.rows() || m.cols() != n.cols())
    throw std::invalid_argument("qualitative_class_member: dimension mismatch");
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      int sm = sgn(m(i, j)), sn = sgn(n(i, j));
      switch (tag) {
        case QualClass::Q:
          if (sn != sm) return false;
          break;
        case QualClass::Q0:
          if (sm == 0 ? sn != 0 : sn * sm < 0) return false;
          break;
        case QualClass::Q1:
          if (sm != 0 && sn * sm < 0) return false;
          break;
      }
    }
  return true;
}

// Sign pattern of the mass-action Jacobian at interior points, read off the
// network alone: dv_j/dx_i is positive for left species, negative for right
// species of a reversible reaction, zero otherwise.
inline RatMat structural_jacobian_signs(const ReactionNetwork& net) {
  RatMat s(net.reaction_count(), net.species_count());
  for (int j = 0; j < net.reaction_count(); ++j) {
    const Reaction& r = net.reactions[j];
    for (const auto& t : r.left) s(j, t.species) = 1;
    if (r.reversible)
      for (const auto& t : r.right) s(j, t.species) = -1;
  }
  return s;
}

/// Theorem-4 condition 2 decided structurally: V(x) in Q0(-Gamma^T) for all x >= 0.
inline bool kinetics_sign_class_ok(const ReactionNetwork& net) {
  RatMat gamma = stoichiometric_matrix(net);
  RatMat neg_gt(gamma.cols(), gamma.rows());
  for (int i = 0; i < gamma.rows(); ++i)
    for (int j = 0; j < gamma.cols(); ++j) neg_gt(j, i) = -gamma(i, j);
  return qualitative_class_member(neg_gt, structural_jacobian_signs(net), QualClass::Q0);
}

}  // namespace crncert
