#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace crncert {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;

/// Canonical "p" / "p/q" form, q > 0.
inline std::string rat_str(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat parse_rat(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}
  RatMat(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = int(rows.size());
    cols_ = rows_ ? int(rows.begin()->size()) : 0;
    a_.reserve(std::size_t(rows_) * cols_);
    for (const auto& r : rows) {
      if (int(r.size()) != cols_) throw std::invalid_argument("ragged matrix literal");
      for (long v : r) a_.emplace_back(v);
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  RatVec col(int j) const {
    RatVec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  RatVec row(int i) const {
    RatVec v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  static RatMat identity(int n) {
    RatMat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
  }

  RatMat transpose() const {
    RatMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const RatMat& x, const RatMat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const RatMat& x, const RatMat& y) { return !(x == y); }

 private:
  int rows_, cols_;
  RatVec a_;
};

inline RatMat operator*(const RatMat& x, const RatMat& y) {
  if (x.cols() != y.rows()) throw std::invalid_argument("matmul dimension mismatch");
  RatMat z(x.rows(), y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0) continue;
      for (int j = 0; j < y.cols(); ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

inline RatVec operator*(const RatMat& x, const RatVec& v) {
  if (x.cols() != int(v.size())) throw std::invalid_argument("matvec dimension mismatch");
  RatVec z(x.rows());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      if (x(i, j) != 0 && v[j] != 0) z[i] += x(i, j) * v[j];
  return z;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector add dimension mismatch");
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sub dimension mismatch");
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline RatVec operator*(const Rat& s, const RatVec& a) {
  RatVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec unit_vec(int dim, int k) {
  RatVec e(dim);
  e[k] = 1;
  return e;
}

inline bool is_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace crncert
