#pragma once

#include <cstddef>
#include <vector>

#include "nashtk/errors.hpp"
#include "nashtk/rational.hpp"

namespace nashtk {

using RatVector = std::vector<Rational>;

// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(std::size_t rows, std::size_t cols, const Rational& fill = Rational())
      : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const {
    return d_[i * cols_ + j];
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> d_;
};

inline Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw InputError("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A y (column vector result, length rows).
inline RatVector mat_vec(const RatMatrix& m, const RatVector& y) {
  if (m.cols() != y.size()) throw InputError("mat_vec: dimension mismatch");
  RatVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m.at(i, j) * y[j];
  return r;
}

// x^T A (row vector result, length cols).
inline RatVector vec_mat(const RatVector& x, const RatMatrix& m) {
  if (m.rows() != x.size()) throw InputError("vec_mat: dimension mismatch");
  RatVector r(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) r[j] += x[i] * m.at(i, j);
  return r;
}

inline Rational vec_sum(const RatVector& v) {
  Rational s;
  for (const auto& e : v) s += e;
  return s;
}

inline bool is_probability_vector(const RatVector& v) {
  if (v.empty()) return false;
  for (const auto& e : v)
    if (e < Rational(0)) return false;
  return vec_sum(v) == Rational(1);
}

inline Rational min_entry(const RatMatrix& m) {
  Rational r = m.at(0, 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = min(r, m.at(i, j));
  return r;
}

inline Rational max_entry(const RatMatrix& m) {
  Rational r = m.at(0, 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = max(r, m.at(i, j));
  return r;
}

}  // namespace nashtk
