#pragma once

// The boxplus calculus a [+]_p b = (a^p + b^p)^(1/p), varying-exponent
// sequence norms built from it, and the mixed-norm matrix inequalities.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "varnorm/errors.hpp"

namespace varnorm {

namespace detail {

// Beyond this value of p*|log x| the naive power overflows or underflows,
// so the update is max-factored instead.
inline constexpr double kLogDomainThreshold = 500.0;

// exp(t) with t <= 0 underflows to 0 below roughly -745.
inline constexpr double kExpUnderflow = -745.0;

}  // namespace detail

// (a^p + b^p)^(1/p) for a, b >= 0, p >= 1. Commutative, associative for
// fixed p, and safe for extreme magnitudes via max-factoring.
inline double boxplus(double a, double b, double p) {
  if (!(a >= 0.0) || !(b >= 0.0))
    throw validation_error("boxplus requires non-negative arguments");
  if (!(p >= 1.0)) throw validation_error("boxplus requires an exponent >= 1");
  if (a == 0.0) return b;
  if (b == 0.0) return a;
  if (p == 1.0) return a + b;
  const double hi = a < b ? b : a;
  const double lo = a < b ? a : b;
  const double lhi = std::log(hi);
  const double llo = std::log(lo);
  if (p * std::fabs(lhi) <= detail::kLogDomainThreshold &&
      p * std::fabs(llo) <= detail::kLogDomainThreshold) {
    return std::pow(std::pow(hi, p) + std::pow(lo, p), 1.0 / p);
  }
  const double t = p * (llo - lhi);  // <= 0
  if (t < detail::kExpUnderflow) return hi;
  return hi * std::exp(std::log1p(std::exp(t)) / p);
}

// Left-to-right fold of boxplus at a fixed exponent: (sum x_i^p)^(1/p).
inline double oplus(std::span<const double> xs, double p) {
  double acc = 0.0;
  for (double x : xs) acc = boxplus(acc, x, p);
  return acc;
}

// A finite sequence x_1..x_{n+1} with one combining exponent per step.
struct VarExpSequence {
  std::vector<double> values;
  std::vector<double> exponents;

  VarExpSequence(std::vector<double> vals, std::vector<double> exps)
      : values(std::move(vals)), exponents(std::move(exps)) {
    if (values.empty()) throw validation_error("sequence must be non-empty");
    if (exponents.size() + 1 != values.size())
      throw validation_error("sequence needs exactly one exponent per combining step");
    for (double v : values)
      if (!std::isfinite(v)) throw validation_error("sequence values must be finite");
    for (double p : exponents)
      if (!(p >= 1.0)) throw validation_error("sequence exponents must be >= 1");
  }
};

// Accumulate strictly left to right: ((|x1| [+]_{p1} |x2|) [+]_{p2} |x3|) ...
inline double seq_norm(const VarExpSequence& x) {
  double acc = std::fabs(x.values[0]);
  for (std::size_t i = 0; i < x.exponents.size(); ++i)
    acc = boxplus(acc, std::fabs(x.values[i + 1]), x.exponents[i]);
  return acc;
}

// The right-nested variant |x1| [+]_{p1} (|x2| [+]_{p2} (...)). Coincides
// with seq_norm when all exponents are equal.
inline double seq_norm_left(const VarExpSequence& x) {
  double acc = std::fabs(x.values.back());
  for (std::size_t i = x.exponents.size(); i-- > 0;)
    acc = boxplus(std::fabs(x.values[i]), acc, x.exponents[i]);
  return acc;
}

class NonnegMatrix {
 public:
  explicit NonnegMatrix(std::vector<std::vector<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.front().size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw validation_error("matrix rows must have equal length");
      for (double v : row) {
        if (!std::isfinite(v) || v < 0.0)
          throw validation_error("matrix entries must be finite and non-negative");
        data_.push_back(v);
      }
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  NonnegMatrix transpose() const {
    std::vector<std::vector<double>> t(cols_, std::vector<double>(rows_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t[j][i] = at(i, j);
    return NonnegMatrix(std::move(t));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// l^r(l^p) norm: combine over the column index j with p inside each row,
// then over the row index i with r.
inline double mixed_norm(const NonnegMatrix& a, double p, double r) {
  if (!(p >= 1.0) || !(r >= 1.0)) throw validation_error("mixed_norm requires exponents >= 1");
  double outer = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) inner = boxplus(inner, a.at(i, j), p);
    outer = boxplus(outer, inner, r);
  }
  return outer;
}

struct CheckPair {
  double lhs;
  double rhs;
};

// Transposition is a contraction l^p(l^r) -> l^r(l^p) for p <= r:
// combining over i with p first, then over j with r, never exceeds the
// opposite grouping.
inline CheckPair transpose_contraction_check(const NonnegMatrix& a, double p, double r) {
  if (!(p >= 1.0) || !(p <= r)) throw validation_error("requires 1 <= p <= r");
  return {mixed_norm(a.transpose(), p, r), mixed_norm(a, r, p)};
}

// For entrywise disjointly supported matrices, the mixed norm of the sum is
// dominated by the p-combination of the individual mixed norms.
inline CheckPair disjoint_matrix_sum_check(const std::vector<NonnegMatrix>& as, double p,
                                           double r) {
  if (!(p >= 1.0) || !(p <= r)) throw validation_error("requires 1 <= p <= r");
  if (as.empty()) throw validation_error("need at least one matrix");
  const std::size_t n = as.front().rows(), m = as.front().cols();
  for (const auto& a : as)
    if (a.rows() != n || a.cols() != m)
      throw validation_error("matrices must share dimensions");
  std::vector<std::vector<double>> sum(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t nonzero = 0;
      for (const auto& a : as)
        if (a.at(i, j) != 0.0) {
          ++nonzero;
          sum[i][j] = a.at(i, j);
        }
      if (nonzero > 1) throw validation_error("matrices must have disjoint supports");
    }
  double rhs = 0.0;
  for (const auto& a : as) rhs = boxplus(rhs, mixed_norm(a, p, r), p);
  return {mixed_norm(NonnegMatrix(std::move(sum)), p, r), rhs};
}

// a [+]_r (b [+]_p c) <= (a [+]_r b) [+]_p c for p <= r.
inline CheckPair nesting_inequality_check(double a, double b, double c, double p, double r) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(c >= 0.0))
    throw validation_error("requires non-negative arguments");
  if (!(p >= 1.0) || !(p <= r)) throw validation_error("requires 1 <= p <= r");
  return {boxplus(a, boxplus(b, c, p), r), boxplus(boxplus(a, b, r), c, p)};
}

}  // namespace varnorm
