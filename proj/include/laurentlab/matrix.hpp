#pragma once

// Small dense integer matrices: Smith normal form with transforms, rank, and
// integer solutions of A*x = b.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

namespace laurentlab {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  // Columns given as vectors of equal length.
  static IntMatrix from_columns(const std::vector<std::vector<mpz_class>>& cols, std::size_t rows) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
    IntMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<mpz_class> r(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  void swap_rows(std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  // row_i += c * row_k
  void add_row(std::size_t i, std::size_t k, const mpz_class& c) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) += c * (*this)(k, j);
  }
  void add_col(std::size_t j, std::size_t k, const mpz_class& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) += c * (*this)(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

// U * A * V = D with U, V unimodular, D diagonal, d_1 | d_2 | ..., d_i >= 0.
struct SmithForm {
  IntMatrix U, D, V;
  std::vector<mpz_class> diagonal;  // min(rows, cols) entries

  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& d : diagonal)
      if (d != 0) ++r;
    return r;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& A) {
  std::size_t m = A.rows(), n = A.cols();
  IntMatrix D = A, U = IntMatrix::identity(m), V = IntMatrix::identity(n);
  std::size_t t = 0;
  while (t < m && t < n) {
    // Pivot: smallest nonzero absolute value in the remaining block.
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (D(i, j) != 0 && (!piv || abs(D(i, j)) < abs(D(piv->first, piv->second)))) piv = {i, j};
    if (!piv) break;
    D.swap_rows(t, piv->first);
    U.swap_rows(t, piv->first);
    D.swap_cols(t, piv->second);
    V.swap_cols(t, piv->second);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        D.add_row(i, t, -q);
        U.add_row(i, t, -q);
        if (D(i, t) != 0) {
          D.swap_rows(t, i);
          U.swap_rows(t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        D.add_col(j, t, -q);
        V.add_col(j, t, -q);
        if (D(t, j) != 0) {
          D.swap_cols(t, j);
          V.swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility condition: d_t must divide every entry of the rest.
      for (std::size_t i = t + 1; i < m && clean; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            D.add_row(t, i, 1);
            U.add_row(t, i, 1);
            clean = false;
            break;
          }
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
    ++t;
  }
  SmithForm s{U, D, V, {}};
  for (std::size_t i = 0; i < std::min(m, n); ++i) s.diagonal.push_back(D(i, i));
  return s;
}

inline std::size_t rank(const IntMatrix& A) { return smith_normal_form(A).rank(); }

// True when the columns of A span Z^rows.
inline bool columns_span_lattice(const IntMatrix& A) {
  if (A.rows() == 0) return true;
  SmithForm s = smith_normal_form(A);
  if (s.diagonal.size() < A.rows()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    if (s.diagonal[i] != 1) return false;
  return true;
}

// Some integer x with A*x = b, if one exists.
inline std::optional<std::vector<mpz_class>> solve_integer(const IntMatrix& A, const std::vector<mpz_class>& b) {
  SmithForm s = smith_normal_form(A);
  std::vector<mpz_class> c = s.U.apply(b);  // D * y = c, x = V * y
  std::vector<mpz_class> y(A.cols(), 0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const mpz_class d = i < s.diagonal.size() ? s.diagonal[i] : mpz_class(0);
    if (d == 0) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    if (!mpz_divisible_p(c[i].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
    y[i] = c[i] / d;
  }
  return s.V.apply(y);
}

}  // namespace laurentlab
