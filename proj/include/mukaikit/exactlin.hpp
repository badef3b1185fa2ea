#pragma once

// Exact integer and rational linear algebra: dense matrices over GMP
// integers/rationals, Smith and Hermite normal forms, saturated integer
// kernels and inertia of rational symmetric forms.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mukaikit/error.hpp"

namespace mukaikit {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den) {
  detail::require(den != 0, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational &q) { return q.get_den() == 1; }

inline Integer floor(const Rational &q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational &q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline int sign(const Rational &q) { return sgn(q); }

/// Parses "p", "p/q" or "-p/q"; the result is canonical.
inline Rational parse_rational(const std::string &text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0)
    throw invalid_input("not a rational number: '" + text + "'");
  detail::require(q.get_den() != 0, "rational with zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

/// gcd of the entries, 0 for the zero vector.
inline Integer content(std::span<const Integer> xs) {
  Integer g = 0;
  for (const auto &x : xs) g = gcd(g, x);
  return g;
}

/// Smallest positive multiple of a rational vector that is integral and
/// primitive; the zero vector maps to itself.
inline std::vector<Integer> primitive_integer_multiple(std::span<const Rational> xs) {
  Integer l = 1;
  for (const auto &x : xs) l = lcm(l, x.get_den());
  std::vector<Integer> out;
  out.reserve(xs.size());
  for (const auto &x : xs) {
    Rational scaled = x * l;
    out.push_back(scaled.get_num());
  }
  Integer g = content(out);
  if (g != 0)
    for (auto &x : out) x /= g;
  return out;
}

/// Dense row-major matrix. Value type; every operation returns a new matrix.
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    for (auto &x : data_) x = 0;
  }
  Matrix(std::initializer_list<std::initializer_list<T>> init) : rows_(init.size()) {
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &row : init) {
      detail::require(row.size() == cols_, "ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix diagonal(std::span<const T> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>> &rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require(rows[i].size() == cols, "row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<T> row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  std::vector<T> col_vector(std::size_t j) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [first, first + count).
  Matrix row_block(std::size_t first, std::size_t count) const {
    Matrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
    return out;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    detail::require(a.cols_ == b.rows_, "matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix &a, std::span<const T> x) {
    detail::require(a.cols_ == x.size(), "matrix-vector dimension mismatch");
    std::vector<T> y(a.rows_);
    for (auto &v : y) v = 0;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend Matrix operator+(const Matrix &a, const Matrix &b) {
    detail::require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum dimension mismatch");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }

  friend Matrix operator-(const Matrix &a) {
    Matrix c = a;
    for (auto &x : c.data_) x = -x;
    return c;
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && (*this)(i, j) != 0) return false;
    return true;
  }

  // Elementary operations; used by the normal-form routines.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T &factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const T &factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

template <class T> std::ostream &operator<<(std::ostream &os, const Matrix<T> &m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

inline RatMatrix to_rational(const IntMatrix &m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline IntMatrix to_integer(const RatMatrix &m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      detail::require(is_integer(m(i, j)), "matrix entry is not integral");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

inline Rational determinant(RatMatrix a) {
  detail::require(a.is_square(), "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(p, k);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i)
      if (a(i, k) != 0) a.add_row(i, k, Rational(-a(i, k) / a(k, k)));
  }
  return det;
}

inline Integer determinant(const IntMatrix &a) { return determinant(to_rational(a)).get_num(); }

inline std::size_t rank(RatMatrix a) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t p = r;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i)
      if (a(i, col) != 0) a.add_row(i, r, Rational(-a(i, col) / a(r, col)));
    ++r;
  }
  return r;
}

inline std::size_t rank(const IntMatrix &a) { return rank(to_rational(a)); }

inline RatMatrix inverse(RatMatrix a) {
  detail::require(a.is_square(), "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    detail::require(p < n, "inverse of a singular matrix");
    a.swap_rows(p, k);
    inv.swap_rows(p, k);
    Rational pivot = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= pivot;
      inv(k, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = -a(i, k);
      a.add_row(i, k, f);
      inv.add_row(i, k, f);
    }
  }
  return inv;
}

/// Inverse of a unimodular integer matrix.
inline IntMatrix unimodular_inverse(const IntMatrix &a) {
  detail::require(abs(determinant(a)) == 1, "matrix is not unimodular");
  return to_integer(inverse(to_rational(a)));
}

struct SmithForm {
  std::vector<Integer> diagonal; ///< min(rows, cols) entries, d1 | d2 | ..., all >= 0
  IntMatrix left;                ///< unimodular, rows x rows
  IntMatrix right;               ///< unimodular, cols x cols
};

/// left * m * right is diagonal with nonnegative, successively dividing entries.
inline SmithForm smith_normal_form(const IntMatrix &m) {
  IntMatrix a = m;
  IntMatrix left = IntMatrix::identity(m.rows());
  IntMatrix right = IntMatrix::identity(m.cols());
  const std::size_t r = m.rows(), c = m.cols(), n = std::min(r, c);

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (a(i, j) != 0 && (pi == r || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      a.swap_rows(t, pi);
      left.swap_rows(t, pi);
      a.swap_cols(t, pj);
      right.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        a.add_row(i, t, Integer(-q));
        left.add_row(i, t, Integer(-q));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        a.add_col(j, t, Integer(-q));
        right.add_col(j, t, Integer(-q));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (a(i, j) % a(t, t) != 0) {
            a.add_row(t, i, Integer(1));
            left.add_row(t, i, Integer(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      left.negate_row(t);
    }
  }

  SmithForm out{{}, std::move(left), std::move(right)};
  out.diagonal.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(a(i, i));
  return out;
}

namespace detail {

/// Unimodular row reduction of the first `limit` columns to Hermite form.
/// Whole rows are transformed, so columns past `limit` carry the transform.
/// Returns the number of pivot rows.
inline std::size_t row_echelon(IntMatrix &a, std::size_t limit) {
  std::size_t pr = 0;
  for (std::size_t col = 0; col < limit && pr < a.rows(); ++col) {
    bool found = false;
    for (;;) {
      std::size_t p = a.rows();
      for (std::size_t i = pr; i < a.rows(); ++i)
        if (a(i, col) != 0 && (p == a.rows() || abs(a(i, col)) < abs(a(p, col)))) p = i;
      if (p == a.rows()) break;
      found = true;
      a.swap_rows(pr, p);
      bool cleared = true;
      for (std::size_t i = pr + 1; i < a.rows(); ++i) {
        if (a(i, col) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(pr, col).get_mpz_t());
        a.add_row(i, pr, Integer(-q));
        if (a(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (!found) continue;
    if (a(pr, col) < 0) a.negate_row(pr);
    for (std::size_t i = 0; i < pr; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(pr, col).get_mpz_t());
      a.add_row(i, pr, Integer(-q));
    }
    ++pr;
  }
  return pr;
}

} // namespace detail

/// Row-style Hermite normal form of the row lattice of m: echelon, positive
/// pivots, entries above each pivot reduced into [0, pivot). Zero rows dropped.
inline IntMatrix hermite_normal_form(const IntMatrix &m) {
  IntMatrix a = m;
  std::size_t r = detail::row_echelon(a, a.cols());
  return a.row_block(0, r);
}

/// Rows form the Hermite basis of {x in Z^n : m x = 0}. The result is
/// saturated by construction: it is read off a unimodular transform.
inline IntMatrix integer_kernel_saturated(const IntMatrix &m) {
  const std::size_t k = m.rows(), n = m.cols();
  IntMatrix t(n, k + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) t(i, j) = m(j, i);
    t(i, k + i) = 1;
  }
  std::size_t pr = detail::row_echelon(t, k);
  IntMatrix kernel(n - pr, n);
  for (std::size_t i = pr; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kernel(i - pr, j) = t(i, k + j);
  return hermite_normal_form(kernel);
}

struct Signature {
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t negative = 0;

  friend bool operator==(const Signature &, const Signature &) = default;
};

inline std::ostream &operator<<(std::ostream &os, const Signature &s) {
  return os << '(' << s.positive << ',' << s.zero << ',' << s.negative << ')';
}

/// Inertia of a rational symmetric matrix by congruence diagonalization.
/// Zero diagonals are handled by folding a hyperbolic pair (e_i + e_j).
inline Signature rational_signature(const RatMatrix &g) {
  detail::require(g.is_symmetric(), "signature requires a symmetric matrix");
  RatMatrix a = g;
  const std::size_t n = a.rows();
  Signature s;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = n;
    for (std::size_t i = k; i < n; ++i)
      if (a(i, i) != 0) {
        p = i;
        break;
      }
    if (p == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) {
        s.zero += n - k;
        break;
      }
      a.add_row(pi, pj, Rational(1));
      a.add_col(pi, pj, Rational(1));
      p = pi;
    }
    a.swap_rows(k, p);
    a.swap_cols(k, p);
    const Rational pivot = a(k, k);
    (pivot > 0 ? s.positive : s.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return s;
}

inline Signature rational_signature(const IntMatrix &g) { return rational_signature(to_rational(g)); }

} // namespace mukaikit
