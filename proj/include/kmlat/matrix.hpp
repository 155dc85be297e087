#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kmlat/errors.hpp"

namespace kmlat {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense arbitrary-precision integer matrix, row-major. Empty shapes (0 rows
/// and/or 0 columns) are legal everywhere; the conventions are det() of a
/// 0x0 matrix = 1 and rank 0.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw shape_error("negative matrix dimension");
    e_.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  }
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    e_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw shape_error("ragged initializer rows");
      for (const auto& x : r) e_.push_back(x);
    }
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
    IntMatrix m(static_cast<int>(rows.size()),
                rows.empty() ? 0 : static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows_; ++i) {
      if (static_cast<int>(rows[i].size()) != m.cols_)
        throw shape_error("ragged rows");
      for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& operator()(int i, int j) { return e_[idx(i, j)]; }
  const Int& operator()(int i, int j) const { return e_[idx(i, j)]; }

  std::vector<Int> row(int i) const {
    std::vector<Int> r(static_cast<size_t>(cols_));
    for (int j = 0; j < cols_; ++j) r[static_cast<size_t>(j)] = (*this)(i, j);
    return r;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Matrix with the selected rows (in the given order), all columns.
  IntMatrix select_rows(const std::vector<int>& idxs) const {
    IntMatrix m(static_cast<int>(idxs.size()), cols_);
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(idxs[i], j);
    return m;
  }

  /// Matrix with the selected columns (in the given order), all rows.
  IntMatrix select_cols(const std::vector<int>& idxs) const {
    IntMatrix m(rows_, static_cast<int>(idxs.size()));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) m(i, j) = (*this)(i, idxs[j]);
    return m;
  }

  IntMatrix submatrix(const std::vector<int>& row_idxs,
                      const std::vector<int>& col_idxs) const {
    return select_rows(row_idxs).select_cols(col_idxs);
  }

  bool is_zero() const {
    for (const auto& x : e_)
      if (x != 0) return false;
    return true;
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void negate_row(int i) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  /// row a -= q * row b
  void sub_row_multiple(int a, int b, const Int& q) {
    if (q == 0) return;
    for (int j = 0; j < cols_; ++j) (*this)(a, j) -= q * (*this)(b, j);
  }
  /// col a -= q * col b
  void sub_col_multiple(int a, int b, const Int& q) {
    if (q == 0) return;
    for (int i = 0; i < rows_; ++i) (*this)(i, a) -= q * (*this)(i, b);
  }
  /// row a += row b
  void add_row(int a, int b) {
    for (int j = 0; j < cols_; ++j) (*this)(a, j) += (*this)(b, j);
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) {
    return !(a == b);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw shape_error("matrix product shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Int& aik = a(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  /// Rows of a stacked on top of rows of b. Column counts must match
  /// (except that a block with zero rows imposes no constraint).
  static IntMatrix stack_rows(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ == 0) return b;
    if (b.rows_ == 0) return a;
    if (a.cols_ != b.cols_) throw shape_error("stack_rows width mismatch");
    IntMatrix m(a.rows_ + b.rows_, a.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) m(a.rows_ + i, j) = b(i, j);
    return m;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
      os << (i ? " [" : "[");
      for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  size_t idx(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw shape_error("matrix index out of range");
    return static_cast<size_t>(i) * static_cast<size_t>(cols_) +
           static_cast<size_t>(j);
  }

  int rows_, cols_;
  std::vector<Int> e_;
};

/// Dense exact rational matrix. Entries are kept canonicalized.
class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw shape_error("negative matrix dimension");
    e_.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  }
  explicit QMatrix(const IntMatrix& m) : QMatrix(m.rows(), m.cols()) {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) (*this)(i, j) = Rat(m(i, j));
  }

  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return e_[idx(i, j)]; }
  const Rat& operator()(int i, int j) const { return e_[idx(i, j)]; }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (size_t k = 0; k < a.e_.size(); ++k)
      if (a.e_[k] != b.e_[k]) return false;
    return true;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw shape_error("matrix product shape mismatch");
    QMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

 private:
  size_t idx(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw shape_error("matrix index out of range");
    return static_cast<size_t>(i) * static_cast<size_t>(cols_) +
           static_cast<size_t>(j);
  }

  int rows_, cols_;
  std::vector<Rat> e_;
};

/// Row vector dotted into a matrix: (1 x rows) * M.
inline std::vector<Int> row_times_matrix(const std::vector<Int>& v,
                                         const IntMatrix& m) {
  if (static_cast<int>(v.size()) != m.rows())
    throw shape_error("vector/matrix shape mismatch");
  std::vector<Int> out(static_cast<size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    if (v[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < m.cols(); ++j)
      out[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * m(i, j);
  }
  return out;
}

inline std::vector<Rat> row_times_matrix(const std::vector<Rat>& v,
                                         const IntMatrix& m) {
  if (static_cast<int>(v.size()) != m.rows())
    throw shape_error("vector/matrix shape mismatch");
  std::vector<Rat> out(static_cast<size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    if (v[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < m.cols(); ++j)
      out[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * Rat(m(i, j));
  }
  return out;
}

inline std::vector<Rat> row_times_matrix(const std::vector<Rat>& v,
                                         const QMatrix& m) {
  if (static_cast<int>(v.size()) != m.rows())
    throw shape_error("vector/matrix shape mismatch");
  std::vector<Rat> out(static_cast<size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    if (v[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < m.cols(); ++j)
      out[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * m(i, j);
  }
  return out;
}

}  // namespace kmlat
