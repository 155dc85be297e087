#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "kmlat/matrix.hpp"

namespace kmlat {

/// Canonical row-style Hermite basis of an integer row lattice: row echelon,
/// pivots positive, entries above each pivot reduced into [0, pivot).
/// `basis` has exactly rank(input) rows.
struct HermiteBasis {
  IntMatrix basis;
  std::vector<int> pivot_cols;

  int rank() const { return basis.rows(); }
  int ambient_dim() const { return basis.cols(); }
};

/// P * M * Q = S with P, Q unimodular and S = diag(q_1, ..., q_r, 0, ..., 0),
/// q_i >= 1 and q_i | q_{i+1}. `invariant_factors` are the positive diagonal
/// entries (including any 1s; zeros excluded).
struct SmithDecomposition {
  IntMatrix S;
  IntMatrix P;
  IntMatrix Q;
  std::vector<Int> invariant_factors;

  int rank() const { return static_cast<int>(invariant_factors.size()); }
};

namespace detail {

/// Floor quotient, matching mpz_fdiv_q.
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Row-reduce W to Hermite form in place. Every row operation is mirrored on
/// `companion` when given, so the pair stays related by one unimodular
/// transform. Returns the pivot columns.
inline std::vector<int> hermite_in_place(IntMatrix& W, IntMatrix* companion) {
  const int R = W.rows(), C = W.cols();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < C && r < R; ++c) {
    // Euclid on column c, rows >= r, until a single nonzero survives.
    for (;;) {
      int best = -1;
      for (int i = r; i < R; ++i) {
        if (W(i, c) == 0) continue;
        if (best < 0 || mpz_cmpabs(W(i, c).get_mpz_t(), W(best, c).get_mpz_t()) < 0)
          best = i;
      }
      if (best < 0) break;
      if (best != r) {
        W.swap_rows(r, best);
        if (companion) companion->swap_rows(r, best);
      }
      bool done = true;
      for (int i = r + 1; i < R; ++i) {
        if (W(i, c) == 0) continue;
        Int q = fdiv(W(i, c), W(r, c));
        W.sub_row_multiple(i, r, q);
        if (companion) companion->sub_row_multiple(i, r, q);
        if (W(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (r >= R || W(r, c) == 0) continue;
    if (W(r, c) < 0) {
      W.negate_row(r);
      if (companion) companion->negate_row(r);
    }
    // Reduce the entries above the pivot into [0, pivot).
    for (int i = 0; i < r; ++i) {
      Int q = fdiv(W(i, c), W(r, c));
      W.sub_row_multiple(i, r, q);
      if (companion) companion->sub_row_multiple(i, r, q);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& M) {
  if (M.rows() != M.cols()) throw shape_error("determinant of non-square matrix");
  const int n = M.rows();
  if (n == 0) return 1;
  IntMatrix W = M;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (W(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (W(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      W.swap_rows(k, p);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = W(k, k) * W(i, j) - W(i, k) * W(k, j);
        mpz_divexact(W(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      W(i, k) = 0;
    }
    prev = W(k, k);
  }
  return sign > 0 ? W(n - 1, n - 1) : Int(-W(n - 1, n - 1));
}

/// Unique Hermite normal form basis of the row lattice of M.
inline HermiteBasis hermite_row_basis(const IntMatrix& M) {
  IntMatrix W = M;
  std::vector<int> pivots = detail::hermite_in_place(W, nullptr);
  const int r = static_cast<int>(pivots.size());
  IntMatrix basis(r, M.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < M.cols(); ++j) basis(i, j) = W(i, j);
  return {std::move(basis), std::move(pivots)};
}

/// Rank over the rationals.
inline int rank(const IntMatrix& M) {
  IntMatrix W = M;
  return static_cast<int>(detail::hermite_in_place(W, nullptr).size());
}

/// Basis of the left integer kernel {x : x * M = 0}. Kernels are saturated
/// sublattices by definition, and the unimodular extraction preserves that.
inline HermiteBasis left_integer_kernel(const IntMatrix& M) {
  const int R = M.rows();
  IntMatrix W = M;
  IntMatrix U = IntMatrix::identity(R);
  const int r = static_cast<int>(detail::hermite_in_place(W, &U).size());
  IntMatrix ker(R - r, R);
  for (int i = r; i < R; ++i)
    for (int j = 0; j < R; ++j) ker(i - r, j) = U(i, j);
  return hermite_row_basis(ker);
}

/// Smith normal form with unimodular transforms, P * M * Q = S.
/// Pivot choice: smallest nonzero absolute value in the remaining block,
/// ties broken by lowest (row, col).
inline SmithDecomposition smith(const IntMatrix& M) {
  const int R = M.rows(), C = M.cols();
  SmithDecomposition d;
  d.S = M;
  d.P = IntMatrix::identity(R);
  d.Q = IntMatrix::identity(C);
  IntMatrix& S = d.S;
  IntMatrix& P = d.P;
  IntMatrix& Q = d.Q;

  const int steps = std::min(R, C);
  for (int t = 0; t < steps; ++t) {
    // Select pivot over the whole remaining block.
    int pi = -1, pj = -1;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j) {
        if (S(i, j) == 0) continue;
        if (pi < 0 ||
            mpz_cmpabs(S(i, j).get_mpz_t(), S(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // remaining block is zero
    S.swap_rows(t, pi);
    P.swap_rows(t, pi);
    S.swap_cols(t, pj);
    Q.swap_cols(t, pj);

    for (;;) {
      if (S(t, t) < 0) {
        S.negate_row(t);
        P.negate_row(t);
      }
      // Clear column t below and row t to the right; remainders shrink the
      // pivot, so re-picking terminates.
      bool clean = true;
      for (int i = t + 1; i < R; ++i) {
        if (S(i, t) == 0) continue;
        Int q = detail::fdiv(S(i, t), S(t, t));
        S.sub_row_multiple(i, t, q);
        P.sub_row_multiple(i, t, q);
        if (S(i, t) != 0) {
          S.swap_rows(t, i);
          P.swap_rows(t, i);
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      for (int j = t + 1; j < C; ++j) {
        if (S(t, j) == 0) continue;
        Int q = detail::fdiv(S(t, j), S(t, t));
        S.sub_col_multiple(j, t, q);
        Q.sub_col_multiple(j, t, q);
        if (S(t, j) != 0) {
          S.swap_cols(t, j);
          Q.swap_cols(t, j);
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      // Divisibility fix-up: fold a bad row into row t and keep reducing.
      bool divides = true;
      for (int i = t + 1; i < R && divides; ++i)
        for (int j = t + 1; j < C; ++j)
          if (S(i, j) % S(t, t) != 0) {
            S.add_row(t, i);
            P.add_row(t, i);
            divides = false;
            break;
          }
      if (divides) break;
    }
  }

  for (int k = 0; k < steps; ++k)
    if (S(k, k) > 0) d.invariant_factors.push_back(S(k, k));
  return d;
}

/// Exact inverse over Q. Throws singular_error when det M = 0.
inline QMatrix rational_inverse(const IntMatrix& M) {
  if (M.rows() != M.cols())
    throw shape_error("inverse of non-square matrix");
  const int n = M.rows();
  QMatrix W(M);
  QMatrix inv = QMatrix::identity(n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (W(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) throw singular_error("matrix is singular");
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(W(c, j), W(p, j));
        std::swap(inv(c, j), inv(p, j));
      }
    Rat piv = W(c, c);
    for (int j = 0; j < n; ++j) {
      W(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || W(i, c) == 0) continue;
      Rat f = W(i, c);
      for (int j = 0; j < n; ++j) {
        W(i, j) -= f * W(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Adjugate matrix: adj(M) = det(M) * M^{-1}, integral for any square M.
/// Computed via the exact inverse, so it requires det M != 0; callers that
/// need the singular case don't exist in this library.
inline IntMatrix adjugate(const IntMatrix& M, const Int& det) {
  if (M.rows() != M.cols()) throw shape_error("adjugate of non-square matrix");
  const int n = M.rows();
  if (n == 0) return IntMatrix(0, 0);
  if (det == 0) throw singular_error("adjugate via inverse needs det != 0");
  QMatrix inv = rational_inverse(M);
  IntMatrix adj(n, n);
  Rat d(det);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat x = inv(i, j) * d;
      if (x.get_den() != 1) throw consistency_error("adjugate not integral");
      adj(i, j) = x.get_num();
    }
  return adj;
}

/// Saturation: basis of (rational span of the generator rows) intersected
/// with Z^cols. Realized as the double orthogonal-complement kernel.
inline HermiteBasis saturate(const IntMatrix& generators) {
  HermiteBasis b = hermite_row_basis(generators);
  // Rows of `ann` span the rational orthogonal complement of the row span.
  IntMatrix ann = left_integer_kernel(b.basis.transpose()).basis;
  return left_integer_kernel(ann.transpose());
}

/// Express v as an integer combination of the rows of an HNF basis.
/// Returns the coefficients, or nullopt when v is not in the row lattice.
inline std::optional<std::vector<Int>> solve_in_basis(const HermiteBasis& b,
                                                      std::vector<Int> v) {
  if (static_cast<int>(v.size()) != b.basis.cols())
    throw shape_error("vector length does not match basis ambient dimension");
  const int r = b.basis.rows();
  std::vector<Int> coeff(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    const int p = b.pivot_cols[static_cast<size_t>(i)];
    const Int& piv = b.basis(i, p);
    Int q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(),
                v[static_cast<size_t>(p)].get_mpz_t(), piv.get_mpz_t());
    if (rem != 0) return std::nullopt;
    coeff[static_cast<size_t>(i)] = q;
    if (q != 0)
      for (int j = 0; j < b.basis.cols(); ++j)
        v[static_cast<size_t>(j)] -= q * b.basis(i, j);
  }
  for (const Int& x : v)
    if (x != 0) return std::nullopt;
  return coeff;
}

}  // namespace kmlat
