#pragma once

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kmlat/exact.hpp"

namespace kmlat {

/// Finite abelian group in canonical invariant-factor form: d_1 | d_2 | ...,
/// every factor >= 2. Two groups are isomorphic iff the factor lists match.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;

  /// Canonicalize an arbitrary product of cyclic groups Z_{c_1} x ... x
  /// Z_{c_k} (orders >= 1, order matters not) into invariant factors.
  static FiniteAbelianGroup from_cyclic_orders(const std::vector<Int>& orders) {
    const int k = static_cast<int>(orders.size());
    IntMatrix diag(k, k);
    for (int i = 0; i < k; ++i) {
      if (orders[static_cast<size_t>(i)] < 1)
        throw precondition_error("cyclic factor order must be >= 1");
      diag(i, i) = orders[static_cast<size_t>(i)];
    }
    return from_diagonal(smith(diag).invariant_factors);
  }

  /// Adopt Smith invariant factors, dropping the trivial 1s.
  static FiniteAbelianGroup from_diagonal(const std::vector<Int>& factors) {
    FiniteAbelianGroup g;
    for (const Int& f : factors)
      if (f >= 2) g.factors_.push_back(f);
    for (size_t i = 0; i + 1 < g.factors_.size(); ++i)
      if (g.factors_[i + 1] % g.factors_[i] != 0)
        throw consistency_error("invariant factors violate divisibility");
    return g;
  }

  static FiniteAbelianGroup cyclic(const Int& n) {
    return from_cyclic_orders({n});
  }
  static FiniteAbelianGroup trivial_group() { return {}; }

  const std::vector<Int>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return factors_.empty(); }

  Int order() const {
    Int o = 1;
    for (const Int& f : factors_) o *= f;
    return o;
  }

  std::string to_string() const {
    if (factors_.empty()) return "trivial";
    std::ostringstream os;
    for (size_t i = 0; i < factors_.size(); ++i)
      os << (i ? " x " : "") << "Z_" << factors_[i];
    return os.str();
  }

  friend bool operator==(const FiniteAbelianGroup& a,
                         const FiniteAbelianGroup& b) {
    return a.factors_ == b.factors_;
  }
  friend bool operator!=(const FiniteAbelianGroup& a,
                         const FiniteAbelianGroup& b) {
    return !(a == b);
  }

 private:
  std::vector<Int> factors_;
};

/// Structure of a lattice quotient: finite part plus free rank.
struct QuotientStructure {
  FiniteAbelianGroup finite_part;
  int free_rank = 0;

  friend bool operator==(const QuotientStructure& a,
                         const QuotientStructure& b) {
    return a.finite_part == b.finite_part && a.free_rank == b.free_rank;
  }
};

/// Subgroup of Z^m given by generator rows, canonicalized by Hermite form on
/// construction. Generator order never affects the canonical basis.
class Lattice {
 public:
  Lattice(int ambient_dim, IntMatrix generators)
      : ambient_(ambient_dim), generators_(std::move(generators)) {
    if (ambient_ < 0) throw shape_error("negative ambient dimension");
    if (generators_.rows() > 0 && generators_.cols() != ambient_)
      throw shape_error("generator width does not match ambient dimension");
    if (generators_.rows() == 0)
      generators_ = IntMatrix(0, ambient_);
    basis_ = hermite_row_basis(generators_);
  }

  static Lattice full(int n) { return Lattice(n, IntMatrix::identity(n)); }
  static Lattice zero(int n) { return Lattice(n, IntMatrix(0, n)); }
  static Lattice from_rows(const std::vector<std::vector<Int>>& rows, int n) {
    return Lattice(n, IntMatrix::from_rows(rows));
  }

  int ambient_dim() const { return ambient_; }
  int rank() const { return basis_.rank(); }
  const IntMatrix& generators() const { return generators_; }
  const HermiteBasis& basis() const { return basis_; }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.ambient_ == b.ambient_ && a.basis_.basis == b.basis_.basis;
  }
  friend bool operator!=(const Lattice& a, const Lattice& b) {
    return !(a == b);
  }

 private:
  int ambient_;
  IntMatrix generators_;
  HermiteBasis basis_;
};

/// True iff v is an integer combination of the lattice generators.
inline bool membership(const std::vector<Int>& v, const Lattice& L) {
  if (static_cast<int>(v.size()) != L.ambient_dim())
    throw shape_error("vector length does not match lattice ambient dimension");
  return solve_in_basis(L.basis(), v).has_value();
}

/// Structure of sup/sub. Requires sub contained in sup; violations are
/// caller bugs and fail loudly.
inline QuotientStructure quotient(const Lattice& sup, const Lattice& sub) {
  if (sup.ambient_dim() != sub.ambient_dim())
    throw shape_error("quotient of lattices in different ambient spaces");
  const int k = sub.rank();
  IntMatrix coords(k, sup.rank());
  for (int i = 0; i < k; ++i) {
    auto c = solve_in_basis(sup.basis(), sub.basis().basis.row(i));
    if (!c) throw containment_error("sublattice is not contained in superlattice");
    for (int j = 0; j < sup.rank(); ++j) coords(i, j) = (*c)[static_cast<size_t>(j)];
  }
  QuotientStructure q;
  q.finite_part = FiniteAbelianGroup::from_diagonal(smith(coords).invariant_factors);
  q.free_rank = sup.rank() - sub.rank();
  return q;
}

/// Index [sup : sub]; nullopt means infinite (rank drop).
inline std::optional<Int> lattice_index(const Lattice& sup, const Lattice& sub) {
  QuotientStructure q = quotient(sup, sub);
  if (q.free_rank > 0) return std::nullopt;
  return q.finite_part.order();
}

namespace detail {

/// Clear denominators row-wise: integer matrix with the same row spans.
inline IntMatrix clear_denominators(const std::vector<std::vector<Rat>>& rows,
                                    int ambient) {
  IntMatrix m(static_cast<int>(rows.size()), ambient);
  for (int i = 0; i < m.rows(); ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != ambient)
      throw shape_error("span generator has wrong length");
    Int lcm = 1;
    for (const Rat& x : row) {
      Int den = x.get_den();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    for (int j = 0; j < ambient; ++j) {
      Rat scaled = row[static_cast<size_t>(j)] * Rat(lcm);
      m(i, j) = scaled.get_num();
    }
  }
  return m;
}

/// Generators of L intersected with the rational span of the rows of W.
inline IntMatrix intersect_with_span(const Lattice& L, const IntMatrix& W) {
  // x in span(W) iff x annihilates the orthogonal complement of span(W).
  IntMatrix ann = left_integer_kernel(W.transpose()).basis;  // rows span W^perp
  const IntMatrix& B = L.basis().basis;
  IntMatrix constraints = B * ann.transpose();
  IntMatrix coeffs = left_integer_kernel(constraints).basis;
  return coeffs * B;
}

}  // namespace detail

/// The quotient L / ((L cap V1) + (L cap V2)) for a direct sum V1 + V2 of
/// rational subspaces. Spans that overlap are rejected.
inline QuotientStructure split_quotient(
    const Lattice& L, const std::vector<std::vector<Rat>>& v1_gens,
    const std::vector<std::vector<Rat>>& v2_gens) {
  const int n = L.ambient_dim();
  IntMatrix w1 = detail::clear_denominators(v1_gens, n);
  IntMatrix w2 = detail::clear_denominators(v2_gens, n);
  if (rank(w1) + rank(w2) != rank(IntMatrix::stack_rows(w1, w2)))
    throw containment_error("subspace spans overlap; direct sum required");
  IntMatrix g1 = detail::intersect_with_span(L, w1);
  IntMatrix g2 = detail::intersect_with_span(L, w2);
  Lattice sub(n, IntMatrix::stack_rows(g1, g2));
  return quotient(L, sub);
}

}  // namespace kmlat
