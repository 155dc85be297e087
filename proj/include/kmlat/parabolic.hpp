#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kmlat/cartan.hpp"
#include "kmlat/center.hpp"
#include "kmlat/lattice.hpp"

namespace kmlat {

/// Row vector in the coroot basis. Entries may be rational; operations that
/// need integrality check it themselves.
struct CoweightVector {
  std::vector<Rat> coords;
};

enum class ParabolicStructure { Split, Semidirect };

inline std::string to_string(ParabolicStructure s) {
  return s == ParabolicStructure::Split ? "split" : "semidirect";
}

enum class GammaMode { Fast, Checked };

/// The three 2x2 minors controlling the rank-3, |I| = 2 closed form.
struct Rank3Minors {
  Int delta;
  Int delta1;
  Int delta2;
};

struct LeviComponent {
  IndexSubset indices;  // in the ambient index set of A
  CartanKind kind;
  std::optional<std::string> family;  // set when kind is Finite
};

/// Everything this library knows about one parabolic subgroup K_I(A).
struct ParabolicReport {
  IndexSubset subset;
  Int det_AI;
  ParabolicStructure structure = ParabolicStructure::Semidirect;
  std::optional<FiniteAbelianGroup> gamma;  // present iff structure is Split
  std::vector<LeviComponent> levi_components;
  CenterStructure parabolic_center;
  int torus_factor_rank = 0;
};

namespace detail {

inline Int principal_det(const CartanMatrix& A, const IndexSubset& I) {
  return determinant(A.matrix().submatrix(I.members(), I.members()));
}

inline void require_proper(const CartanMatrix& A, const IndexSubset& I) {
  if (!I.is_subset_of(A.size()))
    throw subset_error("subset index out of range");
  if (I.size() == A.size())
    throw subset_error("parabolic operations require a proper subset I != S");
}

inline Int require_split(const CartanMatrix& A, const IndexSubset& I) {
  require_proper(A, I);
  Int d = principal_det(A, I);
  if (d == 0)
    throw split_error("det A_I = 0: the Levi does not split off (semidirect)");
  return d;
}

}  // namespace detail

/// Whether K_I(A) is a quotient of K(A_I) x T'_I, i.e. det A_I != 0.
inline bool levi_splits(const CartanMatrix& A, const IndexSubset& I) {
  detail::require_proper(A, I);
  return detail::principal_det(A, I) != 0;
}

/// Gamma_I by the row-lattice route: the quotient of the lattice spanned by
/// all n rows of the column submatrix by the lattice spanned by the rows
/// indexed by I.
inline FiniteAbelianGroup gamma_row_route(const CartanMatrix& A,
                                          const IndexSubset& I) {
  detail::require_split(A, I);
  IntMatrix cols = column_submatrix(A, I);
  Lattice e_all(I.size(), cols);
  Lattice e_sub(I.size(), cols.select_rows(I.members()));
  return quotient(e_all, e_sub).finite_part;
}

/// The unit lattice of the product torus, as a full-rank sublattice of Z^n:
/// the set of integer coweights whose I-component splits off integrally.
/// Realized through the adjugate congruence L * C = 0 mod det A_I.
inline Lattice split_unit_lattice(const CartanMatrix& A, const IndexSubset& I) {
  Int d = detail::require_split(A, I);
  const int n = A.size();
  const int k = I.size();
  if (k == 0) return Lattice::full(n);
  Int dabs = abs(d);
  IntMatrix a_sub = A.matrix().submatrix(I.members(), I.members());
  IntMatrix congr = column_submatrix(A, I) * adjugate(a_sub, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      mpz_mod(congr(i, j).get_mpz_t(), congr(i, j).get_mpz_t(),
              dabs.get_mpz_t());
  IntMatrix mod_block(k, k);
  for (int j = 0; j < k; ++j) mod_block(j, j) = dabs;
  HermiteBasis ker = left_integer_kernel(IntMatrix::stack_rows(congr, mod_block));
  std::vector<int> first_n(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) first_n[static_cast<size_t>(j)] = j;
  return Lattice(n, ker.basis.select_cols(first_n));
}

/// Gamma_I by the unit-lattice route: Z^n modulo the split unit lattice.
inline FiniteAbelianGroup gamma_lattice_route(const CartanMatrix& A,
                                              const IndexSubset& I) {
  Lattice li = split_unit_lattice(A, I);
  return quotient(Lattice::full(A.size()), li).finite_part;
}

/// Gamma_I. Fast mode runs the row route only; checked mode runs both routes
/// and fails hard on disagreement, which would be a library bug.
inline FiniteAbelianGroup gamma(const CartanMatrix& A, const IndexSubset& I,
                                GammaMode mode = GammaMode::Checked) {
  FiniteAbelianGroup row = gamma_row_route(A, I);
  if (mode == GammaMode::Checked) {
    FiniteAbelianGroup lat = gamma_lattice_route(A, I);
    if (row != lat)
      throw consistency_error("gamma route disagreement: rows give " +
                              row.to_string() + ", lattice gives " +
                              lat.to_string());
  }
  return row;
}

/// Membership of an integer coweight in the split unit lattice, by the
/// direct divisibility test (K_I * A_I^{-1} integral) rather than by lattice
/// construction.
inline bool in_split_unit_lattice(const CoweightVector& lambda,
                                  const CartanMatrix& A, const IndexSubset& I) {
  Int d = detail::require_split(A, I);
  if (static_cast<int>(lambda.coords.size()) != A.size())
    throw shape_error("coweight length does not match matrix size");
  std::vector<Int> lam;
  lam.reserve(lambda.coords.size());
  for (const Rat& x : lambda.coords) {
    if (x.get_den() != 1)
      throw precondition_error("membership test needs an integer coweight");
    lam.push_back(x.get_num());
  }
  if (I.empty()) return true;
  std::vector<Int> k_i = row_times_matrix(lam, column_submatrix(A, I));
  IntMatrix a_sub = A.matrix().submatrix(I.members(), I.members());
  std::vector<Int> t = row_times_matrix(k_i, adjugate(a_sub, d));
  for (const Int& x : t)
    if (x % d != 0) return false;
  return true;
}

/// Split a coweight as lambda1 + lambda2 with lambda1 supported on I and
/// lambda2 annihilating the column submatrix.
inline std::pair<CoweightVector, CoweightVector> decompose(
    const CoweightVector& lambda, const CartanMatrix& A, const IndexSubset& I) {
  detail::require_split(A, I);
  const int n = A.size();
  if (static_cast<int>(lambda.coords.size()) != n)
    throw shape_error("coweight length does not match matrix size");
  CoweightVector l1, l2;
  l1.coords.assign(static_cast<size_t>(n), Rat(0));
  if (!I.empty()) {
    IntMatrix cols = column_submatrix(A, I);
    std::vector<Rat> k_i = row_times_matrix(lambda.coords, cols);
    IntMatrix a_sub = A.matrix().submatrix(I.members(), I.members());
    std::vector<Rat> on_i = row_times_matrix(k_i, rational_inverse(a_sub));
    for (int t = 0; t < I.size(); ++t)
      l1.coords[static_cast<size_t>(I.members()[static_cast<size_t>(t)])] =
          on_i[static_cast<size_t>(t)];
  }
  l2.coords.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    l2.coords.push_back(lambda.coords[static_cast<size_t>(j)] -
                        l1.coords[static_cast<size_t>(j)]);
  if (!I.empty()) {
    std::vector<Rat> check =
        row_times_matrix(l2.coords, column_submatrix(A, I));
    for (const Rat& x : check)
      if (x != 0) throw consistency_error("decomposition failed to annihilate");
  }
  return {std::move(l1), std::move(l2)};
}

/// The minors of the rank-3 closed form, after permuting indices so that the
/// two-element I plays the role of {1,2} and the leftover index the role
/// of 3.
inline Rank3Minors rank3_minors(const CartanMatrix& A, const IndexSubset& I) {
  if (A.size() != 3)
    throw shape_error("rank-3 minors need a 3x3 matrix");
  if (I.size() != 2 || !I.is_subset_of(3))
    throw subset_error("rank-3 minors need a two-element subset");
  const int i = I.members()[0], j = I.members()[1];
  const int k = 3 - i - j;
  const IntMatrix& a = A.matrix();
  auto det2 = [](const Int& p, const Int& q, const Int& r, const Int& s) {
    return Int(p * s - q * r);
  };
  Rank3Minors m;
  m.delta = det2(a(i, i), a(i, j), a(j, i), a(j, j));
  m.delta1 = det2(a(i, i), a(i, j), a(k, i), a(k, j));
  m.delta2 = det2(a(j, i), a(j, j), a(k, i), a(k, j));
  return m;
}

/// Closed form for 3x3 matrices and |I| in {1, 2}. For |I| = 1 the kernel is
/// Z_2 unless both off-column entries are even; for |I| = 2 it is cyclic of
/// order |Delta| / gcd(Delta, Delta_1, Delta_2).
inline FiniteAbelianGroup closed_form_rank3(const CartanMatrix& A,
                                            const IndexSubset& I) {
  if (A.size() != 3) throw shape_error("closed form needs a 3x3 matrix");
  if (!I.is_subset_of(3)) throw subset_error("subset index out of range");
  if (I.size() == 1) {
    const int i = I.members()[0];
    bool all_even = true;
    for (int j = 0; j < 3; ++j)
      if (j != i && A.entry(j, i) % 2 != 0) all_even = false;
    return all_even ? FiniteAbelianGroup() : FiniteAbelianGroup::cyclic(2);
  }
  if (I.size() == 2) {
    Rank3Minors m = rank3_minors(A, I);
    if (m.delta == 0)
      throw split_error("det A_I = 0: closed form needs a split pair");
    Int g = abs(m.delta);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.delta1.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.delta2.get_mpz_t());
    return FiniteAbelianGroup::cyclic(abs(m.delta) / g);
  }
  throw subset_error("closed form needs |I| = 1 or 2");
}

/// Closed form for the affine a-series cycle on labels {0..n}. Decompose I
/// into maximal cyclic runs with lengths len_t and put m_t = len_t + 1.
///
/// When some gap between runs has two or more vertices, the kernel is the
/// full product Z_{m_1} x ... x Z_{m_k}. When every gap is a single vertex,
/// that vertex's row couples the two neighboring runs and the kernel drops
/// to {x in (+) Z_{m_t} : sum x_t = 0 mod gcd(m_t)}; the single-run
/// instances of this case are exactly the classical "|I| = n gives the
/// trivial group" and "|I| < n gives Z_{|I|+1}" facts. The product formula
/// alone overcounts whenever the complement of I is an independent set of
/// size >= 2 in the cycle (the smallest instance is n = 3, I = {1,3}, where
/// the kernel is Z_2, not Z_2 x Z_2).
inline FiniteAbelianGroup closed_form_affine_intervals(int n,
                                                       const IndexSubset& I) {
  const int N = n + 1;
  if (n < 1) throw precondition_error("cycle needs n >= 1");
  if (I.empty() || !I.is_subset_of(N) || I.size() == N)
    throw subset_error("interval formula needs a nonempty proper subset of {0..n}");
  std::vector<Int> orders;
  bool singleton_gaps_only = true;
  for (int p = 0; p < N; ++p) {
    if (!I.contains(p) && !I.contains((p + 1) % N)) singleton_gaps_only = false;
    if (!I.contains(p) || I.contains((p + N - 1) % N)) continue;
    int len = 0;
    for (int q = p; I.contains(q % N); ++q) ++len;
    orders.push_back(len + 1);
  }
  if (!singleton_gaps_only)
    return FiniteAbelianGroup::from_cyclic_orders(orders);
  // Kernel of the coordinate-sum map onto Z_g, presented in the basis
  // {g e_1, e_1 - e_2, ..., e_{k-1} - e_k} of its preimage lattice.
  const int k = static_cast<int>(orders.size());
  Int g = 0;
  for (const Int& m : orders) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.get_mpz_t());
  IntMatrix rel(k, k);
  for (int t = 0; t < k; ++t) {
    rel(t, 0) = orders[static_cast<size_t>(t)] / g;
    for (int j = 1; j <= t; ++j) rel(t, j) = -orders[static_cast<size_t>(t)];
  }
  return FiniteAbelianGroup::from_diagonal(smith(rel).invariant_factors);
}

/// Gamma for the maximal parabolic S - {i} of an indecomposable affine
/// matrix: cyclic of order m_i, the i-th dual mark.
inline FiniteAbelianGroup affine_maximal_parabolic_gamma(const CartanMatrix& A,
                                                         int i) {
  if (i < 0 || i >= A.size()) throw subset_error("vertex index out of range");
  MarksVector m = affine_marks(A);
  return FiniteAbelianGroup::cyclic(m.entries[static_cast<size_t>(i)]);
}

/// Full per-subset record: determinant, split/semidirect, gamma when split,
/// Levi component types and names, parabolic center, leftover torus rank.
inline ParabolicReport parabolic_report(const CartanMatrix& A,
                                        const IndexSubset& I,
                                        GammaMode mode = GammaMode::Checked) {
  detail::require_proper(A, I);
  ParabolicReport r;
  r.subset = I;
  r.det_AI = detail::principal_det(A, I);
  r.structure = (r.det_AI != 0) ? ParabolicStructure::Split
                                : ParabolicStructure::Semidirect;
  if (r.structure == ParabolicStructure::Split) r.gamma = gamma(A, I, mode);
  CartanMatrix a_sub = principal_submatrix(A, I);
  for (auto& [c, kind] : classify(a_sub).per_component) {
    LeviComponent lc;
    std::vector<int> orig;
    orig.reserve(c.members().size());
    for (int rel : c.members())
      orig.push_back(I.members()[static_cast<size_t>(rel)]);
    lc.indices = IndexSubset(std::move(orig));
    lc.kind = kind;
    if (kind == CartanKind::Finite) {
      IntMatrix block = a_sub.matrix().submatrix(c.members(), c.members());
      lc.family = detail::recognize_finite_family(block);
    }
    r.levi_components.push_back(std::move(lc));
  }
  r.parabolic_center = parabolic_center(A, I);
  r.torus_factor_rank = A.size() - I.size();
  return r;
}

struct EnumerateOptions {
  int jobs = 1;
  GammaMode mode = GammaMode::Checked;
  int rank_limit = 20;
  bool force = false;
};

/// Reports for every proper subset of S, including the empty one, in
/// ascending subset-bitmask order (bit i = index i). The emit order is
/// deterministic regardless of the worker count.
inline void enumerate_reports(
    const CartanMatrix& A, const EnumerateOptions& opts,
    const std::function<void(const ParabolicReport&)>& emit) {
  const int n = A.size();
  if (n > 62)
    throw limit_error("enumeration is limited to rank 62 (subset masks)");
  if (n > opts.rank_limit && !opts.force)
    throw limit_error("rank " + std::to_string(n) + " exceeds the limit of " +
                      std::to_string(opts.rank_limit) +
                      " (" + std::to_string(n) + " gives 2^n - 1 subsets); "
                      "pass the override to proceed");
  const std::uint64_t total = (std::uint64_t{1} << n) - 1;
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    for (std::uint64_t m = 0; m < total; ++m)
      emit(parabolic_report(A, IndexSubset::from_mask(m), opts.mode));
    return;
  }
  const std::uint64_t chunk = 1024;
  for (std::uint64_t lo = 0; lo < total; lo += chunk) {
    const std::uint64_t hi = std::min(lo + chunk, total);
    std::vector<std::optional<ParabolicReport>> results(
        static_cast<size_t>(hi - lo));
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (std::uint64_t m = lo + static_cast<std::uint64_t>(t); m < hi;
               m += static_cast<std::uint64_t>(jobs))
            results[static_cast<size_t>(m - lo)] =
                parabolic_report(A, IndexSubset::from_mask(m), opts.mode);
        } catch (...) {
          errors[static_cast<size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& r : results) emit(*r);
  }
}

inline std::vector<ParabolicReport> enumerate_reports(
    const CartanMatrix& A, const EnumerateOptions& opts = {}) {
  std::vector<ParabolicReport> out;
  enumerate_reports(A, opts, [&](const ParabolicReport& r) { out.push_back(r); });
  return out;
}

}  // namespace kmlat
