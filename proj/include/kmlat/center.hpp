#pragma once

#include <utility>
#include <vector>

#include "kmlat/cartan.hpp"
#include "kmlat/lattice.hpp"

namespace kmlat {

/// Center of a (parabolic) unitary Kac-Moody group as an abstract group:
/// finite abelian part times a torus of the stated rank. All coordinates
/// live in the coroot basis; the exponential is reduction mod Z^n.
struct CenterStructure {
  FiniteAbelianGroup finite_part;
  int torus_rank = 0;

  friend bool operator==(const CenterStructure& a, const CenterStructure& b) {
    return a.finite_part == b.finite_part && a.torus_rank == b.torus_rank;
  }
};

/// Explicit generators of the finite center when A is nonsingular: the rows
/// of A^{-1}, each with the order of its image in Q^n/Z^n.
struct CenterGenerators {
  struct Generator {
    std::vector<Rat> coords;
    Int order;
  };
  std::vector<Generator> generators;
};

/// Z(K(A)): invariant factors of A (1s dropped) times a torus of rank
/// n - rank(A). When det A != 0 the finite part has order |det A|.
inline CenterStructure center_structure(const CartanMatrix& A) {
  SmithDecomposition d = smith(A.matrix());
  CenterStructure c;
  c.finite_part = FiniteAbelianGroup::from_diagonal(d.invariant_factors);
  c.torus_rank = A.size() - d.rank();
  return c;
}

/// Generator rows v_i of A^{-1}; the order of the class of v_i mod Z^n is the
/// lcm of its coordinate denominators. Requires det A != 0; for singular A
/// use center_structure, which reports the torus factor.
inline CenterGenerators center_generators(const CartanMatrix& A) {
  if (determinant(A.matrix()) == 0)
    throw singular_error(
        "center generators need det A != 0; center_structure covers the "
        "singular case with its torus rank");
  QMatrix inv = rational_inverse(A.matrix());
  CenterGenerators g;
  const int n = A.size();
  g.generators.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    CenterGenerators::Generator gen;
    gen.order = 1;
    gen.coords.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      gen.coords.push_back(inv(i, j));
      Int den = inv(i, j).get_den();
      mpz_lcm(gen.order.get_mpz_t(), gen.order.get_mpz_t(), den.get_mpz_t());
    }
    g.generators.push_back(std::move(gen));
  }
  return g;
}

/// Center of the parabolic subgroup attached to I: the structure of the
/// lattice quotient {L : L * col-submatrix integral} / Z^n, read off the
/// Smith form of the n x |I| column submatrix. I may be any subset of S,
/// including S itself and the empty set (maximal torus).
inline CenterStructure parabolic_center(const CartanMatrix& A,
                                        const IndexSubset& I) {
  if (!I.is_subset_of(A.size()))
    throw subset_error("subset index out of range");
  SmithDecomposition d = smith(column_submatrix(A, I));
  CenterStructure c;
  c.finite_part = FiniteAbelianGroup::from_diagonal(d.invariant_factors);
  c.torus_rank = A.size() - d.rank();
  return c;
}

}  // namespace kmlat
