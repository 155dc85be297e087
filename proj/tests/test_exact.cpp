#include <catch2/catch_amalgamated.hpp>

#include "kmlat/exact.hpp"
#include "oracles.hpp"

using namespace kmlat;

namespace {

bool is_unimodular(const IntMatrix& m) {
  Int d = determinant(m);
  return d == 1 || d == -1;
}

bool hermite_shape_ok(const HermiteBasis& b) {
  int prev_col = -1;
  for (int i = 0; i < b.basis.rows(); ++i) {
    int p = b.pivot_cols[static_cast<size_t>(i)];
    if (p <= prev_col) return false;
    prev_col = p;
    if (b.basis(i, p) <= 0) return false;
    for (int j = 0; j < p; ++j)
      if (b.basis(i, j) != 0) return false;
    for (int k = 0; k < i; ++k)
      if (b.basis(k, p) < 0 || b.basis(k, p) >= b.basis(i, p)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("determinant: pinned values") {
  CHECK(determinant(IntMatrix{{2, -1}, {-1, 2}}) == 3);
  CHECK(determinant(IntMatrix::identity(4)) == 1);
  CHECK(determinant(IntMatrix{{2, -2}, {-2, 2}}) == 0);
  CHECK(determinant(IntMatrix(0, 0)) == 1);
  CHECK_THROWS_AS(determinant(IntMatrix(2, 3)), shape_error);
}

TEST_CASE("determinant matches cofactor expansion on random matrices") {
  std::mt19937_64 rng(20240801);
  for (int iter = 0; iter < 200; ++iter) {
    int n = static_cast<int>(rng() % 5) + 1;
    IntMatrix m = oracle::random_matrix(rng, n, n, -6, 6);
    CHECK(determinant(m) == oracle::cofactor_determinant(m));
  }
}

TEST_CASE("rank: pinned values") {
  CHECK(rank(IntMatrix{{2, -2}, {-2, 2}}) == 1);
  CHECK(rank(IntMatrix(3, 3)) == 0);
  CHECK(rank(IntMatrix{{2, -1}, {-1, 2}}) == 2);
  CHECK(rank(IntMatrix(0, 5)) == 0);
}

TEST_CASE("hermite_row_basis: pinned values") {
  SECTION("tall stack reduces to the full lattice") {
    HermiteBasis b = hermite_row_basis(IntMatrix{{2, -1}, {-1, 2}, {0, -1}});
    CHECK(b.basis == IntMatrix{{1, 0}, {0, 1}});
  }
  SECTION("index-3 sublattice") {
    HermiteBasis b = hermite_row_basis(IntMatrix{{2, -1}, {-1, 2}});
    CHECK(b.basis == IntMatrix{{1, 1}, {0, 3}});
  }
  SECTION("empty input") {
    HermiteBasis b = hermite_row_basis(IntMatrix(0, 2));
    CHECK(b.rank() == 0);
    CHECK(b.basis.cols() == 2);
  }
}

TEST_CASE("hermite_row_basis: shape, idempotence, determinism") {
  std::mt19937_64 rng(20240802);
  for (int iter = 0; iter < 200; ++iter) {
    int r = static_cast<int>(rng() % 5) + 1;
    int c = static_cast<int>(rng() % 5) + 1;
    IntMatrix m = oracle::random_matrix(rng, r, c, -5, 5);
    HermiteBasis b = hermite_row_basis(m);
    CHECK(hermite_shape_ok(b));
    CHECK(b.rank() == rank(m));
    // Idempotent: HNF of an HNF basis is itself.
    CHECK(hermite_row_basis(b.basis).basis == b.basis);
    // Every input row lies in the basis lattice.
    for (int i = 0; i < r; ++i)
      CHECK(solve_in_basis(b, m.row(i)).has_value());
  }
}

TEST_CASE("smith: pinned values") {
  SECTION("diag(1,3)") {
    SmithDecomposition d = smith(IntMatrix{{2, -1}, {-1, 2}});
    CHECK(d.invariant_factors == std::vector<Int>{1, 3});
  }
  SECTION("diag(2,2)") {
    SmithDecomposition d = smith(IntMatrix{{2, -2}, {-4, 2}});
    CHECK(d.invariant_factors == std::vector<Int>{2, 2});
  }
  SECTION("zero matrix") {
    SmithDecomposition d = smith(IntMatrix(2, 3));
    CHECK(d.invariant_factors.empty());
    CHECK(d.S == IntMatrix(2, 3));
    CHECK(d.P * IntMatrix(2, 3) * d.Q == d.S);
  }
  SECTION("degenerate shapes keep the transform identity") {
    for (auto [r, c] : {std::pair{0, 0}, {0, 3}, {3, 0}}) {
      IntMatrix m(r, c);
      SmithDecomposition d = smith(m);
      CHECK(d.P * m * d.Q == d.S);
      CHECK(d.invariant_factors.empty());
    }
  }
}

TEST_CASE("smith: transform identity, unimodularity, divisibility, minor gcds") {
  std::mt19937_64 rng(20240803);
  for (int iter = 0; iter < 150; ++iter) {
    int r = static_cast<int>(rng() % 5) + 1;
    int c = static_cast<int>(rng() % 5) + 1;
    IntMatrix m = oracle::random_matrix(rng, r, c, -5, 5);
    SmithDecomposition d = smith(m);
    CHECK(d.P * m * d.Q == d.S);
    CHECK(is_unimodular(d.P));
    CHECK(is_unimodular(d.Q));
    for (int i = 0; i < std::min(r, c); ++i)
      for (int j = 0; j < std::min(r, c); ++j) {
        if (i == j) continue;
        CHECK(d.S(i, j) == 0);
      }
    for (size_t i = 0; i + 1 < d.invariant_factors.size(); ++i)
      CHECK(d.invariant_factors[i + 1] % d.invariant_factors[i] == 0);
    CHECK(d.invariant_factors == oracle::minor_gcd_invariant_factors(m));
  }
}

TEST_CASE("smith: |det| equals product of invariant factors when nonsingular") {
  std::mt19937_64 rng(20240804);
  for (int iter = 0; iter < 100; ++iter) {
    int n = static_cast<int>(rng() % 4) + 1;
    IntMatrix m = oracle::random_matrix(rng, n, n, -5, 5);
    Int det = determinant(m);
    if (det == 0) continue;
    Int prod = 1;
    for (const Int& f : smith(m).invariant_factors) prod *= f;
    CHECK(prod == abs(det));
  }
}

TEST_CASE("left_integer_kernel: pinned values") {
  SECTION("affine cycle has the all-ones kernel") {
    HermiteBasis k =
        left_integer_kernel(IntMatrix{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
    CHECK(k.basis == IntMatrix{{1, 1, 1}});
  }
  SECTION("nonsingular matrix has empty kernel") {
    CHECK(left_integer_kernel(IntMatrix{{2, -1}, {-1, 2}}).rank() == 0);
  }
  SECTION("rank-1 singular") {
    HermiteBasis k = left_integer_kernel(IntMatrix{{2, -2}, {-2, 2}});
    CHECK(k.basis == IntMatrix{{1, 1}});
  }
}

TEST_CASE("left_integer_kernel: annihilation and saturation") {
  std::mt19937_64 rng(20240805);
  for (int iter = 0; iter < 150; ++iter) {
    int r = static_cast<int>(rng() % 5) + 1;
    int c = static_cast<int>(rng() % 4) + 1;
    IntMatrix m = oracle::random_matrix(rng, r, c, -4, 4);
    HermiteBasis k = left_integer_kernel(m);
    CHECK(k.rank() == r - rank(m));
    for (int i = 0; i < k.rank(); ++i) {
      std::vector<Int> prod = row_times_matrix(k.basis.row(i), m);
      for (const Int& x : prod) CHECK(x == 0);
    }
    // Saturated: the basis stack has trivial invariant factors.
    if (k.rank() > 0)
      for (const Int& f : smith(k.basis).invariant_factors) CHECK(f == 1);
  }
}

TEST_CASE("rational_inverse: pinned values and exactness") {
  SECTION("2x2") {
    QMatrix inv = rational_inverse(IntMatrix{{2, -1}, {-1, 2}});
    CHECK(inv(0, 0) == Rat(2, 3));
    CHECK(inv(0, 1) == Rat(1, 3));
    CHECK(inv(1, 0) == Rat(1, 3));
    CHECK(inv(1, 1) == Rat(2, 3));
  }
  SECTION("identity") {
    CHECK(rational_inverse(IntMatrix::identity(3)) == QMatrix::identity(3));
  }
  SECTION("singular input") {
    CHECK_THROWS_AS(rational_inverse(IntMatrix{{2, -2}, {-2, 2}}),
                    singular_error);
  }
  SECTION("random: inv(M) * M = I both ways") {
    std::mt19937_64 rng(20240806);
    int done = 0;
    while (done < 60) {
      int n = static_cast<int>(rng() % 4) + 1;
      IntMatrix m = oracle::random_matrix(rng, n, n, -5, 5);
      if (determinant(m) == 0) continue;
      ++done;
      QMatrix inv = rational_inverse(m);
      CHECK(inv * QMatrix(m) == QMatrix::identity(n));
      CHECK(QMatrix(m) * inv == QMatrix::identity(n));
    }
  }
}

TEST_CASE("adjugate is det times inverse") {
  std::mt19937_64 rng(20240807);
  int done = 0;
  while (done < 40) {
    int n = static_cast<int>(rng() % 4) + 1;
    IntMatrix m = oracle::random_matrix(rng, n, n, -4, 4);
    Int det = determinant(m);
    if (det == 0) continue;
    ++done;
    IntMatrix adj = adjugate(m, det);
    IntMatrix prod = m * adj;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(prod(i, j) == (i == j ? det : Int(0)));
  }
}

TEST_CASE("saturate: pinned values") {
  CHECK(saturate(IntMatrix{{2, -2}}).basis == IntMatrix{{1, -1}});
  CHECK(saturate(IntMatrix{{2, -1}}).basis == IntMatrix{{2, -1}});
  SECTION("unimodular full-rank square keeps Z^n") {
    CHECK(saturate(IntMatrix{{1, 2}, {0, 1}}).basis == IntMatrix::identity(2));
  }
  SECTION("empty input saturates to the zero lattice") {
    CHECK(saturate(IntMatrix(0, 2)).rank() == 0);
  }
}

TEST_CASE("saturate: contains input, primitive, same rank") {
  std::mt19937_64 rng(20240808);
  for (int iter = 0; iter < 100; ++iter) {
    int r = static_cast<int>(rng() % 4) + 1;
    int c = static_cast<int>(rng() % 4) + 1;
    IntMatrix m = oracle::random_matrix(rng, r, c, -4, 4);
    HermiteBasis sat = saturate(m);
    CHECK(sat.rank() == rank(m));
    for (int i = 0; i < r; ++i)
      CHECK(solve_in_basis(sat, m.row(i)).has_value());
    if (sat.rank() > 0)
      for (const Int& f : smith(sat.basis).invariant_factors) CHECK(f == 1);
  }
}

TEST_CASE("solve_in_basis rejects vectors outside the lattice") {
  HermiteBasis b = hermite_row_basis(IntMatrix{{2, 0}, {0, 2}});
  CHECK(solve_in_basis(b, {Int(2), Int(0)}).has_value());
  CHECK_FALSE(solve_in_basis(b, {Int(1), Int(0)}).has_value());
  CHECK_THROWS_AS(solve_in_basis(b, {Int(1)}), shape_error);
}
