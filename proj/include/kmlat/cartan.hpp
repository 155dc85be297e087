#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kmlat/exact.hpp"

namespace kmlat {

/// Ordered subset of the index set S = {0..n-1} (0-based internally; display
/// labels are handled by CartanMatrix). Members are kept sorted ascending.
class IndexSubset {
 public:
  IndexSubset() = default;
  explicit IndexSubset(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.front() < 0)
      throw subset_error("negative index in subset");
  }

  static IndexSubset from_mask(std::uint64_t mask) {
    std::vector<int> m;
    for (int i = 0; mask; ++i, mask >>= 1)
      if (mask & 1) m.push_back(i);
    return IndexSubset(std::move(m));
  }

  static IndexSubset full(int n) {
    std::vector<int> m(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = i;
    return IndexSubset(std::move(m));
  }

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }

  bool contains(int i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }

  bool is_proper_subset_of(int n) const {
    return members_.empty() || (size() < n && members_.back() < n);
  }
  bool is_subset_of(int n) const {
    return members_.empty() || members_.back() < n;
  }

  IndexSubset complement(int n) const {
    std::vector<int> m;
    for (int i = 0; i < n; ++i)
      if (!contains(i)) m.push_back(i);
    return IndexSubset(std::move(m));
  }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (int i : members_) m |= (std::uint64_t{1} << i);
    return m;
  }

  friend bool operator==(const IndexSubset& a, const IndexSubset& b) {
    return a.members_ == b.members_;
  }
  friend bool operator!=(const IndexSubset& a, const IndexSubset& b) {
    return !(a == b);
  }

 private:
  std::vector<int> members_;
};

enum class CartanKind { Finite, Affine, Indefinite };

inline std::string to_string(CartanKind k) {
  switch (k) {
    case CartanKind::Finite: return "finite";
    case CartanKind::Affine: return "affine";
    default: return "indefinite";
  }
}

/// Validated generalized Cartan matrix: 2s on the diagonal, nonpositive
/// off-diagonal entries, symmetric zero pattern. Rows are the simple coroots
/// in their own basis; columns are the simple roots in fundamental-weight
/// coordinates.
class CartanMatrix {
 public:
  explicit CartanMatrix(IntMatrix m, std::vector<std::string> labels = {})
      : m_(std::move(m)), labels_(std::move(labels)) {
    if (m_.rows() != m_.cols())
      throw shape_error("Cartan matrix must be square");
    const int n = m_.rows();
    for (int i = 0; i < n; ++i) {
      if (m_(i, i) != 2)
        throw validation_error("diagonal entry a_" + pos(i, i) + " must be 2",
                               i + 1, i + 1);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (m_(i, j) > 0)
          throw validation_error(
              "off-diagonal entry a_" + pos(i, j) + " must be <= 0", i + 1,
              j + 1);
        if ((m_(i, j) == 0) != (m_(j, i) == 0))
          throw validation_error("zero pattern asymmetric at a_" + pos(i, j) +
                                     " vs a_" + pos(j, i),
                                 i + 1, j + 1);
      }
    }
    if (labels_.empty()) {
      labels_.reserve(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i + 1));
    }
    if (static_cast<int>(labels_.size()) != n)
      throw shape_error("label count does not match matrix size");
  }

  int size() const { return m_.rows(); }
  const IntMatrix& matrix() const { return m_; }
  const Int& entry(int i, int j) const { return m_(i, j); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }

  std::optional<int> index_of_label(const std::string& l) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[static_cast<size_t>(i)] == l) return i;
    return std::nullopt;
  }

  friend bool operator==(const CartanMatrix& a, const CartanMatrix& b) {
    return a.m_ == b.m_ && a.labels_ == b.labels_;
  }

 private:
  static std::string pos(int i, int j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  }

  IntMatrix m_;
  std::vector<std::string> labels_;
};

/// Checks conditions and wraps. Kept as a named entry point next to the
/// constructor for symmetry with the CLI subcommand.
inline CartanMatrix validate(IntMatrix m, std::vector<std::string> labels = {}) {
  return CartanMatrix(std::move(m), std::move(labels));
}

struct CartanType {
  CartanKind overall;
  std::vector<std::pair<IndexSubset, CartanKind>> per_component;
};

/// Connected components of the Dynkin graph: edge (i, j) iff a_ij != 0 for
/// i != j. Components are ordered by smallest member.
inline std::vector<IndexSubset> dynkin_components(const CartanMatrix& A) {
  const int n = A.size();
  std::vector<int> comp(static_cast<size_t>(n), -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    comp[static_cast<size_t>(s)] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (w == v || comp[static_cast<size_t>(w)] >= 0) continue;
        if (A.entry(v, w) != 0) {
          comp[static_cast<size_t>(w)] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }
  std::vector<std::vector<int>> groups(static_cast<size_t>(ncomp));
  for (int i = 0; i < n; ++i) groups[static_cast<size_t>(comp[static_cast<size_t>(i)])].push_back(i);
  std::vector<IndexSubset> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.emplace_back(std::move(g));
  return out;
}

/// Principal submatrix (a_ij) for i, j in I, re-validated, carrying the
/// labels of I.
inline CartanMatrix principal_submatrix(const CartanMatrix& A,
                                        const IndexSubset& I) {
  if (!I.is_subset_of(A.size()))
    throw subset_error("subset index out of range");
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(I.size()));
  for (int i : I.members()) labels.push_back(A.label(i));
  if (I.empty())
    return CartanMatrix(IntMatrix(0, 0), {});
  return CartanMatrix(A.matrix().submatrix(I.members(), I.members()),
                      std::move(labels));
}

/// All rows, columns restricted to I (ascending): the n x |I| matrix whose
/// rows generate E_I(A).
inline IntMatrix column_submatrix(const CartanMatrix& A, const IndexSubset& I) {
  if (!I.is_subset_of(A.size()))
    throw subset_error("subset index out of range");
  return A.matrix().select_cols(I.members());
}

namespace detail {

/// Kind of one indecomposable block: finite iff nonsingular with entrywise
/// nonnegative inverse; affine iff corank 1 with a strictly positive null
/// vector; indefinite otherwise. Exact and valid without symmetrizability.
inline CartanKind classify_indecomposable(const IntMatrix& C) {
  const int k = C.rows();
  if (k == 0) return CartanKind::Finite;
  if (determinant(C) != 0) {
    QMatrix inv = rational_inverse(C);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (inv(i, j) < 0) return CartanKind::Indefinite;
    return CartanKind::Finite;
  }
  HermiteBasis ker = left_integer_kernel(C.transpose());
  if (ker.rank() != 1) return CartanKind::Indefinite;
  int sign = 0;
  for (int j = 0; j < k; ++j) {
    const Int& x = ker.basis(0, j);
    int s = sgn(x);
    if (s == 0) return CartanKind::Indefinite;
    if (sign == 0) sign = s;
    if (s != sign) return CartanKind::Indefinite;
  }
  return CartanKind::Affine;
}

}  // namespace detail

/// Finite / affine / indefinite, per indecomposable component and overall.
/// Overall is affine only when exactly one component is affine and the rest
/// are finite (rank deficiency exactly 1).
inline CartanType classify(const CartanMatrix& A) {
  CartanType t;
  int n_affine = 0, n_indef = 0;
  for (IndexSubset& c : dynkin_components(A)) {
    IntMatrix block = A.matrix().submatrix(c.members(), c.members());
    CartanKind k = detail::classify_indecomposable(block);
    if (k == CartanKind::Affine) ++n_affine;
    if (k == CartanKind::Indefinite) ++n_indef;
    t.per_component.emplace_back(std::move(c), k);
  }
  if (n_indef == 0 && n_affine == 0)
    t.overall = CartanKind::Finite;
  else if (n_indef == 0 && n_affine == 1)
    t.overall = CartanKind::Affine;
  else
    t.overall = CartanKind::Indefinite;
  return t;
}

/// Primitive positive left-null vector of an indecomposable affine matrix.
/// These are the dual marks: the marks printed under the diagram of the
/// transposed matrix.
struct MarksVector {
  std::vector<Int> entries;
};

inline MarksVector affine_marks(const CartanMatrix& A) {
  CartanType t = classify(A);
  if (t.per_component.size() != 1)
    throw precondition_error("affine marks need an indecomposable matrix");
  if (t.overall != CartanKind::Affine)
    throw precondition_error("affine marks need an affine matrix");
  HermiteBasis ker = left_integer_kernel(A.matrix());
  if (ker.rank() != 1)
    throw consistency_error("affine matrix without corank-1 left kernel");
  MarksVector m;
  m.entries = ker.basis.row(0);
  int neg = 0, pos = 0;
  for (const Int& x : m.entries) (sgn(x) < 0 ? neg : pos) += 1;
  if (neg > 0 && pos > 0)
    throw consistency_error("affine left kernel vector has mixed signs");
  if (neg > 0)
    for (Int& x : m.entries) x = -x;
  return m;
}

/// Built-in families printed by the classics: finite-a(n) is the tridiagonal
/// 2/-1 matrix; affine-a(n) is the (n+1)x(n+1) cycle with -1 corners and
/// labels 0..n.
inline CartanMatrix builtin(const std::string& family, int rank) {
  if (family == "finite-a") {
    if (rank < 1) throw precondition_error("finite-a needs rank >= 1");
    IntMatrix m(rank, rank);
    for (int i = 0; i < rank; ++i) {
      m(i, i) = 2;
      if (i + 1 < rank) {
        m(i, i + 1) = -1;
        m(i + 1, i) = -1;
      }
    }
    return CartanMatrix(std::move(m));
  }
  if (family == "affine-a") {
    if (rank < 2) throw precondition_error("affine-a needs rank >= 2");
    const int n = rank + 1;
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 2;
      m(i, (i + 1) % n) = -1;
      m((i + 1) % n, i) = -1;
    }
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return CartanMatrix(std::move(m), std::move(labels));
  }
  throw precondition_error("unknown builtin family: " + family);
}

namespace detail {

/// Recognize an indecomposable finite-type block structurally.
///
/// Naming convention for the double-edge chain families, fixed once:
/// with the chain written s - t and t the end vertex carrying the double
/// edge, a_st = -2 means the t root is short and the family is B; a_ts = -2
/// means C. The rank-2 diagram admits both readings and is always reported
/// as B2.
inline std::string recognize_finite_family(const IntMatrix& C) {
  const int n = C.rows();
  if (n == 1) return "A1";

  int double_edges = 0;
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  std::pair<int, int> dedge{-1, -1};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (C(i, j) == 0) continue;
      Int prod = C(i, j) * C(j, i);
      adj[static_cast<size_t>(i)].push_back(j);
      adj[static_cast<size_t>(j)].push_back(i);
      if (prod == 3) {
        if (n != 2)
          throw consistency_error("triple edge in a finite block of rank > 2");
        return "G2";
      }
      if (prod == 2) {
        ++double_edges;
        dedge = {i, j};
      } else if (prod != 1) {
        throw consistency_error("edge weight impossible in a finite block");
      }
    }
  if (double_edges > 1)
    throw consistency_error("several double edges in a finite block");

  int branch = -1, max_deg = 0;
  for (int i = 0; i < n; ++i) {
    int d = static_cast<int>(adj[static_cast<size_t>(i)].size());
    max_deg = std::max(max_deg, d);
    if (d >= 3) {
      if (branch >= 0 || d > 3)
        throw consistency_error("branching impossible in a finite block");
      branch = i;
    }
  }

  if (double_edges == 0) {
    if (branch < 0) return "A" + std::to_string(n);
    // Arm lengths from the branch vertex decide D vs E.
    std::vector<int> arms;
    for (int start : adj[static_cast<size_t>(branch)]) {
      int len = 1, prev = branch, cur = start;
      for (;;) {
        int next = -1;
        for (int w : adj[static_cast<size_t>(cur)])
          if (w != prev) next = w;
        if (next < 0) break;
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return "D" + std::to_string(arms[2] + 3);
    if (arms == std::vector<int>{1, 2, 2}) return "E6";
    if (arms == std::vector<int>{1, 2, 3}) return "E7";
    if (arms == std::vector<int>{1, 2, 4}) return "E8";
    throw consistency_error("branched diagram outside the finite catalog");
  }

  // One double edge: B, C or F4. The graph must be a chain.
  if (branch >= 0)
    throw consistency_error("double edge plus branch in a finite block");
  if (n == 2) return "B2";
  int end = -1;
  for (int i = 0; i < n; ++i)
    if (adj[static_cast<size_t>(i)].size() == 1) {
      end = i;
      break;
    }
  if (end < 0) throw consistency_error("cycle in a finite block");
  std::vector<int> chain{end};
  for (int prev = -1, cur = end; static_cast<int>(chain.size()) < n;) {
    int next = -1;
    for (int w : adj[static_cast<size_t>(cur)])
      if (w != prev) next = w;
    chain.push_back(next);
    prev = cur;
    cur = next;
  }
  int pos = -1;
  for (int k = 0; k + 1 < n; ++k) {
    int a = chain[static_cast<size_t>(k)], b = chain[static_cast<size_t>(k + 1)];
    if ((a == dedge.first && b == dedge.second) ||
        (a == dedge.second && b == dedge.first))
      pos = k;
  }
  if (pos == 0 || pos == n - 2) {
    int t = (pos == 0) ? chain[0] : chain[static_cast<size_t>(n - 1)];
    int s = (pos == 0) ? chain[1] : chain[static_cast<size_t>(n - 2)];
    if (C(s, t) == -2) return "B" + std::to_string(n);
    return "C" + std::to_string(n);
  }
  if (n == 4 && pos == 1) return "F4";
  throw consistency_error("double-edge diagram outside the finite catalog");
}

}  // namespace detail

/// Family name of a single indecomposable finite-type block.
inline std::string finite_family_name(const IntMatrix& block) {
  return detail::recognize_finite_family(block);
}

/// Standard family name (A..G plus rank) of every component of a finite-type
/// matrix. Precondition: classify(A).overall is Finite.
inline std::vector<std::pair<IndexSubset, std::string>> identify_finite_type(
    const CartanMatrix& A) {
  CartanType t = classify(A);
  if (t.overall != CartanKind::Finite)
    throw precondition_error("finite-type identification needs a finite matrix");
  std::vector<std::pair<IndexSubset, std::string>> out;
  for (auto& [c, kind] : t.per_component) {
    IntMatrix block = A.matrix().submatrix(c.members(), c.members());
    out.emplace_back(c, detail::recognize_finite_family(block));
  }
  return out;
}

}  // namespace kmlat
