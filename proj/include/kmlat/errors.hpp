#pragma once

#include <stdexcept>
#include <string>

namespace kmlat {

/// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch: non-square input, ragged rows, wrong vector length.
struct shape_error : error {
  using error::error;
};

/// Inversion or generator-order request on a singular matrix.
struct singular_error : error {
  using error::error;
};

/// Quotient of lattices where the claimed sublattice is not contained in the
/// ambient one, or direct-sum inputs with overlapping spans.
struct containment_error : error {
  using error::error;
};

/// A matrix failed one of the generalized Cartan matrix conditions.
/// Row/col are 1-based positions of the offending entry.
struct validation_error : error {
  int row, col;
  validation_error(const std::string& what, int r, int c)
      : error(what), row(r), col(c) {}
};

/// Bad index subset: out-of-range member, unknown label, or I = S where a
/// proper subset is required.
struct subset_error : error {
  using error::error;
};

/// An operation that needs det A_I != 0 was called on a semidirect pair.
struct split_error : error {
  using error::error;
};

/// Some other precondition failed (not affine, not indecomposable, ...).
struct precondition_error : error {
  using error::error;
};

/// Two routes that must agree produced different answers. Indicates a bug,
/// never a property of the input.
struct consistency_error : error {
  using error::error;
};

/// Enumeration size limit exceeded without an explicit override.
struct limit_error : error {
  using error::error;
};

}  // namespace kmlat
