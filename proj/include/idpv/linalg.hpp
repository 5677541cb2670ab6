#pragma once

#include <vector>

#include "idpv/scalar.hpp"

namespace idpv {

/// Reduced row echelon form. Pivots are chosen deterministically: first
/// nonzero column, then the smallest row index holding a nonzero entry.
struct Echelon {
  ScalarMatrix rref;        // rank() rows, each with pivot entry 1
  std::vector<int> pivots;  // pivot column of each row
  int rank() const { return static_cast<int>(pivots.size()); }
};

/// Field of the matrix entries (the first characteristic found, else Q).
Field field_of(const ScalarMatrix& m);

/// Exact RREF; fraction-free with content removal over Q, plain Gauss-Jordan
/// over F_p.
Echelon row_echelon(const ScalarMatrix& m);
int rank(const ScalarMatrix& m);
/// Basis of {x : m x = 0} as the columns of the result.
ScalarMatrix kernel(const ScalarMatrix& m);
Scalar determinant(const ScalarMatrix& m);
/// Throws NotAUnit for a singular matrix.
ScalarMatrix inverse(const ScalarMatrix& m);

/// Residue of v (a row vector of matching width) modulo the row span: pivot
/// coordinates are cleared, so the residue is a canonical normal form.
ScalarVector reduce(const Echelon& e, ScalarVector v);
bool in_row_span(const Echelon& e, const ScalarVector& v);

}  // namespace idpv
