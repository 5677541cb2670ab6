#pragma once

#include <optional>
#include <vector>

#include "idpv/idring.hpp"
#include "idpv/matseries.hpp"

namespace idpv {

/// Module with distinguished generators b and theta_M(b) = b * A(t, T).
/// When `exact` is set, A is a polynomial in T and every higher coefficient
/// is zero; otherwise A is known up to its stored order.
struct IdModule {
  IdRing base;
  MatSeries<BaseElem> a;
  bool exact = false;

  int rank() const { return static_cast<int>(a.rows()); }
  /// A to order k; throws InsufficientOrder when the data does not reach k.
  MatSeries<BaseElem> a_to(int k) const;
};

IdModule make_module(const IdRing& base, MatSeries<BaseElem> a, bool exact = false);

/// A(t, 0) = identity and an invertible constant-term matrix.
CheckReport validate_module(const IdModule& m);

/// A(t, T + U) = A(t, T) A(t + T, U) on the (kt, ku) grid. The shift t -> t+T
/// is applied coefficientwise by theta; ShiftUnavailable for series bases.
CheckReport check_cocycle(const IdModule& m, int kt, int ku);

/// theta_M^(i) theta_M^(j) = C(i+j, i) theta_M^(i+j) on the generators, for
/// i + j <= k, using theta_M^(n)(b v) = b sum_{p+q=n} A_p theta^(q)(v).
CheckReport check_module_iteration(const IdModule& m, int k);

/// theta_M^(n) applied to the coordinate vector v.
std::vector<BaseElem> module_theta(const IdModule& m, const std::vector<BaseElem>& v, int n);

/// A_0 = 1, A_(n+1) = (theta^(1)(A_n) + D A_n) / (n + 1). Char 0 only.
IdModule from_derivation_matrix(const IdRing& base, const BaseMatrix& d, int k);

/// Rank-1 module with A = (theta(f) / f)^(1/m) for a unit f of the base.
IdModule radicand_module(const IdRing& base, const BaseElem& f, unsigned m, int k);

IdModule direct_sum(const IdModule& a, const IdModule& b);
IdModule tensor_product(const IdModule& a, const IdModule& b);

/// Cover x_1..x_l of Spec S with sum a_i x_i^(n_i) = 1 and, for each piece, a
/// local basis b_j = b * B_j of the module over S[1/x_j]. Transition
/// matrices T_ij = x_j^(n_j) B_j^-1 B_i are checked to be denominator-free.
struct LocalCoverData {
  std::vector<Poly> x;
  std::vector<int> n;
  std::vector<BaseElem> a;
  std::vector<BaseMatrix> bases;        // empty: identity for every piece
  std::vector<BaseMatrix> transitions;  // optional, row-major over (i, j)
  bool is_trivial() const;
  BaseMatrix local_basis(std::size_t j, int rank) const;
};

CheckReport validate_cover(const LocalCoverData& c, const IdModule& m);

}  // namespace idpv
