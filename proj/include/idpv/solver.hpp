#pragma once

#include <optional>
#include <vector>

#include "idpv/idmodule.hpp"

namespace idpv {

/// Solution matrix F at a point c, as a matrix series in the local
/// coordinate, with e = b * F a basis of constant vectors.
struct FundamentalMatrix {
  Scalar point;
  int order = 0;
  MatSeries<Scalar> f;
};

/// Coefficients A_0..A_k of A with every entry Taylor-embedded at c to order n.
std::vector<MatSeries<Scalar>> embed_coefficients(const IdModule& m, const Scalar& c, int n, int k);

/// F = A^(t, -t) where A^ is A embedded at c.
FundamentalMatrix fundamental_matrix(const IdModule& m, const Scalar& c, int n);

/// A^(t, T) F(t + T) = F(t) up to T^kt, coefficients up to order n - kt.
CheckReport verify_constant_basis(const IdModule& m, const FundamentalMatrix& f, int kt);

struct WronskianResult {
  bool independent = false;
  std::vector<int> indices;  // k_1 < ... < k_r when independent
  Series det;                // det W(k_1..k_r)
  ScalarVector combination;  // when dependent: sum c_i u_i = 0
  int valid_to = -1;         // order to which the combination holds
};

/// Greedy search over derivative orders 0, 1, ..., bound for rows of the
/// Hasse-Wronskian that raise the rank.
WronskianResult hasse_wronskian(const std::vector<Series>& u, int bound);

struct LinearIdRelation {
  std::vector<Poly> s;  // sum_i s_i theta^(i)(x) = 0
  int certified_to = 0;
};

/// Candidate relation with deg s_i <= coeff_deg_bound, i <= order_bound,
/// certified to the order of x. Needs N >= (order_bound+1)(coeff_deg_bound+1)+4.
std::optional<LinearIdRelation> find_linear_id_relation(const Series& x, const IdRing& base, int order_bound,
                                                        int coeff_deg_bound);

/// Primitive integer multiple (char 0) with first nonzero entry positive;
/// in char p the first nonzero entry is scaled to 1.
ScalarVector normalize_vector(ScalarVector v);

}  // namespace idpv
