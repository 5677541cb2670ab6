#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idpv/mpoly.hpp"
#include "idpv/solver.hpp"

namespace idpv {

/// Polynomial in generator symbols with coefficients in C[t] (t is the base
/// coordinate, not the local one at the expansion point).
using RelPoly = MPoly<Poly>;
/// Polynomial in generator symbols with coefficients in the base ring.
using SymPoly = MPoly<BaseElem>;

/// Generators of a Picard-Vessiot ring as symbols with their Taylor images.
/// Free case: entries of F (row-major) and det(F)^-1. Cover case: entries of
/// every Y_j = F^-1 B_j, then det(x_j^n_j Y_j^-1) for every piece.
struct PvPresentation {
  IdModule module;
  std::optional<LocalCoverData> cover;  // set only for a nontrivial cover
  Scalar point;
  int order = 0;
  std::vector<std::string> symbols;
  std::vector<Series> images;
  FundamentalMatrix fundamental;
  /// Partition sum a'_j x_j^(n_j r) = 1 used to rewrite F through the Y_j.
  std::vector<Poly> wide_partition;

  int rank() const { return module.rank(); }
  bool is_cover() const { return cover.has_value(); }
};

PvPresentation pv_generators(const IdModule& m, const std::optional<LocalCoverData>& cover, const Scalar& c, int n);

/// rel evaluated on the symbol images, with t -> c + t.
Series evaluate(const PvPresentation& p, const RelPoly& rel);

/// Minimal ideal generators (`relations`) of the bounded relation space: symbol degree <= d,
/// t-degree <= e, every relation vanishing on the images to order `order`.
struct RelationSet {
  std::vector<std::string> symbols;
  Field field;
  int d = 0;
  int e = 0;
  int order = 0;
  std::vector<RelPoly> relations;
  /// Reduced echelon basis of the whole bounded kernel, largest leading term first.
  std::vector<RelPoly> reduced;
  /// Dimension of the full bounded kernel (relations and their multiples).
  int kernel_dim = 0;
};

/// threads > 1 evaluates monomial columns in parallel; output is unchanged.
RelationSet mine_relations(const PvPresentation& p, int d, int e, int threads = 1);

/// Span of t^j m r (r in gens, m a monomial) inside symbol degree <= d and
/// t-degree <= e, kept in reduced echelon form for membership and residues.
class IdealSpan {
 public:
  IdealSpan(const std::vector<RelPoly>& gens, int nsym, int d, int e, const Field& f);

  int d() const { return d_; }
  int e() const { return e_; }
  bool fits(const RelPoly& p) const;
  bool contains(const RelPoly& p) const;
  /// Canonical residue modulo the span; throws ReductionOverflow if p does not fit.
  RelPoly residue(const RelPoly& p) const;
  std::vector<Monomial> residue_support(const RelPoly& p) const;

 private:
  ScalarVector to_vector(const RelPoly& p) const;
  RelPoly from_vector(const ScalarVector& v) const;

  int nsym_;
  int d_;
  int e_;
  Field field_;
  std::vector<Monomial> monos_;
  std::map<Monomial, int> pos_;
  Echelon span_;
};

/// Largest t-degree among the coefficients.
int t_degree(const RelPoly& p);

/// theta of every symbol as a T-series (up to k) of polynomials in the
/// symbols with base coefficients: theta(F) = A^-1 F, theta(det F^-1) =
/// det(A) det F^-1, and the matching rules for cover symbols.
std::vector<std::vector<SymPoly>> symbol_theta(const PvPresentation& p, int k);

/// theta applied formally to each relation; each T-coefficient (denominators
/// cleared by a unit of the base) must lie in the ideal span.
CheckReport check_id_stable_ideal(const RelationSet& rs, const PvPresentation& p, int k);

/// Polynomials in the entries of Z (and w = det Z^-1) cutting out the
/// stabilizer of the relations under F -> F Z.
struct GroupEquations {
  int rank = 0;
  std::vector<std::string> variables;  // z entries, row-major
  Field field;
  std::vector<MPoly<Scalar>> equations;
  bool identity_ok = true;
};

GroupEquations stabilizer_equations(const RelationSet& rs, const PvPresentation& p, int d_z);

/// Rank 1: monic generator of the ideal of the equations in C[z] (zero when
/// no equation was found, i.e. the multiplicative group at this bound).
Poly group_generator(const GroupEquations& g);

/// Constants of the bounded model C[[t]] (x) R, with R = S[X]/I and
/// theta(X) = A^-1 X, compared with the span of the monomials in
/// Z = F^-1 X and det Z^-1 of degree <= d.
struct TensorConstants {
  CheckReport report;
  int dimension = 0;
  std::vector<std::string> basis;  // Z-monomials spanning the constants
};

TensorConstants tensor_constants_check(const PvPresentation& p, const RelationSet& rs, int d, int k);

/// Invariants of the subgroup mu_k (k = 0: the whole multiplicative group)
/// for a rank-1 presentation, and the relations among them.
struct DiagonalInvariants {
  std::vector<std::string> generators;  // e.g. "g1^3"
  std::vector<Monomial> monomials;
  std::vector<int> weights;
  bool only_base = false;
  std::optional<RelationSet> relations;
};

DiagonalInvariants diagonal_invariants(const RelationSet& rs, const PvPresentation& p, unsigned k, int d,
                                       int relation_degree = 2);

/// Both inclusions between the ideals of a free and a cover presentation
/// under the symbol translations Y_j = adj(F) det(F)^-1 B_j,
/// d_j = det(x_j^n_j B_j^-1) det F and F = sum_j a'_j B_j adj(Y_j) d_j,
/// det F^-1 = sum_j a'_j det(Y_j) det(x_j^n_j B_j^-1).
CheckReport compare_presentations(const RelationSet& free_rs, const PvPresentation& free_p,
                                  const RelationSet& cover_rs, const PvPresentation& cover_p);

/// p with every symbol replaced by a polynomial in a new set of symbols.
RelPoly substitute(const RelPoly& p, const std::vector<RelPoly>& images, int nvars);

std::string relpoly_to_string(const RelPoly& p, const std::vector<std::string>& names);
std::string equation_to_string(const MPoly<Scalar>& p, const std::vector<std::string>& names);

}  // namespace idpv
