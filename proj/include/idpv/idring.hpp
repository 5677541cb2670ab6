#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "idpv/base_elem.hpp"
#include "idpv/report.hpp"

namespace idpv {

/// theta(x) to order K as a callable, so checkers accept any candidate family.
using ThetaFn = std::function<BaseSeries(const BaseElem&, int)>;

/// A base ring together with its iterative derivation.
class IdRing {
 public:
  enum class Kind { PolyTheta, LocalizedPolyTheta, SeriesTheta, Trivial, TensorProduct };

  static IdRing polynomial(const Field& f);
  /// C[t] with the given polynomials inverted; zero is rejected.
  static IdRing localized(const Field& f, std::vector<Poly> inverted);
  static IdRing series(const Field& f, int order);
  static IdRing trivial(const Field& f, std::vector<std::string> generators);
  /// left (x) right with right = C[s] (theta_s) or a trivial algebra.
  static IdRing tensor(const IdRing& left, const IdRing& right);

  Kind kind() const noexcept { return kind_; }
  const Field& field() const noexcept { return field_; }
  const PolySet& inverted() const noexcept { return inverted_; }
  int series_order() const noexcept { return order_; }
  const NameSet& generators() const noexcept { return names_; }
  const IdRing& left() const { return *left_; }
  const IdRing& right() const { return *right_; }

  BaseElem constant(const Scalar& c) const;
  BaseElem from_poly(const Poly& p) const;
  BaseElem t() const;
  /// 1 / g_i for the i-th inverted polynomial.
  BaseElem inverse_of(std::size_t i) const;
  BaseElem generator(std::size_t i) const;
  /// Elementary tensor l (x) r.
  BaseElem tensor(const BaseElem& l, const BaseElem& r) const;

  bool contains(const BaseElem& x) const;
  ThetaFn derivation() const;
  std::string describe() const;

 private:
  IdRing() = default;

  Kind kind_ = Kind::PolyTheta;
  Field field_;
  PolySet inverted_;
  int order_ = 0;
  NameSet names_;
  std::shared_ptr<const IdRing> left_;
  std::shared_ptr<const IdRing> right_;
};

/// theta(x) to order K; throws BaseMismatch if x is not in the ring.
BaseSeries theta(const IdRing& ring, const BaseElem& x, int k);

/// Indexwise rule theta^(i) theta^(j) = C(i+j, i) theta^(i+j) for i + j <= K,
/// and the (T, U) form: theta in U then theta in T equals theta(x)(T + U).
CheckReport check_iteration_rule(const ThetaFn& theta, const Field& f, const std::vector<BaseElem>& samples,
                                 int k);
CheckReport check_iteration_rule(const IdRing& ring, const std::vector<BaseElem>& samples, int k);

CheckReport check_homomorphism(const ThetaFn& theta, const BaseElem& x, const BaseElem& y, int k);
CheckReport check_homomorphism(const IdRing& ring, const BaseElem& x, const BaseElem& y, int k);

/// Basis (coefficient vectors over `basis`) of the elements of the span
/// annihilated by theta^(n), 1 <= n <= K. Throws SpanNotClosed when an image
/// cannot be written in common coordinates.
std::vector<ScalarVector> constants_of_span(const IdRing& ring, const std::vector<BaseElem>& basis, int k);

/// sum_n theta^(n)(x)(c) t^n for n <= N. Throws BadPoint.
Series taylor_embed(const IdRing& ring, const BaseElem& x, const Scalar& c, int n);

/// (deg f, theta^(deg f)(f)); the second entry is the leading coefficient.
std::pair<int, Scalar> simplicity_certificate(const Poly& f);

namespace testing {

/// Candidate family theta^(0..M) given by arbitrary maps; components beyond
/// M are zero. Exists so the checkers can be exercised on non-derivations.
ThetaFn corrupted_family(std::vector<std::function<BaseElem(const BaseElem&)>> maps);

}  // namespace testing

}  // namespace idpv
