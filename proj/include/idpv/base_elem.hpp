#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "idpv/mpoly.hpp"
#include "idpv/series.hpp"

namespace idpv {

using PolySet = std::shared_ptr<const std::vector<Poly>>;
using NameSet = std::shared_ptr<const std::vector<std::string>>;

/// Element num / prod g_i^e_i of C[t] localized at a finite set {g_i}.
/// A null set means plain C[t]. Exponents are kept minimal: a factor g_i is
/// cancelled whenever it divides the numerator exactly.
class LocElem {
 public:
  LocElem() = default;
  explicit LocElem(Poly num, PolySet inverted = nullptr, std::vector<int> exps = {});

  const Poly& numerator() const noexcept { return num_; }
  const std::vector<int>& exponents() const noexcept { return e_; }
  const PolySet& inverted() const noexcept { return inv_; }
  Poly denominator() const;
  bool is_polynomial() const;

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_unit() const;
  /// Throws NotAUnit.
  LocElem inverse() const;

  /// x(c + t) to order n. Throws BadPoint if an inverted polynomial vanishes at c.
  Series at_point(const Scalar& c, int order) const;

  LocElem& operator+=(const LocElem& o);
  LocElem& operator-=(const LocElem& o);
  LocElem& operator*=(const LocElem& o);
  friend LocElem operator+(LocElem a, const LocElem& b) { return a += b; }
  friend LocElem operator-(LocElem a, const LocElem& b) { return a -= b; }
  friend LocElem operator*(LocElem a, const LocElem& b) { return a *= b; }
  LocElem operator-() const;
  friend bool operator==(const LocElem& a, const LocElem& b);

  std::string to_string() const;

  /// Brings both operands onto one inverted set; throws BaseMismatch.
  static void align(LocElem& a, LocElem& b);

 private:
  void normalize();

  Poly num_;
  std::vector<int> e_;
  PolySet inv_;
};

inline LocElem unit_inverse(const LocElem& x) { return x.inverse(); }

/// Polynomial in named generators with the trivial derivation.
struct TrivElem {
  MPoly<Scalar> p;
  NameSet names;
  bool is_zero() const { return p.is_zero(); }
};

class BaseElem;

/// Element of L (x) R with R = C[s] (derivation d/ds) or a trivial algebra;
/// stored as right-monomial -> left coefficient.
struct TensorElem {
  enum class Right { Poly, Trivial };
  Right right = Right::Trivial;
  NameSet right_names;
  std::shared_ptr<const std::map<Monomial, BaseElem>> terms;
  bool is_zero() const;
};

/// Element of one of the supported base rings; a bare Scalar is a constant
/// that coerces into any ring it meets.
class BaseElem {
 public:
  enum class Kind { Constant, Local, Series, Trivial, Tensor };
  using Rep = std::variant<Scalar, LocElem, idpv::Series, TrivElem, TensorElem>;

  BaseElem() : rep_(Scalar(0)) {}
  BaseElem(int v) : rep_(Scalar(v)) {}                 // NOLINT(google-explicit-constructor)
  BaseElem(const Scalar& c) : rep_(c) {}               // NOLINT(google-explicit-constructor)
  BaseElem(const Poly& p) : rep_(LocElem(p)) {}        // NOLINT(google-explicit-constructor)
  BaseElem(LocElem x) : rep_(std::move(x)) {}          // NOLINT(google-explicit-constructor)
  BaseElem(idpv::Series s) : rep_(std::move(s)) {}     // NOLINT(google-explicit-constructor)
  BaseElem(TrivElem x) : rep_(std::move(x)) {}         // NOLINT(google-explicit-constructor)
  BaseElem(TensorElem x) : rep_(std::move(x)) {}       // NOLINT(google-explicit-constructor)

  Kind kind() const noexcept { return static_cast<Kind>(rep_.index()); }
  const Rep& rep() const noexcept { return rep_; }
  template <class T>
  const T& as() const {
    return std::get<T>(rep_);
  }

  bool is_zero() const;
  bool is_unit() const;
  /// Throws NotAUnit.
  BaseElem inverse() const;
  /// The value as a field constant, when it is one.
  std::optional<Scalar> constant_value() const;
  Field field() const;

  BaseElem& operator+=(const BaseElem& o);
  BaseElem& operator-=(const BaseElem& o);
  BaseElem& operator*=(const BaseElem& o);
  friend BaseElem operator+(BaseElem a, const BaseElem& b) { return a += b; }
  friend BaseElem operator-(BaseElem a, const BaseElem& b) { return a -= b; }
  friend BaseElem operator*(BaseElem a, const BaseElem& b) { return a *= b; }
  BaseElem operator-() const;
  friend bool operator==(const BaseElem& a, const BaseElem& b);
  friend bool operator!=(const BaseElem& a, const BaseElem& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Rep rep_;
};

inline BaseElem unit_inverse(const BaseElem& x) { return x.inverse(); }

using BaseMatrix = Eigen::Matrix<BaseElem, Eigen::Dynamic, Eigen::Dynamic>;
using BaseSeries = TruncSeries<BaseElem>;

/// theta(x) to order k; coefficient n is the n-th component of the iterative
/// derivation attached to the element's ring.
BaseSeries theta(const BaseElem& x, int k);
BaseElem theta_component(const BaseElem& x, int n);

/// Tensor element l (x) m for a right monomial m.
BaseElem make_tensor(TensorElem::Right right, const NameSet& right_names, const Monomial& m,
                     const BaseElem& left);

}  // namespace idpv

namespace Eigen {
template <>
struct NumTraits<idpv::BaseElem> : GenericNumTraits<idpv::BaseElem> {
  using Real = idpv::BaseElem;
  using NonInteger = idpv::BaseElem;
  using Nested = idpv::BaseElem;
  using Literal = idpv::BaseElem;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
