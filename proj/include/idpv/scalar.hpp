#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

#include "idpv/errors.hpp"

namespace idpv {

/// Coefficient field: Q (characteristic 0) or F_p.
class Field {
 public:
  Field() = default;
  explicit Field(std::uint64_t characteristic);

  static Field rationals() { return Field(); }

  std::uint64_t characteristic() const noexcept { return p_; }
  bool is_prime_field() const noexcept { return p_ != 0; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint64_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// Exact field element. Characteristic-0 values are reduced fractions and act
/// as universal constants: combined with an F_p value they are reduced mod p.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long v);       // NOLINT(google-explicit-constructor)
  explicit Scalar(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  Scalar(const mpz_class& num, const mpz_class& den);

  /// Residue class of `v` in F_p (p = 0 gives the rational integer).
  static Scalar from_integer(const mpz_class& v, const Field& f);
  /// Image of the rational `q` in `f`; throws CharDivision if the
  /// denominator vanishes mod p.
  static Scalar in_field(const Scalar& q, const Field& f);

  std::uint64_t characteristic() const noexcept { return p_; }
  Field field() const { return Field(p_); }

  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;
  /// Sign for char 0; 0/1 for char p.
  int sign() const;

  const mpq_class& rational() const { return q_; }
  std::uint64_t residue() const { return r_; }

  Scalar inverse() const;
  Scalar pow(long long e) const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Total order used only for canonical sorting (not a field order).
  friend bool canonical_less(const Scalar& a, const Scalar& b);

  std::string to_string() const;
  /// Parses "[-]a[/b]" (char 0) or "[-]a" (char p, reduced mod p).
  static Scalar parse(std::string_view text, const Field& f);

 private:
  void coerce_pair(Scalar& o);
  static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
  static std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);

  std::uint64_t p_ = 0;
  mpq_class q_;
  std::uint64_t r_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// C(n, k) in `f`. In characteristic p the value is assembled from the
/// base-p digits of n and k (Lucas), never through factorials.
Scalar binomial(std::uint64_t n, std::uint64_t k, const Field& f);

/// a(a-1)...(a-n+1)/n! with `a` taken in `f`. Throws CharDivision when
/// char f = p > 0 and n >= p.
Scalar generalized_binomial(const Scalar& a, std::uint64_t n, const Field& f);

using ScalarMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using ScalarVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

}  // namespace idpv

namespace Eigen {
template <>
struct NumTraits<idpv::Scalar> : GenericNumTraits<idpv::Scalar> {
  using Real = idpv::Scalar;
  using NonInteger = idpv::Scalar;
  using Nested = idpv::Scalar;
  using Literal = idpv::Scalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
