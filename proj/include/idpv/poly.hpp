#pragma once

#include <string>
#include <utility>
#include <vector>

#include "idpv/scalar.hpp"

namespace idpv {

/// Dense univariate polynomial in t. Trailing zeros are never stored, so the
/// zero polynomial has an empty coefficient list and degree kZeroDegree.
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  Poly(int c) : Poly(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  Poly(const Scalar& c);            // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Scalar> coeffs);

  static Poly monomial(const Scalar& c, int degree);
  static Poly variable() { return monomial(Scalar(1), 1); }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  Scalar coeff(int i) const;
  Scalar leading() const;
  const std::vector<Scalar>& coeffs() const noexcept { return c_; }
  /// Characteristic of the first coefficient that carries one (0 otherwise).
  Field field() const;

  Scalar eval(const Scalar& x) const;
  /// f(t + c), computed exactly.
  Poly shift(const Scalar& c) const;
  /// n-th component of the iterative derivation with respect to t:
  /// sum_i a_i C(i, n) t^(i-n).
  Poly hasse(std::size_t n) const;
  Poly pow(unsigned e) const;
  Poly monic() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Scalar> c_;
};

/// Quotient and remainder; throws DivisionByZero for b = 0.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// a / b when the division is exact, throws NotAUnit otherwise.
Poly divide_exact(const Poly& a, const Poly& b);
bool divides(const Poly& b, const Poly& a);
/// Monic gcd (zero if both are zero).
Poly gcd(Poly a, Poly b);

}  // namespace idpv
