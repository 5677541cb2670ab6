#include "idpv/poly.hpp"

#include <sstream>

namespace idpv {

Poly::Poly(const Scalar& c) {
  if (!c.is_zero()) c_.push_back(c);
}

Poly::Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const Scalar& c, int degree) {
  if (c.is_zero()) return {};
  Poly p;
  p.c_.assign(static_cast<std::size_t>(degree) + 1, Scalar::in_field(Scalar(0), c.field()));
  p.c_.back() = c;
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Scalar(0);
  return c_[static_cast<std::size_t>(i)];
}

Scalar Poly::leading() const { return c_.empty() ? Scalar(0) : c_.back(); }

Field Poly::field() const {
  for (const auto& c : c_) {
    if (c.characteristic() != 0) return c.field();
  }
  return Field();
}

Scalar Poly::eval(const Scalar& x) const {
  Scalar acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::shift(const Scalar& c) const {
  // Horner with (t + c) in place of t.
  Poly acc;
  const Poly lin(std::vector<Scalar>{c, Scalar(1)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly(*it);
  return acc;
}

Poly Poly::hasse(std::size_t n) const {
  if (static_cast<int>(n) > degree()) return {};
  const Field f = field();
  std::vector<Scalar> out(c_.size() - n);
  for (std::size_t i = n; i < c_.size(); ++i) out[i - n] = c_[i] * binomial(i, n, f);
  return Poly(std::move(out));
}

Poly Poly::pow(unsigned e) const {
  Poly result(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  return *this * leading().inverse();
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Scalar(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Scalar(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Scalar> out(a.c_.size() + b.c_.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(out));
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Scalar& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.c_.size() != b.c_.size()) return false;
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Scalar& c = c_[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    std::string s = c.to_string();
    bool neg = c.characteristic() == 0 && c.sign() < 0;
    if (neg) s.erase(0, 1);
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool unit = s == "1";
    if (i == 0) {
      os << s;
      continue;
    }
    if (!unit) os << (s.find('/') != std::string::npos ? "(" + s + ")" : s) << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  Poly r = a;
  if (a.degree() < b.degree()) return {Poly(), r};
  std::vector<Scalar> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Scalar(0));
  const Scalar lead_inv = b.leading().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int shift = r.degree() - b.degree();
    const Scalar f = r.leading() * lead_inv;
    q[static_cast<std::size_t>(shift)] = f;
    r -= Poly::monomial(f, shift) * b;
  }
  return {Poly(std::move(q)), r};
}

Poly divide_exact(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) {
    throw Error(Errc::NotAUnit, b.to_string() + " does not divide " + a.to_string());
  }
  return q;
}

bool divides(const Poly& b, const Poly& a) {
  if (b.is_zero()) return a.is_zero();
  return divmod(a, b).second.is_zero();
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

}  // namespace idpv
