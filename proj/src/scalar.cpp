#include "idpv/scalar.hpp"

#include <ostream>
#include <vector>

namespace idpv {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::CharDivision: return "CharDivisionError";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::RootObstruction: return "RootObstruction";
    case Errc::SingularAtOrigin: return "SingularAtOrigin";
    case Errc::BadPoint: return "BadPoint";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::SpanNotClosed: return "SpanNotClosed";
    case Errc::ShiftUnavailable: return "ShiftUnavailable";
    case Errc::CharNotZero: return "CharNotZero";
    case Errc::BaseMismatch: return "BaseMismatch";
    case Errc::InsufficientOrder: return "InsufficientOrder";
    case Errc::ReductionOverflow: return "ReductionOverflow";
    case Errc::NotDiagonal: return "NotDiagonal";
    case Errc::NotSupported: return "NotSupported";
    case Errc::ParseError: return "ParseError";
    case Errc::SemanticError: return "SemanticError";
  }
  return "Error";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Field::Field(std::uint64_t characteristic) : p_(characteristic) {
  if (p_ != 0 && !is_prime(p_)) {
    throw Error(Errc::SemanticError, "characteristic " + std::to_string(p_) + " is not prime");
  }
  if (p_ >= (std::uint64_t{1} << 62)) {
    throw Error(Errc::SemanticError, "characteristic too large");
  }
}

Scalar::Scalar(long long v) : q_(mpz_class(std::to_string(v))) {}

Scalar::Scalar(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Scalar Scalar::from_integer(const mpz_class& v, const Field& f) {
  Scalar s;
  if (!f.is_prime_field()) {
    s.q_ = v;
    return s;
  }
  mpz_class r = v % mpz_class(std::to_string(f.characteristic()));
  if (r < 0) r += mpz_class(std::to_string(f.characteristic()));
  s.p_ = f.characteristic();
  s.q_ = 0;
  s.r_ = std::stoull(r.get_str());
  return s;
}

std::uint64_t Scalar::mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t Scalar::powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return result;
}

Scalar Scalar::in_field(const Scalar& q, const Field& f) {
  if (q.p_ == f.characteristic()) return q;
  if (q.p_ != 0) {
    throw Error(Errc::FieldMismatch, "cannot move an F_" + std::to_string(q.p_) +
                                         " element into characteristic " +
                                         std::to_string(f.characteristic()));
  }
  const std::uint64_t p = f.characteristic();
  const mpz_class pz(std::to_string(p));
  mpz_class num = q.q_.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = q.q_.get_den() % pz;
  if (den == 0) {
    throw Error(Errc::CharDivision, q.to_string() + " has no image in F_" + std::to_string(p));
  }
  const std::uint64_t n = std::stoull(num.get_str());
  const std::uint64_t d = std::stoull(den.get_str());
  Scalar s;
  s.p_ = p;
  s.r_ = mulmod(n, powmod(d, p - 2, p), p);
  return s;
}

void Scalar::coerce_pair(Scalar& o) {
  if (p_ == o.p_) return;
  if (p_ == 0) {
    *this = in_field(*this, Field(o.p_));
  } else if (o.p_ == 0) {
    o = in_field(o, Field(p_));
  } else {
    throw Error(Errc::FieldMismatch, "F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
  }
}

bool Scalar::is_zero() const { return p_ == 0 ? q_ == 0 : r_ == 0; }
bool Scalar::is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1 % p_; }
bool Scalar::is_integer() const { return p_ != 0 || q_.get_den() == 1; }

int Scalar::sign() const {
  if (p_ == 0) return sgn(q_);
  return r_ == 0 ? 0 : 1;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  Scalar s = *this;
  if (p_ == 0) {
    s.q_ = 1 / q_;
    s.q_.canonicalize();
  } else {
    s.r_ = powmod(r_, p_ - 2, p_);
  }
  return s;
}

Scalar Scalar::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar result = Scalar::in_field(Scalar(1), field());
  Scalar base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  Scalar b = o;
  coerce_pair(b);
  if (p_ == 0) {
    q_ += b.q_;
  } else {
    r_ = (r_ + b.r_) % p_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  Scalar b = o;
  coerce_pair(b);
  if (p_ == 0) {
    q_ -= b.q_;
  } else {
    r_ = (r_ + p_ - b.r_) % p_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Scalar b = o;
  coerce_pair(b);
  if (p_ == 0) {
    q_ *= b.q_;
  } else {
    r_ = mulmod(r_, b.r_, p_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  Scalar b = o;
  coerce_pair(b);
  return *this *= b.inverse();
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (p_ == 0) {
    s.q_ = -q_;
  } else {
    s.r_ = (p_ - r_) % p_;
  }
  return s;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ == b.p_) return a.p_ == 0 ? a.q_ == b.q_ : a.r_ == b.r_;
  Scalar x = a;
  Scalar y = b;
  try {
    x.coerce_pair(y);
  } catch (const Error&) {
    return false;
  }
  return x == y;
}

bool canonical_less(const Scalar& a, const Scalar& b) {
  if (a.p_ != b.p_) return a.p_ < b.p_;
  if (a.p_ == 0) return a.q_ < b.q_;
  return a.r_ < b.r_;
}

std::string Scalar::to_string() const {
  if (p_ != 0) return std::to_string(r_);
  return q_.get_str();
}

Scalar Scalar::parse(std::string_view text, const Field& f) {
  std::string s(text);
  auto bad = [&] { return Error(Errc::ParseError, "malformed scalar '" + s + "'"); };
  if (s.empty()) throw bad();
  // In char p a fraction is accepted when its denominator is invertible mod p.
  const std::size_t slash = s.find('/');
  auto valid_int = [](const std::string& part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i >= part.size()) return false;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num);
  mpz_class d(den);
  if (d == 0) throw Error(Errc::DivisionByZero, "zero denominator in '" + s + "'");
  return in_field(Scalar(n, d), f);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

namespace {

// C(n, k) mod p for n, k < p.
std::uint64_t small_binomial_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (k > n) return 0;
  unsigned __int128 num = 1;
  unsigned __int128 den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    num = num * ((n - i) % p) % p;
    den = den * ((i + 1) % p) % p;
  }
  // den is a product of values in [1, p), hence a unit.
  std::uint64_t d = static_cast<std::uint64_t>(den);
  std::uint64_t inv = 1;
  std::uint64_t e = p - 2;
  std::uint64_t b = d;
  while (e > 0) {
    if (e & 1) inv = static_cast<std::uint64_t>(static_cast<unsigned __int128>(inv) * b % p);
    b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % p);
    e >>= 1;
  }
  return static_cast<std::uint64_t>(num * inv % p);
}

}  // namespace

Scalar binomial(std::uint64_t n, std::uint64_t k, const Field& f) {
  if (k > n) return Scalar::in_field(Scalar(0), f);
  if (!f.is_prime_field()) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Scalar(mpq_class(r));
  }
  const std::uint64_t p = f.characteristic();
  std::uint64_t acc = 1;
  while ((n > 0 || k > 0) && acc != 0) {
    const std::uint64_t nd = n % p;
    const std::uint64_t kd = k % p;
    if (kd > nd) return Scalar::from_integer(0, f);
    acc = static_cast<std::uint64_t>(static_cast<unsigned __int128>(acc) *
                                     small_binomial_mod(nd, kd, p) % p);
    n /= p;
    k /= p;
  }
  return Scalar::from_integer(mpz_class(std::to_string(acc)), f);
}

Scalar generalized_binomial(const Scalar& a, std::uint64_t n, const Field& f) {
  if (f.is_prime_field() && n >= f.characteristic()) {
    throw Error(Errc::CharDivision, std::to_string(n) + "! vanishes in F_" +
                                        std::to_string(f.characteristic()));
  }
  const Scalar x = Scalar::in_field(a, f);
  Scalar num = Scalar::in_field(Scalar(1), f);
  Scalar den = num;
  for (std::uint64_t i = 0; i < n; ++i) {
    num *= x - Scalar(static_cast<long long>(i));
    den *= Scalar(static_cast<long long>(i + 1));
  }
  return num / den;
}

}  // namespace idpv
