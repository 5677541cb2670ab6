#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idpv/poly.hpp"

namespace idpv {

inline Scalar unit_inverse(const Scalar& c) {
  if (c.is_zero()) throw Error(Errc::NotAUnit, "zero constant term");
  return c.inverse();
}

inline Poly unit_inverse(const Poly& c) {
  if (c.is_zero() || !c.is_constant()) {
    throw Error(Errc::NotAUnit, c.to_string() + " is not a unit");
  }
  return Poly(c.leading().inverse());
}

/// Power series in one variable, truncated at an explicit order. A series of
/// order kExact is a polynomial known to all orders (constants coerce to it);
/// mixed-order arithmetic truncates to the smaller order.
template <class C>
class TruncSeries {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max();

  TruncSeries() = default;
  TruncSeries(int c) : TruncSeries(C(c)) {}  // NOLINT(google-explicit-constructor)
  TruncSeries(const C& c) {                  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) c_.push_back(c);
  }
  TruncSeries(std::vector<C> coeffs, int order) : order_(order), c_(std::move(coeffs)) {
    if (order < 0) throw Error(Errc::OrderMismatch, "negative truncation order");
    c_.resize(static_cast<std::size_t>(order) + 1, C(0));
  }

  static TruncSeries exact(std::vector<C> coeffs) {
    TruncSeries s;
    s.c_ = std::move(coeffs);
    s.trim();
    return s;
  }

  int order() const noexcept { return order_; }
  bool is_exact() const noexcept { return order_ == kExact; }
  /// Number of stored coefficients (order + 1 for a truncated series).
  int stored() const noexcept { return static_cast<int>(c_.size()); }
  const std::vector<C>& coeffs() const noexcept { return c_; }

  C operator[](int n) const {
    if (n > order_) {
      throw Error(Errc::OrderMismatch, "coefficient " + std::to_string(n) +
                                           " beyond truncation order " + std::to_string(order_));
    }
    if (n < 0 || n >= stored()) return C(0);
    return c_[static_cast<std::size_t>(n)];
  }

  void set(int n, const C& v) {
    if (n > order_) throw Error(Errc::OrderMismatch, "write beyond truncation order");
    if (n >= stored()) c_.resize(static_cast<std::size_t>(n) + 1, C(0));
    c_[static_cast<std::size_t>(n)] = v;
    if (is_exact()) trim();
  }

  TruncSeries truncated(int order) const {
    if (order > order_) {
      throw Error(Errc::OrderMismatch, "cannot raise truncation order " + std::to_string(order_) +
                                           " to " + std::to_string(order));
    }
    std::vector<C> out(c_.begin(), c_.begin() + std::min(stored(), order + 1));
    return TruncSeries(std::move(out), order);
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const C& c) { return c.is_zero(); });
  }

  TruncSeries& operator+=(const TruncSeries& o) { return *this = combine(*this, o, 1); }
  TruncSeries& operator-=(const TruncSeries& o) { return *this = combine(*this, o, -1); }
  TruncSeries& operator*=(const TruncSeries& o) { return *this = *this * o; }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, 1); }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, -1); }
  TruncSeries operator-() const {
    TruncSeries r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    TruncSeries r;
    r.order_ = std::min(a.order_, b.order_);
    if (a.c_.empty() || b.c_.empty()) {
      if (!r.is_exact()) r.c_.assign(static_cast<std::size_t>(r.order_) + 1, C(0));
      return r;
    }
    const long long full = static_cast<long long>(a.stored()) + b.stored() - 1;
    const int len = static_cast<int>(r.is_exact() ? full : std::min<long long>(full, r.order_ + 1LL));
    r.c_.assign(static_cast<std::size_t>(len), C(0));
    for (int i = 0; i < a.stored() && i < len; ++i) {
      const C& ai = a.c_[static_cast<std::size_t>(i)];
      if (ai.is_zero()) continue;
      for (int j = 0; j < b.stored() && i + j < len; ++j) {
        r.c_[static_cast<std::size_t>(i + j)] += ai * b.c_[static_cast<std::size_t>(j)];
      }
    }
    if (r.is_exact()) {
      r.trim();
    } else {
      r.c_.resize(static_cast<std::size_t>(r.order_) + 1, C(0));
    }
    return r;
  }

  /// Equality up to the smaller of the two truncation orders.
  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return first_difference(a, b) < 0;
  }
  friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

  /// Index of the first differing coefficient within the common order, or -1.
  friend int first_difference(const TruncSeries& a, const TruncSeries& b) {
    const int n = std::min({std::max(a.stored(), b.stored()) - 1, a.order_, b.order_});
    for (int i = 0; i <= n; ++i) {
      if (!(a.at_or_zero(i) == b.at_or_zero(i))) return i;
    }
    return -1;
  }

  template <class F>
  auto map(F&& f) const {
    using D = decltype(f(std::declval<const C&>()));
    std::vector<D> out;
    out.reserve(c_.size());
    for (const auto& c : c_) out.push_back(f(c));
    if (is_exact()) return TruncSeries<D>::exact(std::move(out));
    return TruncSeries<D>(std::move(out), order_);
  }

  std::string to_string(const std::string& var = "T") const {
    std::string out;
    for (int i = 0; i < stored(); ++i) {
      const C& c = c_[static_cast<std::size_t>(i)];
      if (c.is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c.to_string() + ")";
      if (i > 0) out += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    if (out.empty()) out = "0";
    if (!is_exact()) out += " + O(" + var + "^" + std::to_string(order_ + 1) + ")";
    return out;
  }

 private:
  C at_or_zero(int i) const { return i < stored() ? c_[static_cast<std::size_t>(i)] : C(0); }

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  static TruncSeries combine(const TruncSeries& a, const TruncSeries& b, int sign) {
    TruncSeries r;
    r.order_ = std::min(a.order_, b.order_);
    const int len = r.is_exact() ? std::max(a.stored(), b.stored()) : r.order_ + 1;
    r.c_.assign(static_cast<std::size_t>(len), C(0));
    for (int i = 0; i < len; ++i) {
      C v = a.at_or_zero(i);
      if (sign > 0) {
        v += b.at_or_zero(i);
      } else {
        v -= b.at_or_zero(i);
      }
      r.c_[static_cast<std::size_t>(i)] = std::move(v);
    }
    if (r.is_exact()) r.trim();
    return r;
  }

  int order_ = kExact;
  std::vector<C> c_;
};

using Series = TruncSeries<Scalar>;

/// Multiplicative inverse to `order` (defaults to the order of `s`; required
/// for exact inputs). Throws NotAUnit when the constant term is not a unit.
template <class C>
TruncSeries<C> series_inverse(const TruncSeries<C>& s, int order = -1) {
  int n = s.order();
  if (order >= 0) n = std::min(n, order);
  if (n == TruncSeries<C>::kExact) {
    throw Error(Errc::OrderMismatch, "inverse of an exact series needs an explicit order");
  }
  std::vector<C> r(static_cast<std::size_t>(n) + 1, C(0));
  const C inv0 = unit_inverse(s[0]);
  r[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    C acc(0);
    for (int j = 1; j <= k && j < s.stored(); ++j) acc += s[j] * r[static_cast<std::size_t>(k - j)];
    r[static_cast<std::size_t>(k)] = -(acc * inv0);
  }
  return TruncSeries<C>(std::move(r), n);
}

/// m-th root with constant term 1, computed by a coefficient recursion that
/// only divides by m. Throws RootObstruction when char f divides m.
template <class C>
TruncSeries<C> mth_root(const TruncSeries<C>& s, unsigned m, const Field& f, int order = -1) {
  if (m == 0) throw Error(Errc::RootObstruction, "zeroth root");
  if (f.is_prime_field() && m % f.characteristic() == 0) {
    throw Error(Errc::RootObstruction, "characteristic " + std::to_string(f.characteristic()) +
                                           " divides " + std::to_string(m));
  }
  int n = s.order();
  if (order >= 0) n = std::min(n, order);
  if (n == TruncSeries<C>::kExact) {
    throw Error(Errc::OrderMismatch, "root of an exact series needs an explicit order");
  }
  if (!(s[0] == C(1))) throw Error(Errc::NotAUnit, "root needs constant term 1");
  const C inv_m(Scalar::in_field(Scalar(static_cast<long long>(m)), f).inverse());
  std::vector<C> r(static_cast<std::size_t>(n) + 1, C(0));
  r[0] = C(Scalar::in_field(Scalar(1), f));
  // pw[k][i] = coefficient i of r^k, k = 1..m.
  std::vector<std::vector<C>> pw(m + 1, std::vector<C>(static_cast<std::size_t>(n) + 1, C(0)));
  for (unsigned k = 0; k <= m; ++k) pw[k][0] = r[0];
  for (int i = 1; i <= n; ++i) {
    // With r_i = 0: (r^k)_i = (r^(k-1))_i + sum_{0<j<i} r_j (r^(k-1))_(i-j).
    for (unsigned k = 1; k <= m; ++k) {
      C acc = pw[k - 1][static_cast<std::size_t>(i)];
      for (int j = 1; j < i; ++j) {
        acc += r[static_cast<std::size_t>(j)] * pw[k - 1][static_cast<std::size_t>(i - j)];
      }
      pw[k][static_cast<std::size_t>(i)] = acc;
    }
    const C ri = (s[i] - pw[m][static_cast<std::size_t>(i)]) * inv_m;
    r[static_cast<std::size_t>(i)] = ri;
    for (unsigned k = 1; k <= m; ++k) {
      pw[k][static_cast<std::size_t>(i)] += ri * C(Scalar(static_cast<long long>(k)));
    }
  }
  return TruncSeries<C>(std::move(r), n);
}

/// Series in two variables (T, U) on a rectangular grid of orders (kt, ku).
template <class C>
class BiSeries {
 public:
  BiSeries(int kt, int ku)
      : kt_(kt), ku_(ku), cells_(static_cast<std::size_t>(kt + 1) * (ku + 1), C(0)) {}

  int order_t() const noexcept { return kt_; }
  int order_u() const noexcept { return ku_; }
  C& at(int i, int j) { return cells_[index(i, j)]; }
  const C& at(int i, int j) const { return cells_[index(i, j)]; }

  friend BiSeries operator+(const BiSeries& a, const BiSeries& b) {
    BiSeries r(std::min(a.kt_, b.kt_), std::min(a.ku_, b.ku_));
    for (int i = 0; i <= r.kt_; ++i) {
      for (int j = 0; j <= r.ku_; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    }
    return r;
  }

  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    BiSeries r(std::min(a.kt_, b.kt_), std::min(a.ku_, b.ku_));
    for (int i1 = 0; i1 <= r.kt_; ++i1) {
      for (int j1 = 0; j1 <= r.ku_; ++j1) {
        const C& x = a.at(i1, j1);
        if (x.is_zero()) continue;
        for (int i2 = 0; i1 + i2 <= r.kt_; ++i2) {
          for (int j2 = 0; j1 + j2 <= r.ku_; ++j2) r.at(i1 + i2, j1 + j2) += x * b.at(i2, j2);
        }
      }
    }
    return r;
  }

  /// Cells (i, j) within the common grid where a and b differ.
  friend std::vector<std::pair<int, int>> differing_cells(const BiSeries& a, const BiSeries& b) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i <= std::min(a.kt_, b.kt_); ++i) {
      for (int j = 0; j <= std::min(a.ku_, b.ku_); ++j) {
        if (!(a.at(i, j) == b.at(i, j))) out.emplace_back(i, j);
      }
    }
    return out;
  }
  friend bool operator==(const BiSeries& a, const BiSeries& b) { return differing_cells(a, b).empty(); }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i > kt_ || j > ku_) {
      throw Error(Errc::OrderMismatch, "BiSeries cell out of range");
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ku_ + 1) + static_cast<std::size_t>(j);
  }

  int kt_;
  int ku_;
  std::vector<C> cells_;
};

/// T -> T + U: cell (i, j) = C(i+j, i) s_(i+j). Needs kt + ku <= order(s).
template <class C>
BiSeries<C> substitute_sum(const TruncSeries<C>& s, int kt, int ku, const Field& f) {
  if (!s.is_exact() && kt + ku > s.order()) {
    throw Error(Errc::OrderMismatch, "T->T+U to orders (" + std::to_string(kt) + "," +
                                         std::to_string(ku) + ") needs order " +
                                         std::to_string(kt + ku));
  }
  BiSeries<C> r(kt, ku);
  for (int i = 0; i <= kt; ++i) {
    for (int j = 0; j <= ku; ++j) {
      r.at(i, j) = s[i + j] * C(binomial(static_cast<std::uint64_t>(i + j), static_cast<std::uint64_t>(i), f));
    }
  }
  return r;
}

/// T -> -t for a series in T whose coefficients are t-series:
/// sum_n a_n(t) (-t)^n truncated at order n.
template <class C>
TruncSeries<C> substitute_neg(const std::vector<TruncSeries<C>>& a, int order) {
  if (static_cast<int>(a.size()) <= order) {
    throw Error(Errc::OrderMismatch, "T->-t to order " + std::to_string(order) + " needs " +
                                         std::to_string(order + 1) + " T-coefficients");
  }
  std::vector<C> out(static_cast<std::size_t>(order) + 1, C(0));
  for (int n = 0; n <= order; ++n) {
    for (int i = 0; i + n <= order; ++i) {
      const C v = a[static_cast<std::size_t>(n)][i];
      if (n % 2 == 0) {
        out[static_cast<std::size_t>(i + n)] += v;
      } else {
        out[static_cast<std::size_t>(i + n)] -= v;
      }
    }
  }
  return TruncSeries<C>(std::move(out), order);
}

/// Same substitution on a grid indexed (t-power, T-power).
template <class C>
TruncSeries<C> substitute_neg(const BiSeries<C>& a, int order) {
  if (order > a.order_t() || order > a.order_u()) {
    throw Error(Errc::OrderMismatch, "grid too small for T->-t");
  }
  std::vector<C> out(static_cast<std::size_t>(order) + 1, C(0));
  for (int i = 0; i <= order; ++i) {
    for (int j = 0; i + j <= order && j <= a.order_u(); ++j) {
      if (j % 2 == 0) {
        out[static_cast<std::size_t>(i + j)] += a.at(i, j);
      } else {
        out[static_cast<std::size_t>(i + j)] -= a.at(i, j);
      }
    }
  }
  return TruncSeries<C>(std::move(out), order);
}

/// t -> t + T on a polynomial: coefficient n is the n-th Hasse derivative.
inline TruncSeries<Poly> substitute_shift(const Poly& p, int order) {
  std::vector<Poly> out;
  for (int n = 0; n <= order; ++n) out.push_back(p.hasse(static_cast<std::size_t>(n)));
  return TruncSeries<Poly>(std::move(out), order);
}

/// t -> t + T on a U-series with polynomial coefficients; cell (i, j) is the
/// i-th Hasse derivative of the j-th coefficient.
inline BiSeries<Poly> substitute_shift(const TruncSeries<Poly>& s, int kt, int ku) {
  if (!s.is_exact() && ku > s.order()) throw Error(Errc::OrderMismatch, "U-order too large");
  BiSeries<Poly> r(kt, ku);
  for (int j = 0; j <= ku; ++j) {
    const Poly c = s[j];
    for (int i = 0; i <= kt; ++i) r.at(i, j) = c.hasse(static_cast<std::size_t>(i));
  }
  return r;
}

/// Series coefficients cannot be shifted exactly.
inline BiSeries<Series> substitute_shift(const TruncSeries<Series>&, int, int) {
  throw Error(Errc::ShiftUnavailable, "t->t+T needs polynomial coefficients");
}

/// t -> t + c on a polynomial-coefficient series.
inline TruncSeries<Poly> substitute_point(const TruncSeries<Poly>& s, const Scalar& c) {
  return s.map([&](const Poly& p) { return p.shift(c); });
}

/// Taylor expansion of p at c as a series in the local coordinate.
inline Series poly_at(const Poly& p, const Scalar& c, int order) {
  const Poly q = p.shift(c);
  std::vector<Scalar> out(static_cast<std::size_t>(order) + 1, Scalar(0));
  for (int i = 0; i <= order && i <= q.degree(); ++i) out[static_cast<std::size_t>(i)] = q.coeff(i);
  return Series(std::move(out), order);
}

/// n-th component of the iterative derivation d/dt on a t-series; the result
/// has order N - n.
inline Series hasse(const Series& s, int n) {
  Field f;
  for (const auto& c : s.coeffs()) {
    if (c.characteristic() != 0) f = c.field();
  }
  auto binom = [&](int i) {
    return binomial(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n), f);
  };
  std::vector<Scalar> out;
  if (s.is_exact()) {
    for (int i = n; i < s.stored(); ++i) out.push_back(s[i] * binom(i));
    return Series::exact(std::move(out));
  }
  if (n > s.order()) throw Error(Errc::OrderMismatch, "derivative order beyond truncation");
  for (int i = n; i <= s.order(); ++i) out.push_back(s[i] * binom(i));
  return Series(std::move(out), s.order() - n);
}

}  // namespace idpv

namespace Eigen {
template <class C>
struct NumTraits<idpv::TruncSeries<C>> : GenericNumTraits<idpv::TruncSeries<C>> {
  using Real = idpv::TruncSeries<C>;
  using NonInteger = idpv::TruncSeries<C>;
  using Nested = idpv::TruncSeries<C>;
  using Literal = idpv::TruncSeries<C>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 32,
    MulCost = 256
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
