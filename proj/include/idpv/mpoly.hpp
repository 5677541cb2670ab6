#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "idpv/errors.hpp"

namespace idpv {

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

/// Graded lexicographic order: total degree first, then the first differing
/// exponent decides (larger exponent of an earlier variable is larger).
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

/// All monomials in n variables of total degree <= d, in descending grlex.
inline std::vector<Monomial> monomials_up_to(int n, int d) {
  std::vector<Monomial> out;
  Monomial cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[static_cast<std::size_t>(var)] = e;
      rec(var + 1, left - e);
    }
    cur[static_cast<std::size_t>(var)] = 0;
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return grlex_less(b, a); });
  return out;
}

/// Sparse polynomial in a fixed number of variables. A polynomial with zero
/// variables is a constant and adapts to the width of the other operand.
template <class C>
class MPoly {
 public:
  MPoly() = default;
  explicit MPoly(int nvars) : n_(nvars) {}
  MPoly(int nvars, const C& c) : n_(nvars) {
    if (!c.is_zero()) t_[Monomial(static_cast<std::size_t>(nvars), 0)] = c;
  }

  static MPoly variable(int nvars, int i, const C& one) {
    MPoly p(nvars);
    Monomial m(static_cast<std::size_t>(nvars), 0);
    m[static_cast<std::size_t>(i)] = 1;
    p.t_[m] = one;
    return p;
  }
  static MPoly term(Monomial m, const C& c) {
    MPoly p(static_cast<int>(m.size()));
    if (!c.is_zero()) p.t_[std::move(m)] = c;
    return p;
  }

  int nvars() const noexcept { return n_; }
  const std::map<Monomial, C>& terms() const noexcept { return t_; }
  bool is_zero() const noexcept { return t_.empty(); }

  C coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? C(0) : it->second;
  }

  void add_term(const Monomial& m, const C& c) {
    if (n_ == 0 && !m.empty()) widen(static_cast<int>(m.size()));
    if (static_cast<int>(m.size()) != n_) throw Error(Errc::SemanticError, "monomial width mismatch");
    auto it = t_.find(m);
    if (it == t_.end()) {
      if (!c.is_zero()) t_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [m, c] : t_) d = std::max(d, idpv::total_degree(m));
    return d;
  }

  /// Terms sorted by descending grlex.
  std::vector<std::pair<Monomial, C>> sorted_terms() const {
    std::vector<std::pair<Monomial, C>> out(t_.begin(), t_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return grlex_less(b.first, a.first); });
    return out;
  }

  MPoly& operator+=(const MPoly& o) {
    align(o);
    for (const auto& [m, c] : o.t_) add_term(pad(m), c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    align(o);
    for (const auto& [m, c] : o.t_) add_term(pad(m), -c);
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(std::max(a.n_, b.n_));
    for (const auto& [ma, ca] : a.t_) {
      const Monomial pa = r.pad(ma);
      for (const auto& [mb, cb] : b.t_) {
        Monomial m = r.pad(mb);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += pa[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  MPoly scaled(const C& s) const {
    MPoly r(n_);
    for (const auto& [m, c] : t_) r.add_term(m, c * s);
    return r;
  }

  MPoly pow(unsigned e, const C& one) const {
    MPoly r(n_, one);
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    MPoly d = a - b;
    return d.is_zero();
  }

  /// Applies f to every coefficient, dropping zeros.
  template <class D, class F>
  MPoly<D> map(F&& f) const {
    MPoly<D> r(n_);
    for (const auto& [m, c] : t_) r.add_term(m, f(c));
    return r;
  }

  std::string to_string(const std::vector<std::string>& names,
                        const std::function<std::string(const C&)>& show) const {
    if (t_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : sorted_terms()) {
      std::string mono;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += i < names.size() ? names[i] : "x" + std::to_string(i);
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      std::string coef = show(c);
      if (!out.empty()) out += " + ";
      if (mono.empty()) {
        out += coef;
      } else if (coef == "1") {
        out += mono;
      } else {
        out += "(" + coef + ")*" + mono;
      }
    }
    return out;
  }

 private:
  Monomial pad(const Monomial& m) const {
    if (static_cast<int>(m.size()) == n_) return m;
    Monomial r = m;
    r.resize(static_cast<std::size_t>(n_), 0);
    return r;
  }
  void widen(int n) {
    std::map<Monomial, C> t;
    for (auto& [m, c] : t_) {
      Monomial w = m;
      w.resize(static_cast<std::size_t>(n), 0);
      t.emplace(std::move(w), c);
    }
    t_ = std::move(t);
    n_ = n;
  }
  void align(const MPoly& o) {
    if (o.n_ > n_) {
      if (n_ != 0) throw Error(Errc::SemanticError, "polynomial width mismatch");
      widen(o.n_);
    } else if (o.n_ < n_ && o.n_ != 0) {
      throw Error(Errc::SemanticError, "polynomial width mismatch");
    }
  }

  int n_ = 0;
  std::map<Monomial, C> t_;
};

}  // namespace idpv
