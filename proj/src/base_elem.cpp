#include "idpv/base_elem.hpp"

#include <algorithm>

namespace idpv {

namespace {

bool same_polys(const PolySet& a, const PolySet& b) {
  if (a == b) return true;
  if (!a || !b || a->size() != b->size()) return false;
  for (std::size_t i = 0; i < a->size(); ++i) {
    if ((*a)[i] != (*b)[i]) return false;
  }
  return true;
}

bool same_names(const NameSet& a, const NameSet& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

LocElem::LocElem(Poly num, PolySet inverted, std::vector<int> exps)
    : num_(std::move(num)), e_(std::move(exps)), inv_(std::move(inverted)) {
  const std::size_t n = inv_ ? inv_->size() : 0;
  if (e_.empty()) e_.assign(n, 0);
  if (e_.size() != n) throw Error(Errc::SemanticError, "exponent vector does not match inverted set");
  for (int e : e_) {
    if (e < 0) throw Error(Errc::SemanticError, "negative exponent in localized element");
  }
  normalize();
}

void LocElem::normalize() {
  if (num_.is_zero()) {
    std::fill(e_.begin(), e_.end(), 0);
    return;
  }
  for (std::size_t i = 0; i < e_.size(); ++i) {
    const Poly& g = (*inv_)[i];
    if (g.is_constant()) {
      num_ *= g.leading().pow(-e_[i]);
      e_[i] = 0;
      continue;
    }
    while (e_[i] > 0) {
      auto [q, r] = divmod(num_, g);
      if (!r.is_zero()) break;
      num_ = std::move(q);
      --e_[i];
    }
  }
}

Poly LocElem::denominator() const {
  Poly d(1);
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] > 0) d *= (*inv_)[i].pow(static_cast<unsigned>(e_[i]));
  }
  return d;
}

bool LocElem::is_polynomial() const {
  return std::all_of(e_.begin(), e_.end(), [](int e) { return e == 0; });
}

bool LocElem::is_unit() const {
  if (num_.is_zero()) return false;
  Poly r = num_;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    const Poly& g = (*inv_)[i];
    if (g.is_constant()) continue;
    while (!r.is_constant()) {
      auto [q, rem] = divmod(r, g);
      if (!rem.is_zero()) break;
      r = std::move(q);
    }
  }
  return r.is_constant();
}

LocElem LocElem::inverse() const {
  if (!is_unit()) throw Error(Errc::NotAUnit, to_string() + " is not a unit");
  Poly r = num_;
  std::vector<int> k(e_.size(), 0);
  for (std::size_t i = 0; i < e_.size(); ++i) {
    const Poly& g = (*inv_)[i];
    if (g.is_constant()) continue;
    while (!r.is_constant()) {
      auto [q, rem] = divmod(r, g);
      if (!rem.is_zero()) break;
      r = std::move(q);
      ++k[i];
    }
  }
  return LocElem(denominator() * r.leading().inverse(), inv_, std::move(k));
}

Series LocElem::at_point(const Scalar& c, int order) const {
  if (inv_) {
    for (const auto& g : *inv_) {
      if (g.eval(c).is_zero()) {
        throw Error(Errc::BadPoint, g.to_string() + " vanishes at t = " + c.to_string());
      }
    }
  }
  Series s = poly_at(num_, c, order);
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] == 0) continue;
    Series base = series_inverse(poly_at((*inv_)[i], c, order));
    for (int j = e_[i];;) {
      if (j & 1) s *= base;
      j >>= 1;
      if (j == 0) break;
      base *= base;
    }
  }
  return s;
}

void LocElem::align(LocElem& a, LocElem& b) {
  if (a.inv_ == b.inv_) return;
  if (!a.inv_ || a.inv_->empty()) {
    a.inv_ = b.inv_;
    a.e_.assign(b.e_.size(), 0);
    return;
  }
  if (!b.inv_ || b.inv_->empty()) {
    b.inv_ = a.inv_;
    b.e_.assign(a.e_.size(), 0);
    return;
  }
  if (!same_polys(a.inv_, b.inv_)) throw Error(Errc::BaseMismatch, "different localizations");
  b.inv_ = a.inv_;
}

LocElem& LocElem::operator+=(const LocElem& o) {
  LocElem b = o;
  align(*this, b);
  if (e_ == b.e_) {
    num_ += b.num_;
  } else {
    Poly lhs = num_;
    Poly rhs = b.num_;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      const int m = std::max(e_[i], b.e_[i]);
      if (m > e_[i]) lhs *= (*inv_)[i].pow(static_cast<unsigned>(m - e_[i]));
      if (m > b.e_[i]) rhs *= (*inv_)[i].pow(static_cast<unsigned>(m - b.e_[i]));
      e_[i] = m;
    }
    num_ = lhs + rhs;
  }
  normalize();
  return *this;
}

LocElem& LocElem::operator-=(const LocElem& o) { return *this += -o; }

LocElem& LocElem::operator*=(const LocElem& o) {
  LocElem b = o;
  align(*this, b);
  num_ *= b.num_;
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += b.e_[i];
  normalize();
  return *this;
}

LocElem LocElem::operator-() const {
  LocElem r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const LocElem& a, const LocElem& b) {
  LocElem x = a;
  LocElem y = b;
  try {
    LocElem::align(x, y);
  } catch (const Error&) {
    return false;
  }
  if (x.e_ == y.e_) return x.num_ == y.num_;
  return x.num_ * y.denominator() == y.num_ * x.denominator();
}

std::string LocElem::to_string() const {
  if (is_polynomial()) return num_.to_string();
  std::string den;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] == 0) continue;
    if (!den.empty()) den += "*";
    den += "(" + (*inv_)[i].to_string() + ")";
    if (e_[i] > 1) den += "^" + std::to_string(e_[i]);
  }
  return "(" + num_.to_string() + ")/" + den;
}

bool TensorElem::is_zero() const { return !terms || terms->empty(); }

namespace {

using TermMap = std::map<Monomial, BaseElem>;

int right_width(const TensorElem& t) {
  return t.right == TensorElem::Right::Poly ? 1 : static_cast<int>(t.right_names ? t.right_names->size() : 0);
}

TensorElem with_terms(const TensorElem& like, TermMap terms) {
  TensorElem r;
  r.right = like.right;
  r.right_names = like.right_names;
  for (auto it = terms.begin(); it != terms.end();) {
    it = it->second.is_zero() ? terms.erase(it) : std::next(it);
  }
  r.terms = std::make_shared<const TermMap>(std::move(terms));
  return r;
}

const TermMap& terms_of(const TensorElem& t) {
  static const TermMap empty;
  return t.terms ? *t.terms : empty;
}

BaseElem lift_constant(const Scalar& c, const BaseElem& like) {
  switch (like.kind()) {
    case BaseElem::Kind::Constant:
      return c;
    case BaseElem::Kind::Local:
      return LocElem(Poly(c), like.as<LocElem>().inverted());
    case BaseElem::Kind::Series:
      return Series(c);
    case BaseElem::Kind::Trivial: {
      const auto& tv = like.as<TrivElem>();
      return TrivElem{MPoly<Scalar>(tv.p.nvars(), c), tv.names};
    }
    case BaseElem::Kind::Tensor: {
      const auto& te = like.as<TensorElem>();
      return make_tensor(te.right, te.right_names, Monomial(static_cast<std::size_t>(right_width(te)), 0),
                         BaseElem(c));
    }
  }
  return c;
}

BaseElem lift_into_tensor(const BaseElem& x, const TensorElem& like) {
  return make_tensor(like.right, like.right_names, Monomial(static_cast<std::size_t>(right_width(like)), 0), x);
}

// Brings a and b into the same ring representation.
void unify(BaseElem& a, BaseElem& b) {
  if (a.kind() == b.kind()) {
    if (a.kind() == BaseElem::Kind::Trivial &&
        !same_names(a.as<TrivElem>().names, b.as<TrivElem>().names)) {
      throw Error(Errc::BaseMismatch, "different trivial algebras");
    }
    if (a.kind() == BaseElem::Kind::Tensor) {
      const auto& x = a.as<TensorElem>();
      const auto& y = b.as<TensorElem>();
      if (x.right != y.right || !same_names(x.right_names, y.right_names)) {
        throw Error(Errc::BaseMismatch, "different tensor factors");
      }
    }
    return;
  }
  if (a.kind() == BaseElem::Kind::Constant) {
    a = lift_constant(a.as<Scalar>(), b);
    return;
  }
  if (b.kind() == BaseElem::Kind::Constant) {
    b = lift_constant(b.as<Scalar>(), a);
    return;
  }
  if (a.kind() == BaseElem::Kind::Tensor) {
    b = lift_into_tensor(b, a.as<TensorElem>());
    return;
  }
  if (b.kind() == BaseElem::Kind::Tensor) {
    a = lift_into_tensor(a, b.as<TensorElem>());
    return;
  }
  throw Error(Errc::BaseMismatch, "elements of different base rings");
}

Field field_of_scalars(const std::vector<Scalar>& v) {
  for (const auto& c : v) {
    if (c.characteristic() != 0) return c.field();
  }
  return Field();
}

}  // namespace

BaseElem make_tensor(TensorElem::Right right, const NameSet& right_names, const Monomial& m,
                     const BaseElem& left) {
  TensorElem t;
  t.right = right;
  t.right_names = right_names;
  TermMap terms;
  if (!left.is_zero()) terms.emplace(m, left);
  t.terms = std::make_shared<const TermMap>(std::move(terms));
  return t;
}

bool BaseElem::is_zero() const {
  return std::visit([](const auto& x) { return x.is_zero(); }, rep_);
}

std::optional<Scalar> BaseElem::constant_value() const {
  switch (kind()) {
    case Kind::Constant:
      return as<Scalar>();
    case Kind::Local: {
      const auto& x = as<LocElem>();
      if (x.is_polynomial() && x.numerator().is_constant()) return x.numerator().coeff(0);
      return std::nullopt;
    }
    case Kind::Series: {
      const auto& s = as<idpv::Series>();
      for (int i = 1; i < s.stored(); ++i) {
        if (!s[i].is_zero()) return std::nullopt;
      }
      return s.stored() ? s[0] : Scalar(0);
    }
    case Kind::Trivial: {
      const auto& p = as<TrivElem>().p;
      if (p.is_zero()) return Scalar(0);
      if (p.terms().size() == 1 && idpv::total_degree(p.terms().begin()->first) == 0) {
        return p.terms().begin()->second;
      }
      return std::nullopt;
    }
    case Kind::Tensor: {
      const auto& t = terms_of(as<TensorElem>());
      if (t.empty()) return Scalar(0);
      if (t.size() == 1 && idpv::total_degree(t.begin()->first) == 0) return t.begin()->second.constant_value();
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool BaseElem::is_unit() const {
  switch (kind()) {
    case Kind::Local:
      return as<LocElem>().is_unit();
    case Kind::Series: {
      const auto& s = as<idpv::Series>();
      if (s.is_exact()) {
        const auto c = constant_value();
        return c && !c->is_zero();
      }
      return !s[0].is_zero();
    }
    default: {
      const auto c = constant_value();
      return c && !c->is_zero();
    }
  }
}

BaseElem BaseElem::inverse() const {
  if (!is_unit()) throw Error(Errc::NotAUnit, to_string() + " is not a unit");
  switch (kind()) {
    case Kind::Local:
      return as<LocElem>().inverse();
    case Kind::Series: {
      const auto& s = as<idpv::Series>();
      if (!s.is_exact()) return series_inverse(s);
      break;
    }
    default:
      break;
  }
  const Scalar c = constant_value()->inverse();
  return lift_constant(c, *this);
}

Field BaseElem::field() const {
  switch (kind()) {
    case Kind::Constant:
      return as<Scalar>().field();
    case Kind::Local: {
      const auto& x = as<LocElem>();
      const Field f = x.numerator().field();
      if (f.is_prime_field() || !x.inverted()) return f;
      for (const auto& g : *x.inverted()) {
        if (g.field().is_prime_field()) return g.field();
      }
      return f;
    }
    case Kind::Series:
      return field_of_scalars(as<idpv::Series>().coeffs());
    case Kind::Trivial: {
      for (const auto& [m, c] : as<TrivElem>().p.terms()) {
        if (c.characteristic() != 0) return c.field();
      }
      return Field();
    }
    case Kind::Tensor: {
      for (const auto& [m, c] : terms_of(as<TensorElem>())) {
        const Field f = c.field();
        if (f.is_prime_field()) return f;
      }
      return Field();
    }
  }
  return Field();
}

BaseElem& BaseElem::operator+=(const BaseElem& o) {
  BaseElem b = o;
  unify(*this, b);
  switch (kind()) {
    case Kind::Constant:
      rep_ = as<Scalar>() + b.as<Scalar>();
      break;
    case Kind::Local:
      rep_ = as<LocElem>() + b.as<LocElem>();
      break;
    case Kind::Series:
      rep_ = as<idpv::Series>() + b.as<idpv::Series>();
      break;
    case Kind::Trivial:
      rep_ = TrivElem{as<TrivElem>().p + b.as<TrivElem>().p, as<TrivElem>().names};
      break;
    case Kind::Tensor: {
      TermMap t = terms_of(as<TensorElem>());
      for (const auto& [m, c] : terms_of(b.as<TensorElem>())) {
        auto it = t.find(m);
        if (it == t.end()) {
          t.emplace(m, c);
        } else {
          it->second += c;
        }
      }
      rep_ = with_terms(as<TensorElem>(), std::move(t));
      break;
    }
  }
  return *this;
}

BaseElem& BaseElem::operator-=(const BaseElem& o) { return *this += -o; }

BaseElem& BaseElem::operator*=(const BaseElem& o) {
  BaseElem b = o;
  unify(*this, b);
  switch (kind()) {
    case Kind::Constant:
      rep_ = as<Scalar>() * b.as<Scalar>();
      break;
    case Kind::Local:
      rep_ = as<LocElem>() * b.as<LocElem>();
      break;
    case Kind::Series:
      rep_ = as<idpv::Series>() * b.as<idpv::Series>();
      break;
    case Kind::Trivial:
      rep_ = TrivElem{as<TrivElem>().p * b.as<TrivElem>().p, as<TrivElem>().names};
      break;
    case Kind::Tensor: {
      TermMap t;
      for (const auto& [m1, c1] : terms_of(as<TensorElem>())) {
        for (const auto& [m2, c2] : terms_of(b.as<TensorElem>())) {
          Monomial m = m1;
          for (std::size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
          auto it = t.find(m);
          if (it == t.end()) {
            t.emplace(std::move(m), c1 * c2);
          } else {
            it->second += c1 * c2;
          }
        }
      }
      rep_ = with_terms(as<TensorElem>(), std::move(t));
      break;
    }
  }
  return *this;
}

BaseElem BaseElem::operator-() const {
  switch (kind()) {
    case Kind::Constant:
      return -as<Scalar>();
    case Kind::Local:
      return -as<LocElem>();
    case Kind::Series:
      return -as<idpv::Series>();
    case Kind::Trivial:
      return TrivElem{-as<TrivElem>().p, as<TrivElem>().names};
    case Kind::Tensor: {
      TermMap t;
      for (const auto& [m, c] : terms_of(as<TensorElem>())) t.emplace(m, -c);
      return with_terms(as<TensorElem>(), std::move(t));
    }
  }
  return *this;
}

bool operator==(const BaseElem& a, const BaseElem& b) {
  try {
    return (a - b).is_zero();
  } catch (const Error&) {
    return false;
  }
}

std::string BaseElem::to_string() const {
  switch (kind()) {
    case Kind::Constant:
      return as<Scalar>().to_string();
    case Kind::Local:
      return as<LocElem>().to_string();
    case Kind::Series:
      return as<idpv::Series>().to_string("t");
    case Kind::Trivial: {
      const auto& x = as<TrivElem>();
      return x.p.to_string(x.names ? *x.names : std::vector<std::string>{},
                           [](const Scalar& c) { return c.to_string(); });
    }
    case Kind::Tensor: {
      const auto& te = as<TensorElem>();
      const auto& t = terms_of(te);
      if (t.empty()) return "0";
      std::string out;
      for (const auto& [m, c] : t) {
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i] == 0) continue;
          if (!mono.empty()) mono += "*";
          mono += te.right == TensorElem::Right::Poly ? "s" : (*te.right_names)[i];
          if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")";
        if (!mono.empty()) out += "#" + mono;
      }
      return out;
    }
  }
  return "?";
}

namespace {

TruncSeries<LocElem> theta_local_poly(const Poly& p, const PolySet& inv, int k) {
  std::vector<LocElem> c;
  for (int n = 0; n <= k; ++n) c.emplace_back(p.hasse(static_cast<std::size_t>(n)), inv);
  return TruncSeries<LocElem>(std::move(c), k);
}

BaseSeries lift_series(const TruncSeries<LocElem>& s) {
  return s.map([](const LocElem& x) { return BaseElem(x); });
}

}  // namespace

BaseSeries theta(const BaseElem& x, int k) {
  std::vector<BaseElem> out(static_cast<std::size_t>(k) + 1, BaseElem(0));
  switch (x.kind()) {
    case BaseElem::Kind::Constant:
    case BaseElem::Kind::Trivial:
      out[0] = x;
      return BaseSeries(std::move(out), k);
    case BaseElem::Kind::Local: {
      const LocElem& l = x.as<LocElem>();
      TruncSeries<LocElem> s = theta_local_poly(l.numerator(), l.inverted(), k);
      for (std::size_t i = 0; i < l.exponents().size(); ++i) {
        if (l.exponents()[i] == 0) continue;
        const auto inv = series_inverse(theta_local_poly((*l.inverted())[i], l.inverted(), k));
        for (int j = 0; j < l.exponents()[i]; ++j) s *= inv;
      }
      return lift_series(s);
    }
    case BaseElem::Kind::Series: {
      const auto& s = x.as<idpv::Series>();
      const int kk = s.is_exact() ? k : std::min(k, s.order());
      out.resize(static_cast<std::size_t>(kk) + 1);
      for (int n = 0; n <= kk; ++n) out[static_cast<std::size_t>(n)] = hasse(s, n);
      return BaseSeries(std::move(out), kk);
    }
    case BaseElem::Kind::Tensor: {
      const auto& te = x.as<TensorElem>();
      const Field f = x.field();
      BaseSeries acc(std::vector<BaseElem>(static_cast<std::size_t>(k) + 1, BaseElem(0)), k);
      for (const auto& [m, c] : terms_of(te)) {
        const BaseSeries left = theta(c, k);
        std::vector<BaseElem> right(static_cast<std::size_t>(k) + 1, BaseElem(0));
        for (int j = 0; j <= k; ++j) {
          if (te.right == TensorElem::Right::Trivial && j > 0) break;
          if (te.right == TensorElem::Right::Poly && j > m[0]) break;
          Monomial mm = m;
          Scalar coef(1);
          if (te.right == TensorElem::Right::Poly) {
            coef = binomial(static_cast<std::uint64_t>(m[0]), static_cast<std::uint64_t>(j), f);
            mm[0] -= j;
          }
          right[static_cast<std::size_t>(j)] = make_tensor(te.right, te.right_names, mm, BaseElem(coef));
        }
        acc += left * BaseSeries(std::move(right), k);
      }
      return BaseSeries(acc.coeffs(), std::min(k, acc.order()));
    }
  }
  return BaseSeries(std::move(out), k);
}

BaseElem theta_component(const BaseElem& x, int n) { return theta(x, n)[n]; }

}  // namespace idpv
