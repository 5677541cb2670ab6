#include "idpv/idring.hpp"

#include <map>

#include "idpv/linalg.hpp"

namespace idpv {

IdRing IdRing::polynomial(const Field& f) {
  IdRing r;
  r.kind_ = Kind::PolyTheta;
  r.field_ = f;
  return r;
}

IdRing IdRing::localized(const Field& f, std::vector<Poly> inverted) {
  for (const auto& g : inverted) {
    if (g.is_zero()) throw Error(Errc::SemanticError, "cannot invert the zero polynomial");
  }
  IdRing r;
  r.kind_ = Kind::LocalizedPolyTheta;
  r.field_ = f;
  r.inverted_ = std::make_shared<const std::vector<Poly>>(std::move(inverted));
  return r;
}

IdRing IdRing::series(const Field& f, int order) {
  if (order < 0) throw Error(Errc::SemanticError, "negative series order");
  IdRing r;
  r.kind_ = Kind::SeriesTheta;
  r.field_ = f;
  r.order_ = order;
  return r;
}

IdRing IdRing::trivial(const Field& f, std::vector<std::string> generators) {
  IdRing r;
  r.kind_ = Kind::Trivial;
  r.field_ = f;
  r.names_ = std::make_shared<const std::vector<std::string>>(std::move(generators));
  return r;
}

IdRing IdRing::tensor(const IdRing& left, const IdRing& right) {
  if (!(left.field() == right.field())) throw Error(Errc::BaseMismatch, "tensor factors over different fields");
  if (right.kind() != Kind::PolyTheta && right.kind() != Kind::Trivial) {
    throw Error(Errc::NotSupported, "right tensor factor must be C[s] or a trivial algebra");
  }
  if (left.kind() == Kind::TensorProduct) throw Error(Errc::NotSupported, "nested tensor products");
  IdRing r;
  r.kind_ = Kind::TensorProduct;
  r.field_ = left.field();
  r.left_ = std::make_shared<const IdRing>(left);
  r.right_ = std::make_shared<const IdRing>(right);
  return r;
}

BaseElem IdRing::constant(const Scalar& c) const {
  const Scalar v = Scalar::in_field(c, field_);
  switch (kind_) {
    case Kind::PolyTheta:
      return LocElem(Poly(v));
    case Kind::LocalizedPolyTheta:
      return LocElem(Poly(v), inverted_);
    case Kind::SeriesTheta:
      return Series(std::vector<Scalar>{v}, order_);
    case Kind::Trivial:
      return TrivElem{MPoly<Scalar>(static_cast<int>(names_->size()), v), names_};
    case Kind::TensorProduct:
      return tensor(left_->constant(v), right_->constant(Scalar(1)));
  }
  return v;
}

BaseElem IdRing::from_poly(const Poly& p) const {
  std::vector<Scalar> c;
  for (const auto& x : p.coeffs()) c.push_back(Scalar::in_field(x, field_));
  const Poly q(std::move(c));
  switch (kind_) {
    case Kind::PolyTheta:
      return LocElem(q);
    case Kind::LocalizedPolyTheta:
      return LocElem(q, inverted_);
    case Kind::SeriesTheta: {
      std::vector<Scalar> s(static_cast<std::size_t>(order_) + 1, Scalar::in_field(Scalar(0), field_));
      for (int i = 0; i <= std::min(order_, q.degree()); ++i) s[static_cast<std::size_t>(i)] = q.coeff(i);
      return Series(std::move(s), order_);
    }
    default:
      throw Error(Errc::NotSupported, "ring has no coordinate t");
  }
}

BaseElem IdRing::t() const { return from_poly(Poly::variable()); }

BaseElem IdRing::inverse_of(std::size_t i) const {
  if (kind_ != Kind::LocalizedPolyTheta || i >= inverted_->size()) {
    throw Error(Errc::NotSupported, "no such inverted polynomial");
  }
  std::vector<int> e(inverted_->size(), 0);
  e[i] = 1;
  return LocElem(Poly(Scalar::in_field(Scalar(1), field_)), inverted_, std::move(e));
}

BaseElem IdRing::generator(std::size_t i) const {
  if (kind_ != Kind::Trivial || i >= names_->size()) throw Error(Errc::NotSupported, "no such generator");
  return TrivElem{MPoly<Scalar>::variable(static_cast<int>(names_->size()), static_cast<int>(i),
                                          Scalar::in_field(Scalar(1), field_)),
                  names_};
}

BaseElem IdRing::tensor(const BaseElem& l, const BaseElem& r) const {
  if (kind_ != Kind::TensorProduct) throw Error(Errc::NotSupported, "not a tensor product");
  if (!left_->contains(l) || !right_->contains(r)) throw Error(Errc::BaseMismatch, "factor outside its ring");
  const auto side = right_->kind() == Kind::PolyTheta ? TensorElem::Right::Poly : TensorElem::Right::Trivial;
  const NameSet names = right_->kind() == Kind::Trivial ? right_->names_ : nullptr;
  const Monomial one(side == TensorElem::Right::Poly ? 1 : names->size(), 0);
  BaseElem acc = make_tensor(side, names, one, BaseElem(0));
  if (const auto c = r.constant_value()) return acc + make_tensor(side, names, one, l * BaseElem(*c));
  if (side == TensorElem::Right::Poly) {
    const Poly& p = r.as<LocElem>().numerator();
    for (int k = 0; k <= p.degree(); ++k) {
      if (!p.coeff(k).is_zero()) acc += make_tensor(side, names, Monomial{k}, l * BaseElem(p.coeff(k)));
    }
  } else {
    for (const auto& [m, c] : r.as<TrivElem>().p.terms()) acc += make_tensor(side, names, m, l * BaseElem(c));
  }
  return acc;
}

bool IdRing::contains(const BaseElem& x) const {
  const Field f = x.field();
  if (f.is_prime_field() && !(f == field_)) return false;
  if (x.kind() == BaseElem::Kind::Constant) return true;
  switch (kind_) {
    case Kind::PolyTheta:
      return x.kind() == BaseElem::Kind::Local && x.as<LocElem>().is_polynomial();
    case Kind::LocalizedPolyTheta: {
      if (x.kind() != BaseElem::Kind::Local) return false;
      const auto& inv = x.as<LocElem>().inverted();
      if (!inv || inv->empty() || inv == inverted_) return true;
      if (inv->size() != inverted_->size()) return false;
      for (std::size_t i = 0; i < inv->size(); ++i) {
        if ((*inv)[i] != (*inverted_)[i]) return false;
      }
      return true;
    }
    case Kind::SeriesTheta:
      return x.kind() == BaseElem::Kind::Series;
    case Kind::Trivial:
      return x.kind() == BaseElem::Kind::Trivial && x.as<TrivElem>().names &&
             *x.as<TrivElem>().names == *names_;
    case Kind::TensorProduct: {
      if (x.kind() != BaseElem::Kind::Tensor) return left_->contains(x);
      const auto& te = x.as<TensorElem>();
      const bool poly_right = right_->kind() == Kind::PolyTheta;
      if ((te.right == TensorElem::Right::Poly) != poly_right) return false;
      if (!poly_right && (!te.right_names || *te.right_names != *right_->names_)) return false;
      if (!te.terms) return true;
      for (const auto& [m, c] : *te.terms) {
        if (!left_->contains(c)) return false;
      }
      return true;
    }
  }
  return false;
}

ThetaFn IdRing::derivation() const {
  const IdRing self = *this;
  return [self](const BaseElem& x, int k) { return theta(self, x, k); };
}

std::string IdRing::describe() const {
  const std::string fld = field_.is_prime_field() ? "F_" + std::to_string(field_.characteristic()) : "Q";
  switch (kind_) {
    case Kind::PolyTheta:
      return fld + "[t]";
    case Kind::LocalizedPolyTheta: {
      std::string s = fld + "[t]";
      for (const auto& g : *inverted_) s += "[1/(" + g.to_string() + ")]";
      return s;
    }
    case Kind::SeriesTheta:
      return fld + "[[t]] mod t^" + std::to_string(order_ + 1);
    case Kind::Trivial: {
      std::string s = fld + "[";
      for (std::size_t i = 0; i < names_->size(); ++i) s += (i ? "," : "") + (*names_)[i];
      return s + "] (trivial)";
    }
    case Kind::TensorProduct:
      return left_->describe() + " (x) " + (right_->kind() == Kind::PolyTheta ? fld + "[s]" : right_->describe());
  }
  return fld;
}

BaseSeries theta(const IdRing& ring, const BaseElem& x, int k) {
  if (!ring.contains(x)) throw Error(Errc::BaseMismatch, x.to_string() + " is not in " + ring.describe());
  return theta(x, k);
}

CheckReport check_iteration_rule(const ThetaFn& th, const Field& f, const std::vector<BaseElem>& samples,
                                 int k) {
  CheckReport report("iteration rule");
  for (const auto& x : samples) {
    const std::string name = x.to_string();
    const BaseSeries tx = th(x, k);
    const int kx = std::min(k, tx.order());
    std::vector<BaseSeries> inner;
    for (int j = 0; j <= kx; ++j) inner.push_back(th(tx[j], kx - j));
    // (a) indexwise
    for (int j = 0; j <= kx; ++j) {
      for (int i = 0; i + j <= kx && i <= inner[static_cast<std::size_t>(j)].order(); ++i) {
        const BaseElem lhs = inner[static_cast<std::size_t>(j)][i];
        const BaseElem rhs = BaseElem(binomial(static_cast<std::uint64_t>(i + j), static_cast<std::uint64_t>(i), f)) * tx[i + j];
        report.expect(lhs == rhs, {"theta^(i) theta^(j) = C(i+j,i) theta^(i+j)", name, {i, j},
                                   lhs.to_string(), rhs.to_string()});
      }
    }
    // (b) substitution form on a (T, U) grid
    const int kt = kx / 2;
    const int ku = kx - kt;
    BiSeries<BaseElem> lhs(kt, ku);
    for (int j = 0; j <= ku; ++j) {
      for (int i = 0; i <= kt && i <= inner[static_cast<std::size_t>(j)].order(); ++i) {
        lhs.at(i, j) = inner[static_cast<std::size_t>(j)][i];
      }
    }
    const BiSeries<BaseElem> rhs = substitute_sum(tx.truncated(kx), kt, ku, f);
    report.count();
    for (const auto& [i, j] : differing_cells(lhs, rhs)) {
      report.fail({"theta_T(theta_U(x)) = theta(x)(T+U)", name, {i, j}, lhs.at(i, j).to_string(),
                   rhs.at(i, j).to_string()});
    }
  }
  return report;
}

CheckReport check_iteration_rule(const IdRing& ring, const std::vector<BaseElem>& samples, int k) {
  return check_iteration_rule(ring.derivation(), ring.field(), samples, k);
}

CheckReport check_homomorphism(const ThetaFn& th, const BaseElem& x, const BaseElem& y, int k) {
  CheckReport report("homomorphism");
  const std::string name = "x=" + x.to_string() + ", y=" + y.to_string();
  const BaseSeries tx = th(x, k);
  const BaseSeries ty = th(y, k);
  const BaseSeries sum = th(x + y, k);
  const BaseSeries prod = th(x * y, k);
  const BaseSeries sum_r = tx + ty;
  const BaseSeries prod_r = tx * ty;
  for (int n = 0; n <= std::min(sum.order(), sum_r.order()); ++n) {
    report.expect(sum[n] == sum_r[n], {"theta(x+y) = theta(x)+theta(y)", name, {n}, sum[n].to_string(),
                                       sum_r[n].to_string()});
  }
  for (int n = 0; n <= std::min(prod.order(), prod_r.order()); ++n) {
    report.expect(prod[n] == prod_r[n], {"theta(xy) = theta(x)theta(y)", name, {n}, prod[n].to_string(),
                                         prod_r[n].to_string()});
  }
  return report;
}

CheckReport check_homomorphism(const IdRing& ring, const BaseElem& x, const BaseElem& y, int k) {
  return check_homomorphism(ring.derivation(), x, y, k);
}

namespace {

using Key = std::vector<long long>;

// Writes elements of one ring in common linear coordinates: localized
// elements over a shared denominator, series up to a shared order.
class Coordinates {
 public:
  explicit Coordinates(const IdRing& ring) : ring_(ring) {}

  void observe(const BaseElem& x) { scan(ring_, lift(ring_, x)); }

  std::map<Key, Scalar> coords(const BaseElem& x) const {
    std::map<Key, Scalar> out;
    emit(ring_, lift(ring_, x), {}, out);
    return out;
  }

 private:
  static BaseElem lift(const IdRing& ring, const BaseElem& x) {
    if (x.kind() != BaseElem::Kind::Constant) {
      if (ring.kind() == IdRing::Kind::TensorProduct && x.kind() != BaseElem::Kind::Tensor) {
        return ring.tensor(x, ring.right().constant(Scalar(1)));
      }
      return x;
    }
    return ring.constant(x.as<Scalar>());
  }

  void scan(const IdRing& ring, const BaseElem& x) {
    switch (x.kind()) {
      case BaseElem::Kind::Local: {
        const auto& e = x.as<LocElem>().exponents();
        if (max_exp_.size() < e.size()) max_exp_.resize(e.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) max_exp_[i] = std::max(max_exp_[i], e[i]);
        break;
      }
      case BaseElem::Kind::Series: {
        const auto& s = x.as<Series>();
        if (!s.is_exact()) min_order_ = std::min(min_order_, s.order());
        break;
      }
      case BaseElem::Kind::Tensor: {
        const auto& te = x.as<TensorElem>();
        if (te.terms) {
          for (const auto& [m, c] : *te.terms) scan(ring.left(), lift(ring.left(), c));
        }
        break;
      }
      default:
        break;
    }
  }

  void emit(const IdRing& ring, const BaseElem& x, const Key& prefix, std::map<Key, Scalar>& out) const {
    auto put = [&](Key k, const Scalar& v) {
      if (v.is_zero()) return;
      auto [it, fresh] = out.emplace(std::move(k), v);
      if (!fresh) it->second += v;
    };
    switch (x.kind()) {
      case BaseElem::Kind::Constant:
        emit(ring, lift(ring, x), prefix, out);
        return;
      case BaseElem::Kind::Local: {
        const LocElem& l = x.as<LocElem>();
        Poly num = l.numerator();
        for (std::size_t i = 0; i < l.exponents().size(); ++i) {
          const int extra = max_exp_[i] - l.exponents()[i];
          if (extra > 0) num *= (*l.inverted())[i].pow(static_cast<unsigned>(extra));
        }
        for (int d = 0; d <= num.degree(); ++d) {
          Key k = prefix;
          k.push_back(d);
          put(std::move(k), num.coeff(d));
        }
        return;
      }
      case BaseElem::Kind::Series: {
        const auto& s = x.as<Series>();
        if (min_order_ < 0) throw Error(Errc::SpanNotClosed, "series images carry no coefficients");
        for (int d = 0; d <= min_order_ && d < s.stored(); ++d) {
          Key k = prefix;
          k.push_back(d);
          put(std::move(k), s[d]);
        }
        return;
      }
      case BaseElem::Kind::Trivial:
        for (const auto& [m, c] : x.as<TrivElem>().p.terms()) {
          Key k = prefix;
          k.insert(k.end(), m.begin(), m.end());
          put(std::move(k), c);
        }
        return;
      case BaseElem::Kind::Tensor: {
        const auto& te = x.as<TensorElem>();
        if (!te.terms) return;
        for (const auto& [m, c] : *te.terms) {
          Key k = prefix;
          k.insert(k.end(), m.begin(), m.end());
          emit(ring.left(), lift(ring.left(), c), k, out);
        }
        return;
      }
    }
  }

  const IdRing& ring_;
  std::vector<int> max_exp_;
  int min_order_ = TruncSeries<Scalar>::kExact;
};

}  // namespace

std::vector<ScalarVector> constants_of_span(const IdRing& ring, const std::vector<BaseElem>& basis, int k) {
  if (ring.kind() == IdRing::Kind::SeriesTheta && k > ring.series_order()) {
    throw Error(Errc::SpanNotClosed, "theta^(" + std::to_string(k) + ") leaves a series truncated at order " +
                                         std::to_string(ring.series_order()));
  }
  std::vector<std::vector<BaseElem>> images(basis.size());
  Coordinates coords(ring);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const BaseSeries s = theta(ring, basis[b], k);
    if (s.order() < k) throw Error(Errc::SpanNotClosed, "theta image of " + basis[b].to_string() + " truncated");
    for (int n = 1; n <= k; ++n) {
      images[b].push_back(s[n]);
      coords.observe(s[n]);
    }
  }
  std::map<std::pair<int, Key>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    for (int n = 1; n <= k; ++n) {
      for (const auto& [key, v] : coords.coords(images[b][static_cast<std::size_t>(n - 1)])) {
        auto [it, fresh] = row_of.emplace(std::make_pair(n, key), row_of.size());
        cols[b].emplace_back(it->second, v);
      }
    }
  }
  const Scalar zero = Scalar::in_field(Scalar(0), ring.field());
  ScalarMatrix m = ScalarMatrix::Constant(static_cast<Eigen::Index>(row_of.size()),
                                          static_cast<Eigen::Index>(basis.size()), zero);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    for (const auto& [r, v] : cols[b]) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) += v;
  }
  ScalarMatrix ker;
  if (m.rows() == 0) {
    ker = ScalarMatrix::Constant(m.cols(), m.cols(), zero);
    for (Eigen::Index i = 0; i < m.cols(); ++i) ker(i, i) = Scalar::in_field(Scalar(1), ring.field());
  } else {
    ker = kernel(m);
  }
  std::vector<ScalarVector> out;
  for (Eigen::Index j = 0; j < ker.cols(); ++j) out.push_back(ker.col(j));
  return out;
}

Series taylor_embed(const IdRing& ring, const BaseElem& x, const Scalar& c, int n) {
  if (ring.kind() != IdRing::Kind::PolyTheta && ring.kind() != IdRing::Kind::LocalizedPolyTheta) {
    throw Error(Errc::NotSupported, "Taylor embedding needs C[t] or a localization of it");
  }
  const Scalar pt = Scalar::in_field(c, ring.field());
  if (ring.inverted()) {
    for (const auto& g : *ring.inverted()) {
      if (g.eval(pt).is_zero()) {
        throw Error(Errc::BadPoint, g.to_string() + " vanishes at t = " + pt.to_string());
      }
    }
  }
  if (!ring.contains(x)) throw Error(Errc::BaseMismatch, x.to_string() + " is not in " + ring.describe());
  if (x.kind() == BaseElem::Kind::Constant) {
    std::vector<Scalar> s(static_cast<std::size_t>(n) + 1, Scalar::in_field(Scalar(0), ring.field()));
    s[0] = Scalar::in_field(x.as<Scalar>(), ring.field());
    return Series(std::move(s), n);
  }
  return x.as<LocElem>().at_point(pt, n);
}

std::pair<int, Scalar> simplicity_certificate(const Poly& f) {
  if (f.is_zero()) throw Error(Errc::ZeroInput, "the zero polynomial generates the zero ideal");
  const int n = f.degree();
  return {n, f.hasse(static_cast<std::size_t>(n)).coeff(0)};
}

namespace testing {

ThetaFn corrupted_family(std::vector<std::function<BaseElem(const BaseElem&)>> maps) {
  return [maps = std::move(maps)](const BaseElem& x, int k) {
    std::vector<BaseElem> out;
    for (int n = 0; n <= k; ++n) {
      out.push_back(static_cast<std::size_t>(n) < maps.size() ? maps[static_cast<std::size_t>(n)](x) : BaseElem(0));
    }
    return BaseSeries(std::move(out), k);
  };
}

}  // namespace testing

}  // namespace idpv
