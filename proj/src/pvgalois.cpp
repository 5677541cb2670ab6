#include "idpv/pvgalois.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <thread>

namespace idpv {

namespace {

using ZPoly = MPoly<Scalar>;
using SeriesPoly = MPoly<Series>;

std::optional<Poly> as_poly(const BaseElem& x) {
  if (const auto c = x.constant_value()) return Poly(*c);
  if (x.kind() == BaseElem::Kind::Local && x.as<LocElem>().is_polynomial()) return x.as<LocElem>().numerator();
  return std::nullopt;
}

Poly require_poly(const BaseElem& x, const std::string& what) {
  auto p = as_poly(x);
  if (!p) throw Error(Errc::NotSupported, what + " must be a polynomial, got " + x.to_string());
  return *p;
}

Series zero_series(int n, const Field& f) {
  return Series(std::vector<Scalar>(static_cast<std::size_t>(n) + 1, Scalar::in_field(Scalar(0), f)), n);
}

int valuation(const Series& s) {
  for (int i = 0; i < s.stored() && i <= s.order(); ++i) {
    if (!s[i].is_zero()) return i;
  }
  return s.order() + 1;
}

// Laplace expansion with explicit zero and one, for polynomial entries whose
// default constructor does not carry the variable count.
template <class P>
P det_of(const std::vector<std::vector<P>>& m, const P& zero, const P& one) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  if (n == 1) return m[0][0];
  P acc = zero;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<P>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<P> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const P term = m[0][j] * det_of(minor, zero, one);
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

template <class P>
std::vector<std::vector<P>> adj_of(const std::vector<std::vector<P>>& m, const P& zero, const P& one) {
  const std::size_t n = m.size();
  std::vector<std::vector<P>> adj(n, std::vector<P>(n, zero));
  if (n == 1) {
    adj[0][0] = one;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<P>> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<P> row;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(m[r][c]);
        }
        minor.push_back(std::move(row));
      }
      const P d = det_of(minor, zero, one);
      adj[i][j] = (i + j) % 2 == 0 ? d : zero - d;
    }
  }
  return adj;
}

std::string sym_name(const char* stem, std::size_t piece, int r, Eigen::Index i, Eigen::Index k) {
  std::string s = stem + std::to_string(piece);
  if (r > 1) s += "_" + std::to_string(i + 1) + std::to_string(k + 1);
  return s;
}

Poly poly_power(const Poly& p, int e) { return p.pow(static_cast<unsigned>(e)); }

// x_j^(n_j r) / det B_j, exact in C[t].
Poly det_scaling(const LocalCoverData& c, std::size_t j, int r) {
  const BaseMatrix b = c.local_basis(j, r);
  const Poly det = require_poly(laplace_det<BaseElem>(b), "det B_j");
  try {
    return divide_exact(poly_power(c.x[j], c.n[j] * r), det);
  } catch (const Error&) {
    throw Error(Errc::SemanticError, "x_j^n_j B_j^-1 is not integral for piece " + std::to_string(j + 1));
  }
}

// x_j^(n_j) B_j^-1 with polynomial entries.
std::vector<std::vector<Poly>> scaled_inverse(const LocalCoverData& c, std::size_t j, int r) {
  const BaseMatrix b = c.local_basis(j, r);
  const Poly det = require_poly(laplace_det<BaseElem>(b), "det B_j");
  const BaseMatrix adj = adjugate<BaseElem>(b);
  std::vector<std::vector<Poly>> out(static_cast<std::size_t>(r), std::vector<Poly>(static_cast<std::size_t>(r)));
  for (int p = 0; p < r; ++p) {
    for (int q = 0; q < r; ++q) {
      const Poly num = require_poly(adj(p, q), "adj B_j") * poly_power(c.x[j], c.n[j]);
      try {
        out[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = divide_exact(num, det);
      } catch (const Error&) {
        throw Error(Errc::SemanticError, "x_j^n_j B_j^-1 is not integral for piece " + std::to_string(j + 1));
      }
    }
  }
  return out;
}

// a'_j with sum a'_j x_j^(n_j r) = 1, read off from (sum a_j x_j^n_j)^(l(r-1)+1):
// every monomial of that power has some exponent >= r.
std::vector<Poly> widen_partition(const LocalCoverData& c, int r) {
  const std::size_t l = c.x.size();
  std::vector<Poly> u(l);
  for (std::size_t j = 0; j < l; ++j) u[j] = require_poly(c.a[j], "partition coefficient") * poly_power(c.x[j], c.n[j]);
  const int m = static_cast<int>(l) * (r - 1) + 1;
  std::vector<Poly> out(l);
  std::vector<int> k(l, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == l) {
      k[j] = left;
      mpz_class coef = 1;
      int rest = m;
      for (std::size_t i = 0; i < l; ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(rest), static_cast<unsigned long>(k[i]));
        coef *= b;
        rest -= k[i];
      }
      std::size_t owner = 0;
      while (k[owner] < r) ++owner;
      Poly term(Scalar(coef, 1));
      for (std::size_t i = 0; i < l; ++i) {
        if (i == owner) {
          term *= require_poly(c.a[i], "partition coefficient").pow(static_cast<unsigned>(k[i]));
          term *= poly_power(c.x[i], c.n[i] * (k[i] - r));
        } else {
          term *= u[i].pow(static_cast<unsigned>(k[i]));
        }
      }
      out[owner] += term;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, m);
  return out;
}

RelPoly rel_var(int n, int i) { return RelPoly::variable(n, i, Poly(1)); }

RelPoly rel_const(int n, const Poly& p) { return RelPoly(n, p); }

}  // namespace

int t_degree(const RelPoly& p) {
  int d = -1;
  for (const auto& [m, c] : p.terms()) d = std::max(d, c.degree());
  return d;
}

RelPoly substitute(const RelPoly& p, const std::vector<RelPoly>& images, int nvars) {
  RelPoly out(nvars);
  std::map<std::pair<std::size_t, int>, RelPoly> powers;
  std::function<const RelPoly&(std::size_t, int)> power = [&](std::size_t i, int e) -> const RelPoly& {
    auto key = std::make_pair(i, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    RelPoly r = e == 1 ? images[i] : power(i, e - 1) * images[i];
    return powers.emplace(key, std::move(r)).first->second;
  };
  for (const auto& [m, c] : p.terms()) {
    RelPoly term(nvars, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0) term *= power(i, m[i]);
    }
    out += term;
  }
  return out;
}

std::string relpoly_to_string(const RelPoly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.sorted_terms()) {
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < names.size() ? names[i] : "x" + std::to_string(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    const std::string txt = c.to_string("t");
    const bool compound = txt.find_first_of("+-", 1) != std::string::npos;
    std::string piece;
    if (mono.empty()) {
      piece = txt;
    } else if (txt == "1") {
      piece = mono;
    } else if (txt == "-1") {
      piece = "-" + mono;
    } else if (compound) {
      piece = "(" + txt + ")*" + mono;
    } else {
      piece = txt + "*" + mono;
    }
    if (out.empty()) {
      out = piece;
    } else if (piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

std::string equation_to_string(const MPoly<Scalar>& p, const std::vector<std::string>& names) {
  return relpoly_to_string(p.map<Poly>([](const Scalar& c) { return Poly(c); }), names);
}

// ---------------------------------------------------------------------------
// Presentations

PvPresentation pv_generators(const IdModule& m, const std::optional<LocalCoverData>& cover, const Scalar& c, int n) {
  const Field f = m.base.field();
  const Scalar pt = Scalar::in_field(c, f);
  const int r = m.rank();
  PvPresentation p{m, std::nullopt, pt, n, {}, {}, fundamental_matrix(m, pt, n), {}};
  const MatSeries<Scalar>& fm = p.fundamental.f;
  SeriesMatrix fs = to_series_matrix(fm);
  const Series det_f = laplace_det<Series>(fs);

  if (!cover || cover->is_trivial()) {
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index k = 0; k < r; ++k) {
        p.symbols.push_back("g" + std::to_string(i * r + k));
        p.images.push_back(fm.entry(i, k));
      }
    }
    p.symbols.push_back("g" + std::to_string(r * r));
    p.images.push_back(series_inverse(det_f));
    return p;
  }

  const CheckReport valid = validate_cover(*cover, m);
  if (!valid.passed()) {
    const Violation& v = valid.violations().front();
    throw Error(Errc::SemanticError, "invalid cover: " + v.law + " (" + v.sample + ")");
  }
  p.cover = cover;
  const std::size_t l = cover->x.size();
  const MatSeries<Scalar> finv = mat_inverse(fm);
  for (std::size_t j = 0; j < l; ++j) {
    const BaseMatrix b = cover->local_basis(j, r);
    MatSeries<Scalar> bhat(r, r, n);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index k = 0; k < r; ++k) bhat.set_entry(i, k, taylor_embed(m.base, b(i, k), pt, n));
    }
    const MatSeries<Scalar> y = finv * bhat;
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index k = 0; k < r; ++k) {
        p.symbols.push_back(sym_name("y", j + 1, r, i, k));
        p.images.push_back(y.entry(i, k));
      }
    }
  }
  for (std::size_t j = 0; j < l; ++j) {
    p.symbols.push_back("d" + std::to_string(j + 1));
    p.images.push_back(poly_at(det_scaling(*cover, j, r), pt, n) * det_f);
  }
  p.wide_partition = widen_partition(*cover, r);
  Poly check;
  for (std::size_t j = 0; j < l; ++j) check += p.wide_partition[j] * poly_power(cover->x[j], cover->n[j] * r);
  if (check != Poly(1)) throw Error(Errc::SemanticError, "partition identity does not lift to exponents n_j r");
  return p;
}

Series evaluate(const PvPresentation& p, const RelPoly& rel) {
  const Field f = p.module.base.field();
  Series acc = zero_series(p.order, f);
  for (const auto& [m, c] : rel.terms()) {
    Series term = poly_at(c, p.point, p.order);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) term = term * p.images[i];
    }
    acc += term;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Bounded ideal spans

IdealSpan::IdealSpan(const std::vector<RelPoly>& gens, int nsym, int d, int e, const Field& f)
    : nsym_(nsym), d_(d), e_(e), field_(f), monos_(monomials_up_to(nsym, d)) {
  for (std::size_t i = 0; i < monos_.size(); ++i) pos_[monos_[i]] = static_cast<int>(i);
  std::vector<ScalarVector> rows;
  for (const auto& g : gens) {
    const int dg = g.total_degree();
    const int tg = t_degree(g);
    if (dg < 0) continue;
    for (const auto& m : monos_) {
      if (total_degree(m) + dg > d) continue;
      for (int j = 0; j + tg <= e; ++j) {
        rows.push_back(to_vector(RelPoly::term(m, Poly::monomial(Scalar(1), j)) * g));
      }
    }
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(monos_.size()) * (e + 1);
  ScalarMatrix mat(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) mat.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  if (rows.empty()) {
    span_.rref = ScalarMatrix(0, cols);
  } else {
    span_ = row_echelon(mat);
  }
}

bool IdealSpan::fits(const RelPoly& p) const { return p.total_degree() <= d_ && t_degree(p) <= e_; }

ScalarVector IdealSpan::to_vector(const RelPoly& p) const {
  if (!fits(p)) {
    throw Error(Errc::ReductionOverflow, "polynomial of degree (" + std::to_string(p.total_degree()) + "," +
                                             std::to_string(t_degree(p)) + ") exceeds the span bounds (" +
                                             std::to_string(d_) + "," + std::to_string(e_) + ")");
  }
  ScalarVector v = ScalarVector::Constant(static_cast<Eigen::Index>(monos_.size()) * (e_ + 1),
                                          Scalar::in_field(Scalar(0), field_));
  for (const auto& [m, c] : p.terms()) {
    Monomial key = m;
    key.resize(static_cast<std::size_t>(nsym_), 0);
    const int mi = pos_.at(key);
    for (int k = 0; k <= c.degree(); ++k) v(mi * (e_ + 1) + (e_ - k)) = Scalar::in_field(c.coeff(k), field_);
  }
  return v;
}

RelPoly IdealSpan::from_vector(const ScalarVector& v) const {
  RelPoly out(nsym_);
  for (std::size_t mi = 0; mi < monos_.size(); ++mi) {
    std::vector<Scalar> c(static_cast<std::size_t>(e_) + 1, Scalar::in_field(Scalar(0), field_));
    for (int k = 0; k <= e_; ++k) c[static_cast<std::size_t>(k)] = v(static_cast<Eigen::Index>(mi) * (e_ + 1) + (e_ - k));
    out.add_term(monos_[mi], Poly(std::move(c)));
  }
  return out;
}

bool IdealSpan::contains(const RelPoly& p) const { return fits(p) && in_row_span(span_, to_vector(p)); }

RelPoly IdealSpan::residue(const RelPoly& p) const { return from_vector(reduce(span_, to_vector(p))); }

std::vector<Monomial> IdealSpan::residue_support(const RelPoly& p) const {
  std::vector<Monomial> out;
  const RelPoly res = residue(p);
  for (const auto& [m, c] : res.terms()) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Relation mining

RelationSet mine_relations(const PvPresentation& p, int d, int e, int threads) {
  const Field f = p.module.base.field();
  const int ns = static_cast<int>(p.symbols.size());
  const int n = p.order;
  const std::vector<Monomial> monos = monomials_up_to(ns, d);
  const int cols = static_cast<int>(monos.size()) * (e + 1);
  int maxval = 0;
  for (const auto& s : p.images) maxval = std::max(maxval, valuation(s));
  const int need = std::max(d * maxval + e + 8, cols + 4);
  if (n < need) {
    throw Error(Errc::InsufficientOrder, "relation mining at (" + std::to_string(d) + "," + std::to_string(e) +
                                             ") over " + std::to_string(cols) + " columns needs order >= " +
                                             std::to_string(need));
  }
  std::vector<std::vector<Series>> pw(static_cast<std::size_t>(ns));
  for (int s = 0; s < ns; ++s) {
    Series acc = poly_at(Poly(1), p.point, n);
    for (int k = 0; k <= d; ++k) {
      pw[static_cast<std::size_t>(s)].push_back(acc);
      acc = acc * p.images[static_cast<std::size_t>(s)];
    }
  }
  std::vector<Series> tpow;
  for (int k = 0; k <= e; ++k) tpow.push_back(poly_at(Poly::monomial(Scalar(1), k), p.point, n));

  ScalarMatrix mat(n + 1, cols);
  auto fill = [&](std::size_t first, std::size_t step) {
    for (std::size_t mi = first; mi < monos.size(); mi += step) {
      Series img = pw[0][0];
      for (int s = 0; s < ns; ++s) {
        const int ex = monos[mi][static_cast<std::size_t>(s)];
        if (ex > 0) img = img * pw[static_cast<std::size_t>(s)][static_cast<std::size_t>(ex)];
      }
      for (int k = 0; k <= e; ++k) {
        const Series col = img * tpow[static_cast<std::size_t>(k)];
        const Eigen::Index ci = static_cast<Eigen::Index>(mi) * (e + 1) + (e - k);
        for (int row = 0; row <= n; ++row) mat(row, ci) = Scalar::in_field(col[row], f);
      }
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1) {
    fill(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill, w, workers);
    for (auto& t : pool) t.join();
  }

  RelationSet rs{p.symbols, f, d, e, n, {}, {}, 0};
  const ScalarMatrix ker = kernel(mat);
  rs.kernel_dim = static_cast<int>(ker.cols());
  if (ker.cols() == 0) return rs;
  const Echelon ek = row_echelon(ker.transpose());
  // Smallest leading term first, so low-degree generators are kept.
  std::vector<int> order(static_cast<std::size_t>(ek.rank()));
  for (int i = 0; i < ek.rank(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ek.pivots[static_cast<std::size_t>(a)] > ek.pivots[static_cast<std::size_t>(b)]; });

  auto row_poly = [&](int i) {
    RelPoly out(ns);
    for (std::size_t mi = 0; mi < monos.size(); ++mi) {
      std::vector<Scalar> c(static_cast<std::size_t>(e) + 1, Scalar::in_field(Scalar(0), f));
      for (int k = 0; k <= e; ++k) c[static_cast<std::size_t>(k)] = ek.rref(i, static_cast<Eigen::Index>(mi) * (e + 1) + (e - k));
      out.add_term(monos[mi], Poly(std::move(c)));
    }
    return out;
  };

  for (int i = 0; i < ek.rank(); ++i) rs.reduced.push_back(row_poly(i));
  std::vector<RelPoly> chosen;
  std::optional<IdealSpan> span;
  for (int i : order) {
    const RelPoly rel = row_poly(i);
    if (!span) span.emplace(chosen, ns, d, 2 * e, f);
    if (span->contains(rel)) continue;
    chosen.push_back(rel);
    span.reset();
  }
  std::reverse(chosen.begin(), chosen.end());
  rs.relations = std::move(chosen);
  return rs;
}

// ---------------------------------------------------------------------------
// theta on symbols

std::vector<std::vector<SymPoly>> symbol_theta(const PvPresentation& p, int k) {
  const IdModule& m = p.module;
  const int r = m.rank();
  const int ns = static_cast<int>(p.symbols.size());
  const MatSeries<BaseElem> a = m.a_to(k);
  Eigen::Matrix<BaseSeries, Eigen::Dynamic, Eigen::Dynamic> am(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) am(i, j) = a.entry(i, j);
  }
  const BaseSeries det_a = laplace_det<BaseSeries>(am);
  auto var = [&](int i, const BaseElem& c) {
    Monomial mono(static_cast<std::size_t>(ns), 0);
    mono[static_cast<std::size_t>(i)] = 1;
    return SymPoly::term(mono, c);
  };
  std::vector<std::vector<SymPoly>> rules(static_cast<std::size_t>(ns),
                                          std::vector<SymPoly>(static_cast<std::size_t>(k) + 1, SymPoly(ns)));
  if (!p.is_cover()) {
    const MatSeries<BaseElem> ainv = mat_inverse(a);
    for (int n = 0; n <= k; ++n) {
      for (int i = 0; i < r; ++i) {
        for (int col = 0; col < r; ++col) {
          SymPoly acc(ns);
          for (int l = 0; l < r; ++l) acc += var(l * r + col, ainv[n](i, l));
          rules[static_cast<std::size_t>(i * r + col)][static_cast<std::size_t>(n)] = acc;
        }
      }
      rules[static_cast<std::size_t>(r * r)][static_cast<std::size_t>(n)] = var(r * r, det_a[n]);
    }
    return rules;
  }

  // theta(Y_j) = (sum_i a_i Y_i x_i^n_i B_i^-1) A theta(B_j),
  // theta(d_j) = theta(s_j) det(A)^-1 sum_i a'_i det(B_i) d_i.
  const LocalCoverData& c = *p.cover;
  const std::size_t l = c.x.size();
  const int ny = static_cast<int>(l) * r * r;
  std::vector<std::vector<std::vector<Poly>>> pinv;
  for (std::size_t i = 0; i < l; ++i) pinv.push_back(scaled_inverse(c, i, r));
  const BaseSeries det_a_inv = series_inverse(det_a);
  for (std::size_t j = 0; j < l; ++j) {
    const BaseMatrix b = c.local_basis(j, r);
    std::vector<BaseMatrix> tb(static_cast<std::size_t>(k) + 1, BaseMatrix::Constant(r, r, BaseElem(0)));
    for (Eigen::Index p1 = 0; p1 < r; ++p1) {
      for (Eigen::Index q1 = 0; q1 < r; ++q1) {
        const BaseSeries th = theta(m.base, b(p1, q1), k);
        for (int n = 0; n <= k; ++n) tb[static_cast<std::size_t>(n)](p1, q1) = th[n];
      }
    }
    for (int n = 0; n <= k; ++n) {
      BaseMatrix qn = BaseMatrix::Constant(r, r, BaseElem(0));
      for (int s = 0; s <= n; ++s) qn += a[s] * tb[static_cast<std::size_t>(n - s)];
      for (int row = 0; row < r; ++row) {
        for (int col = 0; col < r; ++col) {
          SymPoly acc(ns);
          for (std::size_t i = 0; i < l; ++i) {
            for (int q = 0; q < r; ++q) {
              BaseElem coef(0);
              for (int u = 0; u < r; ++u) {
                coef += BaseElem(pinv[i][static_cast<std::size_t>(q)][static_cast<std::size_t>(u)]) * qn(u, col);
              }
              coef = c.a[i] * coef;
              if (coef.is_zero()) continue;
              acc += var(static_cast<int>(i) * r * r + row * r + q, coef);
            }
          }
          rules[static_cast<std::size_t>(static_cast<int>(j) * r * r + row * r + col)][static_cast<std::size_t>(n)] = acc;
        }
      }
    }
    const BaseSeries scale = theta(m.base, BaseElem(det_scaling(c, j, r)), k) * det_a_inv;
    for (int n = 0; n <= k; ++n) {
      SymPoly acc(ns);
      for (std::size_t i = 0; i < l; ++i) {
        const BaseElem coef = scale[n] * BaseElem(p.wide_partition[i]) * laplace_det<BaseElem>(c.local_basis(i, r));
        if (!coef.is_zero()) acc += var(ny + static_cast<int>(i), coef);
      }
      rules[static_cast<std::size_t>(ny) + j][static_cast<std::size_t>(n)] = acc;
    }
  }
  return rules;
}

namespace {

// Multiplies by a product of inverted polynomials so every coefficient is a
// polynomial.
RelPoly clear_denominators(const SymPoly& p) {
  std::vector<int> top;
  PolySet inv;
  for (const auto& [m, c] : p.terms()) {
    if (c.kind() != BaseElem::Kind::Local) continue;
    const LocElem& x = c.as<LocElem>();
    if (x.inverted()) inv = x.inverted();
    const auto& e = x.exponents();
    if (top.size() < e.size()) top.resize(e.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) top[i] = std::max(top[i], e[i]);
  }
  Poly scale(1);
  for (std::size_t i = 0; i < top.size(); ++i) scale *= (*inv)[i].pow(static_cast<unsigned>(top[i]));
  RelPoly out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    Poly v;
    if (const auto cv = c.constant_value(); cv && c.kind() == BaseElem::Kind::Constant) {
      v = Poly(*cv) * scale;
    } else {
      const LocElem& x = c.as<LocElem>();
      v = divide_exact(x.numerator() * scale, x.denominator());
    }
    out.add_term(m, v);
  }
  return out;
}

}  // namespace

CheckReport check_id_stable_ideal(const RelationSet& rs, const PvPresentation& p, int k) {
  CheckReport report("theta(I) in I[[T]]");
  const int ns = static_cast<int>(p.symbols.size());
  const auto rules = symbol_theta(p, k);
  for (std::size_t ri = 0; ri < rs.relations.size(); ++ri) {
    const RelPoly& rel = rs.relations[ri];
    std::vector<SymPoly> acc(static_cast<std::size_t>(k) + 1, SymPoly(ns));
    for (const auto& [mono, coef] : rel.terms()) {
      const BaseSeries tc = theta(p.module.base, BaseElem(coef), k);
      std::vector<SymPoly> term(static_cast<std::size_t>(k) + 1, SymPoly(ns));
      for (int n = 0; n <= k; ++n) term[static_cast<std::size_t>(n)] = SymPoly(ns, tc[n]);
      for (int s = 0; s < ns; ++s) {
        for (int ex = 0; ex < mono[static_cast<std::size_t>(s)]; ++ex) {
          std::vector<SymPoly> next(static_cast<std::size_t>(k) + 1, SymPoly(ns));
          for (int i = 0; i <= k; ++i) {
            if (term[static_cast<std::size_t>(i)].is_zero()) continue;
            for (int j = 0; i + j <= k; ++j) {
              next[static_cast<std::size_t>(i + j)] += term[static_cast<std::size_t>(i)] * rules[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
            }
          }
          term = std::move(next);
        }
      }
      for (int n = 0; n <= k; ++n) acc[static_cast<std::size_t>(n)] += term[static_cast<std::size_t>(n)];
    }
    for (int n = 1; n <= k; ++n) {
      const RelPoly cleared = clear_denominators(acc[static_cast<std::size_t>(n)]);
      const int d = std::max(rs.d, cleared.total_degree());
      const int e = std::max(rs.e, t_degree(cleared)) + rs.e;
      const IdealSpan span(rs.relations, ns, d, e, rs.field);
      report.expect(span.contains(cleared), {"T^n coefficient of theta(r) lies in the ideal", relpoly_to_string(rel, p.symbols),
                                             {static_cast<long long>(ri), n}, relpoly_to_string(cleared, p.symbols), "ideal member"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Stabilizer equations

namespace {

std::vector<std::string> z_names(int r) {
  std::vector<std::string> out;
  if (r == 1) return {"z"};
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) out.push_back("z" + std::to_string(i + 1) + std::to_string(j + 1));
  }
  return out;
}

// Images of the symbols under F -> F Z, as polynomials in (symbols, z, w).
std::vector<RelPoly> galois_rules(const PvPresentation& p) {
  const int r = p.rank();
  const int ns = static_cast<int>(p.symbols.size());
  const int nv = ns + r * r + 1;
  auto z = [&](int i, int j) { return rel_var(nv, ns + i * r + j); };
  const RelPoly w = rel_var(nv, ns + r * r);
  std::vector<std::vector<RelPoly>> zm(static_cast<std::size_t>(r), std::vector<RelPoly>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) zm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = z(i, j);
  }
  const RelPoly zero(nv);
  const RelPoly one(nv, Poly(1));
  std::vector<RelPoly> out;
  if (!p.is_cover()) {
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) {
        RelPoly acc(nv);
        for (int l = 0; l < r; ++l) acc += rel_var(nv, i * r + l) * z(l, k);
        out.push_back(acc);
      }
    }
    out.push_back(rel_var(nv, r * r) * w);
    return out;
  }
  // Y_j -> Z^-1 Y_j = adj(Z) w Y_j and d_j -> d_j det Z.
  const auto adj = adj_of(zm, zero, one);
  const RelPoly det = det_of(zm, zero, one);
  const std::size_t l = p.cover->x.size();
  for (std::size_t j = 0; j < l; ++j) {
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) {
        RelPoly acc(nv);
        for (int u = 0; u < r; ++u) {
          acc += adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] * w *
                 rel_var(nv, static_cast<int>(j) * r * r + u * r + k);
        }
        out.push_back(acc);
      }
    }
  }
  const int ny = static_cast<int>(l) * r * r;
  for (std::size_t j = 0; j < l; ++j) out.push_back(rel_var(nv, ny + static_cast<int>(j)) * det);
  return out;
}

// E(z, w) with w = det(Z)^-1 rewritten as det(Z)^k E, a polynomial in z only;
// in rank 1 the unit z is also divided out.
ZPoly eliminate_w(const ZPoly& e, int r) {
  const int nz = r * r;
  int k = 0;
  for (const auto& [m, c] : e.terms()) k = std::max(k, m[static_cast<std::size_t>(nz)]);
  std::vector<std::vector<ZPoly>> zm(static_cast<std::size_t>(r), std::vector<ZPoly>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) zm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ZPoly::variable(nz, i * r + j, Scalar(1));
  }
  const ZPoly det = det_of(zm, ZPoly(nz), ZPoly(nz, Scalar(1)));
  ZPoly out(nz);
  for (const auto& [m, c] : e.terms()) {
    Monomial zm_only(m.begin(), m.begin() + nz);
    out += ZPoly::term(zm_only, c) * det.pow(static_cast<unsigned>(k - m[static_cast<std::size_t>(nz)]), Scalar(1));
  }
  if (r == 1 && !out.is_zero()) {
    int low = std::numeric_limits<int>::max();
    for (const auto& [m, c] : out.terms()) low = std::min(low, m[0]);
    ZPoly shifted(1);
    for (const auto& [m, c] : out.terms()) shifted.add_term(Monomial{m[0] - low}, c);
    out = shifted;
  }
  return out;
}

Scalar eval_at_identity(const ZPoly& e, int r) {
  Scalar acc(0);
  for (const auto& [m, c] : e.terms()) {
    bool one = true;
    for (int i = 0; i < r && one; ++i) {
      for (int j = 0; j < r; ++j) {
        if (i != j && m[static_cast<std::size_t>(i * r + j)] > 0) one = false;
      }
    }
    if (one) acc += c;
  }
  return acc;
}

}  // namespace

GroupEquations stabilizer_equations(const RelationSet& rs, const PvPresentation& p, int d_z) {
  if (rs.symbols != p.symbols) throw Error(Errc::SemanticError, "relation set was mined from a different presentation");
  const int r = p.rank();
  const int ns = static_cast<int>(p.symbols.size());
  const int nz = r * r;
  const int nv = ns + nz + 1;
  const Field f = p.module.base.field();
  GroupEquations out{r, z_names(r), f, {}, true};
  const std::vector<RelPoly> rules = galois_rules(p);
  const IdealSpan span(rs.relations, ns, rs.d, rs.e, f);

  std::map<std::pair<Monomial, int>, ZPoly> raw;
  for (const RelPoly& rel : rs.relations) {
    const RelPoly sub = substitute(rel, rules, nv);
    std::map<Monomial, RelPoly> groups;
    for (const auto& [m, c] : sub.terms()) {
      Monomial g(m.begin(), m.begin() + ns);
      Monomial zw(m.begin() + ns, m.end());
      auto it = groups.try_emplace(zw, RelPoly(ns)).first;
      it->second.add_term(g, c);
    }
    for (const auto& [zw, gpart] : groups) {
      const RelPoly res = span.residue(gpart);
      for (const auto& [gm, coef] : res.terms()) {
        for (int k = 0; k <= coef.degree(); ++k) {
          if (coef.coeff(k).is_zero()) continue;
          auto it = raw.try_emplace({gm, k}, ZPoly(nz + 1)).first;
          it->second.add_term(zw, coef.coeff(k));
        }
      }
    }
    std::map<std::pair<Monomial, int>, ZPoly> local;
    local.swap(raw);
    for (auto& [key, e] : local) {
      if (!Scalar::in_field(eval_at_identity(e, r), f).is_zero()) {
        // w = 1 at the identity, so only z-diagonal terms contribute.
        out.identity_ok = false;
      }
      if (e.is_zero()) continue;
      const ZPoly z = eliminate_w(e, r);
      if (z.is_zero()) continue;
      if (z.total_degree() > d_z * r) {
        throw Error(Errc::ReductionOverflow, "stabilizer equation of degree " + std::to_string(z.total_degree()) +
                                                 " exceeds the bound " + std::to_string(d_z * r));
      }
      out.equations.push_back(z);
    }
  }
  if (out.equations.empty()) return out;
  int top = 0;
  for (const auto& e : out.equations) top = std::max(top, e.total_degree());
  const std::vector<Monomial> monos = monomials_up_to(nz, top);
  std::map<Monomial, int> pos;
  for (std::size_t i = 0; i < monos.size(); ++i) pos[monos[i]] = static_cast<int>(i);
  ScalarMatrix mat = ScalarMatrix::Constant(static_cast<Eigen::Index>(out.equations.size()), static_cast<Eigen::Index>(monos.size()),
                                            Scalar::in_field(Scalar(0), f));
  for (std::size_t i = 0; i < out.equations.size(); ++i) {
    for (const auto& [m, c] : out.equations[i].terms()) mat(static_cast<Eigen::Index>(i), pos.at(m)) = Scalar::in_field(c, f);
  }
  const Echelon ech = row_echelon(mat);
  out.equations.clear();
  for (int i = 0; i < ech.rank(); ++i) {
    ZPoly e(nz);
    for (std::size_t j = 0; j < monos.size(); ++j) e.add_term(monos[j], ech.rref(i, static_cast<Eigen::Index>(j)));
    out.equations.push_back(e);
  }
  return out;
}

Poly group_generator(const GroupEquations& g) {
  if (g.rank != 1) throw Error(Errc::NotDiagonal, "group generator is defined for rank 1");
  Poly acc;
  for (const auto& e : g.equations) {
    std::vector<Scalar> c(static_cast<std::size_t>(e.total_degree()) + 1, Scalar::in_field(Scalar(0), g.field));
    for (const auto& [m, v] : e.terms()) c[static_cast<std::size_t>(m[0])] = v;
    acc = gcd(acc, Poly(std::move(c)));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Tensor constants

namespace {

// C[[t]]-module C[[t]]^q / L with L spanned by rows that admit unit pivots.
class SeriesQuotient {
 public:
  SeriesQuotient(std::vector<std::vector<Series>> rows, int q) : q_(q) {
    std::vector<bool> used(rows.size(), false);
    for (int col = 0; col < q; ++col) {
      std::size_t pick = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!used[i] && !rows[i][static_cast<std::size_t>(col)][0].is_zero()) {
          pick = i;
          break;
        }
      }
      if (pick == rows.size()) continue;
      used[pick] = true;
      const Series inv = series_inverse(rows[pick][static_cast<std::size_t>(col)]);
      for (auto& v : rows[pick]) v = v * inv;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == pick) continue;
        const Series factor = rows[i][static_cast<std::size_t>(col)];
        if (factor.is_zero()) continue;
        for (int j = 0; j < q; ++j) rows[i][static_cast<std::size_t>(j)] -= factor * rows[pick][static_cast<std::size_t>(j)];
      }
      pivots_.push_back(col);
      pivot_rows_.push_back(rows[pick]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (used[i]) continue;
      for (const auto& v : rows[i]) {
        if (!v.is_zero()) throw Error(Errc::NotSupported, "relation module has no unit-pivot echelon form at this order");
      }
    }
    std::set<int> piv(pivots_.begin(), pivots_.end());
    for (int c = 0; c < q; ++c) {
      if (!piv.count(c)) basis_.push_back(c);
    }
  }

  const std::vector<int>& basis() const { return basis_; }

  std::vector<Series> normal_form(std::vector<Series> v) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const Series factor = v[static_cast<std::size_t>(pivots_[i])];
      if (factor.is_zero()) continue;
      for (int j = 0; j < q_; ++j) v[static_cast<std::size_t>(j)] -= factor * pivot_rows_[i][static_cast<std::size_t>(j)];
    }
    std::vector<Series> out;
    for (int b : basis_) out.push_back(v[static_cast<std::size_t>(b)]);
    return out;
  }

 private:
  int q_;
  std::vector<int> pivots_;
  std::vector<std::vector<Series>> pivot_rows_;
  std::vector<int> basis_;
};

std::string z_monomial_name(const Monomial& m, int r, const std::vector<std::string>& zn) {
  if (r == 1) {
    const int ex = m[0] - m[1];
    if (ex == 0) return "1";
    if (ex == 1) return "Z";
    return "Z^" + std::to_string(ex);
  }
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += i < zn.size() ? zn[i] : "w";
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

TensorConstants tensor_constants_check(const PvPresentation& p, const RelationSet& rs, int d, int k) {
  if (p.is_cover()) throw Error(Errc::NotSupported, "tensor constants need the free presentation");
  const int n = p.order;
  if (k > n) throw Error(Errc::InsufficientOrder, "theta order " + std::to_string(k) + " exceeds series order " + std::to_string(n));
  const Field f = p.module.base.field();
  if (f.is_prime_field()) {
    // t^q with q the largest power of p up to n is killed by theta^(i) for 0 < i < q.
    std::uint64_t q = 1;
    while (q * f.characteristic() <= static_cast<std::uint64_t>(n)) q *= f.characteristic();
    if (static_cast<std::uint64_t>(k) < q) {
      throw Error(Errc::InsufficientOrder, "theta order " + std::to_string(k) + " cannot separate t^" + std::to_string(q) +
                                               " from constants; need at least " + std::to_string(q));
    }
  }
  const int r = p.rank();
  const int ns = static_cast<int>(p.symbols.size());
  const Series zero = zero_series(n, f);
  const std::vector<Monomial> monos = monomials_up_to(ns, d);
  const int q = static_cast<int>(monos.size());
  std::map<Monomial, int> pos;
  for (int i = 0; i < q; ++i) pos[monos[static_cast<std::size_t>(i)]] = i;

  auto to_vec = [&](const SeriesPoly& poly) {
    std::vector<Series> v(static_cast<std::size_t>(q), zero);
    for (const auto& [m, c] : poly.terms()) {
      Monomial key = m;
      key.resize(static_cast<std::size_t>(ns), 0);
      v[static_cast<std::size_t>(pos.at(key))] += c;
    }
    return v;
  };
  auto embed = [&](const RelPoly& rel) { return rel.map<Series>([&](const Poly& c) { return poly_at(c, p.point, n); }); };

  std::vector<std::vector<Series>> rows;
  for (const RelPoly& rel : rs.relations) {
    const int dr = rel.total_degree();
    for (const auto& m : monos) {
      if (total_degree(m) + dr > d) continue;
      rows.push_back(to_vec(embed(RelPoly::term(m, Poly(1)) * rel)));
    }
  }
  const SeriesQuotient quot(std::move(rows), q);
  const std::vector<int>& basis = quot.basis();
  const int qb = static_cast<int>(basis.size());

  // theta of the symbols with embedded coefficients: theta(F) = A^-1 F and
  // theta(det F^-1) = det(A) det F^-1.
  const auto ahat = embed_coefficients(p.module, p.point, n, k);
  std::vector<SeriesMatrix> ainv(static_cast<std::size_t>(k) + 1);
  ainv[0] = SeriesMatrix::Constant(r, r, zero);
  for (int i = 0; i < r; ++i) ainv[0](i, i) = poly_at(Poly(1), p.point, n);
  std::vector<SeriesMatrix> ah;
  for (int i = 0; i <= k; ++i) ah.push_back(to_series_matrix(ahat[static_cast<std::size_t>(i)]));
  for (int j = 1; j <= k; ++j) {
    SeriesMatrix acc = SeriesMatrix::Constant(r, r, zero);
    for (int i = 1; i <= j; ++i) acc += ah[static_cast<std::size_t>(i)] * ainv[static_cast<std::size_t>(j - i)];
    ainv[static_cast<std::size_t>(j)] = SeriesMatrix::Constant(r, r, zero) - acc;
  }
  Eigen::Matrix<TruncSeries<Series>, Eigen::Dynamic, Eigen::Dynamic> abig(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      std::vector<Series> c;
      for (int t = 0; t <= k; ++t) c.push_back(ah[static_cast<std::size_t>(t)](i, j));
      abig(i, j) = TruncSeries<Series>(std::move(c), k);
    }
  }
  const TruncSeries<Series> det_a = laplace_det<TruncSeries<Series>>(abig);
  auto svar = [&](int i, const Series& c) {
    Monomial m(static_cast<std::size_t>(ns), 0);
    m[static_cast<std::size_t>(i)] = 1;
    return SeriesPoly::term(m, c);
  };
  std::vector<std::vector<SeriesPoly>> rule(static_cast<std::size_t>(ns), std::vector<SeriesPoly>(static_cast<std::size_t>(k) + 1, SeriesPoly(ns)));
  for (int t = 0; t <= k; ++t) {
    for (int i = 0; i < r; ++i) {
      for (int c = 0; c < r; ++c) {
        SeriesPoly acc(ns);
        for (int l = 0; l < r; ++l) acc += svar(l * r + c, ainv[static_cast<std::size_t>(t)](i, l));
        rule[static_cast<std::size_t>(i * r + c)][static_cast<std::size_t>(t)] = acc;
      }
    }
    rule[static_cast<std::size_t>(r * r)][static_cast<std::size_t>(t)] = svar(r * r, det_a[t]);
  }
  // theta^(j) of every basis monomial, in normal form.
  std::vector<std::vector<std::vector<Series>>> nf_theta(static_cast<std::size_t>(qb));
  for (int b = 0; b < qb; ++b) {
    const Monomial& mono = monos[static_cast<std::size_t>(basis[static_cast<std::size_t>(b)])];
    std::vector<SeriesPoly> cur(static_cast<std::size_t>(k) + 1, SeriesPoly(ns));
    cur[0] = SeriesPoly(ns, poly_at(Poly(1), p.point, n));
    for (int s = 0; s < ns; ++s) {
      for (int ex = 0; ex < mono[static_cast<std::size_t>(s)]; ++ex) {
        std::vector<SeriesPoly> next(static_cast<std::size_t>(k) + 1, SeriesPoly(ns));
        for (int i = 0; i <= k; ++i) {
          for (int j = 0; i + j <= k; ++j) next[static_cast<std::size_t>(i + j)] += cur[static_cast<std::size_t>(i)] * rule[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
        }
        cur = std::move(next);
      }
    }
    for (int j = 0; j <= k; ++j) nf_theta[static_cast<std::size_t>(b)].push_back(quot.normal_form(to_vec(cur[static_cast<std::size_t>(j)])));
  }

  // Linear map u -> (theta^(m)(sum_b u_b b))_{1 <= m <= k}, u_b in C[t]/t^(n+1).
  const int unknowns = qb * (n + 1);
  std::vector<std::vector<Scalar>> eq_rows;
  for (int m = 1; m <= k; ++m) {
    for (int beta = 0; beta < qb; ++beta) {
      for (int kk = 0; kk <= n - m; ++kk) {
        std::vector<Scalar> row(static_cast<std::size_t>(unknowns), Scalar::in_field(Scalar(0), f));
        for (int b = 0; b < qb; ++b) {
          for (int k0 = 0; k0 <= n; ++k0) {
            Scalar acc = Scalar::in_field(Scalar(0), f);
            for (int i = 0; i <= std::min(m, k0); ++i) {
              const int at = kk - (k0 - i);
              if (at < 0) continue;
              const Series& s = nf_theta[static_cast<std::size_t>(b)][static_cast<std::size_t>(m - i)][static_cast<std::size_t>(beta)];
              acc += binomial(static_cast<std::uint64_t>(k0), static_cast<std::uint64_t>(i), f) * s[at];
            }
            row[static_cast<std::size_t>(b * (n + 1) + k0)] = acc;
          }
        }
        eq_rows.push_back(std::move(row));
      }
    }
  }
  ScalarMatrix sys(static_cast<Eigen::Index>(eq_rows.size()), unknowns);
  for (std::size_t i = 0; i < eq_rows.size(); ++i) {
    for (int j = 0; j < unknowns; ++j) sys(static_cast<Eigen::Index>(i), j) = eq_rows[i][static_cast<std::size_t>(j)];
  }
  const Echelon sys_e = row_echelon(sys);
  const int dim = unknowns - sys_e.rank();
  ScalarMatrix kernel_rows = ScalarMatrix::Constant(dim, unknowns, Scalar::in_field(Scalar(0), f));
  {
    std::vector<bool> is_pivot(static_cast<std::size_t>(unknowns), false);
    for (int c : sys_e.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    Eigen::Index row = 0;
    for (int c = 0; c < unknowns; ++c) {
      if (is_pivot[static_cast<std::size_t>(c)]) continue;
      kernel_rows(row, c) = Scalar::in_field(Scalar(1), f);
      for (int i = 0; i < sys_e.rank(); ++i) kernel_rows(row, sys_e.pivots[static_cast<std::size_t>(i)]) = -sys_e.rref(i, c);
      ++row;
    }
  }
  const Echelon kernel_e = dim > 0 ? row_echelon(kernel_rows) : Echelon{ScalarMatrix(0, unknowns), {}};

  // Z = F^-1 X and w = det(F) det(X)^-1 in the model.
  SeriesMatrix fs = to_series_matrix(p.fundamental.f);
  const SeriesMatrix finv = mat_inverse(fs, n);
  const Series det_f = laplace_det<Series>(fs);
  const int nz = r * r;
  std::vector<SeriesPoly> zvars;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      SeriesPoly acc(ns);
      for (int l = 0; l < r; ++l) acc += svar(l * r + j, finv(i, l));
      zvars.push_back(acc);
    }
  }
  zvars.push_back(svar(r * r, det_f));
  std::vector<Monomial> zmonos = monomials_up_to(nz + 1, d);
  std::stable_sort(zmonos.begin(), zmonos.end(), [&](const Monomial& a, const Monomial& b) {
    if (a[static_cast<std::size_t>(nz)] != b[static_cast<std::size_t>(nz)]) return a[static_cast<std::size_t>(nz)] < b[static_cast<std::size_t>(nz)];
    return total_degree(a) < total_degree(b);
  });

  TensorConstants out{CheckReport("constants of C[[t]] (x) R = C[Z, det Z^-1]"), dim, {}};
  const std::vector<std::string> zn = z_names(r);
  ScalarMatrix chosen(0, unknowns);
  int chosen_rank = 0;
  for (const Monomial& zm : zmonos) {
    SeriesPoly val(ns, poly_at(Poly(1), p.point, n));
    for (int i = 0; i <= nz; ++i) {
      for (int e = 0; e < zm[static_cast<std::size_t>(i)]; ++e) val *= zvars[static_cast<std::size_t>(i)];
    }
    const std::vector<Series> nf = quot.normal_form(to_vec(val));
    ScalarVector u(unknowns);
    for (int b = 0; b < qb; ++b) {
      for (int k0 = 0; k0 <= n; ++k0) u(b * (n + 1) + k0) = Scalar::in_field(nf[static_cast<std::size_t>(b)][k0], f);
    }
    const bool constant = in_row_span(kernel_e, u);
    const std::string name = z_monomial_name(zm, r, zn);
    out.report.expect(constant, {"Z-monomial is constant", name, {}, constant ? "0" : "nonzero theta image", "0"});
    ScalarMatrix trial(chosen.rows() + 1, unknowns);
    trial.topRows(chosen.rows()) = chosen;
    trial.bottomRows(1) = u.transpose();
    const int rk = rank(trial);
    if (rk > chosen_rank) {
      chosen = trial;
      chosen_rank = rk;
      out.basis.push_back(name);
    }
  }
  out.report.expect(chosen_rank == dim, {"constants are spanned by Z-monomials", "dimension", {chosen_rank, dim},
                                         std::to_string(chosen_rank), std::to_string(dim)});
  return out;
}

// ---------------------------------------------------------------------------
// Diagonal invariants

DiagonalInvariants diagonal_invariants(const RelationSet& rs, const PvPresentation& p, unsigned k, int d,
                                       int relation_degree) {
  if (p.is_cover() || p.rank() != 1) throw Error(Errc::NotDiagonal, "the action F -> F Z is diagonal only in rank 1 here");
  const Field f = p.module.base.field();
  auto weight = [](const Monomial& m) { return m[0] - m[1]; };
  auto invariant = [&](const Monomial& m) {
    const int w = weight(m);
    return k == 0 ? w == 0 : w % static_cast<int>(k) == 0;
  };
  std::vector<Monomial> inv;
  for (const auto& m : monomials_up_to(2, d)) {
    if (total_degree(m) > 0 && invariant(m)) inv.push_back(m);
  }
  std::sort(inv.begin(), inv.end(), [](const Monomial& a, const Monomial& b) { return grlex_less(a, b); });
  std::set<Monomial> inv_set(inv.begin(), inv.end());
  std::vector<Monomial> minimal;
  for (const auto& m : inv) {
    bool product = false;
    for (int a = 0; a <= m[0] && !product; ++a) {
      for (int b = 0; b <= m[1] && !product; ++b) {
        const Monomial x{a, b};
        const Monomial y{m[0] - a, m[1] - b};
        if (total_degree(x) == 0 || total_degree(y) == 0) continue;
        product = inv_set.count(x) && inv_set.count(y);
      }
    }
    if (!product) minimal.push_back(m);
  }

  // A monomial is a base element when some product of inverted polynomials
  // times it reduces onto the t-column span of the monomial 1.
  Poly unit(1);
  if (p.module.base.inverted()) {
    for (const auto& g : *p.module.base.inverted()) unit *= g;
  }
  const int top_d = std::max(rs.d, d);
  const int max_power = 2;
  const int e_span = rs.e + std::max(0, unit.degree()) * max_power + rs.e;
  const IdealSpan span(rs.relations, 2, top_d, e_span, f);
  const Monomial one{0, 0};
  auto is_base = [&](const Monomial& m) {
    Poly scale(1);
    for (int j = 0; j <= max_power; ++j) {
      const RelPoly x = RelPoly::term(m, scale);
      if (span.fits(x)) {
        const auto support = span.residue_support(x);
        if (std::all_of(support.begin(), support.end(), [&](const Monomial& s) { return s == one; })) return true;
      }
      scale *= unit;
    }
    return false;
  };

  DiagonalInvariants out;
  std::vector<std::pair<int, Monomial>> kept;
  for (const auto& m : minimal) {
    if (!is_base(m)) kept.emplace_back(weight(m), m);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return grlex_less(a.second, b.second);
  });
  for (const auto& [w, m] : kept) {
    std::string name;
    for (int s = 0; s < 2; ++s) {
      if (m[static_cast<std::size_t>(s)] == 0) continue;
      if (!name.empty()) name += "*";
      name += p.symbols[static_cast<std::size_t>(s)];
      if (m[static_cast<std::size_t>(s)] > 1) name += "^" + std::to_string(m[static_cast<std::size_t>(s)]);
    }
    out.generators.push_back(name);
    out.monomials.push_back(m);
    out.weights.push_back(w);
  }
  out.only_base = out.generators.empty();
  if (out.only_base) return out;

  PvPresentation sub = p;
  sub.symbols.clear();
  sub.images.clear();
  for (std::size_t i = 0; i < out.monomials.size(); ++i) {
    const std::string& g = out.generators[i];
    sub.symbols.push_back(g.find_first_of("^*") == std::string::npos ? g : "(" + g + ")");
    sub.images.push_back(evaluate(p, RelPoly::term(out.monomials[i], Poly(1))));
  }
  out.relations = mine_relations(sub, relation_degree, rs.e);
  return out;
}

// ---------------------------------------------------------------------------
// Free versus cover presentation

CheckReport compare_presentations(const RelationSet& free_rs, const PvPresentation& free_p, const RelationSet& cover_rs,
                                  const PvPresentation& cover_p) {
  if (free_p.is_cover() || !cover_p.is_cover()) throw Error(Errc::SemanticError, "expected a free and a cover presentation");
  const LocalCoverData& c = *cover_p.cover;
  const int r = free_p.rank();
  const std::size_t l = c.x.size();
  const int nf = r * r + 1;
  const int nc = static_cast<int>(l) * r * r + static_cast<int>(l);
  const int ny = static_cast<int>(l) * r * r;

  std::vector<std::vector<RelPoly>> fmat(static_cast<std::size_t>(r), std::vector<RelPoly>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) fmat[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = rel_var(nf, i * r + k);
  }
  const RelPoly g = rel_var(nf, r * r);
  const auto adj_f = adj_of(fmat, RelPoly(nf), rel_const(nf, Poly(1)));
  const RelPoly det_f = det_of(fmat, RelPoly(nf), rel_const(nf, Poly(1)));

  // Cover symbols in terms of free ones.
  std::vector<RelPoly> phi;
  for (std::size_t j = 0; j < l; ++j) {
    const BaseMatrix b = c.local_basis(j, r);
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) {
        RelPoly acc(nf);
        for (int u = 0; u < r; ++u) {
          acc += adj_f[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] * g * rel_const(nf, require_poly(b(u, k), "B_j entry"));
        }
        phi.push_back(acc);
      }
    }
  }
  for (std::size_t j = 0; j < l; ++j) phi.push_back(rel_const(nf, det_scaling(c, j, r)) * det_f);

  // Free symbols in terms of cover ones.
  std::vector<RelPoly> fsum(static_cast<std::size_t>(r * r), RelPoly(nc));
  RelPoly gsum(nc);
  for (std::size_t j = 0; j < l; ++j) {
    std::vector<std::vector<RelPoly>> y(static_cast<std::size_t>(r), std::vector<RelPoly>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) y[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = rel_var(nc, static_cast<int>(j) * r * r + i * r + k);
    }
    const auto adj_y = adj_of(y, RelPoly(nc), rel_const(nc, Poly(1)));
    const RelPoly det_y = det_of(y, RelPoly(nc), rel_const(nc, Poly(1)));
    const BaseMatrix b = c.local_basis(j, r);
    const RelPoly dj = rel_var(nc, ny + static_cast<int>(j));
    const RelPoly aj = rel_const(nc, cover_p.wide_partition[j]);
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) {
        RelPoly acc(nc);
        for (int u = 0; u < r; ++u) {
          acc += rel_const(nc, require_poly(b(i, u), "B_j entry")) * adj_y[static_cast<std::size_t>(u)][static_cast<std::size_t>(k)];
        }
        fsum[static_cast<std::size_t>(i * r + k)] += aj * acc * dj;
      }
    }
    gsum += aj * det_y * rel_const(nc, det_scaling(c, j, r));
  }
  std::vector<RelPoly> psi = fsum;
  psi.push_back(gsum);

  CheckReport report("free and cover relation ideals coincide");
  std::map<std::pair<int, int>, IdealSpan> free_spans;
  std::map<std::pair<int, int>, IdealSpan> cover_spans;
  auto member = [](std::map<std::pair<int, int>, IdealSpan>& cache, const RelationSet& rs, int nsym, const RelPoly& x) {
    if (x.is_zero()) return true;
    const int d = std::max(rs.d, x.total_degree());
    const int e = std::max(rs.e, t_degree(x)) + rs.e;
    auto it = cache.find({d, e});
    if (it == cache.end()) it = cache.emplace(std::make_pair(d, e), IdealSpan(rs.relations, nsym, d, e, rs.field)).first;
    return it->second.contains(x);
  };
  for (std::size_t i = 0; i < cover_rs.relations.size(); ++i) {
    const RelPoly img = substitute(cover_rs.relations[i], phi, nf);
    report.expect(member(free_spans, free_rs, nf, img), {"cover relation maps into the free ideal", relpoly_to_string(cover_rs.relations[i], cover_p.symbols),
                                                         {static_cast<long long>(i)}, relpoly_to_string(img, free_p.symbols), "ideal member"});
  }
  for (std::size_t i = 0; i < free_rs.relations.size(); ++i) {
    const RelPoly img = substitute(free_rs.relations[i], psi, nc);
    report.expect(member(cover_spans, cover_rs, nc, img), {"free relation maps into the cover ideal", relpoly_to_string(free_rs.relations[i], free_p.symbols),
                                                           {static_cast<long long>(i)}, relpoly_to_string(img, cover_p.symbols), "ideal member"});
  }
  return report;
}

}  // namespace idpv
