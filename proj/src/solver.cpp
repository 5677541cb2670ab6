#include "idpv/solver.hpp"

namespace idpv {

std::vector<MatSeries<Scalar>> embed_coefficients(const IdModule& m, const Scalar& c, int n, int k) {
  const MatSeries<BaseElem> a = m.a_to(k);
  const Scalar pt = Scalar::in_field(c, m.base.field());
  const bool series_base = m.base.kind() == IdRing::Kind::SeriesTheta;
  if (series_base && !pt.is_zero()) throw Error(Errc::BadPoint, "a truncated series ring can only be expanded at 0");
  if (!series_base && m.base.kind() != IdRing::Kind::PolyTheta && m.base.kind() != IdRing::Kind::LocalizedPolyTheta) {
    throw Error(Errc::NotSupported, "no Taylor embedding for " + m.base.describe());
  }
  if (m.base.inverted()) {
    for (const auto& g : *m.base.inverted()) {
      if (g.eval(pt).is_zero()) throw Error(Errc::BadPoint, g.to_string() + " vanishes at t = " + pt.to_string());
    }
  }
  std::vector<MatSeries<Scalar>> out;
  for (int i = 0; i <= k; ++i) {
    MatSeries<Scalar> e(a.rows(), a.cols(), n);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index col = 0; col < a.cols(); ++col) {
        const BaseElem& x = a[i](r, col);
        Series s;
        if (series_base && x.kind() == BaseElem::Kind::Series) {
          s = x.as<Series>();
          if (s.order() < n) throw Error(Errc::InsufficientOrder, "series coefficient known to order " + std::to_string(s.order()));
          s = s.truncated(n);
        } else if (const auto cv = x.constant_value(); cv && x.kind() != BaseElem::Kind::Local) {
          std::vector<Scalar> v(static_cast<std::size_t>(n) + 1, Scalar::in_field(Scalar(0), m.base.field()));
          v[0] = Scalar::in_field(*cv, m.base.field());
          s = Series(std::move(v), n);
        } else {
          s = taylor_embed(m.base, x, pt, n);
        }
        e.set_entry(r, col, s);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

FundamentalMatrix fundamental_matrix(const IdModule& m, const Scalar& c, int n) {
  const auto ahat = embed_coefficients(m, c, n, n);
  const Field f = m.base.field();
  const Scalar zero = Scalar::in_field(Scalar(0), f);
  MatSeries<Scalar> out(m.rank(), m.rank(), n);
  for (int p = 0; p <= n; ++p) {
    for (Eigen::Index i = 0; i < m.rank(); ++i) {
      for (Eigen::Index j = 0; j < m.rank(); ++j) out[p](i, j) = zero;
    }
  }
  for (int k = 0; k <= n; ++k) {
    const Scalar sign = Scalar::in_field(Scalar(k % 2 == 0 ? 1 : -1), f);
    for (int i = 0; i + k <= n; ++i) out[i + k] += ahat[static_cast<std::size_t>(k)][i] * sign;
  }
  return FundamentalMatrix{Scalar::in_field(c, f), n, std::move(out)};
}

CheckReport verify_constant_basis(const IdModule& m, const FundamentalMatrix& f, int kt) {
  CheckReport report("A(t,T) F(t+T) = F(t)");
  const int n = f.order;
  if (kt > n) throw Error(Errc::OrderMismatch, "T-order exceeds the order of F");
  const auto ahat = embed_coefficients(m, f.point, n, kt);
  const Eigen::Index r = m.rank();
  // shifted[j] = theta_t^(j)(F), of order n - j.
  std::vector<MatSeries<Scalar>> shifted;
  for (int j = 0; j <= kt; ++j) {
    MatSeries<Scalar> s(r, r, n - j);
    for (Eigen::Index p = 0; p < r; ++p) {
      for (Eigen::Index q = 0; q < r; ++q) s.set_entry(p, q, hasse(f.f.entry(p, q), j));
    }
    shifted.push_back(std::move(s));
  }
  for (int d = 0; d <= kt; ++d) {
    MatSeries<Scalar> lhs = ahat[0].truncated(n - d) * shifted[static_cast<std::size_t>(d)].truncated(n - d);
    for (int i = 1; i <= d; ++i) {
      lhs = lhs + ahat[static_cast<std::size_t>(i)].truncated(n - d) * shifted[static_cast<std::size_t>(d - i)].truncated(n - d);
    }
    for (Eigen::Index p = 0; p < r; ++p) {
      for (Eigen::Index q = 0; q < r; ++q) {
        const Series got = lhs.entry(p, q);
        const Series want = d == 0 ? f.f.entry(p, q).truncated(n - d) : Series(std::vector<Scalar>{}, n - d);
        const int diff = first_difference(got, want);
        report.expect(diff < 0, {"A(t,T)F(t+T) = F(t)", "T^" + std::to_string(d) + " entry (" + std::to_string(p) + "," + std::to_string(q) + ")",
                                 {d, p, q, diff}, diff < 0 ? "" : got[diff].to_string(), diff < 0 ? "" : want[diff].to_string()});
      }
    }
  }
  return report;
}

ScalarVector normalize_vector(ScalarVector v) {
  Eigen::Index first = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!v(i).is_zero()) {
      first = i;
      break;
    }
  }
  if (first < 0) return v;
  if (v(first).characteristic() != 0) {
    const Scalar inv = v(first).inverse();
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= inv;
    return v;
  }
  mpz_class l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const mpz_class& d = v(i).rational().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  mpz_class g = 0;
  std::vector<mpz_class> ints;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const mpq_class& q = v(i).rational();
    ints.push_back(q.get_num() * (l / q.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  if (v(first).sign() < 0) g = -g;
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Scalar(ints[static_cast<std::size_t>(i)] / g, 1);
  return v;
}

namespace {

ScalarMatrix coefficient_rows(const std::vector<Series>& u, int first, int last) {
  const Field f = [&] {
    for (const auto& s : u) {
      for (const auto& c : s.coeffs()) {
        if (c.characteristic() != 0) return c.field();
      }
    }
    return Field();
  }();
  ScalarMatrix m(last - first + 1, static_cast<Eigen::Index>(u.size()));
  for (int k = first; k <= last; ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) m(k - first, static_cast<Eigen::Index>(i)) = Scalar::in_field(u[i][k], f);
  }
  return m;
}

}  // namespace

WronskianResult hasse_wronskian(const std::vector<Series>& u, int bound) {
  WronskianResult res;
  if (u.empty()) {
    res.independent = true;
    res.det = Series(Scalar(1));
    return res;
  }
  int n = Series::kExact;
  for (const auto& s : u) n = std::min(n, s.order());
  if (n == Series::kExact) {
    n = 0;
    for (const auto& s : u) n = std::max(n, s.stored() - 1);
  }
  const int r = static_cast<int>(u.size());
  const int top = std::min(bound, n);
  ScalarMatrix chosen(0, r);
  for (int k = 0; k <= top && static_cast<int>(res.indices.size()) < r; ++k) {
    ScalarMatrix trial(chosen.rows() + 1, r);
    trial.topRows(chosen.rows()) = chosen;
    trial.bottomRows(1) = coefficient_rows(u, k, k);
    if (rank(trial) > chosen.rows()) {
      chosen = trial;
      res.indices.push_back(k);
    }
  }
  if (static_cast<int>(res.indices.size()) == r) {
    res.independent = true;
    const int order = n - res.indices.back();
    SeriesMatrix w(r, r);
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i < r; ++i) {
        const Series s = u[static_cast<std::size_t>(i)].is_exact() ? u[static_cast<std::size_t>(i)] : u[static_cast<std::size_t>(i)].truncated(n);
        w(j, i) = hasse(s, res.indices[static_cast<std::size_t>(j)]);
        if (!w(j, i).is_exact()) w(j, i) = w(j, i).truncated(order);
      }
    }
    res.det = laplace_det<Series>(w);
    return res;
  }
  ScalarMatrix ker = kernel(coefficient_rows(u, 0, n));
  res.valid_to = n;
  if (ker.cols() == 0) {
    ker = kernel(coefficient_rows(u, 0, top));
    res.valid_to = top;
  }
  res.indices.clear();
  res.combination = normalize_vector(ker.col(0));
  return res;
}

std::optional<LinearIdRelation> find_linear_id_relation(const Series& x, const IdRing& base, int order_bound,
                                                        int coeff_deg_bound) {
  const int n = x.order();
  const int need = (order_bound + 1) * (coeff_deg_bound + 1) + 4;
  if (x.is_exact() || n < need) {
    throw Error(Errc::InsufficientOrder, "relation search with bounds (" + std::to_string(order_bound) + "," +
                                             std::to_string(coeff_deg_bound) + ") needs order >= " + std::to_string(need));
  }
  const int rows = n - order_bound;
  const Field f = base.field();
  ScalarMatrix m(rows + 1, (order_bound + 1) * (coeff_deg_bound + 1));
  for (int i = 0; i <= order_bound; ++i) {
    const Series d = hasse(x, i);
    for (int k = 0; k <= coeff_deg_bound; ++k) {
      const Eigen::Index col = i * (coeff_deg_bound + 1) + k;
      for (int row = 0; row <= rows; ++row) m(row, col) = Scalar::in_field(row - k >= 0 ? d[row - k] : Scalar(0), f);
    }
  }
  const ScalarMatrix ker = kernel(m);
  if (ker.cols() == 0) return std::nullopt;
  const ScalarVector v = normalize_vector(ker.col(0));
  LinearIdRelation rel;
  rel.certified_to = rows;
  for (int i = 0; i <= order_bound; ++i) {
    std::vector<Scalar> c;
    for (int k = 0; k <= coeff_deg_bound; ++k) c.push_back(v(i * (coeff_deg_bound + 1) + k));
    rel.s.push_back(Poly(std::move(c)));
  }
  return rel;
}

}  // namespace idpv
