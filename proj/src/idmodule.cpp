#include "idpv/idmodule.hpp"

namespace idpv {

namespace {

std::string mat_entry_name(const char* what, Eigen::Index i, Eigen::Index j) {
  return std::string(what) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

BaseMatrix identity_matrix(Eigen::Index r) {
  BaseMatrix m = BaseMatrix::Constant(r, r, BaseElem(0));
  for (Eigen::Index i = 0; i < r; ++i) m(i, i) = BaseElem(1);
  return m;
}

BaseMatrix theta_entrywise(const BaseMatrix& m, int n) {
  BaseMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = theta_component(m(i, j), n);
  }
  return r;
}

BaseMatrix scaled(const BaseMatrix& m, const BaseElem& s) {
  BaseMatrix r = m;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = r(i, j) * s;
  }
  return r;
}

// Order to which both A's are known (exact data extends with zeros).
int common_order(const IdModule& x, const IdModule& y, int both_exact) {
  if (x.exact && y.exact) return both_exact;
  if (x.exact) return y.a.order();
  if (y.exact) return x.a.order();
  return std::min(x.a.order(), y.a.order());
}

void require_same_base(const IdModule& a, const IdModule& b) {
  if (a.base.describe() != b.base.describe()) {
    throw Error(Errc::BaseMismatch, a.base.describe() + " vs " + b.base.describe());
  }
}

}  // namespace

MatSeries<BaseElem> IdModule::a_to(int k) const {
  if (k <= a.order()) return a.truncated(k);
  if (!exact) {
    throw Error(Errc::InsufficientOrder, "A is known to order " + std::to_string(a.order()) + ", " +
                                             std::to_string(k) + " requested");
  }
  MatSeries<BaseElem> r(a.rows(), a.cols(), k);
  for (int n = 0; n <= a.order(); ++n) r[n] = a[n];
  return r;
}

IdModule make_module(const IdRing& base, MatSeries<BaseElem> a, bool exact) {
  if (a.rows() != a.cols() || a.rows() == 0) throw Error(Errc::SemanticError, "A must be square of positive size");
  for (int n = 0; n <= a.order(); ++n) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (!base.contains(a[n](i, j))) {
          throw Error(Errc::BaseMismatch, a[n](i, j).to_string() + " is not in " + base.describe());
        }
      }
    }
  }
  return IdModule{base, std::move(a), exact};
}

CheckReport validate_module(const IdModule& m) {
  CheckReport report("module validity");
  const BaseMatrix& a0 = m.a[0];
  for (Eigen::Index i = 0; i < a0.rows(); ++i) {
    for (Eigen::Index j = 0; j < a0.cols(); ++j) {
      const BaseElem expect(i == j ? 1 : 0);
      report.expect(a0(i, j) == expect, {"A(t,0) = 1", mat_entry_name("A(t,0)", i, j), {i, j},
                                         a0(i, j).to_string(), expect.to_string()});
    }
  }
  bool invertible = true;
  try {
    unit_pivot_inverse<BaseElem>(a0);
  } catch (const Error&) {
    invertible = false;
  }
  report.expect(invertible, {"A(t,0) invertible", "A(t,0)", {}, "singular", "unit determinant"});
  return report;
}

CheckReport check_cocycle(const IdModule& m, int kt, int ku) {
  if (m.base.kind() == IdRing::Kind::SeriesTheta) {
    throw Error(Errc::ShiftUnavailable, "t -> t+T is not exact on truncated series coefficients");
  }
  CheckReport report("cocycle A(t,T+U) = A(t,T) A(t+T,U)");
  const MatSeries<BaseElem> a = m.a_to(kt + ku);
  const Field f = m.base.field();
  // shifted[j][q] = theta^(q) applied entrywise to A_j.
  std::vector<std::vector<BaseMatrix>> shifted(static_cast<std::size_t>(ku) + 1);
  for (int j = 0; j <= ku; ++j) {
    const BaseMatrix& aj = a[j];
    std::vector<BaseMatrix> per_q(static_cast<std::size_t>(kt) + 1, BaseMatrix::Constant(aj.rows(), aj.cols(), BaseElem(0)));
    for (Eigen::Index r = 0; r < aj.rows(); ++r) {
      for (Eigen::Index c = 0; c < aj.cols(); ++c) {
        const BaseSeries th = theta(m.base, aj(r, c), kt);
        for (int q = 0; q <= kt; ++q) per_q[static_cast<std::size_t>(q)](r, c) = th[q];
      }
    }
    shifted[static_cast<std::size_t>(j)] = std::move(per_q);
  }
  for (int i = 0; i <= kt; ++i) {
    for (int j = 0; j <= ku; ++j) {
      const BaseMatrix lhs = scaled(a[i + j], BaseElem(binomial(static_cast<std::uint64_t>(i + j), static_cast<std::uint64_t>(i), f)));
      BaseMatrix rhs = BaseMatrix::Constant(lhs.rows(), lhs.cols(), BaseElem(0));
      for (int p = 0; p <= i; ++p) rhs += a[p] * shifted[static_cast<std::size_t>(j)][static_cast<std::size_t>(i - p)];
      for (Eigen::Index r = 0; r < lhs.rows(); ++r) {
        for (Eigen::Index c = 0; c < lhs.cols(); ++c) {
          report.expect(lhs(r, c) == rhs(r, c), {"A(t,T+U) = A(t,T)A(t+T,U)", "cell T^" + std::to_string(i) + " U^" + std::to_string(j),
                                                 {i, j, r, c}, lhs(r, c).to_string(), rhs(r, c).to_string()});
        }
      }
    }
  }
  return report;
}

std::vector<BaseElem> module_theta(const IdModule& m, const std::vector<BaseElem>& v, int n) {
  const MatSeries<BaseElem> a = m.a_to(n);
  std::vector<BaseSeries> th;
  for (const auto& x : v) th.push_back(theta(m.base, x, n));
  std::vector<BaseElem> out(v.size(), BaseElem(0));
  for (int p = 0; p <= n; ++p) {
    const int q = n - p;
    for (std::size_t r = 0; r < v.size(); ++r) {
      for (std::size_t c = 0; c < v.size(); ++c) {
        const BaseElem& apc = a[p](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (apc.is_zero()) continue;
        out[r] += apc * th[c][q];
      }
    }
  }
  return out;
}

CheckReport check_module_iteration(const IdModule& m, int k) {
  CheckReport report("module iteration rule");
  const Field f = m.base.field();
  const auto r = static_cast<std::size_t>(m.rank());
  for (std::size_t col = 0; col < r; ++col) {
    std::vector<BaseElem> e(r, BaseElem(0));
    e[col] = BaseElem(1);
    std::vector<std::vector<BaseElem>> single;
    for (int n = 0; n <= k; ++n) single.push_back(module_theta(m, e, n));
    for (int j = 0; j <= k; ++j) {
      for (int i = 0; i + j <= k; ++i) {
        const std::vector<BaseElem> lhs = module_theta(m, single[static_cast<std::size_t>(j)], i);
        const BaseElem c(binomial(static_cast<std::uint64_t>(i + j), static_cast<std::uint64_t>(i), f));
        for (std::size_t row = 0; row < r; ++row) {
          const BaseElem rhs = c * single[static_cast<std::size_t>(i + j)][row];
          report.expect(lhs[row] == rhs, {"theta_M^(i) theta_M^(j) = C(i+j,i) theta_M^(i+j)", "b_" + std::to_string(col),
                                          {i, j, static_cast<long long>(row)}, lhs[row].to_string(), rhs.to_string()});
        }
      }
    }
  }
  return report;
}

IdModule from_derivation_matrix(const IdRing& base, const BaseMatrix& d, int k) {
  if (base.field().is_prime_field()) {
    throw Error(Errc::CharNotZero, "the derivation recursion divides by n+1 and needs characteristic 0");
  }
  if (d.rows() != d.cols()) throw Error(Errc::SemanticError, "D must be square");
  MatSeries<BaseElem> a(d.rows(), d.cols(), k);
  a[0] = identity_matrix(d.rows());
  for (int n = 0; n < k; ++n) {
    const BaseMatrix next = theta_entrywise(a[n], 1) + d * a[n];
    a[n + 1] = scaled(next, BaseElem(Scalar(mpz_class(1), mpz_class(n + 1))));
  }
  return make_module(base, std::move(a));
}

IdModule radicand_module(const IdRing& base, const BaseElem& f, unsigned m, int k) {
  if (!f.is_unit()) throw Error(Errc::NotAUnit, "radicand " + f.to_string() + " must be a unit of " + base.describe());
  const BaseSeries th = theta(base, f, k);
  const BaseSeries ratio = th * BaseSeries(f.inverse());
  const BaseSeries root = mth_root(ratio, m, base.field(), k);
  MatSeries<BaseElem> a(1, 1, k);
  a.set_entry(0, 0, root);
  return make_module(base, std::move(a));
}

IdModule direct_sum(const IdModule& x, const IdModule& y) {
  require_same_base(x, y);
  const bool exact = x.exact && y.exact;
  const int k = common_order(x, y, std::max(x.a.order(), y.a.order()));
  const MatSeries<BaseElem> ax = x.a_to(k);
  const MatSeries<BaseElem> ay = y.a_to(k);
  const Eigen::Index r1 = x.rank();
  const Eigen::Index r2 = y.rank();
  MatSeries<BaseElem> a(r1 + r2, r1 + r2, k);
  for (int n = 0; n <= k; ++n) {
    a[n].topLeftCorner(r1, r1) = ax[n];
    a[n].bottomRightCorner(r2, r2) = ay[n];
  }
  return make_module(x.base, std::move(a), exact);
}

IdModule tensor_product(const IdModule& x, const IdModule& y) {
  require_same_base(x, y);
  const bool exact = x.exact && y.exact;
  const int k = common_order(x, y, x.a.order() + y.a.order());
  const MatSeries<BaseElem> ax = x.a_to(k);
  const MatSeries<BaseElem> ay = y.a_to(k);
  const Eigen::Index r1 = x.rank();
  const Eigen::Index r2 = y.rank();
  MatSeries<BaseElem> a(r1 * r2, r1 * r2, k);
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; i + j <= k; ++j) {
      for (Eigen::Index p = 0; p < r1; ++p) {
        for (Eigen::Index q = 0; q < r1; ++q) {
          const BaseElem& xv = ax[i](p, q);
          if (xv.is_zero()) continue;
          for (Eigen::Index u = 0; u < r2; ++u) {
            for (Eigen::Index v = 0; v < r2; ++v) a[i + j](p * r2 + u, q * r2 + v) += xv * ay[j](u, v);
          }
        }
      }
    }
  }
  return make_module(x.base, std::move(a), exact);
}

bool LocalCoverData::is_trivial() const {
  if (x.size() != 1 || !x[0].is_constant() || x[0].is_zero()) return false;
  if (!bases.empty()) {
    const BaseMatrix& b = bases[0];
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        if (!(b(i, j) == BaseElem(i == j ? 1 : 0))) return false;
      }
    }
  }
  return n.size() == 1 && n[0] == 0 && a.size() == 1 && a[0] * BaseElem(x[0]) == BaseElem(1);
}

BaseMatrix LocalCoverData::local_basis(std::size_t j, int rank) const {
  if (bases.empty()) return identity_matrix(rank);
  return bases.at(j);
}

namespace {

// Polynomial value of a base element, or nullopt if it has a denominator.
std::optional<Poly> as_poly(const BaseElem& x) {
  if (const auto c = x.constant_value()) return Poly(*c);
  if (x.kind() == BaseElem::Kind::Local && x.as<LocElem>().is_polynomial()) return x.as<LocElem>().numerator();
  return std::nullopt;
}

// True if p divides a power of x.
bool divides_power_of(Poly p, const Poly& x) {
  while (!p.is_constant()) {
    const Poly g = gcd(p, x);
    if (g.is_constant()) return false;
    p = divide_exact(p, g);
  }
  return !p.is_zero();
}

}  // namespace

CheckReport validate_cover(const LocalCoverData& c, const IdModule& m) {
  CheckReport report("local cover");
  const std::size_t l = c.x.size();
  if (!report.expect(l > 0 && c.n.size() == l && c.a.size() == l && (c.bases.empty() || c.bases.size() == l),
                     {"cover data shape", "cover", {}, std::to_string(l) + " pieces", "matching x, n, a, bases"})) {
    return report;
  }
  if (m.base.kind() != IdRing::Kind::PolyTheta) {
    report.expect(false, {"cover base", m.base.describe(), {}, "unsupported", "C[t]"});
    return report;
  }
  Poly g;
  BaseElem sum(0);
  for (std::size_t i = 0; i < l; ++i) {
    report.expect(!c.x[i].is_zero(), {"x_i != 0", "x_" + std::to_string(i), {static_cast<long long>(i)}, "0", "nonzero"});
    report.expect(c.n[i] >= 0, {"n_i >= 0", "n_" + std::to_string(i), {static_cast<long long>(i)}, std::to_string(c.n[i]), ">= 0"});
    const Poly xn = c.x[i].pow(static_cast<unsigned>(std::max(c.n[i], 0)));
    g = gcd(g, xn);
    sum += c.a[i] * BaseElem(xn);
  }
  report.expect(g == Poly(1), {"cover generates the unit ideal", "gcd(x_i^n_i)", {}, g.to_string(), "1"});
  const BaseElem residual = sum - BaseElem(1);
  report.expect(residual.is_zero(), {"sum a_i x_i^n_i = 1", "partition identity", {}, (sum).to_string(), "1"});

  const int r = m.rank();
  std::vector<BaseMatrix> b(l);
  std::vector<Poly> det(l);
  for (std::size_t j = 0; j < l; ++j) {
    b[j] = c.local_basis(j, r);
    if (!report.expect(b[j].rows() == r && b[j].cols() == r,
                       {"local basis shape", "B_" + std::to_string(j), {static_cast<long long>(j)}, std::to_string(b[j].rows()), std::to_string(r)})) {
      return report;
    }
    const auto d = as_poly(laplace_det<BaseElem>(b[j]));
    const bool ok = d && divides_power_of(*d, c.x[j]);
    report.expect(ok, {"det B_j is a unit after inverting x_j", "B_" + std::to_string(j), {static_cast<long long>(j)},
                       d ? d->to_string() : "non-polynomial", "divisor of a power of " + c.x[j].to_string()});
    det[j] = d ? *d : Poly(1);
  }
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      const BaseMatrix prod = adjugate<BaseElem>(b[j]) * b[i];
      const Poly xn = c.x[j].pow(static_cast<unsigned>(std::max(c.n[j], 0)));
      BaseMatrix tij(r, r);
      bool clean = true;
      for (Eigen::Index p = 0; p < r; ++p) {
        for (Eigen::Index q = 0; q < r; ++q) {
          const auto e = as_poly(prod(p, q));
          if (!e || det[j].is_zero() || !divides(det[j], xn * *e)) {
            clean = false;
            tij(p, q) = BaseElem(0);
          } else {
            tij(p, q) = BaseElem(divide_exact(xn * *e, det[j]));
          }
        }
      }
      const std::string name = "T_" + std::to_string(i) + std::to_string(j);
      report.expect(clean, {"x_j^n_j B_j^-1 B_i has entries in S", name, {static_cast<long long>(i), static_cast<long long>(j)},
                            "denominator", "polynomial entries"});
      if (!c.transitions.empty() && c.transitions.size() == l * l) {
        const BaseMatrix& given = c.transitions[i * l + j];
        bool same = given.rows() == r && given.cols() == r;
        for (Eigen::Index p = 0; same && p < r; ++p) {
          for (Eigen::Index q = 0; q < r; ++q) same = same && given(p, q) == tij(p, q);
        }
        report.expect(same, {"supplied transition matches", name, {static_cast<long long>(i), static_cast<long long>(j)},
                             "supplied", "x_j^n_j B_j^-1 B_i"});
      }
    }
  }
  return report;
}

}  // namespace idpv
