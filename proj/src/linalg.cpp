#include "idpv/linalg.hpp"

#include <utility>

namespace idpv {

Field field_of(const ScalarMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).characteristic() != 0) return m(i, j).field();
    }
  }
  return Field();
}

namespace {

using IntRow = std::vector<mpz_class>;

IntRow integer_row(const ScalarMatrix& m, Eigen::Index i) {
  mpz_class l = 1;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const mpz_class& d = m(i, j).rational().get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  IntRow row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const mpq_class& q = m(i, j).rational();
    row[static_cast<std::size_t>(j)] = q.get_num() * (l / q.get_den());
  }
  return row;
}

void make_primitive(IntRow& row) {
  mpz_class g = 0;
  for (const auto& v : row) {
    if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (g > 1) {
    for (auto& v : row) {
      if (v != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
  }
}

Echelon echelon_rational(const ScalarMatrix& m) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  std::vector<IntRow> a;
  a.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) a.push_back(integer_row(m, static_cast<Eigen::Index>(i)));
  std::vector<int> pivots;
  std::size_t cur = 0;
  for (std::size_t c = 0; c < cols && cur < rows; ++c) {
    std::size_t p = cur;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[cur], a[p]);
    make_primitive(a[cur]);
    const mpz_class piv = a[cur][c];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == cur || a[i][c] == 0) continue;
      const mpz_class f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] = piv * a[i][j] - f * a[cur][j];
      }
      make_primitive(a[i]);
    }
    pivots.push_back(static_cast<int>(c));
    ++cur;
  }
  Echelon e;
  e.pivots = pivots;
  e.rref = ScalarMatrix::Constant(static_cast<Eigen::Index>(pivots.size()), m.cols(), Scalar(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const mpz_class& piv = a[i][static_cast<std::size_t>(pivots[i])];
    for (std::size_t j = 0; j < cols; ++j) {
      if (a[i][j] != 0) {
        e.rref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Scalar(a[i][j], piv);
      }
    }
  }
  return e;
}

Echelon echelon_modular(const ScalarMatrix& m, const Field& f) {
  ScalarMatrix a = m;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Scalar::in_field(a(i, j), f);
  }
  std::vector<int> pivots;
  Eigen::Index cur = 0;
  for (Eigen::Index c = 0; c < a.cols() && cur < a.rows(); ++c) {
    Eigen::Index p = cur;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != cur) a.row(cur).swap(a.row(p));
    const Scalar inv = a(cur, c).inverse();
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(cur, j) *= inv;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == cur || a(i, c).is_zero()) continue;
      const Scalar fct = a(i, c);
      for (Eigen::Index j = c; j < a.cols(); ++j) a(i, j) -= fct * a(cur, j);
    }
    pivots.push_back(static_cast<int>(c));
    ++cur;
  }
  Echelon e;
  e.pivots = pivots;
  e.rref = a.topRows(cur);
  return e;
}

}  // namespace

Echelon row_echelon(const ScalarMatrix& m) {
  const Field f = field_of(m);
  if (f.is_prime_field()) return echelon_modular(m, f);
  return echelon_rational(m);
}

int rank(const ScalarMatrix& m) { return row_echelon(m).rank(); }

ScalarMatrix kernel(const ScalarMatrix& m) {
  const Echelon e = row_echelon(m);
  const Field f = field_of(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  const Eigen::Index dim = m.cols() - e.rank();
  ScalarMatrix k = ScalarMatrix::Constant(m.cols(), dim, Scalar::in_field(Scalar(0), f));
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (is_pivot[static_cast<std::size_t>(j)]) continue;
    k(j, col) = Scalar::in_field(Scalar(1), f);
    for (int i = 0; i < e.rank(); ++i) k(e.pivots[static_cast<std::size_t>(i)], col) = -e.rref(i, j);
    ++col;
  }
  return k;
}

Scalar determinant(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::SemanticError, "determinant of a non-square matrix");
  const Field f = field_of(m);
  ScalarMatrix a = m;
  Scalar det = Scalar::in_field(Scalar(1), f);
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return Scalar::in_field(Scalar(0), f);
    if (p != c) {
      a.row(c).swap(a.row(p));
      det = -det;
    }
    det *= a(c, c);
    const Scalar inv = a(c, c).inverse();
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      const Scalar fct = a(i, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) a(i, j) -= fct * a(c, j);
    }
  }
  return det;
}

ScalarMatrix inverse(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::NotAUnit, "inverse of a non-square matrix");
  const Field f = field_of(m);
  const Eigen::Index n = m.rows();
  ScalarMatrix aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = ScalarMatrix::Constant(n, n, Scalar::in_field(Scalar(0), f));
  for (Eigen::Index i = 0; i < n; ++i) aug(i, n + i) = Scalar::in_field(Scalar(1), f);
  const Echelon e = row_echelon(aug);
  if (e.rank() < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1) {
    throw Error(Errc::NotAUnit, "singular matrix");
  }
  return e.rref.rightCols(n);
}

ScalarVector reduce(const Echelon& e, ScalarVector v) {
  for (int i = 0; i < e.rank(); ++i) {
    const Scalar c = v(e.pivots[static_cast<std::size_t>(i)]);
    if (c.is_zero()) continue;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (!e.rref(i, j).is_zero()) v(j) -= c * e.rref(i, j);
    }
  }
  return v;
}

bool in_row_span(const Echelon& e, const ScalarVector& v) {
  const ScalarVector r = reduce(e, v);
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    if (!r(j).is_zero()) return false;
  }
  return true;
}

}  // namespace idpv
