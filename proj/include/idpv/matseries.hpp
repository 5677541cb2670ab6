#pragma once

#include <string>
#include <vector>

#include "idpv/base_elem.hpp"
#include "idpv/linalg.hpp"

namespace idpv {

inline bool is_unit_value(const Scalar& c) { return !c.is_zero(); }
inline bool is_unit_value(const BaseElem& c) { return c.is_unit(); }

/// Gauss-Jordan inverse over a commutative ring, pivoting on units only.
/// Throws NotAUnit when no unit pivot is available.
template <class C>
Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> unit_pivot_inverse(Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> a) {
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(Errc::NotAUnit, "non-square matrix");
  Mat inv = Mat::Constant(n, n, C(0));
  for (Eigen::Index i = 0; i < n; ++i) inv(i, i) = C(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && !is_unit_value(a(p, c))) ++p;
    if (p == n) throw Error(Errc::NotAUnit, "no unit pivot in column " + std::to_string(c));
    if (p != c) {
      a.row(c).swap(a.row(p));
      inv.row(c).swap(inv.row(p));
    }
    const C pinv = unit_inverse(a(c, c));
    for (Eigen::Index j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * pinv;
      inv(c, j) = inv(c, j) * pinv;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const C f = a(i, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Determinant by cofactor-free elimination over a ring is not available in
/// general; Laplace expansion is used (ranks are small).
template <class C>
C laplace_det(const Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return C(1);
  if (n == 1) return m(0, 0);
  C acc(0);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c != j) minor(r - 1, cc++) = m(r, c);
      }
    }
    const C term = m(0, j) * laplace_det(minor);
    if (j % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

template <class C>
Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> adjugate(const Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Eigen::Index n = m.rows();
  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> adj(n, n);
  if (n == 1) {
    adj(0, 0) = C(1);
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
      Eigen::Index rr = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        if (r == j) continue;
        Eigen::Index cc = 0;
        for (Eigen::Index c = 0; c < n; ++c) {
          if (c != i) minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const C d = laplace_det(minor);
      adj(i, j) = (i + j) % 2 == 0 ? d : C(0) - d;
    }
  }
  return adj;
}

/// Power series whose coefficients are r x c matrices, truncated at an
/// explicit order.
template <class C>
class MatSeries {
 public:
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

  MatSeries() = default;
  MatSeries(Eigen::Index rows, Eigen::Index cols, int order)
      : rows_(rows), cols_(cols), c_(static_cast<std::size_t>(order) + 1, Mat::Constant(rows, cols, C(0))) {}

  static MatSeries identity(Eigen::Index r, int order) {
    MatSeries s(r, r, order);
    for (Eigen::Index i = 0; i < r; ++i) s.c_[0](i, i) = C(1);
    return s;
  }

  int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  Mat& operator[](int n) { return c_.at(static_cast<std::size_t>(n)); }
  const Mat& operator[](int n) const {
    if (n > order()) {
      throw Error(Errc::OrderMismatch, "matrix coefficient " + std::to_string(n) + " beyond order " +
                                           std::to_string(order()));
    }
    return c_.at(static_cast<std::size_t>(n));
  }

  TruncSeries<C> entry(Eigen::Index i, Eigen::Index j) const {
    std::vector<C> v;
    for (const auto& m : c_) v.push_back(m(i, j));
    return TruncSeries<C>(std::move(v), order());
  }
  void set_entry(Eigen::Index i, Eigen::Index j, const TruncSeries<C>& s) {
    for (int n = 0; n <= order(); ++n) c_[static_cast<std::size_t>(n)](i, j) = n <= s.order() ? s[n] : C(0);
  }

  MatSeries truncated(int order) const {
    if (order > this->order()) throw Error(Errc::OrderMismatch, "cannot raise matrix series order");
    MatSeries r = *this;
    r.c_.resize(static_cast<std::size_t>(order) + 1);
    return r;
  }

  friend MatSeries operator*(const MatSeries& a, const MatSeries& b) {
    const int n = std::min(a.order(), b.order());
    MatSeries r(a.rows_, b.cols_, n);
    for (int i = 0; i <= n; ++i) {
      if (is_zero_matrix(a.c_[static_cast<std::size_t>(i)])) continue;
      for (int j = 0; i + j <= n; ++j) {
        r.c_[static_cast<std::size_t>(i + j)] += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
      }
    }
    return r;
  }
  friend MatSeries operator+(const MatSeries& a, const MatSeries& b) {
    const int n = std::min(a.order(), b.order());
    MatSeries r(a.rows_, a.cols_, n);
    for (int i = 0; i <= n; ++i) r.c_[static_cast<std::size_t>(i)] = a.c_[static_cast<std::size_t>(i)] + b.c_[static_cast<std::size_t>(i)];
    return r;
  }
  friend MatSeries operator-(const MatSeries& a, const MatSeries& b) {
    const int n = std::min(a.order(), b.order());
    MatSeries r(a.rows_, a.cols_, n);
    for (int i = 0; i <= n; ++i) r.c_[static_cast<std::size_t>(i)] = a.c_[static_cast<std::size_t>(i)] - b.c_[static_cast<std::size_t>(i)];
    return r;
  }

  template <class F>
  auto map(F&& f) const {
    using D = decltype(f(std::declval<const C&>()));
    MatSeries<D> r(rows_, cols_, order());
    for (int n = 0; n <= order(); ++n) {
      for (Eigen::Index i = 0; i < rows_; ++i) {
        for (Eigen::Index j = 0; j < cols_; ++j) r[n](i, j) = f(c_[static_cast<std::size_t>(n)](i, j));
      }
    }
    return r;
  }

  static bool is_zero_matrix(const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!m(i, j).is_zero()) return false;
      }
    }
    return true;
  }

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Mat> c_;
};

/// Inverse of a square matrix series. The constant matrix must be invertible;
/// otherwise SingularAtOrigin.
template <class C>
MatSeries<C> mat_inverse(const MatSeries<C>& m) {
  using Mat = typename MatSeries<C>::Mat;
  Mat inv0;
  try {
    inv0 = unit_pivot_inverse<C>(m[0]);
  } catch (const Error&) {
    throw Error(Errc::SingularAtOrigin, "constant-term matrix is singular");
  }
  MatSeries<C> r(m.rows(), m.cols(), m.order());
  r[0] = inv0;
  for (int n = 1; n <= m.order(); ++n) {
    Mat acc = Mat::Constant(m.rows(), m.cols(), C(0));
    for (int k = 1; k <= n; ++k) {
      if (MatSeries<C>::is_zero_matrix(m[k])) continue;
      acc += m[k] * r[n - k];
    }
    r[n] = Mat::Constant(m.rows(), m.cols(), C(0)) - inv0 * acc;
  }
  return r;
}

using SeriesMatrix = Eigen::Matrix<Series, Eigen::Dynamic, Eigen::Dynamic>;

/// Matrix of t-series (entries at least of the given order) to a matrix series.
MatSeries<Scalar> to_mat_series(const SeriesMatrix& m, int order);
SeriesMatrix to_series_matrix(const MatSeries<Scalar>& m);
/// Inverse of a matrix of series to the given order (SingularAtOrigin).
SeriesMatrix mat_inverse(const SeriesMatrix& m, int order);

}  // namespace idpv
