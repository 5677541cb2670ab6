#include "idpv/matseries.hpp"

namespace idpv {

MatSeries<Scalar> to_mat_series(const SeriesMatrix& m, int order) {
  MatSeries<Scalar> r(m.rows(), m.cols(), order);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Series& s = m(i, j);
      for (int n = 0; n <= order; ++n) r[n](i, j) = s[n];
    }
  }
  return r;
}

SeriesMatrix to_series_matrix(const MatSeries<Scalar>& m) {
  SeriesMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m.entry(i, j);
  }
  return r;
}

SeriesMatrix mat_inverse(const SeriesMatrix& m, int order) {
  return to_series_matrix(mat_inverse(to_mat_series(m, order)));
}

}  // namespace idpv
