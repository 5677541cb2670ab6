#include "doctest.h"

#include <random>

#include "idpv/linalg.hpp"

using namespace idpv;

TEST_CASE("exact linear algebra") {
  ScalarMatrix m(2, 3);
  m << Scalar(1), Scalar(2), Scalar(3), Scalar(2), Scalar(4), Scalar(7);
  const Echelon e = row_echelon(m);
  CHECK(e.rank() == 2);
  CHECK(e.pivots == std::vector<int>{0, 2});
  const ScalarMatrix k = kernel(m);
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == Scalar(-2));
  CHECK(k(1, 0) == Scalar(1));
  CHECK(k(2, 0).is_zero());
  ScalarMatrix sq(2, 2);
  sq << Scalar(2), Scalar(1), Scalar(1), Scalar(1);
  CHECK(determinant(sq) == Scalar(1));
  const ScalarMatrix inv = inverse(sq);
  const ScalarMatrix prod = sq * inv;
  CHECK(prod(0, 0) == Scalar(1));
  CHECK(prod(0, 1).is_zero());
  CHECK(prod(1, 0).is_zero());
  CHECK(prod(1, 1) == Scalar(1));
  ScalarMatrix sing(2, 2);
  sing << Scalar(1), Scalar(2), Scalar(2), Scalar(4);
  CHECK_THROWS_AS(inverse(sing), Error);
  ScalarMatrix mp(1, 2);
  mp << Scalar::from_integer(3, Field(5)), Scalar::from_integer(1, Field(5));
  const Echelon ep = row_echelon(mp);
  CHECK(ep.rref(0, 1) == Scalar::from_integer(2, Field(5)));
}

TEST_CASE("kernel vectors annihilate random matrices") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-4, 4);
  for (const Field f : {Field(), Field(7)}) {
    for (int rep = 0; rep < 30; ++rep) {
      ScalarMatrix m(4, 6);
      for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) m(i, j) = Scalar::in_field(Scalar(d(rng)), f);
      }
      if (rep % 3 == 0) m.row(3) = m.row(0) + m.row(1);
      const ScalarMatrix k = kernel(m);
      CHECK(k.cols() == 6 - rank(m));
      const ScalarMatrix z = m * k;
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) CHECK(z(i, j).is_zero());
      }
      const Echelon e = row_echelon(m);
      for (Eigen::Index i = 0; i < 4; ++i) CHECK(in_row_span(e, m.row(i).transpose()));
    }
  }
}

TEST_CASE("reduce gives a canonical residue") {
  ScalarMatrix m(1, 3);
  m << Scalar(1), Scalar(1), Scalar(0);
  const Echelon e = row_echelon(m);
  ScalarVector a(3);
  a << Scalar(2), Scalar(0), Scalar(5);
  ScalarVector b(3);
  b << Scalar(0), Scalar(-2), Scalar(5);
  const ScalarVector ra = reduce(e, a);
  const ScalarVector rb = reduce(e, b);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(ra(i) == rb(i));
  CHECK(ra(0).is_zero());
  CHECK_FALSE(in_row_span(e, a));
}
