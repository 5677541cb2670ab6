#include "doctest.h"

#include <random>

#include "idpv/series.hpp"

using namespace idpv;

namespace {

Scalar q(long n, long d = 1) { return Scalar(mpz_class(n), mpz_class(d)); }

Series ser(std::vector<Scalar> c, int order) { return Series(std::move(c), order); }

Series random_series(std::mt19937& rng, int order, const Field& f, bool unit) {
  std::uniform_int_distribution<int> d(-5, 5);
  std::vector<Scalar> c;
  for (int i = 0; i <= order; ++i) c.push_back(Scalar::in_field(Scalar(d(rng)), f));
  if (unit) c[0] = Scalar::in_field(Scalar(1), f);
  return Series(std::move(c), order);
}

Poly random_poly(std::mt19937& rng, int deg) {
  std::uniform_int_distribution<int> d(-9, 9);
  std::vector<Scalar> c;
  for (int i = 0; i <= deg; ++i) c.push_back(Scalar(d(rng)));
  return Poly(std::move(c));
}

}  // namespace

TEST_CASE("poly basics") {
  const Poly t = Poly::variable();
  const Poly f = t * t - Poly(1);
  CHECK(f.degree() == 2);
  CHECK(Poly().degree() == Poly::kZeroDegree);
  CHECK(f.eval(Scalar(3)) == Scalar(8));
  CHECK(f.shift(Scalar(1)) == t * t + Poly(2) * t);
  CHECK(divide_exact(f, t - Poly(1)) == t + Poly(1));
  CHECK(gcd(f, t * t - Poly(2) * t + Poly(1)) == t - Poly(1));
  CHECK(f.to_string() == "t^2 - 1");
  CHECK((Poly(q(1, 2)) * t).to_string() == "(1/2)*t");
}

TEST_CASE("series inverse") {
  CHECK(series_inverse(ser({1}, 0)) == ser({1}, 0));
  CHECK(series_inverse(ser({1, -1}, 4)) == ser({1, 1, 1, 1, 1}, 4));
  const Series s = ser({1, 2}, 2);
  const Series inv = series_inverse(s);
  CHECK(inv == ser({1, -2, 4}, 2));
  CHECK(s * inv == ser({1}, 2));
  CHECK_THROWS_AS(series_inverse(ser({0, 1}, 3)), Error);
  std::mt19937 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Series r = random_series(rng, 10, Field(), true);
    CHECK(series_inverse(series_inverse(r)) == r);
    CHECK(r * series_inverse(r) == Series(Scalar(1)).truncated(10));
  }
}

TEST_CASE("ring axioms at fixed truncation") {
  std::mt19937 rng(11);
  for (std::uint64_t p : {0, 5}) {
    for (int k = 0; k < 20; ++k) {
      const Series a = random_series(rng, 9, Field(p), false);
      const Series b = random_series(rng, 9, Field(p), false);
      const Series c = random_series(rng, 9, Field(p), false);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
    }
  }
}

TEST_CASE("mixed orders truncate to the minimum") {
  const Series a = ser({1, 1, 1, 1}, 3);
  const Series b = ser({1, 1}, 1);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
  CHECK((a * Series(Scalar(2))).order() == 3);
  CHECK_THROWS_AS(b[2], Error);
}

TEST_CASE("mth root") {
  const Series one_plus_x = ser({1, 1, 0}, 2);
  CHECK(mth_root(one_plus_x, 2, Field()) == ser({1, q(1, 2), q(-1, 8)}, 2));
  CHECK(mth_root(ser({1, 0, 0}, 2), 7, Field()) == ser({1, 0, 0}, 2));
  const Field f5(5);
  const Series s5 = ser({Scalar::from_integer(1, f5), Scalar::from_integer(1, f5)}, 1);
  const Series r5 = mth_root(s5, 3, f5);
  CHECK(r5[1] == Scalar::from_integer(2, f5));
  CHECK(r5 * r5 * r5 == s5);
  CHECK_THROWS_AS(mth_root(s5, 5, f5), Error);
  std::mt19937 rng(3);
  for (int k = 0; k < 10; ++k) {
    for (unsigned m : {2U, 3U, 6U}) {
      const Series s = random_series(rng, 8, Field(7), true);
      const Series r = mth_root(s, m, Field(7));
      Series pw(Scalar(1));
      for (unsigned i = 0; i < m; ++i) pw = pw * r;
      CHECK(pw == s);
    }
  }
}

TEST_CASE("substitutions") {
  const Poly t = Poly::variable();
  // t^2 under t -> t + T.
  const TruncSeries<Poly> sh = substitute_shift(t * t, 3);
  CHECK(sh[0] == t * t);
  CHECK(sh[1] == Poly(2) * t);
  CHECK(sh[2] == Poly(1));
  CHECK(sh[3].is_zero());
  // 1 + tT under T -> -t, grid indexed (t-power, T-power).
  BiSeries<Scalar> g(3, 3);
  g.at(0, 0) = Scalar(1);
  g.at(1, 1) = Scalar(1);
  CHECK(substitute_neg(g, 3) == ser({1, 0, -1, 0}, 3));
  // T^2 under T -> T + U.
  const Series t2 = Series::exact({Scalar(0), Scalar(0), Scalar(1)});
  const BiSeries<Scalar> b = substitute_sum(t2, 2, 2, Field());
  CHECK(b.at(2, 0) == Scalar(1));
  CHECK(b.at(1, 1) == Scalar(2));
  CHECK(b.at(0, 2) == Scalar(1));
  CHECK(b.at(1, 0).is_zero());
  CHECK_THROWS_AS(substitute_sum(ser({1, 1, 1}, 2), 2, 1, Field()), Error);
  // Shifting series coefficients is refused.
  CHECK_THROWS_AS(substitute_shift(TruncSeries<Series>(Series(Scalar(1))), 1, 1), Error);
  std::mt19937 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Poly p = random_poly(rng, 6);
    const TruncSeries<Poly> s = TruncSeries<Poly>::exact({p, p * p});
    CHECK(substitute_point(substitute_point(s, Scalar(3)), Scalar(-3)) == s);
  }
}

TEST_CASE("hasse derivative on series matches the binomial formula") {
  const Field f5(5);
  std::vector<Scalar> c(8, Scalar::from_integer(0, f5));
  c[5] = Scalar::from_integer(1, f5);
  const Series t5(c, 7);
  for (int n = 1; n < 5; ++n) CHECK(hasse(t5, n).is_zero());
  CHECK(hasse(t5, 5)[0].is_one());
}
