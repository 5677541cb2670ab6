#include "doctest.h"

#include "idpv/idmodule.hpp"

using namespace idpv;

namespace {

MatSeries<BaseElem> rank_one(const std::vector<BaseElem>& coeffs) {
  MatSeries<BaseElem> a(1, 1, static_cast<int>(coeffs.size()) - 1);
  for (std::size_t n = 0; n < coeffs.size(); ++n) a[static_cast<int>(n)](0, 0) = coeffs[n];
  return a;
}

// exp(cT) to order k, coefficients c^n / n! computed by repeated division.
IdModule exp_module(const IdRing& base, const Scalar& c, int k) {
  std::vector<BaseElem> v{BaseElem(1)};
  Scalar cur(1);
  for (int n = 1; n <= k; ++n) {
    cur = cur * c / Scalar(n);
    v.emplace_back(cur);
  }
  return make_module(base, rank_one(v));
}

Scalar q(long long a, long long b) { return Scalar(mpz_class(std::to_string(a)), mpz_class(std::to_string(b))); }

}  // namespace

TEST_CASE("module validity") {
  const IdRing r = IdRing::polynomial(Field());
  CHECK(validate_module(exp_module(r, Scalar(1), 4)).passed());
  MatSeries<BaseElem> a(2, 2, 1);
  a[0](0, 0) = BaseElem(1);
  a[0](1, 1) = BaseElem(2);
  const CheckReport bad = validate_module(make_module(r, a));
  CHECK_FALSE(bad.passed());
  REQUIRE_FALSE(bad.violations().empty());
  CHECK(bad.violations()[0].indices == std::vector<long long>{1, 1});
  MatSeries<BaseElem> wide(2, 3, 0);
  CHECK_THROWS_AS(make_module(r, wide), Error);
}

TEST_CASE("cocycle law") {
  const IdRing r = IdRing::polynomial(Field());
  CHECK(check_cocycle(exp_module(r, Scalar(1), 8), 4, 4).passed());
  CHECK(check_module_iteration(exp_module(r, Scalar(1), 8), 8).passed());

  // 1 + tT is not a cocycle: the T U coefficient is 0 on the left and
  // theta(t) + t^2 on the right.
  const Poly t = Poly::variable();
  const IdModule bad = make_module(r, rank_one({BaseElem(1), BaseElem(t)}), true);
  const CheckReport rep = check_cocycle(bad, 3, 3);
  CHECK_FALSE(rep.passed());
  REQUIRE_FALSE(rep.violations().empty());
  CHECK(rep.violations()[0].indices[0] == 1);
  CHECK(rep.violations()[0].indices[1] == 1);
  CHECK_FALSE(check_module_iteration(bad, 3).passed());

  const IdRing s = IdRing::series(Field(), 6);
  CHECK_THROWS_AS(check_cocycle(exp_module(s, Scalar(1), 4), 2, 2), Error);
}

TEST_CASE("modules from a derivation matrix") {
  const IdRing r = IdRing::polynomial(Field());
  BaseMatrix d(1, 1);
  d(0, 0) = BaseElem(1);
  const IdModule e = from_derivation_matrix(r, d, 3);
  CHECK(e.a[1](0, 0) == BaseElem(1));
  CHECK(e.a[2](0, 0) == BaseElem(q(1, 2)));
  CHECK(e.a[3](0, 0) == BaseElem(q(1, 6)));
  CHECK_THROWS_AS(from_derivation_matrix(IdRing::polynomial(Field(5)), d, 3), Error);

  // Airy: y'' = t y.
  BaseMatrix airy(2, 2);
  airy << BaseElem(0), BaseElem(1), BaseElem(Poly::variable()), BaseElem(0);
  const IdModule m = from_derivation_matrix(r, airy, 8);
  CHECK(validate_module(m).passed());
  CHECK(check_cocycle(m, 4, 4).passed());
  CHECK(check_module_iteration(m, 8).passed());
}

TEST_CASE("direct sum and tensor product") {
  const IdRing r = IdRing::polynomial(Field());
  const IdModule x = exp_module(r, Scalar(2), 6);
  const IdModule y = exp_module(r, Scalar(3), 6);
  const IdModule z = tensor_product(x, y);
  const IdModule expected = exp_module(r, Scalar(5), 6);
  CHECK(z.rank() == 1);
  for (int n = 0; n <= 6; ++n) CHECK(z.a[n](0, 0) == expected.a[n](0, 0));
  const IdModule s = direct_sum(x, y);
  CHECK(s.rank() == 2);
  CHECK(check_cocycle(s, 3, 3).passed());
  BaseMatrix airy(2, 2);
  airy << BaseElem(0), BaseElem(1), BaseElem(Poly::variable()), BaseElem(0);
  const IdModule big = tensor_product(from_derivation_matrix(r, airy, 6), s);
  CHECK(big.rank() == 4);
  CHECK(check_cocycle(big, 3, 3).passed());
  CHECK_THROWS_AS(direct_sum(x, exp_module(IdRing::polynomial(Field(7)), Scalar(1), 4)), Error);
}

TEST_CASE("radicand modules") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::localized(Field(), {t});
  const IdModule m = radicand_module(r, r.from_poly(t), 3, 6);
  CHECK(validate_module(m).passed());
  CHECK(check_cocycle(m, 3, 3).passed());
  // A^3 = theta(t) / t = 1 + T / t.
  const BaseSeries a = m.a.entry(0, 0);
  const BaseSeries cube = a * a * a;
  CHECK(cube[0] == BaseElem(1));
  CHECK(cube[1] == r.inverse_of(0));
  for (int n = 2; n <= 6; ++n) CHECK(cube[n].is_zero());
  CHECK_THROWS_AS(radicand_module(IdRing::polynomial(Field()), BaseElem(t), 3, 4), Error);

  const Field f5(5);
  const IdRing r5 = IdRing::localized(f5, {t});
  const IdModule m5 = radicand_module(r5, r5.from_poly(t), 2, 8);
  CHECK(check_cocycle(m5, 4, 4).passed());
  const BaseSeries a5 = m5.a.entry(0, 0);
  const BaseSeries sq = a5 * a5;
  CHECK(sq[1] == r5.inverse_of(0));
  for (int n = 2; n <= 8; ++n) CHECK(sq[n].is_zero());
}

TEST_CASE("local covers") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::polynomial(Field());
  const IdModule m = exp_module(r, Scalar(1), 4);
  LocalCoverData good;
  good.x = {t, t - Poly(1)};
  good.n = {1, 1};
  good.a = {BaseElem(1), BaseElem(-1)};
  CHECK(validate_cover(good, m).passed());
  CHECK_FALSE(good.is_trivial());

  LocalCoverData bad = good;
  bad.x = {t, t * t};
  const CheckReport rep = validate_cover(bad, m);
  CHECK_FALSE(rep.passed());

  LocalCoverData triv;
  triv.x = {Poly(1)};
  triv.n = {0};
  triv.a = {BaseElem(1)};
  CHECK(triv.is_trivial());
  CHECK(validate_cover(triv, m).passed());

  // Local basis t * b on the piece x = t: det divides t, transition from the
  // other piece is x_j adj(B_j) B_i / det B_j = t * (1/t) = 1.
  LocalCoverData scaled = good;
  BaseMatrix b0(1, 1);
  b0(0, 0) = BaseElem(t);
  BaseMatrix b1(1, 1);
  b1(0, 0) = BaseElem(1);
  scaled.bases = {b0, b1};
  CHECK(validate_cover(scaled, m).passed());
  BaseMatrix b2(1, 1);
  b2(0, 0) = BaseElem(t + Poly(2));
  scaled.bases = {b2, b1};
  CHECK_FALSE(validate_cover(scaled, m).passed());
}
