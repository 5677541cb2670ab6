#include "doctest.h"

#include "idpv/solver.hpp"

using namespace idpv;

namespace {

Scalar q(long long a, long long b) { return Scalar(mpz_class(std::to_string(a)), mpz_class(std::to_string(b))); }

IdModule exp_module(const IdRing& base, int k) {
  std::vector<BaseElem> v{BaseElem(1)};
  Scalar cur(1);
  MatSeries<BaseElem> a(1, 1, k);
  a[0](0, 0) = BaseElem(1);
  for (int n = 1; n <= k; ++n) {
    cur = cur / Scalar(n);
    a[n](0, 0) = BaseElem(cur);
  }
  return make_module(base, a);
}

Series exp_series(const Scalar& c, int n) {
  std::vector<Scalar> v;
  Scalar cur(1);
  for (int i = 0; i <= n; ++i) {
    v.push_back(cur);
    cur = cur * c / Scalar(i + 1);
  }
  return Series(v, n);
}

}  // namespace

TEST_CASE("fundamental matrix of exp is exp(-t)") {
  const IdRing r = IdRing::polynomial(Field());
  const IdModule m = exp_module(r, 12);
  const FundamentalMatrix f = fundamental_matrix(m, Scalar(0), 12);
  CHECK(f.f.entry(0, 0) == exp_series(Scalar(-1), 12));
  CHECK(verify_constant_basis(m, f, 4).passed());

  FundamentalMatrix broken = f;
  broken.f[5](0, 0) += Scalar(1);
  const CheckReport rep = verify_constant_basis(m, broken, 4);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("fundamental matrix of a radicand away from the origin") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::localized(Field(), {t});
  BaseMatrix d(1, 1);
  const IdModule m = radicand_module(r, r.from_poly(t), 3, 12);
  CHECK_THROWS_AS(fundamental_matrix(m, Scalar(0), 8), Error);
  const FundamentalMatrix f = fundamental_matrix(m, Scalar(1), 12);
  // Constant vectors e = b F with F = (1 + t)^(-1/3) at c = 1.
  for (int n = 0; n <= 12; ++n) CHECK(f.f[n](0, 0) == generalized_binomial(q(-1, 3), static_cast<std::uint64_t>(n), Field()));
  CHECK(verify_constant_basis(m, f, 5).passed());
}

TEST_CASE("fundamental matrix in characteristic 5") {
  const Poly t = Poly::variable();
  const Field f5(5);
  const IdRing r = IdRing::localized(f5, {t});
  const IdModule m = radicand_module(r, r.from_poly(t), 2, 12);
  const FundamentalMatrix f = fundamental_matrix(m, Scalar(1), 12);
  // F^2 = 1 / (1 + t) in F_5[[t]].
  const Series sq = f.f.entry(0, 0) * f.f.entry(0, 0);
  for (int n = 0; n <= 12; ++n) CHECK(sq[n] == Scalar::in_field(Scalar(n % 2 == 0 ? 1 : -1), f5));
  CHECK(verify_constant_basis(m, f, 6).passed());
}

TEST_CASE("Airy fundamental matrix") {
  const IdRing r = IdRing::polynomial(Field());
  BaseMatrix d(2, 2);
  d << BaseElem(0), BaseElem(1), BaseElem(Poly::variable()), BaseElem(0);
  const IdModule m = from_derivation_matrix(r, d, 14);
  const FundamentalMatrix f = fundamental_matrix(m, Scalar(0), 14);
  CHECK(verify_constant_basis(m, f, 6).passed());
  CHECK(f.f[0](0, 0) == Scalar(1));
  CHECK(f.f[0](0, 1).is_zero());
}

TEST_CASE("Hasse-Wronskian") {
  const Series one = Series(std::vector<Scalar>{Scalar(1)}, 10);
  const Series t = Series(std::vector<Scalar>{Scalar(0), Scalar(1)}, 10);
  const WronskianResult w = hasse_wronskian({one, t}, 5);
  CHECK(w.independent);
  CHECK(w.indices == std::vector<int>{0, 1});
  CHECK(w.det[0] == Scalar(1));

  // In char 5, 1 and t^5 need theta^(5).
  const Field f5(5);
  std::vector<Scalar> c(11, Scalar::in_field(Scalar(0), f5));
  c[5] = Scalar::in_field(Scalar(1), f5);
  const Series t5(c, 10);
  const Series one5(std::vector<Scalar>{Scalar::in_field(Scalar(1), f5)}, 10);
  const WronskianResult w5 = hasse_wronskian({one5, t5}, 8);
  CHECK(w5.independent);
  CHECK(w5.indices == std::vector<int>{0, 5});

  const Series two_t = t + t;
  const WronskianResult dep = hasse_wronskian({two_t, t}, 5);
  CHECK_FALSE(dep.independent);
  REQUIRE(dep.combination.size() == 2);
  CHECK(dep.combination(0) == Scalar(1));
  CHECK(dep.combination(1) == Scalar(-2));
  CHECK(dep.valid_to == 10);
}

TEST_CASE("linear ID relations") {
  const IdRing r = IdRing::polynomial(Field());
  const Series x = exp_series(Scalar(-1), 20);
  const auto rel = find_linear_id_relation(x, r, 1, 1);
  REQUIRE(rel);
  CHECK(rel->s[0] == Poly(1));
  CHECK(rel->s[1] == Poly(1));

  // y = exp(t^2 / 2) satisfies t y - theta^(1) y = 0 (first nonzero coefficient positive).
  std::vector<Scalar> v(21, Scalar(0));
  Scalar cur(1);
  for (int n = 0; 2 * n <= 20; ++n) {
    v[static_cast<std::size_t>(2 * n)] = cur;
    cur = cur / Scalar(2 * (n + 1));
  }
  const auto rel2 = find_linear_id_relation(Series(v, 20), r, 1, 1);
  REQUIRE(rel2);
  CHECK(rel2->s[0] == Poly::variable());
  CHECK(rel2->s[1] == Poly(-1));

  CHECK_THROWS_AS(find_linear_id_relation(exp_series(Scalar(-1), 6), r, 1, 1), Error);
}
