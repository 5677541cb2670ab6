#include "doctest.h"

#include <random>

#include "idpv/idring.hpp"

using namespace idpv;

namespace {

Poly random_poly(std::mt19937& rng, int deg, const Field& f) {
  std::uniform_int_distribution<int> d(-9, 9);
  std::vector<Scalar> c;
  for (int i = 0; i <= deg; ++i) c.push_back(Scalar::in_field(Scalar(d(rng)), f));
  return Poly(std::move(c));
}

// f(t + T) by expanding every (t + T)^i with Pascal's triangle; entry n is
// the coefficient of T^n.
std::vector<Poly> shifted_by_pascal(const Poly& f, int k) {
  std::vector<Poly> out(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= f.degree(); ++i) {
    std::vector<mpz_class> row{1};
    for (int r = 0; r < i; ++r) {
      std::vector<mpz_class> next(row.size() + 1, 0);
      for (std::size_t j = 0; j < row.size(); ++j) {
        next[j] += row[j];
        next[j + 1] += row[j];
      }
      row = next;
    }
    for (int n = 0; n <= i && n <= k; ++n) {
      out[static_cast<std::size_t>(n)] += Poly::monomial(f.coeff(i) * Scalar(row[static_cast<std::size_t>(n)], 1), i - n);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("theta on polynomial rings") {
  const IdRing r = IdRing::polynomial(Field());
  const Poly t = Poly::variable();
  const BaseSeries s = theta(r, r.from_poly(t * t), 2);
  CHECK(s[0] == BaseElem(t * t));
  CHECK(s[1] == BaseElem(Poly(2) * t));
  CHECK(s[2] == BaseElem(Poly(1)));

  const Field f5(5);
  const IdRing r5 = IdRing::polynomial(f5);
  const BaseSeries s5 = theta(r5, r5.from_poly(t.pow(5)), 5);
  CHECK(s5[0] == r5.from_poly(t.pow(5)));
  for (int n = 1; n < 5; ++n) CHECK(s5[n].is_zero());
  CHECK(s5[5] == r5.constant(1));

  std::mt19937 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Poly p = random_poly(rng, 7, Field());
    const auto oracle = shifted_by_pascal(p, 9);
    const BaseSeries th = theta(r, r.from_poly(p), 9);
    for (int n = 0; n <= 9; ++n) CHECK(th[n] == BaseElem(oracle[static_cast<std::size_t>(n)]));
  }
}

TEST_CASE("theta on localizations uses theta(r) theta(s)^-1") {
  const IdRing r = IdRing::localized(Field(), {Poly::variable()});
  const BaseElem inv_t = r.inverse_of(0);
  const BaseSeries s = theta(r, inv_t, 4);
  // 1/(t+T) = sum (-1)^n T^n / t^(n+1)
  for (int n = 0; n <= 4; ++n) {
    BaseElem expect = inv_t;
    for (int i = 0; i < n; ++i) expect *= inv_t;
    if (n % 2) expect = -expect;
    CHECK(s[n] == expect);
  }
  CHECK_THROWS_AS(IdRing::localized(Field(), {Poly()}), Error);
}

TEST_CASE("iteration rule on valid rings") {
  const IdRing r = IdRing::polynomial(Field());
  const Poly t = Poly::variable();
  CHECK(check_iteration_rule(r, {r.from_poly(t), r.from_poly(t.pow(3) - Poly(2) * t)}, 6).passed());
  const IdRing triv = IdRing::trivial(Field(), {"z", "w"});
  const CheckReport tr = check_iteration_rule(triv, {triv.generator(0) * triv.generator(1), triv.constant(3)}, 6);
  CHECK(tr.passed());
  CHECK(tr.checks() > 0);
}

TEST_CASE("iteration rule and homomorphism catch a corrupted family") {
  const IdRing r = IdRing::polynomial(Field());
  const Poly t = Poly::variable();
  const ThetaFn bad = testing::corrupted_family({
      [](const BaseElem& x) { return x; },
      [](const BaseElem& x) { return BaseElem(x.as<LocElem>().numerator().hasse(1)); },
  });
  const CheckReport rep = check_iteration_rule(bad, Field(), {r.from_poly(t * t)}, 2);
  CHECK_FALSE(rep.passed());
  bool found = false;
  for (const auto& v : rep.violations()) {
    if (v.indices == std::vector<long long>{1, 1} && v.lhs == "2" && v.rhs == "0") found = true;
  }
  CHECK(found);
  const CheckReport hom = check_homomorphism(bad, r.from_poly(t), r.from_poly(t), 2);
  CHECK_FALSE(hom.passed());
  REQUIRE(hom.violations().size() == 1);
  CHECK(hom.violations()[0].indices == std::vector<long long>{2});
  CHECK(check_homomorphism(r, r.from_poly(t), r.from_poly(t * t), 6).passed());
  CHECK(check_homomorphism(r, BaseElem(0), r.from_poly(t + Poly(1)), 6).passed());
}

TEST_CASE("randomized laws at K = 12") {
  std::mt19937 rng(42);
  const Poly t = Poly::variable();
  for (std::uint64_t p : {0, 5}) {
    const Field f(p);
    const IdRing r = IdRing::polynomial(f);
    std::vector<BaseElem> xs;
    for (int k = 0; k < 100; ++k) xs.push_back(r.from_poly(random_poly(rng, 5, f)));
    CHECK(check_iteration_rule(r, xs, 12).passed());
    for (int k = 0; k + 1 < 100; k += 2) CHECK(check_homomorphism(r, xs[k], xs[k + 1], 12).passed());
  }
  const IdRing sr = IdRing::series(Field(), 16);
  std::vector<BaseElem> ss;
  for (int k = 0; k < 100; ++k) {
    const Poly pp = random_poly(rng, 16, Field());
    ss.push_back(sr.from_poly(pp));
  }
  CHECK(check_iteration_rule(sr, ss, 12).passed());
  for (int k = 0; k + 1 < 100; k += 2) CHECK(check_homomorphism(sr, ss[k], ss[k + 1], 12).passed());

  const IdRing triv = IdRing::trivial(Field(), {"z"});
  const IdRing ten = IdRing::tensor(IdRing::polynomial(Field()), triv);
  std::vector<BaseElem> ts;
  std::uniform_int_distribution<int> e(0, 3);
  for (int k = 0; k < 100; ++k) {
    BaseElem z = triv.generator(0);
    BaseElem zp = triv.constant(1);
    for (int i = e(rng); i > 0; --i) zp *= z;
    ts.push_back(ten.tensor(IdRing::polynomial(Field()).from_poly(random_poly(rng, 3, Field())), zp) +
                 ten.tensor(IdRing::polynomial(Field()).from_poly(random_poly(rng, 2, Field())), z));
  }
  CHECK(check_iteration_rule(ten, ts, 12).passed());
  for (int k = 0; k + 1 < 100; k += 2) CHECK(check_homomorphism(ten, ts[k], ts[k + 1], 12).passed());
  std::vector<BaseElem> tv;
  for (int k = 0; k < 100; ++k) tv.push_back(triv.generator(0) * triv.constant(k) + triv.constant(1));
  CHECK(check_iteration_rule(triv, tv, 12).passed());
}

TEST_CASE("constants of a span") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::polynomial(Field());
  auto c = constants_of_span(r, {r.from_poly(Poly(1)), r.from_poly(t), r.from_poly(t * t)}, 4);
  REQUIRE(c.size() == 1);
  CHECK(c[0](0) == Scalar(1));
  CHECK(c[0](1).is_zero());
  CHECK(c[0](2).is_zero());

  const IdRing triv = IdRing::trivial(Field(), {"z"});
  const IdRing ten = IdRing::tensor(r, triv);
  std::vector<BaseElem> basis;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 2; ++j) {
      BaseElem zj = triv.constant(1);
      for (int k = 0; k < j; ++k) zj *= triv.generator(0);
      basis.push_back(ten.tensor(r.from_poly(t.pow(static_cast<unsigned>(i))), zj));
    }
  }
  c = constants_of_span(ten, basis, 4);
  REQUIRE(c.size() == 3);
  // Kernel vectors are the basis entries t^0 z^j (indices 0, 1, 2).
  for (std::size_t k = 0; k < 3; ++k) {
    for (Eigen::Index i = 0; i < 9; ++i) CHECK(c[k](i) == Scalar(i == static_cast<Eigen::Index>(k) ? 1 : 0));
  }

  const IdRing r5 = IdRing::polynomial(Field(5));
  std::vector<BaseElem> b5;
  for (unsigned i = 0; i <= 6; ++i) b5.push_back(r5.from_poly(t.pow(i)));
  c = constants_of_span(r5, b5, 6);
  REQUIRE(c.size() == 1);
  CHECK(c[0](0).is_one());
  for (Eigen::Index i = 1; i <= 6; ++i) CHECK(c[0](i).is_zero());
  // With K = 4, t^5 still looks constant.
  CHECK(constants_of_span(r5, b5, 4).size() == 2);

  const IdRing sr = IdRing::series(Field(), 4);
  CHECK_THROWS_AS(constants_of_span(sr, {sr.t()}, 6), Error);
}

TEST_CASE("Taylor embedding") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::polynomial(Field());
  CHECK(taylor_embed(r, r.t(), Scalar(0), 3) == Series({0, 1, 0, 0}, 3));
  CHECK(taylor_embed(r, r.from_poly(t * t), Scalar(1), 2) == Series({1, 2, 1}, 2));
  const IdRing loc = IdRing::localized(Field(), {t});
  CHECK(taylor_embed(loc, loc.inverse_of(0), Scalar(1), 3) == Series({1, -1, 1, -1}, 3));
  CHECK_THROWS_AS(taylor_embed(loc, loc.inverse_of(0), Scalar(0), 3), Error);
  try {
    taylor_embed(loc, loc.t(), Scalar(0), 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadPoint);
  }
}

TEST_CASE("embedding is an ID-homomorphism on random localized elements") {
  const Poly t = Poly::variable();
  const IdRing loc = IdRing::localized(Field(), {t, t - Poly(1)});
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> e(0, 2);
  const int n = 10;
  const Scalar c(2);
  for (int k = 0; k < 30; ++k) {
    BaseElem x = loc.from_poly(random_poly(rng, 3, Field()));
    for (int i = e(rng); i > 0; --i) x *= loc.inverse_of(0);
    for (int i = e(rng); i > 0; --i) x *= loc.inverse_of(1);
    const BaseElem y = loc.from_poly(random_poly(rng, 2, Field())) * loc.inverse_of(1);
    const Series ex = taylor_embed(loc, x, c, n);
    CHECK(taylor_embed(loc, x * y, c, n) == ex * taylor_embed(loc, y, c, n));
    const BaseSeries th = theta(loc, x, 4);
    for (int d = 0; d <= 4; ++d) CHECK(taylor_embed(loc, th[d], c, n - d) == hasse(ex, d));
  }
}

TEST_CASE("simplicity certificates") {
  const Poly t = Poly::variable();
  auto [n, u] = simplicity_certificate(Poly(3) * t * t + Poly(1));
  CHECK(n == 2);
  CHECK(u == Scalar(3));
  auto [n0, u0] = simplicity_certificate(Poly(5));
  CHECK(n0 == 0);
  CHECK(u0 == Scalar(5));
  const Poly t7 = Poly::monomial(Scalar::from_integer(1, Field(7)), 3);
  auto [n7, u7] = simplicity_certificate(t7);
  CHECK(n7 == 3);
  CHECK(u7.is_one());
  CHECK_THROWS_AS(simplicity_certificate(Poly()), Error);
}
