#include "doctest.h"

#include <algorithm>

#include "idpv/pvgalois.hpp"

using namespace idpv;

namespace {

IdModule exp_module(const IdRing& base, int k) {
  Scalar cur(1);
  MatSeries<BaseElem> a(1, 1, k);
  a[0](0, 0) = BaseElem(1);
  for (int n = 1; n <= k; ++n) {
    cur = cur / Scalar(n);
    a[n](0, 0) = BaseElem(cur);
  }
  return make_module(base, a);
}

IdModule trivial_module(const IdRing& base) {
  MatSeries<BaseElem> a(1, 1, 0);
  a[0](0, 0) = BaseElem(1);
  return make_module(base, a, true);
}

IdModule radicand(const Field& f, unsigned m, int k) {
  const IdRing r = IdRing::localized(f, {Poly::variable()});
  return radicand_module(r, r.from_poly(Poly::variable()), m, k);
}

std::vector<std::string> printed(const RelationSet& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs.relations) out.push_back(relpoly_to_string(r, rs.symbols));
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

void check_vanishing(const PvPresentation& p, const RelationSet& rs) {
  for (const auto& r : rs.relations) CHECK(evaluate(p, r).is_zero());
}

}  // namespace

TEST_CASE("relations of exp") {
  const IdRing r = IdRing::polynomial(Field());
  const PvPresentation p = pv_generators(exp_module(r, 16), std::nullopt, Scalar(0), 16);
  CHECK(p.symbols == std::vector<std::string>{"g0", "g1"});
  const RelationSet rs = mine_relations(p, 2, 1);
  CHECK(printed(rs) == std::vector<std::string>{"g0*g1 - 1"});
  check_vanishing(p, rs);
  CHECK_THROWS_AS(mine_relations(p, 3, 2), Error);
}

TEST_CASE("relations of the trivial module") {
  const IdRing r = IdRing::polynomial(Field());
  const PvPresentation p = pv_generators(trivial_module(r), std::nullopt, Scalar(0), 16);
  const RelationSet rs = mine_relations(p, 2, 1);
  CHECK(printed(rs) == std::vector<std::string>{"g0 - 1", "g1 - 1"});
}

TEST_CASE("relations of a cube root") {
  const IdModule m = radicand(Field(), 3, 24);
  const PvPresentation p = pv_generators(m, std::nullopt, Scalar(1), 24);
  const RelationSet rs = mine_relations(p, 3, 1);
  const auto s = printed(rs);
  CHECK(has(s, "g0*g1 - 1"));
  // g1^3 - t = g1 (g1^2 - t g0) + t (g0 g1 - 1) is not a minimal generator.
  const RelPoly g0 = RelPoly::variable(2, 0, Poly(1));
  const RelPoly g1 = RelPoly::variable(2, 1, Poly(1));
  const RelPoly cube = g1 * g1 * g1 - RelPoly(2, Poly::variable());
  CHECK(IdealSpan(rs.relations, 2, 3, 1, Field()).contains(cube));
  std::vector<std::string> red;
  for (const auto& x : rs.reduced) red.push_back(relpoly_to_string(x, rs.symbols));
  CHECK(has(red, "g1^3 - t"));
  CHECK(static_cast<int>(rs.reduced.size()) == rs.kernel_dim);
  CHECK(evaluate(p, cube).is_zero());
  check_vanishing(p, rs);
  // Thread count does not change the result.
  const RelationSet rs4 = mine_relations(p, 3, 1, 4);
  CHECK(printed(rs4) == s);
  CHECK(rs4.kernel_dim == rs.kernel_dim);
}

TEST_CASE("ideal spans") {
  const IdRing r = IdRing::polynomial(Field());
  const PvPresentation p = pv_generators(exp_module(r, 16), std::nullopt, Scalar(0), 16);
  const RelationSet rs = mine_relations(p, 2, 1);
  const IdealSpan span(rs.relations, 2, 2, 1, Field());
  const RelPoly g0 = RelPoly::variable(2, 0, Poly(1));
  const RelPoly g1 = RelPoly::variable(2, 1, Poly(1));
  const RelPoly tt(2, Poly::variable());
  CHECK(span.contains(tt * g0 * g1 - tt));
  CHECK_FALSE(span.contains(g0 - RelPoly(2, Poly(1))));
  CHECK(relpoly_to_string(span.residue(g0 * g1 + g0), {"g0", "g1"}) == "g0 + 1");
  CHECK_THROWS_AS(span.residue(g0 * g0 * g0), Error);
}

TEST_CASE("ID-stability of the relation ideal") {
  const IdRing r = IdRing::polynomial(Field());
  const PvPresentation p = pv_generators(exp_module(r, 16), std::nullopt, Scalar(0), 16);
  const RelationSet rs = mine_relations(p, 2, 1);
  CHECK(check_id_stable_ideal(rs, p, 4).passed());

  RelationSet wrong = rs;
  wrong.relations = {RelPoly::variable(2, 1, Poly(1)) - RelPoly(2, Poly(1))};
  CHECK_FALSE(check_id_stable_ideal(wrong, p, 2).passed());

  const PvPresentation pc = pv_generators(radicand(Field(), 3, 24), std::nullopt, Scalar(1), 24);
  const RelationSet rc = mine_relations(pc, 3, 1);
  CHECK(check_id_stable_ideal(rc, pc, 4).passed());
}

TEST_CASE("stabilizer equations") {
  const IdRing r = IdRing::polynomial(Field());
  {
    const PvPresentation p = pv_generators(exp_module(r, 16), std::nullopt, Scalar(0), 16);
    const GroupEquations g = stabilizer_equations(mine_relations(p, 2, 1), p, 3);
    CHECK(g.identity_ok);
    CHECK(g.equations.empty());
    CHECK(group_generator(g).is_zero());
  }
  {
    const PvPresentation p = pv_generators(trivial_module(r), std::nullopt, Scalar(0), 16);
    const GroupEquations g = stabilizer_equations(mine_relations(p, 2, 1), p, 3);
    REQUIRE(g.equations.size() == 1);
    CHECK(equation_to_string(g.equations[0], g.variables) == "z - 1");
  }
  {
    const PvPresentation p = pv_generators(radicand(Field(), 3, 24), std::nullopt, Scalar(1), 24);
    const GroupEquations g = stabilizer_equations(mine_relations(p, 3, 1), p, 3);
    CHECK(g.identity_ok);
    REQUIRE(g.equations.size() == 1);
    CHECK(equation_to_string(g.equations[0], g.variables) == "z^3 - 1");
  }
  {
    const Field f5(5);
    const PvPresentation p = pv_generators(radicand(f5, 3, 24), std::nullopt, Scalar(1), 24);
    const GroupEquations g = stabilizer_equations(mine_relations(p, 3, 1), p, 3);
    CHECK(group_generator(g) == Poly(std::vector<Scalar>{Scalar::in_field(Scalar(-1), f5), Scalar::in_field(Scalar(0), f5),
                                                         Scalar::in_field(Scalar(0), f5), Scalar::in_field(Scalar(1), f5)}));
  }
}

TEST_CASE("stabilizer generators for several radicands") {
  for (unsigned m : {2u, 3u, 6u}) {
    CAPTURE(m);
    const int n = static_cast<int>((m + 1) * (m + 2) + 8);
    const PvPresentation p = pv_generators(radicand(Field(), m, n), std::nullopt, Scalar(1), n);
    const RelationSet rs = mine_relations(p, static_cast<int>(m), 1);
    const GroupEquations g = stabilizer_equations(rs, p, static_cast<int>(m));
    std::vector<Scalar> c(m + 1, Scalar(0));
    c[0] = Scalar(-1);
    c[m] = Scalar(1);
    CHECK(group_generator(g) == Poly(c));
  }
  for (auto [q, m] : {std::pair<std::uint64_t, unsigned>{5, 2}, {7, 3}, {7, 6}}) {
    CAPTURE(q);
    CAPTURE(m);
    const Field f(q);
    const int n = static_cast<int>((m + 1) * (m + 2) + 8);
    const PvPresentation p = pv_generators(radicand(f, m, n), std::nullopt, Scalar(1), n);
    const GroupEquations g = stabilizer_equations(mine_relations(p, static_cast<int>(m), 1), p, static_cast<int>(m));
    std::vector<Scalar> c(m + 1, Scalar::in_field(Scalar(0), f));
    c[0] = Scalar::in_field(Scalar(-1), f);
    c[m] = Scalar::in_field(Scalar(1), f);
    CHECK(group_generator(g) == Poly(c));
  }
  const PvPresentation p = pv_generators(radicand(Field(), 6, 64), std::nullopt, Scalar(1), 64);
  CHECK_THROWS_AS(stabilizer_equations(mine_relations(p, 6, 1), p, 3), Error);
}

TEST_CASE("tensor constants") {
  const IdRing r = IdRing::polynomial(Field());
  {
    const PvPresentation p = pv_generators(exp_module(r, 16), std::nullopt, Scalar(0), 16);
    const TensorConstants tc = tensor_constants_check(p, mine_relations(p, 2, 1), 2, 4);
    CHECK(tc.report.passed());
    CHECK(tc.dimension == 5);
    CHECK(tc.basis == std::vector<std::string>{"1", "Z", "Z^2", "Z^-1", "Z^-2"});
  }
  {
    const PvPresentation p = pv_generators(radicand(Field(), 3, 24), std::nullopt, Scalar(1), 24);
    const TensorConstants tc = tensor_constants_check(p, mine_relations(p, 3, 1), 3, 4);
    CHECK(tc.report.passed());
    CHECK(tc.dimension == 3);
    CHECK(tc.basis == std::vector<std::string>{"1", "Z", "Z^2"});
  }
  {
    const PvPresentation p = pv_generators(trivial_module(r), std::nullopt, Scalar(0), 16);
    const TensorConstants tc = tensor_constants_check(p, mine_relations(p, 2, 1), 2, 4);
    CHECK(tc.report.passed());
    CHECK(tc.dimension == 1);
    CHECK(tc.basis == std::vector<std::string>{"1"});
  }
  {
    // Over F_5 the constants of C[[t]] are only visible once theta^(5) is
    // part of the model.
    const PvPresentation p = pv_generators(radicand(Field(5), 3, 24), std::nullopt, Scalar(1), 24);
    const RelationSet rs = mine_relations(p, 3, 1);
    const TensorConstants tc = tensor_constants_check(p, rs, 3, 8);
    CHECK(tc.report.passed());
    CHECK(tc.dimension == 3);
    CHECK_THROWS_AS(tensor_constants_check(p, rs, 3, 4), Error);
  }
}

TEST_CASE("diagonal invariants") {
  const PvPresentation p = pv_generators(radicand(Field(), 6, 64), std::nullopt, Scalar(1), 64);
  const RelationSet rs = mine_relations(p, 6, 1);
  const DiagonalInvariants mu3 = diagonal_invariants(rs, p, 3, 3);
  CHECK(mu3.generators == std::vector<std::string>{"g1^3", "g0^3"});
  CHECK(mu3.weights == std::vector<int>{-3, 3});
  REQUIRE(mu3.relations);
  std::vector<std::string> rel;
  for (const auto& x : mu3.relations->reduced) rel.push_back(relpoly_to_string(x, mu3.relations->symbols));
  CHECK(has(rel, "(g1^3)^2 - t"));

  const PvPresentation p3 = pv_generators(radicand(Field(), 3, 24), std::nullopt, Scalar(1), 24);
  const RelationSet rs3 = mine_relations(p3, 3, 1);
  const DiagonalInvariants full = diagonal_invariants(rs3, p3, 3, 3);
  CHECK(full.only_base);
  CHECK(full.generators.empty());
  const DiagonalInvariants one = diagonal_invariants(rs3, p3, 1, 3);
  CHECK(one.generators == std::vector<std::string>{"g1", "g0"});

  const IdRing r = IdRing::polynomial(Field());
  BaseMatrix d(2, 2);
  d << BaseElem(0), BaseElem(1), BaseElem(Poly::variable()), BaseElem(0);
  const PvPresentation airy = pv_generators(from_derivation_matrix(r, d, 16), std::nullopt, Scalar(0), 16);
  CHECK_THROWS_AS(diagonal_invariants(rs3, airy, 3, 3), Error);
}

TEST_CASE("free and cover presentations agree") {
  const Poly t = Poly::variable();
  const IdRing r = IdRing::polynomial(Field());
  const IdModule m = exp_module(r, 112);
  LocalCoverData cover;
  cover.x = {t, t - Poly(1)};
  cover.n = {1, 1};
  cover.a = {BaseElem(1), BaseElem(-1)};
  const PvPresentation cp = pv_generators(m, cover, Scalar(0), 112);
  CHECK(cp.symbols == std::vector<std::string>{"y1", "y2", "d1", "d2"});
  const RelationSet crs = mine_relations(cp, 3, 2, 4);
  check_vanishing(cp, crs);
  CHECK(check_id_stable_ideal(crs, cp, 2).passed());
  const PvPresentation fp = pv_generators(m, std::nullopt, Scalar(0), 112);
  const RelationSet frs = mine_relations(fp, 3, 2);
  CHECK(compare_presentations(frs, fp, crs, cp).passed());

  // The cover group action gives the same equations as the free one.
  const GroupEquations g = stabilizer_equations(crs, cp, 3);
  CHECK(g.equations.empty());

  LocalCoverData trivial;
  trivial.x = {Poly(1)};
  trivial.n = {0};
  trivial.a = {BaseElem(1)};
  CHECK_FALSE(pv_generators(m, trivial, Scalar(0), 16).is_cover());
}
