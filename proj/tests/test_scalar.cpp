#include "doctest.h"

#include <random>

#include "idpv/scalar.hpp"

using namespace idpv;

namespace {

// C(n, k) mod p straight from the integer value.
std::uint64_t factorial_binomial_mod(unsigned n, unsigned k, unsigned p) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  mpz_class m = r % p;
  return m.get_ui();
}

}  // namespace

TEST_CASE("binomial values") {
  CHECK(binomial(2, 1, Field()) == Scalar(2));
  CHECK(binomial(5, 2, Field(5)).is_zero());
  CHECK(binomial(7, 3, Field(2)) == Scalar::from_integer(35, Field(2)));
  CHECK(binomial(7, 3, Field(2)).residue() == 1);
  CHECK(binomial(3, 5, Field()).is_zero());
}

TEST_CASE("Pascal identity in both characteristics") {
  for (std::uint64_t p : {0, 2, 3, 5, 7}) {
    const Field f(p);
    for (std::uint64_t n = 0; n <= 64; ++n) {
      for (std::uint64_t k = 1; k <= 64; ++k) {
        REQUIRE(binomial(n, k, f) + binomial(n, k - 1, f) == binomial(n + 1, k, f));
      }
    }
  }
}

TEST_CASE("binomial(p, k) vanishes inside the row") {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    const Field f(p);
    for (std::uint64_t k = 1; k < p; ++k) CHECK(binomial(p, k, f).is_zero());
    CHECK(binomial(p, p, f).is_one());
  }
}

TEST_CASE("Lucas agrees with the factorial value") {
  for (unsigned p : {2U, 3U, 5U, 7U}) {
    for (unsigned n = 0; n <= 200; ++n) {
      for (unsigned k = 0; k <= 200; ++k) {
        REQUIRE(binomial(n, k, Field(p)).residue() == (k > n ? 0 : factorial_binomial_mod(n, k, p)));
      }
    }
  }
}

TEST_CASE("generalized binomial") {
  const Scalar third(mpz_class(1), mpz_class(3));
  CHECK(generalized_binomial(third, 2, Field()) == Scalar(mpz_class(-1), mpz_class(9)));
  CHECK(generalized_binomial(Scalar(7), 0, Field()).is_one());
  CHECK_THROWS_AS(generalized_binomial(third, 5, Field(5)), Error);
  try {
    generalized_binomial(third, 5, Field(5));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CharDivision);
  }
  // Integer upper argument reproduces the ordinary binomial.
  for (int n = 0; n < 8; ++n) CHECK(generalized_binomial(Scalar(7), n, Field()) == binomial(7, n, Field()));
}

TEST_CASE("field arithmetic") {
  const Field f5(5);
  const Scalar a = Scalar::from_integer(3, f5);
  CHECK((a * a.inverse()).is_one());
  CHECK((a + Scalar(2)).is_zero());
  CHECK(Scalar::parse("1/3", f5) == Scalar::from_integer(2, f5));
  CHECK_THROWS_AS(Scalar::in_field(Scalar(mpz_class(1), mpz_class(5)), f5), Error);
  CHECK_THROWS_AS(Field(6), Error);
  CHECK_THROWS_AS(Scalar::from_integer(1, f5) + Scalar::from_integer(1, Field(7)), Error);
  CHECK(Scalar::parse("-4/6", Field()).to_string() == "-2/3");
  CHECK_THROWS_AS(Scalar::parse("1/0", Field()), Error);
  CHECK_THROWS_AS(Scalar::parse("x", Field()), Error);
  CHECK(Scalar(mpz_class(6), mpz_class(-4)).to_string() == "-3/2");
}
