#include <doctest.h>

#include "hs6v/errors.hpp"
#include "hs6v/rational.hpp"

using hs6v::Rational;

TEST_CASE("parse_rational accepts fractions, decimals and exponents exactly") {
  CHECK(hs6v::parse_rational("3") == 3);
  CHECK(hs6v::parse_rational("-2/7") == Rational(-2, 7));
  CHECK(hs6v::parse_rational("0.125") == Rational(1, 8));
  CHECK(hs6v::parse_rational("1e-3") == Rational(1, 1000));
  CHECK(hs6v::parse_rational("2.5E2") == 250);
  CHECK_THROWS_AS(hs6v::parse_rational("abc"), hs6v::DomainError);
  CHECK_THROWS_AS(hs6v::parse_rational("1/0"), hs6v::DomainError);
}

TEST_CASE("integer powers") {
  CHECK(hs6v::pow(Rational(1, 4), -2) == 16);
  CHECK(hs6v::pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(hs6v::pow(Rational(0), 0) == 1);
  CHECK_THROWS_AS(hs6v::pow(Rational(0), -1), hs6v::DomainError);
}

TEST_CASE("canonical string form") {
  CHECK(hs6v::to_string(Rational(6, 4)) == "3/2");
  CHECK(hs6v::to_string(Rational(4, 2)) == "2");
  CHECK(hs6v::to_string(hs6v::make_rational(-3, 9)) == "-1/3");
}
