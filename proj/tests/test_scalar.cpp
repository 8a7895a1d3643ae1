#include <catch2/catch.hpp>

#include "dws/rational.hpp"
#include "dws/scalar.hpp"

using dws::Rational;
using dws::Scalar;

TEST_CASE("rational arithmetic reduces and compares exactly") {
  CHECK(Rational(4, 6) == Rational(2, 3));
  CHECK(Rational(-4, -6) == Rational(2, 3));
  CHECK(Rational(4, -6) == Rational(-2, 3));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(7, 3) - Rational(1, 3)) == Rational(2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK((Rational(2, 3) / Rational(4, 9)) == Rational(3, 2));
  CHECK(Rational(13, 9) > Rational(10, 7));
  CHECK(Rational(13, 9).str() == "13/9");
  CHECK(Rational(-6, 3).str() == "-2");
}

TEST_CASE("rational ceil and floor") {
  CHECK(Rational(19, 5).ceil() == 4);
  CHECK(Rational(20, 5).ceil() == 4);
  CHECK(Rational(-19, 5).ceil() == -3);
  CHECK(Rational(19, 5).floor() == 3);
  CHECK(Rational(-19, 5).floor() == -4);
}

TEST_CASE("rational overflow throws instead of wrapping") {
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, dws::RationalOverflow);
  CHECK_THROWS_AS(Rational(1, 3) + Rational(INT64_MAX, 1) * Rational(1, 1), dws::RationalOverflow);
}

TEST_CASE("scalar stays exact over rational operations") {
  const Scalar q = (Scalar(Rational(1, 3)) * Scalar(4) + Scalar(1)) / Scalar(1);
  REQUIRE(q.exact());
  CHECK(q.rational() == Rational(7, 3));
  CHECK(q.str() == "7/3");
}

TEST_CASE("scalar demotes to double on overflow or inexact operands") {
  const Scalar big = Scalar(Rational(INT64_MAX / 2)) * Scalar(Rational(INT64_MAX / 2));
  CHECK_FALSE(big.exact());
  const Scalar mixed = Scalar(1) + Scalar::from_double(0.5);
  CHECK_FALSE(mixed.exact());
  CHECK(mixed.value() == Approx(1.5));
}

TEST_CASE("scalar comparison is exact on rationals, tolerant on doubles") {
  CHECK(Scalar(Rational(13, 9)).compare(Scalar(Rational(13, 9))) == 0);
  CHECK(Scalar(Rational(13, 9)).compare(Scalar(Rational(10, 7))) > 0);
  CHECK(Scalar::from_double(1.0).compare(Scalar::from_double(1.0 + 1e-14)) == 0);
  CHECK(Scalar::from_double(1.0).compare(Scalar::from_double(1.0 + 1e-9)) < 0);
  CHECK(Scalar(1) < Scalar::infinity());
  CHECK(Scalar::infinity().compare(Scalar::infinity()) == 0);
}

TEST_CASE("scalar ceil_int snaps near-integer doubles") {
  CHECK(Scalar(Rational(19, 5)).ceil_int() == 4);
  CHECK(Scalar::from_double(3.8).ceil_int() == 4);
  CHECK(Scalar::from_double(4.0 + 1e-15).ceil_int() == 4);
  CHECK(Scalar::from_double(4.0 - 1e-15).ceil_int() == 4);
}

TEST_CASE("parse_scalar handles integers, fractions, decimals, scientific") {
  auto p = [](const char* s) { return dws::parse_scalar(s); };
  REQUIRE(p("2"));
  CHECK(p("2")->rational() == Rational(2));
  REQUIRE(p("-1/3"));
  CHECK(p("-1/3")->rational() == Rational(-1, 3));
  REQUIRE(p("0.5"));
  CHECK(p("0.5")->rational() == Rational(1, 2));
  REQUIRE(p("1.25"));
  CHECK(p("1.25")->rational() == Rational(5, 4));
  REQUIRE(p("1e-3"));
  CHECK(p("1e-3")->rational() == Rational(1, 1000));
  REQUIRE(p("2.5e2"));
  CHECK(p("2.5e2")->rational() == Rational(250));
  CHECK_FALSE(p(""));
  CHECK_FALSE(p("abc"));
  CHECK_FALSE(p("1/0"));
}
