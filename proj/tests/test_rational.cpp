#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "seqvote/rational.hpp"

using seqvote::ExtRational;
using seqvote::Rational;

TEST_CASE("rational normalizes and orders") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) - Rational(1, 3)) == Rational(1, 6));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(2, 3) / Rational(4, 3)) == Rational(1, 2));
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("rational text form") {
  CHECK(Rational(3, 2).to_string() == "3/2");
  CHECK(Rational(4, 2).to_string() == "2");
  CHECK(Rational::parse("-7/14") == Rational(-1, 2));
  CHECK(Rational::parse("5") == Rational(5));
  CHECK_THROWS(Rational::parse("1/"));
  CHECK_THROWS(Rational::parse("x"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("rational overflow is reported") {
  const auto big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(Rational(big) + Rational(1), std::overflow_error);
  CHECK_THROWS_AS(Rational(big) * Rational(2), std::overflow_error);
  // Intermediate products may exceed 64 bits when the result does not.
  CHECK((Rational(big, 3) * Rational(3, big)) == Rational(1));
}

TEST_CASE("extended rational") {
  const ExtRational inf = ExtRational::infinity();
  CHECK(inf.is_infinite());
  CHECK(ExtRational(Rational(1000)) < inf);
  CHECK(inf == ExtRational::infinity());
  CHECK(inf.to_string() == "inf");
  CHECK(ExtRational::parse("inf") == inf);
  CHECK(ExtRational::parse("3/2") == ExtRational(Rational(3, 2)));
  CHECK_THROWS(inf.value());
}
