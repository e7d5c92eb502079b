#include "doctest.h"

#include <stdexcept>

#include "flmpc/rational.hpp"

using flmpc::Rational;

TEST_CASE("rational normalization and arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));

    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
    CHECK(-Rational(3, 5) == Rational(-3, 5));

    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational rounding half away from zero") {
    CHECK(Rational(3, 2).round_half_away() == 2);
    CHECK(Rational(-3, 2).round_half_away() == -2);
    CHECK(Rational(1, 2).round_half_away() == 1);
    CHECK(Rational(-1, 2).round_half_away() == -1);
    CHECK(Rational(1, 3).round_half_away() == 0);
    CHECK(Rational(-1, 3).round_half_away() == 0);
    CHECK(Rational(7).round_half_away() == 7);
    CHECK(Rational(-7, 4).round_half_away() == -2);
    CHECK(Rational(5, 4).round_half_away() == 1);
}

TEST_CASE("rational text round-trip") {
    CHECK(Rational::parse("1/4") == Rational(1, 4));
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("5") == Rational(5));
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(3).str() == "3/1");
    CHECK_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/4x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("rational overflow is detected, never wrapped") {
    Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_THROWS_AS(big + big + big, std::overflow_error);
}
