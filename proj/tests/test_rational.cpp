#include "condcompat/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace condcompat;

TEST_CASE("fraction strings parse exactly") {
    CHECK(parse_rational("1/4") == Rational(1, 4));
    CHECK(parse_rational("-3/9") == Rational(-1, 3));
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("0/5") == 0);
    CHECK(parse_rational("12345678901234567890/3") ==
          Rational(BigInt("12345678901234567890"), 3));
}

TEST_CASE("decimal strings convert exactly to powers-of-ten fractions") {
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("0.3") == Rational(3, 10));
    CHECK(parse_rational("-3.5") == Rational(-7, 2));
    CHECK(parse_rational("0.1071429") == Rational(1071429, 10000000));
    CHECK(parse_rational("2.") == 2);
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("0.000") == 0);
}

TEST_CASE("integer strings") {
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("-2") == -2);
    CHECK(parse_rational("0") == 0);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("1/"), Error);
    CHECK_THROWS_AS(parse_rational("/3"), Error);
    CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
    CHECK_THROWS_AS(parse_rational("1,5"), Error);
}

TEST_CASE("canonical form is maintained by arithmetic") {
    Rational q = parse_rational("2/4") + parse_rational("1/4");
    CHECK(numerator_of(q) == 3);
    CHECK(denominator_of(q) == 4);
    Rational r = parse_rational("1/3") - parse_rational("1/3");
    CHECK(numerator_of(r) == 0);
    CHECK(denominator_of(r) == 1);
    Rational s = parse_rational("-1/2") * parse_rational("-2/3");
    CHECK(numerator_of(s) == 1);
    CHECK(denominator_of(s) == 3);
    CHECK(denominator_of(parse_rational("-5/10")) == 2);  // denominator stays positive
}

TEST_CASE("fraction rendering round-trips") {
    for (const char* text : {"3/7", "-2/9", "0", "5", "-1/2"}) {
        Rational q = parse_rational(text);
        CHECK(parse_rational(to_fraction_string(q)) == q);
    }
    CHECK(to_fraction_string(Rational(3, 7)) == "3/7");
    CHECK(to_fraction_string(Rational(2)) == "2");
}

TEST_CASE("decimal rendering matches the 7-place print convention") {
    CHECK(to_decimal_string(Rational(-2, 9)) == "-0.2222222");
    CHECK(to_decimal_string(Rational(3, 28)) == "0.1071429");
    CHECK(to_decimal_string(Rational(1, 15)) == "0.0666667");
    CHECK(to_decimal_string(Rational(1, 6)) == "0.1666667");
    CHECK(to_decimal_string(Rational(0)) == "0.0000000");
    CHECK(to_decimal_string(Rational(1, 4)) == "0.2500000");
    CHECK(to_decimal_string(Rational(7, 2)) == "3.5000000");
}

TEST_CASE("decimal rendering rounds half to even") {
    CHECK(to_decimal_string(Rational(1, 2), 0) == "0");
    CHECK(to_decimal_string(Rational(3, 2), 0) == "2");
    CHECK(to_decimal_string(Rational(1, 4), 1) == "0.2");
    CHECK(to_decimal_string(Rational(3, 4), 1) == "0.8");
    CHECK(to_decimal_string(Rational(-1, 4), 1) == "-0.2");
    CHECK(to_decimal_string(Rational(1, 20000000)) == "0.0000000");   // 0.5 ulp tie -> even
    CHECK(to_decimal_string(Rational(3, 20000000)) == "0.0000002");   // 1.5 ulp tie -> even
    CHECK(to_decimal_string(Rational(-1, 20000000)) == "0.0000000");  // no negative zero
}
