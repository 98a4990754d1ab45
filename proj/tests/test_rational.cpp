#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "xscore/rational.hpp"

using namespace xscore;

TEST_CASE("binomial small values") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(10, 5) == 252);
    CHECK(binomial(4, 7) == 0);
    CHECK(binomial(7, 0) == 1);
}

TEST_CASE("binomial matches Pascal's rule") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        long long n = std::uniform_int_distribution<long long>(1, 40)(rng);
        long long k = std::uniform_int_distribution<long long>(1, n)(rng);
        CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
}

TEST_CASE("binomial large exact value") {
    // C(60, 30), independently known
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("factorial and pow2") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(20) == BigInt("2432902008176640000"));
    CHECK(pow2(0) == 1);
    CHECK(pow2(10) == 1024);
    CHECK(pow2(100) == BigInt("1267650600228229401496703205376"));
}

TEST_CASE("fraction strings are canonical") {
    CHECK(to_fraction_string(Rational(1, 2)) == "1/2");
    CHECK(to_fraction_string(Rational(2, 4)) == "1/2");
    CHECK(to_fraction_string(Rational(0)) == "0/1");
    CHECK(to_fraction_string(Rational(-3, 6)) == "-1/2");
    CHECK(to_fraction_string(Rational(7)) == "7/1");
}

TEST_CASE("rational_from_string accepts p/q and integers") {
    CHECK(rational_from_string("3/8") == Rational(3, 8));
    CHECK(rational_from_string("-2/6") == Rational(-1, 3));
    CHECK(rational_from_string("5") == Rational(5));
    CHECK(rational_from_string("0") == Rational(0));
}

TEST_CASE("rational_from_string rejects junk") {
    CHECK_THROWS_AS(rational_from_string(""), ParseError);
    CHECK_THROWS_AS(rational_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rational_from_string("a/b"), ParseError);
    CHECK_THROWS_AS(rational_from_string("1.5"), ParseError);
    CHECK_THROWS_AS(rational_from_string("1/2/3"), ParseError);
}

TEST_CASE("fraction string round-trips") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        long long p = std::uniform_int_distribution<long long>(-1000, 1000)(rng);
        long long q = std::uniform_int_distribution<long long>(1, 1000)(rng);
        Rational r(p, q);
        CHECK(rational_from_string(to_fraction_string(r)) == r);
    }
}

TEST_CASE("approx_decimal gives 15 significant digits") {
    CHECK(approx_decimal(Rational(1, 2)) == "0.5");
    CHECK(approx_decimal(Rational(3, 8)) == "0.375");
    CHECK(approx_decimal(Rational(1, 3)) == "0.333333333333333");
    CHECK(approx_decimal(Rational(0)) == "0");
}
