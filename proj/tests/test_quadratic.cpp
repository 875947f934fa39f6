#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dc1lab/quadratic.hpp"

using dc1lab::Rational;
using dc1lab::systems::QuadraticNumber;

namespace {

QuadraticNumber rnd_quad(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 20);
    return {dc1lab::make_rational(num(rng), den(rng)),
            dc1lab::make_rational(num(rng), den(rng))};
}

}  // namespace

TEST_CASE("field arithmetic identities") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const QuadraticNumber x = rnd_quad(rng);
        const QuadraticNumber y = rnd_quad(rng);
        const QuadraticNumber z = rnd_quad(rng);
        REQUIRE(x + y == y + x);
        REQUIRE((x + y) + z == x + (y + z));
        REQUIRE(x * (y + z) == x * y + x * z);
        if (!x.is_zero()) REQUIRE(x * x.inverse() == QuadraticNumber(Rational(1)));
    }
}

TEST_CASE("sqrt5 squares to 5") {
    const QuadraticNumber s = QuadraticNumber::sqrt5();
    REQUIRE(s * s == QuadraticNumber(Rational(5)));
    REQUIRE(s.sign() == 1);
    REQUIRE((-s).sign() == -1);
}

TEST_CASE("golden angle satisfies g^2 + g = 1") {
    const QuadraticNumber g = QuadraticNumber::golden();
    REQUIRE(g * g + g == QuadraticNumber(Rational(1)));
    REQUIRE(g.sign() == 1);
    REQUIRE((g - QuadraticNumber(Rational(1))).sign() == -1);
}

TEST_CASE("ordering matches the real embedding") {
    const QuadraticNumber s = QuadraticNumber::sqrt5();
    // 2 < sqrt5 < 9/4
    REQUIRE(QuadraticNumber(Rational(2)) < s);
    REQUIRE(s < QuadraticNumber(Rational(9, 4)));
    // mixed-sign: 7/2 - sqrt5 > 0, 2 - sqrt5 < 0
    REQUIRE((QuadraticNumber(Rational(7, 2)) - s).sign() == 1);
    REQUIRE((QuadraticNumber(Rational(2)) - s).sign() == -1);
}

TEST_CASE("floor and mod1") {
    const QuadraticNumber s = QuadraticNumber::sqrt5();
    REQUIRE(s.floor() == 2);
    REQUIRE((-s).floor() == -3);
    REQUIRE(QuadraticNumber(Rational(7, 2)).floor() == 3);
    REQUIRE(QuadraticNumber(Rational(-7, 2)).floor() == -4);
    REQUIRE(QuadraticNumber(Rational(3)).floor() == 3);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const QuadraticNumber x = rnd_quad(rng);
        const dc1lab::Integer n = x.floor();
        const QuadraticNumber frac = x - QuadraticNumber(Rational(n));
        REQUIRE(frac.sign() >= 0);
        REQUIRE((frac - QuadraticNumber(Rational(1))).sign() < 0);
        REQUIRE(x.mod1() == frac);
    }
}

TEST_CASE("floor handles huge coefficients") {
    // (3 - sqrt5)^60 has ~10^43-digit-scale coefficients; floor must stay exact.
    QuadraticNumber v(Rational(3), Rational(-1));
    QuadraticNumber p(Rational(1));
    for (int i = 0; i < 60; ++i) p = p * v;
    REQUIRE(p.sign() == 1);  // value ~ 0.76^60, tiny but positive
    REQUIRE(p.floor() == 0);
    REQUIRE((p - QuadraticNumber(Rational(1, 1000000))).sign() < 0);
}
