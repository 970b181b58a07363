#include <doctest.h>

#include <random>

#include "jolt/coeff.hpp"

using namespace jolt;

namespace {

Coeff random_coeff(std::mt19937_64& rng, long d) {
    auto small = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    return Coeff(make_rational(small(-6, 6), small(1, 5)),
                 make_rational(small(-6, 6), small(1, 5)), d);
}

} // namespace

TEST_CASE("rational construction canonicalizes") {
    CHECK(make_rational(6, 4) == make_rational(3, 2));
    CHECK(make_rational(-6, -4) == make_rational(3, 2));
    CHECK(make_rational(6, -4) == make_rational(-3, 2));
    CHECK(make_rational(0, 7) == 0);
}

TEST_CASE("coeff basic arithmetic in Q(sqrt 3)") {
    const Coeff s3 = Coeff::sqrt_d(3);
    CHECK((s3 * s3) == Coeff(3));

    // (1 + sqrt(3)) * (1 - sqrt(3)) = -2
    const Coeff u = Coeff(1) + s3;
    const Coeff v = Coeff(1) - s3;
    CHECK((u * v) == Coeff(-2));

    CHECK((u * u.inverse()) == Coeff(1));
    CHECK(u.pow(2) == Coeff(Rational(4), Rational(2), 3));
    CHECK((u - u).is_zero());
}

TEST_CASE("field axioms on random elements") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const Coeff a = random_coeff(rng, 3);
        const Coeff b = random_coeff(rng, 3);
        const Coeff c = random_coeff(rng, 3);
        CHECK((a + b) == (b + a));
        CHECK((a * b) == (b * a));
        CHECK(((a + b) + c) == (a + (b + c)));
        CHECK(((a * b) * c) == (a * (b * c)));
        CHECK((a * (b + c)) == (a * b + a * c));
        if (!a.is_zero()) CHECK((a * a.inverse()) == Coeff(1));
    }
}

TEST_CASE("mixing distinct radicals is rejected") {
    const Coeff s3 = Coeff::sqrt_d(3);
    const Coeff s5 = Coeff::sqrt_d(5);
    CHECK_THROWS_AS(s3 * s5, JoltError);
    CHECK_THROWS_AS(s3 + s5, JoltError);
    // Rationals combine with any field.
    CHECK((Coeff(2) * s5) == Coeff(Rational(0), Rational(2), 5));
}

TEST_CASE("exact sign") {
    const Coeff s3 = Coeff::sqrt_d(3);
    CHECK(Coeff(0).sign() == 0);
    CHECK(Coeff(-2).sign() == -1);
    CHECK(s3.sign() == 1);
    // 2 - sqrt(3) > 0, 1 - sqrt(3) < 0.
    CHECK((Coeff(2) - s3).sign() == 1);
    CHECK((Coeff(1) - s3).sign() == -1);
    // -5 + 3 sqrt(3) > 0 since 27 > 25.
    CHECK(Coeff(Rational(-5), Rational(3), 3).sign() == 1);
    CHECK(Coeff(Rational(5), Rational(-3), 3).sign() == -1);
}

TEST_CASE("rational sqrt detection") {
    CHECK(rational_sqrt(make_rational(9, 4)) == make_rational(3, 2));
    CHECK(!rational_sqrt(make_rational(2, 1)).has_value());
    CHECK(!rational_sqrt(make_rational(-4, 1)).has_value());
    CHECK(rational_sqrt(Rational(0)) == Rational(0));
}

TEST_CASE("square roots inside Q(sqrt d)") {
    // (1 + sqrt(3))^2 = 4 + 2 sqrt(3)
    const Coeff c(Rational(4), Rational(2), 3);
    const auto r = coeff_sqrt(c);
    REQUIRE(r.has_value());
    CHECK((*r * *r) == c);
    CHECK(r->sign() > 0);

    // sqrt(12) = 2 sqrt(3) exists only once the ambient field is known.
    SUBCASE("roots proportional to sqrt(d)") {
        const Coeff twelve(12);
        CHECK(!coeff_sqrt(twelve).has_value());
        const auto in_field = coeff_sqrt(twelve, 3);
        REQUIRE(in_field.has_value());
        CHECK(*in_field == Coeff(Rational(0), Rational(2), 3));
    }

    CHECK(!coeff_sqrt(Coeff(-1)).has_value());
    CHECK(coeff_sqrt(Coeff(make_rational(25, 16))) == Coeff(make_rational(5, 4)));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Coeff x = random_coeff(rng, 5);
        const auto root = coeff_sqrt(x * x, 5);
        REQUIRE(root.has_value());
        CHECK((*root * *root) == (x * x));
    }
}

TEST_CASE("printing") {
    CHECK(Coeff(make_rational(-3, 4)).str() == "-3/4");
    CHECK(Coeff::sqrt_d(3).str() == "sqrt(3)");
    CHECK((-Coeff::sqrt_d(3)).str() == "-sqrt(3)");
    CHECK(Coeff(Rational(0), make_rational(2, 3), 3).str() == "2/3*sqrt(3)");
    CHECK(Coeff(Rational(1), Rational(2), 3).str() == "(1 + 2*sqrt(3))");
    CHECK(Coeff(Rational(1), Rational(-1), 3).str() == "(1 - sqrt(3))");
}

TEST_CASE("square-free validation") {
    CHECK(is_square_free(3));
    CHECK(is_square_free(10));
    CHECK(!is_square_free(4));
    CHECK(!is_square_free(12));
    CHECK_THROWS_AS(FieldSpec::quadratic(4), JoltError);
    CHECK_THROWS_AS(Coeff(Rational(1), Rational(1), 8), JoltError);
    CHECK(FieldSpec::quadratic(3).str() == "sqrt3");
}
