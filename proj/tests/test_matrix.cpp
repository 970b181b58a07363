#include <doctest.h>

#include <random>

#include "jolt/matrix.hpp"
#include "test_util.hpp"

using namespace jolt;

TEST_CASE("J squares to minus identity") {
    const Mat j = Mat::symplectic_j(3);
    CHECK(j * j == Mat::identity(6).scale(Coeff(-1)));
    CHECK(j.transpose() == j.scale(Coeff(-1)));
}

TEST_CASE("exact rank") {
    Mat m(3, 3);
    m(0, 0) = Coeff(1);
    m(0, 1) = Coeff(2);
    m(1, 0) = Coeff(2);
    m(1, 1) = Coeff(4);
    m(2, 2) = Coeff(1);
    CHECK(exact_rank(m) == 2);
    CHECK(exact_rank(Mat(4, 4)) == 0);
    CHECK(exact_rank(Mat::identity(5)) == 5);

    // Rank over Q(sqrt 2): rows (1, sqrt2) and (sqrt2, 2) are dependent.
    Mat q(2, 2);
    q(0, 0) = Coeff(1);
    q(0, 1) = Coeff::sqrt_d(2);
    q(1, 0) = Coeff::sqrt_d(2);
    q(1, 1) = Coeff(2);
    CHECK(exact_rank(q) == 1);
}

TEST_CASE("consistency of linear systems") {
    Mat a(2, 2);
    a(0, 0) = Coeff(1);
    a(1, 1) = Coeff(0);
    CHECK(exact_consistent(a, {Coeff(3), Coeff(0)}));
    CHECK(!exact_consistent(a, {Coeff(3), Coeff(1)}));
}

TEST_CASE("nullspace") {
    // x + y = 0 in R^3: nullspace dim 2.
    Mat a(1, 3);
    a(0, 0) = Coeff(1);
    a(0, 1) = Coeff(1);
    const auto basis = exact_nullspace(a);
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
        CHECK((a * v)[0].is_zero());
    }
}

TEST_CASE("span basis extraction") {
    std::vector<std::vector<Coeff>> vecs{
        {Coeff(1), Coeff(0), Coeff(1)},
        {Coeff(2), Coeff(0), Coeff(2)},
        {Coeff(0), Coeff(1), Coeff(0)},
    };
    const auto basis = exact_span_basis(vecs);
    CHECK(basis.size() == 2);
}

TEST_CASE("exact orthonormalization") {
    SUBCASE("stays in the field") {
        // Orthogonal pair with norms 25 and 5^2-ish squares.
        std::vector<std::vector<Coeff>> basis{
            {Coeff(3), Coeff(4)},
            {Coeff(4), Coeff(9)},
        };
        const auto on = exact_orthonormalize(basis);
        REQUIRE(on.has_value());
        REQUIRE(on->size() == 2);
        CHECK(dot((*on)[0], (*on)[0]) == Coeff(1));
        CHECK(dot((*on)[1], (*on)[1]) == Coeff(1));
        CHECK(dot((*on)[0], (*on)[1]).is_zero());
    }
    SUBCASE("leaves the field") {
        std::vector<std::vector<Coeff>> basis{{Coeff(1), Coeff(1)}}; // norm sqrt 2
        CHECK(!exact_orthonormalize(basis).has_value());
    }
    SUBCASE("norm in Q(sqrt 3)") {
        // |(1, sqrt3)|^2 = 4, fine; |(1,1,1)|^2 = 3 has root sqrt(3) in field.
        std::vector<std::vector<Coeff>> basis{{Coeff(1), Coeff::sqrt_d(3)}};
        const auto on = exact_orthonormalize(basis);
        REQUIRE(on.has_value());
        CHECK(dot((*on)[0], (*on)[0]) == Coeff(1));

        std::vector<std::vector<Coeff>> unit{{Coeff(1), Coeff(1), Coeff(1)}};
        const auto on3 = exact_orthonormalize(unit, 3);
        REQUIRE(on3.has_value());
        CHECK(dot((*on3)[0], (*on3)[0]) == Coeff(1));
    }
}

TEST_CASE("double bridge") {
    Mat m(2, 2);
    m(0, 0) = Coeff(make_rational(1, 2));
    m(0, 1) = Coeff::sqrt_d(3);
    const DMat d = to_dmat(m);
    CHECK(d(0, 0) == doctest::Approx(0.5));
    CHECK(d(0, 1) == doctest::Approx(1.7320508075688772));
    CHECK(max_abs(d) == doctest::Approx(1.7320508075688772));
}
