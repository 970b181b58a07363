#include <doctest.h>

#include <random>

#include "jolt/hamalg.hpp"
#include "test_util.hpp"

using namespace jolt;
using jolt_test::random_poly;

namespace {

const FieldSpec kSqrt3 = FieldSpec::quadratic(3);
const FieldSpec kQ = FieldSpec::rational();

Hamiltonian ham(const char* text, std::size_t n, const FieldSpec& f = kQ) {
    return Hamiltonian(n, parse_poly(text, n, f));
}

Hamiltonian counterexample() {
    return ham("q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2", 4, kSqrt3);
}

Mat random_symmetric(std::mt19937_64& rng, std::size_t m) {
    Mat s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            s(i, j) = jolt_test::random_coeff(rng);
            s(j, i) = s(i, j);
        }
    return s;
}

} // namespace

TEST_CASE("vector field") {
    // H = p1^2: X = (2 p1, 0)
    const auto x1 = vector_field(ham("p1^2", 1));
    CHECK(x1[0] == parse_poly("2*p1", 1, kQ));
    CHECK(x1[1].is_zero());

    // H = q1^2: X = (0, -2 q1)
    const auto x2 = vector_field(ham("q1^2", 1));
    CHECK(x2[0].is_zero());
    CHECK(x2[1] == parse_poly("-2*q1", 1, kQ));

    // Counterexample: the p3, p4 components of X vanish identically.
    const auto x3 = vector_field(counterexample());
    CHECK(x3[6].is_zero());
    CHECK(x3[7].is_zero());
}

TEST_CASE("jacobian and hessian") {
    const auto id = identity_map<Coeff>(4, 4);
    const PolyMat j = jacobian(id, 4);
    CHECK(j == PolyMat::from_const(Mat::identity(4), 4));

    // hessian(q1 p1) = [[0, 1], [1, 0]]
    const PolyMat h = hessian_of(parse_poly("q1*p1", 1, kQ));
    Mat expect(2, 2);
    expect(0, 1) = Coeff(1);
    expect(1, 0) = Coeff(1);
    CHECK(h == PolyMat::from_const(expect, 2));

    // The counterexample has no q-q second derivatives.
    const auto blocks = hessian_blocks(counterexample());
    CHECK(blocks.B.is_zero());
    CHECK(!blocks.Z.is_zero());

    // Assembled Hessian agrees with the direct one.
    CHECK(blocks.assemble() == hessian_of(counterexample().H));
}

TEST_CASE("hessian blocks at a point") {
    // H = q1 p1: B = [0], Z = [1], A = [0]
    const auto at = hessian_blocks_at(ham("q1*p1", 1), std::vector<Coeff>{Coeff(2), Coeff(5)});
    CHECK(at.B(0, 0).is_zero());
    CHECK(at.Z(0, 0) == Coeff(1));
    CHECK(at.A(0, 0).is_zero());

    // H = K(p): B = Z = 0, A = hess K.
    const auto kp = hessian_blocks_at(ham("p1^2 + p2^2", 2),
                                      std::vector<Coeff>(4, Coeff(1)));
    CHECK(kp.B.is_zero());
    CHECK(kp.Z.is_zero());
    CHECK(kp.A == Mat::identity(2).scale(Coeff(2)));
}

TEST_CASE("poisson bracket") {
    CHECK(poisson(parse_poly("q1", 1, kQ), parse_poly("p1", 1, kQ), 1) ==
          Poly::constant(2, Coeff(1)));
    CHECK(poisson(parse_poly("q1*p1", 1, kQ), parse_poly("p1^2", 1, kQ), 1) ==
          parse_poly("2*p1^2", 1, kQ));

    SUBCASE("antisymmetry and Jacobi identity") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 25; ++trial) {
            const Poly f = random_poly(rng, 4, 3, 4, 3);
            const Poly g = random_poly(rng, 4, 3, 4, 3);
            const Poly e = random_poly(rng, 4, 3, 4, 3);
            CHECK((poisson(f, g, 2) + poisson(g, f, 2)).is_zero());
            const Poly jac = poisson(poisson(f, g, 2), e, 2) +
                             poisson(poisson(g, e, 2), f, 2) +
                             poisson(poisson(e, f, 2), g, 2);
            CHECK(jac.is_zero());
        }
    }

    SUBCASE("derivative of X is J-symmetric") {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial < 15; ++trial) {
            const Hamiltonian h(2, random_poly(rng, 4, 4, 5, 3));
            const PolyMat dx = jacobian(vector_field(h), 4);
            const PolyMat j = PolyMat::from_const(Mat::symplectic_j(2), 4);
            CHECK((dx.transpose() * j + j * dx).is_zero());
        }
    }
}

TEST_CASE("quad_bracket") {
    std::mt19937_64 rng(23);
    SUBCASE("bracket with itself vanishes") {
        const Mat f = random_symmetric(rng, 4);
        CHECK(quad_bracket(f, f).is_zero());
    }
    SUBCASE("matches the scalar Poisson bracket of the forms") {
        // Explicit n = 1 case: F for q1^2, G for p1^2, {q1^2, p1^2} = 4 q1 p1.
        Mat f(2, 2), g(2, 2);
        f(0, 0) = Coeff(2);
        g(1, 1) = Coeff(2);
        const Mat e = quad_bracket(f, g);
        CHECK(quadratic_form(e) == parse_poly("4*q1*p1", 1, kQ));

        for (int trial = 0; trial < 25; ++trial) {
            const Mat a = random_symmetric(rng, 4);
            const Mat b = random_symmetric(rng, 4);
            const Mat e2 = quad_bracket(a, b);
            CHECK(quadratic_form(e2) == poisson(quadratic_form(a), quadratic_form(b), 2));
        }
    }
    SUBCASE("asymmetric input rejected") {
        Mat bad(2, 2);
        bad(0, 1) = Coeff(1);
        CHECK_THROWS_AS(quad_bracket(bad, bad), JoltError);
    }
}

TEST_CASE("lie_exp") {
    // H = p1^2, f = q1, t = 1: single bracket, then zero.
    CHECK(lie_exp(ham("p1^2", 1), parse_poly("q1", 1, kQ), Coeff(1)) ==
          parse_poly("q1 + 2*p1", 1, kQ));
    // Constants are fixed points.
    CHECK(lie_exp(ham("p1^2", 1), Poly::constant(2, Coeff(7)), Coeff(3)) ==
          Poly::constant(2, Coeff(7)));
    // {q1, q1^2} = 0.
    CHECK(lie_exp(ham("q1^2", 1), parse_poly("q1", 1, kQ), Coeff(1)) ==
          parse_poly("q1", 1, kQ));
    // Non-nilpotent: H = q1 p1 scales forever.
    CHECK_THROWS_AS(lie_exp(ham("q1*p1", 1), parse_poly("q1", 1, kQ), Coeff(1)), JoltError);
}

TEST_CASE("linear flow") {
    // Shear flow: (q + t grad K(p), p).
    const auto flow = linear_flow(ham("p1^2", 1), Coeff(make_rational(1, 2)));
    CHECK(flow[0] == parse_poly("q1 + p1", 1, kQ));
    CHECK(flow[1] == parse_poly("p1", 1, kQ));

    const auto id = linear_flow(counterexample(), Coeff(0));
    CHECK(id == identity_map<Coeff>(8, 8));

    SUBCASE("symbolic t specializes to concrete t") {
        const Hamiltonian h = counterexample();
        const auto sym = linear_flow_symbolic(h);
        const auto concrete = linear_flow(h, Coeff(1));
        PolyVec subs = identity_map<Coeff>(8, 8);
        subs.push_back(Poly::constant(8, Coeff(1))); // t := 1
        for (std::size_t i = 0; i < 8; ++i) CHECK(compose(sym[i], subs) == concrete[i]);
    }
}

TEST_CASE("lie_exp agrees with flow composition on affine-integrable H") {
    std::mt19937_64 rng(24);
    const Hamiltonian h = counterexample();
    const PolyVec flow = linear_flow(h, Coeff(1));
    for (int trial = 0; trial < 10; ++trial) {
        const Poly f = random_poly(rng, 8, 2, 4, 3);
        CHECK(lie_exp(h, f, Coeff(1)) == compose(f, flow));
    }
}

TEST_CASE("is_symplectic") {
    // Shear maps are symplectic.
    const auto shear = linear_flow(ham("p1^2 + p1*p2^2", 2), Coeff(1));
    CHECK(is_symplectic(shear, 2).ok);

    // Time-one map of the counterexample is symplectic.
    CHECK(is_symplectic(linear_flow(counterexample(), Coeff(1)), 4).ok);

    // Non-unimodular scaling is not.
    PolyVec bad{parse_poly("2*q1", 1, kQ), parse_poly("p1", 1, kQ)};
    const auto check = is_symplectic(bad, 1);
    CHECK(!check.ok);
    CHECK(!check.residual.is_zero());
}

TEST_CASE("apply_linear") {
    const Hamiltonian h = ham("p1^2", 1);
    SUBCASE("identity") {
        CHECK(apply_linear(h, Mat::identity(2)).H == h.H);
    }
    SUBCASE("quarter turn takes p1^2 to q1^2") {
        // S = 0, T = I: (q, p) -> (p, -q).
        Unitary u{Mat(1, 1), Mat::identity(1)};
        CHECK(is_unitary_exact(u));
        CHECK(apply_linear(h, u).H == parse_poly("q1^2", 1, kQ));
    }
    SUBCASE("non-symplectic rejected") {
        CHECK_THROWS_AS(apply_linear(h, Mat::identity(2).scale(Coeff(2))), JoltError);
    }
    SUBCASE("contravariant in the change of variables") {
        std::mt19937_64 rng(25);
        // Exact rotation by the 3-4-5 triangle angle, block unitary.
        Mat s = Mat::identity(2).scale(Coeff(make_rational(3, 5)));
        Mat t(2, 2);
        t(0, 0) = Coeff(make_rational(4, 5));
        t(1, 1) = Coeff(make_rational(4, 5));
        const Unitary u{s, t};
        REQUIRE(is_unitary_exact(u));
        const Unitary v{Mat::identity(2), Mat(2, 2)}; // identity
        for (int trial = 0; trial < 10; ++trial) {
            const Hamiltonian g(2, random_poly(rng, 4, 3, 5));
            const Mat uv = u.full() * v.full();
            CHECK(apply_linear(apply_linear(g, v.full()), u.full()).H ==
                  apply_linear(g, uv).H);
        }
    }
}

TEST_CASE("double-precision apply_linear") {
    const DHamiltonian h = to_dhamiltonian(ham("p1^2", 1));
    DMat u(2, 2);
    u(0, 1) = 1.0;
    u(1, 0) = -1.0; // quarter turn
    const DHamiltonian hu = apply_linear(h, u);
    CHECK(hu.H.coeff(Monomial{2, 0}) == doctest::Approx(1.0));
    DMat bad = DMat::identity(2);
    bad(0, 0) = 1.5;
    CHECK_THROWS_AS(apply_linear(h, bad), JoltError);
}
