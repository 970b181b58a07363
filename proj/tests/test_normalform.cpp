#include <doctest.h>

#include <cmath>

#include "jolt/normalform.hpp"
#include "test_util.hpp"

using namespace jolt;

namespace {

const FieldSpec kSqrt3 = FieldSpec::quadratic(3);
const FieldSpec kQ = FieldSpec::rational();

Hamiltonian ham(const char* text, std::size_t n, const FieldSpec& f = kQ) {
    return Hamiltonian(n, parse_poly(text, n, f));
}

Hamiltonian counterexample() {
    return ham("q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2", 4, kSqrt3);
}

// Block rotation by the 3-4-5 angle: exact unitary, not a permutation.
Unitary rational_rotation(std::size_t n) {
    Mat s = Mat::identity(n).scale(Coeff(make_rational(3, 5)));
    Mat t = Mat::identity(n).scale(Coeff(make_rational(4, 5)));
    return Unitary{s, t};
}

ExactPoint point_with_z(long z1, long z2) {
    ExactPoint x(8, Coeff(0));
    x[6] = Coeff(z1);
    x[7] = Coeff(z2);
    return x;
}

} // namespace

TEST_CASE("pointwise normal form") {
    SUBCASE("H = 1/2 p1^2 gives U = I, A = [1]") {
        const Hamiltonian h(1, parse_poly("1/2 * p1^2", 1, kQ));
        const auto nf = pointwise_normal_form(h, ExactPoint{Coeff(2), Coeff(-1)});
        CHECK(nf.rank == 1);
        CHECK(nf.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(max_abs(nf.U.S - DMat::identity(1)) == doctest::Approx(0.0));
        CHECK(max_abs(nf.U.T) == doctest::Approx(0.0));
        CHECK(nf.residual <= 1e-12);
    }
    SUBCASE("counterexample at a rank-4 point") {
        const auto nd = is_nondegenerate(counterexample());
        REQUIRE(nd.verdict == TriState::Yes);
        const auto nf = pointwise_normal_form(counterexample(), *nd.witness);
        CHECK(nf.rank == 4);
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(nf.eigenvalues[i]) > 1e-8);
        CHECK(nf.residual <= 1e-10);
        // Descending eigenvalue order.
        for (std::size_t i = 1; i < 4; ++i)
            CHECK(nf.eigenvalues[i - 1] >= nf.eigenvalues[i]);
    }
    SUBCASE("H = q1 p1 violates the MJM precondition") {
        CHECK_THROWS_AS(pointwise_normal_form(ham("q1*p1", 1), ExactPoint{Coeff(1), Coeff(1)}),
                        JoltError);
    }
}

TEST_CASE("seminormal form") {
    SUBCASE("pure kinetic: zeta = 0, U = I") {
        const Hamiltonian h = ham("p1^2 + p2^2", 2);
        const auto sn = seminormal_at(h, ExactPoint(4, Coeff(1)));
        CHECK(max_abs(sn.zeta) == doctest::Approx(0.0));
        CHECK(max_abs(sn.U.S - DMat::identity(2)) == doctest::Approx(0.0));
        CHECK(sn.residual_Z <= 1e-12);
        CHECK(sn.residual_B <= 1e-12);
        CHECK(sn.redundancy_checked);
        CHECK(sn.redundancy_residual <= 1e-12);
    }
    SUBCASE("counterexample at z = (1, 1)") {
        const auto sn = seminormal_at(counterexample(), point_with_z(1, 1));
        CHECK(sn.residual_Z <= 1e-9);
        CHECK(sn.residual_B <= 1e-9);
        CHECK(sn.redundancy_residual <= 1e-9);
    }
    SUBCASE("zeta depends only on the ray z1/z2") {
        const auto z11 = seminormal_at(counterexample(), point_with_z(1, 1));
        const auto z22 = seminormal_at(counterexample(), point_with_z(2, 2));
        const auto z12 = seminormal_at(counterexample(), point_with_z(1, 2));
        CHECK(max_abs(z11.zeta - z22.zeta) <= 1e-9);
        CHECK(max_abs(z11.zeta - z12.zeta) > 1e-3);
    }
    SUBCASE("singular A is rejected") {
        CHECK_THROWS_AS(seminormal_at(ham("p1^2", 2), ExactPoint(4, Coeff(1))), JoltError);
    }
    SUBCASE("exact zeta agrees with the float one") {
        const Mat z_exact = zeta_at_exact(counterexample(), point_with_z(1, 2));
        const auto sn = seminormal_at(counterexample(), point_with_z(1, 2));
        CHECK(max_abs(to_dmat(z_exact) - sn.zeta) <= 1e-12);
    }
}

TEST_CASE("zeta constancy scan") {
    SUBCASE("pure kinetic is constant") {
        const auto scan = zeta_constancy_scan(ham("p1^2 + p2^2", 2));
        CHECK(scan.verdict == ZetaVerdict::Constant);
        CHECK(max_abs(scan.zeta) == doctest::Approx(0.0));
    }
    SUBCASE("counterexample is nonconstant") {
        const auto scan = zeta_constancy_scan(counterexample());
        CHECK(scan.verdict == ZetaVerdict::NonConstant);
        CHECK(scan.max_deviation > 1e-3);
    }
    SUBCASE("conjugated shear is constant with zeta = -T^t (S^t)^{-1}") {
        const Unitary u = rational_rotation(2);
        const Hamiltonian k = ham("p1^2 + p1*p2^2 + p2^4", 2);
        const Hamiltonian h = apply_linear(k, u);
        const auto scan = zeta_constancy_scan(h);
        CHECK(scan.verdict == ZetaVerdict::Constant);
        CHECK(scan.max_deviation <= 1e-9);
        // H o (U^-1) is q-independent, so zeta = T' S'^{-1} with U^-1 = U^T:
        // S' = (3/5) I, T' = -(4/5) I, hence zeta = -(4/3) I.
        const DMat expected = to_dmat(Mat::identity(2).scale(Coeff(make_rational(-4, 3))));
        CHECK(max_abs(scan.zeta - expected) <= 1e-9);
    }
    SUBCASE("float Hamiltonians take the same path") {
        const auto scan = zeta_constancy_scan(to_dhamiltonian(counterexample()));
        CHECK(scan.verdict == ZetaVerdict::NonConstant);
    }
}

TEST_CASE("shear conjugator") {
    SUBCASE("q-independent input keeps U = I") {
        const auto sc = shear_conjugator(ham("p1^2", 1));
        REQUIRE(sc.exact);
        CHECK(sc.U.full() == Mat::identity(2));
        CHECK(sc.K == parse_poly("p1^2", 1, kQ));
    }
    SUBCASE("H = q1 p2^2 has a rational 2-dimensional span") {
        const auto sc = shear_conjugator(ham("q1*p2^2", 2));
        REQUIRE(sc.exact);
        CHECK(is_unitary_exact(sc.U));
        const Hamiltonian hu = apply_linear(ham("q1*p2^2", 2), sc.U.full());
        for (std::size_t i = 0; i < 2; ++i) CHECK(!hu.H.depends_on(i));
        CHECK(hu.H == sc.K);
        CHECK(!sc.K.is_zero());
    }
    SUBCASE("exact conjugation of an exactly conjugated shear") {
        const Unitary u = rational_rotation(2);
        const Hamiltonian h = apply_linear(ham("p1^3 + p2^3", 2), u);
        const auto sc = shear_conjugator(h);
        REQUIRE(sc.exact);
        const Hamiltonian hu = apply_linear(h, sc.U.full());
        for (std::size_t i = 0; i < 2; ++i) CHECK(!hu.H.depends_on(i));
    }
    SUBCASE("float fallback when the norm leaves the field") {
        // Span of HH for (q1 + 2 p1)^2 is spanned by (1, 2): norm sqrt 5.
        const auto sc = shear_conjugator(ham("(q1 + 2*p1)^2", 1));
        CHECK(!sc.exact);
        CHECK(sc.residual <= 1e-9);
        CHECK(!sc.K_num.is_zero());
        CHECK(unitary_residual(sc.U_num) <= 1e-12);
    }
    SUBCASE("non-shears are rejected") {
        CHECK_THROWS_AS(shear_conjugator(counterexample()), JoltError);
    }
}

TEST_CASE("simple form reduction: structural path") {
    SUBCASE("the counterexample is already in reduced coordinates") {
        const auto r = simple_form_reduction(counterexample());
        REQUIRE(r.is_exact());
        const auto& f = *r.exact;
        CHECK(f.d == 2);
        CHECK(f.K.is_zero());
        CHECK(f.U == Mat::identity(8));
        CHECK(f.V[0] == parse_poly("p3^3", 4, kSqrt3));
        CHECK(f.V[1] == parse_poly("sqrt(3)*p3^2*p4", 4, kSqrt3));
        CHECK(f.W[0] == parse_poly("p4^3", 4, kSqrt3));
        CHECK(f.W[1] == parse_poly("-sqrt(3)*p3*p4^2", 4, kSqrt3));
        // Reassembly returns the input Hamiltonian.
        const Hamiltonian back = assemble_simple_form(4, 2, f.K, f.V, f.W);
        CHECK(apply_linear(counterexample(), f.U).H == back.H);
    }
    SUBCASE("pure shear reduces to d = 0 with U = I") {
        const auto r = simple_form_reduction(ham("p1^2 + p2^4", 2));
        REQUIRE(r.is_exact());
        CHECK(r.exact->d == 0);
        CHECK(r.exact->U == Mat::identity(4));
        CHECK(r.exact->K == parse_poly("p1^2 + p2^4", 2, kQ));
    }
    SUBCASE("swapped base pairs are detected") {
        // H = q1 p2^2 wants the q1 direction in the momentum block.
        const auto r = simple_form_reduction(ham("q1*p2^2", 2));
        REQUIRE(r.is_exact());
        CHECK(r.exact->d == 0); // shear once quarter-turned
    }
    SUBCASE("non-affine-integrable input is rejected") {
        CHECK_THROWS_AS(simple_form_reduction(ham("q1^2*p1", 1)), JoltError);
    }
}

TEST_CASE("simple form reduction: numeric path") {
    // An exact rotation scrambles the blocks so the structural detector
    // fails and the pointwise-normal-form pipeline runs.
    const Unitary u = rational_rotation(4);
    const Hamiltonian h = apply_linear(counterexample(), u);
    const auto r = simple_form_reduction(h);
    REQUIRE(!r.is_exact());
    REQUIRE(r.numeric.has_value());
    const auto& f = *r.numeric;
    CHECK(f.d == 2);
    CHECK(f.residual <= 1e-8);
    CHECK(f.integrability_residual <= 1e-8);

    // The recovered change of variables reduces H: q-bar absent, (Q, P)
    // jointly linear.
    const DHamiltonian hu = apply_linear(to_dhamiltonian(h), f.U);
    double violation = 0.0;
    for (const auto& [m, c] : hu.H.terms()) {
        std::uint64_t linear_deg = 0, qbar = 0;
        for (std::size_t i = 0; i < f.d; ++i) linear_deg += m[i] + m[4 + i];
        for (std::size_t i = f.d; i < 4; ++i) qbar += m[i];
        if (qbar > 0 || linear_deg > 1) violation = std::max(violation, std::abs(c));
    }
    CHECK(violation <= 1e-8);
}

TEST_CASE("snap_to_field") {
    CHECK(snap_to_field(0.5, 0) == Coeff(make_rational(1, 2)));
    CHECK(snap_to_field(-2.0, 0) == Coeff(-2));
    const auto s = snap_to_field(2.0 / 3.0 * std::sqrt(3.0), 3);
    REQUIRE(s.has_value());
    CHECK(*s == Coeff(Rational(0), make_rational(2, 3), 3));
    CHECK(!snap_to_field(3.14159265358979, 0, 1e-12).has_value());
}

TEST_CASE("integrability residual helper") {
    // The counterexample data satisfies the condition; swapping W breaks it.
    const Poly v1 = parse_poly("p3^3", 4, kSqrt3);
    const Poly v2 = parse_poly("sqrt(3)*p3^2*p4", 4, kSqrt3);
    const Poly w1 = parse_poly("p4^3", 4, kSqrt3);
    const Poly w2 = parse_poly("-sqrt(3)*p3*p4^2", 4, kSqrt3);
    for (const auto& rj : simple_form_integrability_residual(4, 2, {v1, v2}, {w1, w2}))
        CHECK(rj.is_zero());
    bool all_zero = true;
    for (const auto& rj : simple_form_integrability_residual(4, 2, {v1, v2}, {w2, w1}))
        if (!rj.is_zero()) all_zero = false;
    CHECK(!all_zero);
}
