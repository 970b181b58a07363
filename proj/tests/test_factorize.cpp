#include <doctest.h>

#include "jolt/factorize.hpp"
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

SimpleForm counterexample_form() {
    auto r = simple_form_reduction(counterexample());
    REQUIRE(r.is_exact());
    return *r.exact;
}

} // namespace

TEST_CASE("hamiltonian_from_map") {
    SUBCASE("F = (q + 2p, p) recovers p^2") {
        const PolyVec f{parse_poly("q1 + 2*p1", 1, kQ), parse_poly("p1", 1, kQ)};
        CHECK(hamiltonian_from_map(f, 1).H == parse_poly("p1^2", 1, kQ));
    }
    SUBCASE("round trip through the counterexample") {
        const Hamiltonian h = counterexample();
        const PolyVec f = linear_flow(h, Coeff(1));
        CHECK(hamiltonian_from_map(f, 4).H == h.H);
    }
    SUBCASE("round trip on homogeneous corpus entries of degrees 2..4") {
        for (const char* text : {"p1^2 + p1*p2", "p1^3 + p2^3", "q1*p2^3", "p1^2*p2^2"}) {
            const Hamiltonian h = ham(text, 2);
            if (!is_affine_integrable(h).integrable) continue;
            CHECK(hamiltonian_from_map(linear_flow(h, Coeff(1)), 2).H == h.H);
        }
    }
    SUBCASE("non-symplectic maps are rejected") {
        const PolyVec f{parse_poly("2*q1", 1, kQ), parse_poly("p1", 1, kQ)};
        CHECK_THROWS_AS(hamiltonian_from_map(f, 1), JoltError);
    }
    SUBCASE("inhomogeneous deviations are rejected") {
        // (q + p + p^2, p) is symplectic but X mixes degrees 1 and 2.
        const PolyVec f{parse_poly("q1 + p1 + p1^2", 1, kQ), parse_poly("p1", 1, kQ)};
        CHECK_THROWS_AS(hamiltonian_from_map(f, 1), JoltError);
    }
}

TEST_CASE("split_simple on the counterexample") {
    const SplitResult s = split_simple(counterexample_form());
    CHECK(s.d == 2);
    CHECK(s.H1.H == parse_poly("q1*p3^3 + sqrt(3)*q2*p3^2*p4", 4, kSqrt3));
    CHECK(s.H2.H == parse_poly("p1*p4^3 - sqrt(3)*p2*p3*p4^2", 4, kSqrt3));
    CHECK(s.H3.H == parse_poly("-p3^3*p4^3", 4, kSqrt3));
    CHECK(s.H4.H == parse_poly("p1*p4^3 - sqrt(3)*p2*p3*p4^2 + p3^3*p4^3", 4, kSqrt3));

    // Independent oracle: H3 = 1/2 {H1, H2} by direct Poisson computation.
    CHECK(poisson(s.H1.H, s.H2.H, 4).scale(Coeff(make_rational(1, 2))) == s.H3.H);

    SUBCASE("H3 Poisson-commutes with H1 and H2") {
        CHECK(poisson(s.H1.H, s.H3.H, 4).is_zero());
        CHECK(poisson(s.H2.H, s.H3.H, 4).is_zero());
    }
    SUBCASE("H3 depends only on pbar") {
        for (std::size_t v = 0; v < 6; ++v) CHECK(!s.H3.H.depends_on(v));
    }
    SUBCASE("H1 and H4 are shears") {
        CHECK(is_shear(s.H1).shear);
        CHECK(is_shear(s.H4).shear);
    }
    SUBCASE("factor degree bounds") {
        CHECK(s.H1.H.degree() == s.H0.H.degree());
        CHECK(s.H4.H.degree() <= 2 * s.H0.H.degree() - 2);
    }
}

TEST_CASE("split_simple corner cases") {
    SUBCASE("pure shear: H1 = 0, H4 = K") {
        SimpleForm form;
        form.n = 2;
        form.d = 0;
        form.K = parse_poly("p1^3 + p2^2", 2, kQ);
        form.U = Mat::identity(4);
        const SplitResult s = split_simple(form);
        CHECK(s.H1.H.is_zero());
        CHECK(s.H3.H.is_zero());
        CHECK(s.H4.H == form.K);
    }
    SUBCASE("H = q1 p2^2 as a d = 1 form: V^T W = 0") {
        SimpleForm form;
        form.n = 2;
        form.d = 1;
        form.K = Poly(4);
        form.V = {parse_poly("p2^2", 2, kQ)};
        form.W = {Poly(4)};
        const SplitResult s = split_simple(form);
        CHECK(s.H3.H.is_zero());
        CHECK(s.H4.H.is_zero());
        CHECK(s.H1.H == parse_poly("q1*p2^2", 2, kQ));
    }
    SUBCASE("violated integrability is rejected") {
        SimpleForm form;
        form.n = 2;
        form.d = 1;
        form.K = Poly(4);
        form.V = {parse_poly("p2^2", 2, kQ)};
        form.W = {parse_poly("p2^3", 2, kQ)}; // W dV - V dW = -p2^4 != 0
        CHECK_THROWS_AS(split_simple(form), JoltError);
    }
}

TEST_CASE("BCH identity") {
    const SplitResult s = split_simple(counterexample_form());
    SUBCASE("f = q3 at t = 1") {
        CHECK(verify_bch_identity(s, parse_poly("q3", 4, kSqrt3), Coeff(1)));
    }
    SUBCASE("constant f") {
        CHECK(verify_bch_identity(s, parse_poly("7", 4, kSqrt3)));
    }
    SUBCASE("symbolic t on random linear forms") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 5; ++trial) {
            Poly f(8);
            for (std::size_t v = 0; v < 8; ++v) {
                Monomial m(8, 0);
                m[v] = 1;
                f.add_term(std::move(m), jolt_test::random_coeff(rng, 3));
            }
            CHECK(verify_bch_identity(s, f));
        }
    }
}

TEST_CASE("time-one composition") {
    const SplitResult s = split_simple(counterexample_form());
    CHECK(time_one_composition_check(s));

    SUBCASE("d = 0 case") {
        SimpleForm form;
        form.n = 1;
        form.d = 0;
        form.K = parse_poly("p1^2", 1, kQ);
        form.U = Mat::identity(2);
        CHECK(time_one_composition_check(split_simple(form)));
    }
    SUBCASE("dropping the H3 correction is detected") {
        SplitResult broken = s;
        broken.H4 = broken.H2; // forget the -H3 correction
        CHECK(!time_one_composition_check(broken));
    }
}

TEST_CASE("jolt_factorize") {
    SUBCASE("counterexample time-one map factors exactly") {
        const Hamiltonian h = counterexample();
        const PolyVec f = linear_flow(h, Coeff(1));
        const JoltFactorization jf = jolt_factorize(f, 4);
        REQUIRE(jf.is_exact());
        CHECK(jf.residual == 0.0);
        const auto& factors = *jf.exact;
        CHECK(compose_map(factors.F1, factors.F4) == f);
        CHECK(is_symplectic(factors.F1, 4).ok);
        CHECK(is_symplectic(factors.F4, 4).ok);
        CHECK(is_shear(factors.H1U).shear);
        CHECK(is_shear(factors.H4U).shear);
        // Elementary potentials live on the momentum block only.
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(!factors.h1.depends_on(i));
            CHECK(!factors.h4.depends_on(i));
        }
    }
    SUBCASE("pure shear: F1 = I, F4 = F") {
        // Quartic K so that F - I is homogeneous of degree 3.
        const Hamiltonian k = ham("p1^4 + p1^2*p2^2", 2);
        const PolyVec f = linear_flow(k, Coeff(1));
        const JoltFactorization jf = jolt_factorize(f, 2);
        REQUIRE(jf.is_exact());
        CHECK(jf.exact->F1 == identity_map<Coeff>(4, 4));
        CHECK(jf.exact->F4 == f);
    }
    SUBCASE("degree gate") {
        const Hamiltonian h = ham("p1^3", 1); // F - I has degree 2
        const PolyVec f = linear_flow(h, Coeff(1));
        CHECK_THROWS_AS(jolt_factorize(f, 1), JoltError);
    }
    SUBCASE("float path composes within tolerance") {
        // Scrambled by the exact 3-4-5 rotation: reduction goes numeric.
        Mat s = Mat::identity(4).scale(Coeff(make_rational(3, 5)));
        Mat t = Mat::identity(4).scale(Coeff(make_rational(4, 5)));
        const Hamiltonian h = apply_linear(counterexample(), Unitary{s, t});
        const PolyVec f = linear_flow(h, Coeff(1));
        const JoltFactorization jf = jolt_factorize(f, 4);
        REQUIRE(!jf.is_exact());
        CHECK(jf.residual <= 1e-8);
    }
}
