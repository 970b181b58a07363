#ifndef JOLT_FACTORIZE_HPP
#define JOLT_FACTORIZE_HPP

#include "jolt/normalform.hpp"

namespace jolt {

// Recovers H with F = I + J grad H from a symplectic map whose deviation
// X = F - I is homogeneous: H = -1/(m+1) x^T J X(x), verified post hoc.
Hamiltonian hamiltonian_from_map(const PolyVec& f, std::size_t n);

// H0 = H1 + H2 with H1 = Q^T V, H2 = K + P^T W; H3 = 1/2 {H1, H2} (equal to
// 1/2 V^T W) Poisson-commutes with both; H4 = H2 - H3.
struct SplitResult {
    std::size_t n = 0, d = 0;
    Hamiltonian H0, H1, H2, H3, H4;
};

SplitResult split_simple(const SimpleForm& s);

// Both equalities of the Baker-Campbell-Hausdorff identity
//   e^{t[[H0]]} f = e^{t[[H1]]} e^{t[[H2]]} e^{-t^2[[H3]]} f
//                 = e^{t[[H1]]} e^{t[[H2 - t H3]]} f
// on the polynomial f; the first overload keeps t symbolic.
bool verify_bch_identity(const SplitResult& s, const Poly& f);
bool verify_bch_identity(const SplitResult& s, const Poly& f, const Coeff& t);

// Phi^1_{H0} = Phi^1_{H1} o Phi^1_{H4} as canonical polynomial maps.
bool time_one_composition_check(const SplitResult& s);

struct ExactJoltFactors {
    Mat U;              // H o U is in reduced form
    Hamiltonian H1U, H4U; // shear Hamiltonians with F = F1 o F4
    PolyVec F1, F4;
    Poly h1, h4;        // elementary shear potentials H_j(p, p)
};

struct NumericJoltFactors {
    DMat U;
    DHamiltonian H1U, H4U;
    DPolyVec F1, F4;
    DPoly h1, h4;
};

struct JoltFactorization {
    std::size_t n = 0;
    std::optional<ExactJoltFactors> exact;
    std::optional<NumericJoltFactors> numeric;
    double residual = 0.0; // max |coefficient| of F1 o F4 - F; exactly 0 on the exact path
    bool is_exact() const { return exact.has_value(); }
};

// Theorem-1.10 pipeline for symplectic F with F - I homogeneous of degree 3:
// recover H, reduce, split, conjugate back. DegenerateMap when no rank-n
// point is found within the budget.
JoltFactorization jolt_factorize(const PolyVec& f, std::size_t n,
                                 const SampleBudget& budget = {},
                                 const NormalFormTolerances& tol = {});

} // namespace jolt

#endif
