#ifndef JOLT_NORMALFORM_HPP
#define JOLT_NORMALFORM_HPP

#include "jolt/classify.hpp"

namespace jolt {

struct NormalFormTolerances {
    double residual = 1e-9;        // acceptance threshold for conjugation residuals
    double rank_rel = 1e-10;       // relative eigenvalue / singular value cutoff
    double asym = 1e-8;            // zeta asymmetry threshold
};

// Lemma-2.3-style normal form of HH(x): unitary U with
// U^T HH(x) U = [[0, 0], [0, A]], A diagonal. Needs HH(x) J HH(x) = 0
// (checked exactly at the exact point).
struct PointwiseNormalForm {
    DUnitary U;
    std::vector<double> eigenvalues; // diagonal of A (length n, zeros padded)
    std::size_t rank = 0;
    double residual = 0.0;
};

PointwiseNormalForm pointwise_normal_form(const Hamiltonian& h, const ExactPoint& x,
                                          const NormalFormTolerances& tol = {});

// Semi-normalization via zeta = Z A^{-1} and theta = arctan(zeta):
// U = [[cos theta, sin theta], [-sin theta, cos theta]].
struct SemiNormalResult {
    DUnitary U;
    DMat zeta, theta;
    double residual_Z = 0.0;
    double residual_B = 0.0;
    bool redundancy_checked = false; // B = Z zeta, meaningful for aff.-integrable H
    double redundancy_residual = 0.0;
};

SemiNormalResult seminormal_at(const Hamiltonian& h, const ExactPoint& x,
                               const NormalFormTolerances& tol = {});
SemiNormalResult seminormal_at(const DHamiltonian& h, const std::vector<double>& x,
                               const NormalFormTolerances& tol = {});

// zeta at a point, exact (throws SingularA when A(x) is singular).
Mat zeta_at_exact(const Hamiltonian& h, const ExactPoint& x);
DMat zeta_at(const DHamiltonian& h, const std::vector<double>& x,
             const NormalFormTolerances& tol = {});

enum class ZetaVerdict { Constant, NonConstant };

struct ZetaScanResult {
    ZetaVerdict verdict;
    DMat zeta;              // value at the base point
    double max_deviation = 0.0;
    std::size_t points_used = 0;
};

// Samples zeta near a valid base point; constancy within tol.residual is
// shear evidence, variation beyond it certifies non-shear (Lemma-2.7 sense).
ZetaScanResult zeta_constancy_scan(const Hamiltonian& h, const SampleBudget& budget = {},
                                   const NormalFormTolerances& tol = {});
ZetaScanResult zeta_constancy_scan(const DHamiltonian& h, const SampleBudget& budget = {},
                                   const NormalFormTolerances& tol = {});

// Constructive conjugation of a shear Hamiltonian to K(p): exact over
// Q(sqrt d) whenever Gram-Schmidt stays in the field, float fallback
// otherwise (exact == false, residual from the float verification).
struct ShearConjugation {
    bool exact = true;
    Unitary U;        // exact path
    Poly K;           // exact path: (H o U)(0, p)
    DUnitary U_num;   // float path
    DPoly K_num;
    double residual = 0.0; // largest |coefficient| of a q-monomial in H o U
};

ShearConjugation shear_conjugator(const Hamiltonian& h, const SampleBudget& budget = {},
                                  const NormalFormTolerances& tol = {});

// Reduced form H o U = K(pbar) + Q^T V(pbar) + P^T W(pbar): Q, P are the
// first d position/momentum coordinates und pbar the trailing n - d momenta.
// K, V, W are stored as polynomials in the full 2n variables that only
// mention the pbar block.
struct SimpleForm {
    std::size_t n = 0, d = 0;
    Poly K;
    PolyVec V, W;
    Mat U; // exact linear symplectic change with H o U in reduced form
};

struct NumericSimpleForm {
    std::size_t n = 0, d = 0;
    DPoly K;
    DPolyVec V, W;
    DMat U;
    double residual = 0.0;               // largest discarded coefficient
    double integrability_residual = 0.0; // float check of W^T DV - V^T DW
    bool integrability_exact = false;    // exact after rational snapping
};

struct SimpleFormResult {
    std::optional<SimpleForm> exact;
    std::optional<NumericSimpleForm> numeric;
    bool is_exact() const { return exact.has_value(); }
};

SimpleFormResult simple_form_reduction(const Hamiltonian& h, const SampleBudget& budget = {},
                                       const NormalFormTolerances& tol = {});

// K + sum Q_i V_i + sum P_i W_i as a Hamiltonian (K, V, W in pbar only).
Hamiltonian assemble_simple_form(std::size_t n, std::size_t d, const Poly& k, const PolyVec& v,
                                 const PolyVec& w);

// W^T DV - V^T DW as polynomials, one entry per pbar direction; all-zero is
// the integrability condition of the reduced form.
PolyVec simple_form_integrability_residual(std::size_t n, std::size_t d, const PolyVec& v,
                                           const PolyVec& w);

// Best-effort rational / quadratic-irrational reconstruction of a double.
std::optional<Coeff> snap_to_field(double value, long field_d, double tol = 1e-9);

} // namespace jolt

#endif
