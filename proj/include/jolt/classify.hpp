#ifndef JOLT_CLASSIFY_HPP
#define JOLT_CLASSIFY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "jolt/hamalg.hpp"

namespace jolt {

using ExactPoint = std::vector<Coeff>;

enum class TriState { Yes, No, Unknown };

const char* tristate_name(TriState t);

// Budget for the existential searches. Grid points come first (the fixed
// value set {-2,-1,1,2,3} enumerated lexicographically), then seeded random
// rational points with small numerators and denominators.
struct SampleBudget {
    std::size_t grid_points = 40;
    std::size_t random_points = 200;
    std::uint64_t seed = 20240801;
    long max_numerator = 7;
    long max_denominator = 7;
};

// Deterministic sample stream: grid then random, as configured.
class PointSampler {
  public:
    PointSampler(std::size_t dim, const SampleBudget& budget);

    // nullopt once the budget is exhausted.
    std::optional<ExactPoint> next();

  private:
    std::size_t dim_;
    SampleBudget budget_;
    std::size_t emitted_grid_ = 0;
    std::size_t emitted_random_ = 0;
    std::mt19937_64 rng_;
};

// --- Results with certificates -------------------------------------------

struct AffineIntegrability {
    bool integrable;        // (DX) X == 0 exactly
    PolyVec residual;       // (DX) X
    bool dx_squared_zero;   // (DX)^2 == 0 exactly
    // (DX)X = 0 implies (DX)^2 = 0; the converse can fail for non-homogeneous
    // H (e.g. H = q1 + p1^2), so disagreement here is not by itself a bug.
    bool consistent() const { return integrable == dx_squared_zero || dx_squared_zero; }
};

struct RegularityResult {
    TriState verdict;
    std::optional<ExactPoint> witness;
};

struct PairWitness {
    ExactPoint x, y;
    std::size_t row, col;
    Coeff value; // entry of DX(x) DX(y) at the points, nonzero
};

struct ShearResult {
    bool shear;
    std::optional<PairWitness> witness; // present when shear == false
};

struct TripleWitness {
    ExactPoint x, y, z;
    std::size_t row, col;
    Coeff value;
};

struct TripleNilpotency {
    bool nilpotent;
    std::optional<TripleWitness> witness;
};

struct NondegeneracyResult {
    TriState verdict;
    std::optional<ExactPoint> witness;
    std::size_t rank = 0; // rank of HH at the witness
};

struct ClassificationReport {
    std::size_t n = 0;
    bool symplectic_flow = false;
    bool affine_integrable = false;
    bool ai_consistent = true;
    TriState regular = TriState::Unknown;
    std::optional<ExactPoint> regular_witness;
    TriState nondegenerate = TriState::Unknown;
    std::optional<ExactPoint> nondegenerate_witness;
    std::size_t rank = 0;
    bool shear = false;
    std::optional<PairWitness> shear_witness;
    std::string shear_note; // set when the shear criterion was inapplicable
    bool triple_nilpotent = false;
    std::optional<TripleWitness> triple_witness;
    std::vector<std::size_t> degrees;
    bool homogeneous = false;
};

// --- Decision procedures ---------------------------------------------------

// (DX) X == 0, with the (DX)^2 cross-check.
AffineIntegrability is_affine_integrable(const Hamiltonian& h);

// Is there a point with X(x) in range(DX(x))? Exact consistency of
// DX(x) w = X(x) on sampled points; homogeneous degree >= 2 short-circuits
// through the origin.
RegularityResult is_regular(const Hamiltonian& h, const SampleBudget& budget = {});

// Shear criterion: DX(x) DX(y) == 0 identically over a doubled variable
// block, for regular H. Throws RegularityUnknown when regularity cannot be
// certified. Hamiltonians that never mention q are shears by definition and
// skip the criterion.
ShearResult is_shear(const Hamiltonian& h, const SampleBudget& budget = {});

// DX(x) DX(y) DX(z) == 0 identically over a tripled variable block.
TripleNilpotency is_triple_nilpotent(const Hamiltonian& h, const SampleBudget& budget = {},
                                     std::size_t term_budget = 2'000'000);

// Residual HH(u) J HH(v) J HH(u) over a doubled block (quartic property).
PolyMat hessian_uvu_residual(const Hamiltonian& h);

// rank HH(x) >= n at some sampled point. Never returns No.
NondegeneracyResult is_nondegenerate(const Hamiltonian& h, const SampleBudget& budget = {});

// Symbolic identity X(x + DX(x) w) == X(x) and H(x + DX(x) w) == H(x) in 4n
// variables. Precondition: affine-integrable.
bool affine_subspace_invariance(const Hamiltonian& h);

// Sampled local-level-set check at a rank-n point.
bool local_level_set_check(const Hamiltonian& h, const ExactPoint& x,
                           const SampleBudget& budget = {});

// The three commutation families {d_u H, H}, {d_u d_v H, H}, {d_u H, d_v H}
// over all coordinate directions. Precondition: affine-integrable.
bool commutation_report(const Hamiltonian& h);

ClassificationReport classify_hamiltonian(const Hamiltonian& h, const SampleBudget& budget = {});

// --- Randomized identity testing (--numeric fallback) ----------------------

// Evaluates the polynomial identity at seeded integer points in [-10, 10]^k
// (exact arithmetic at each point). `per_trial_bound` is the Schwartz-Zippel
// failure bound deg/21 for one trial.
struct SampledIdentity {
    bool passed;
    std::size_t trials;
    double per_trial_bound;
};

SampledIdentity is_affine_integrable_sampled(const Hamiltonian& h, std::size_t trials,
                                             std::uint64_t seed);
SampledIdentity is_shear_sampled(const Hamiltonian& h, std::size_t trials, std::uint64_t seed);
SampledIdentity is_triple_nilpotent_sampled(const Hamiltonian& h, std::size_t trials,
                                            std::uint64_t seed);

} // namespace jolt

#endif
