#ifndef JOLT_CORPUS_HPP
#define JOLT_CORPUS_HPP

#include "jolt/factorize.hpp"

namespace jolt::corpus {

// The quartic flagship example on R^8 over Q(sqrt 3):
//   q1 p3^3 + sqrt(3) q2 p3^2 p4 + p1 p4^3 - sqrt(3) p2 p3 p4^2.
Hamiltonian counterexample_1_4();

// H(q, p) = p^T f(M q) for an m x n matrix M of full rank m and polynomial
// f: R^m -> R^n with M f = 0 (verified exactly).
Hamiltonian trivial_family(const Mat& m, const PolyVec& f);

// The explicit trivializer: T = M^T (M M^T)^{-1} M, S = I - T.
Unitary trivial_family_unitary(const Mat& m);

// The instance used throughout the docs: M = (1, -1), f(s) = (s^2, s^2).
Hamiltonian trivial_example();
Mat trivial_example_matrix();

// K(pbar) + Q^T V(pbar) + P^T W(pbar) with the integrability condition
// verified exactly (IntegrabilityViolated otherwise).
Hamiltonian simple_form(std::size_t n, std::size_t d, const Poly& k, const PolyVec& v,
                        const PolyVec& w);

// Exact signed-permutation unitary: a random index permutation, per-index
// quarter turns, and signs.
Unitary random_signed_permutation_unitary(std::size_t n, std::mt19937_64& rng);

// Haar-ish random float unitary from a complex QR factorization.
DUnitary random_float_unitary(std::size_t n, std::mt19937_64& rng);

// Random homogeneous K(p) of the given degree with small rational
// coefficients (at least one term).
Poly random_momentum_polynomial(std::size_t n, std::size_t degree, std::mt19937_64& rng);

// K(p) shears conjugated by exact signed permutations / float unitaries.
Hamiltonian conjugated_shear(std::size_t n, std::size_t degree, std::uint64_t seed);
DHamiltonian conjugated_shear_float(std::size_t n, std::size_t degree, std::uint64_t seed);

// Random simple-form instance: homogeneous V of degree vw_degree, W solved
// exactly from the linear integrability condition (the solution space always
// contains W = c V; a random nullspace element is taken), K homogeneous of
// degree vw_degree + 1.
struct SimpleFormInstance {
    Hamiltonian h;      // assembled, U = I
    SimpleForm form;
};

SimpleFormInstance random_simple_form(std::size_t n, std::size_t d, std::size_t vw_degree,
                                      std::uint64_t seed);

// The same instance conjugated by a random exact signed-permutation unitary.
Hamiltonian conjugated_simple(std::size_t n, std::size_t d, std::size_t vw_degree,
                              std::uint64_t seed);

// Named entries reachable from the CLI as "corpus:<name>".
std::vector<std::string> names();
Hamiltonian by_name(const std::string& name, std::uint64_t seed);

} // namespace jolt::corpus

#endif
