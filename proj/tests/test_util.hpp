#ifndef JOLT_TEST_UTIL_HPP
#define JOLT_TEST_UTIL_HPP

#include <random>

#include "jolt/poly.hpp"

namespace jolt_test {

using jolt::Coeff;
using jolt::Monomial;
using jolt::Poly;

inline long rand_range(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

inline Coeff random_coeff(std::mt19937_64& rng, long d = 0) {
    const Coeff a(jolt::make_rational(rand_range(rng, -5, 5), rand_range(rng, 1, 4)));
    if (d == 0) return a;
    return a + Coeff(jolt::Rational(0),
                     jolt::make_rational(rand_range(rng, -3, 3), rand_range(rng, 1, 3)), d);
}

inline Poly random_poly(std::mt19937_64& rng, std::size_t nvars, std::size_t max_deg,
                        std::size_t terms, long d = 0) {
    Poly p(nvars);
    for (std::size_t t = 0; t < terms; ++t) {
        Monomial m(nvars, 0);
        std::size_t budget = max_deg;
        for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
            const auto e = static_cast<std::uint32_t>(rng() % (budget + 1));
            m[i] = e;
            budget -= e;
        }
        p.add_term(std::move(m), random_coeff(rng, d));
    }
    return p;
}

} // namespace jolt_test

#endif
