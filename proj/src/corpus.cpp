#include "jolt/corpus.hpp"

#include <Eigen/Dense>

namespace jolt::corpus {

namespace {

long rand_in(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

Coeff small_rational(std::mt19937_64& rng) {
    long num = rand_in(rng, -5, 5);
    if (num == 0) num = 1;
    return Coeff(make_rational(num, rand_in(rng, 1, 4)));
}

// All monomials of exact total degree `deg` in `k` variables.
void enumerate_monomials(std::size_t k, std::size_t deg, Monomial& current, std::size_t pos,
                         std::size_t remaining, std::vector<Monomial>& out) {
    if (pos + 1 == k) {
        current[pos] = static_cast<std::uint32_t>(remaining);
        out.push_back(current);
        return;
    }
    for (std::size_t e = 0; e <= remaining; ++e) {
        current[pos] = static_cast<std::uint32_t>(e);
        enumerate_monomials(k, deg, current, pos + 1, remaining - e, out);
    }
}

std::vector<Monomial> monomials_of_degree(std::size_t k, std::size_t deg) {
    std::vector<Monomial> out;
    Monomial current(k, 0);
    enumerate_monomials(k, deg, current, 0, deg, out);
    return out;
}

} // namespace

Hamiltonian counterexample_1_4() {
    const FieldSpec field = FieldSpec::quadratic(3);
    return Hamiltonian(
        4, parse_poly("q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2", 4, field));
}

Hamiltonian trivial_family(const Mat& m, const PolyVec& f) {
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    if (f.size() != n)
        throw JoltError(ErrorCode::ArityMismatch, "f must have n component functions");
    for (const auto& fi : f)
        if (fi.nvars() != rows)
            throw JoltError(ErrorCode::ArityMismatch, "components of f live in m variables");
    if (rows > n || exact_rank(m) != rows)
        throw JoltError(ErrorCode::PreconditionViolated, "M must have full rank m <= n");

    // M f = 0, exactly.
    for (std::size_t i = 0; i < rows; ++i) {
        Poly acc(rows);
        for (std::size_t k = 0; k < n; ++k) acc += f[k].scale(m(i, k));
        if (!acc.is_zero())
            throw JoltError(ErrorCode::PreconditionViolated, "M f != 0");
    }

    // H(q, p) = sum_i p_i f_i(M q).
    const std::size_t nv = 2 * n;
    PolyVec args;
    args.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Poly s(nv);
        for (std::size_t k = 0; k < n; ++k) {
            if (m(i, k).is_zero()) continue;
            Monomial mono(nv, 0);
            mono[k] = 1;
            s.add_term(std::move(mono), m(i, k));
        }
        args.push_back(std::move(s));
    }
    Poly h(nv);
    for (std::size_t i = 0; i < n; ++i)
        h += Poly::variable(nv, n + i) * compose(f[i], args);
    return Hamiltonian(n, h);
}

Unitary trivial_family_unitary(const Mat& m) {
    const std::size_t n = m.cols();
    const auto gram_inv = exact_inverse(m * m.transpose());
    if (!gram_inv)
        throw JoltError(ErrorCode::PreconditionViolated, "M M^T must be invertible");
    const Mat t = m.transpose() * *gram_inv * m;
    const Mat s = Mat::identity(n) - t;
    const Unitary u{s, t};
    if (!is_unitary_exact(u))
        throw JoltError(ErrorCode::Internal, "projection construction failed to be unitary");
    return u;
}

Mat trivial_example_matrix() {
    Mat m(1, 2);
    m(0, 0) = Coeff(1);
    m(0, 1) = Coeff(-1);
    return m;
}

Hamiltonian trivial_example() {
    const Poly s_sq = Poly::variable(1, 0).pow(2);
    return trivial_family(trivial_example_matrix(), PolyVec{s_sq, s_sq});
}

Hamiltonian simple_form(std::size_t n, std::size_t d, const Poly& k, const PolyVec& v,
                        const PolyVec& w) {
    for (const auto& r : simple_form_integrability_residual(n, d, v, w))
        if (!r.is_zero())
            throw JoltError(ErrorCode::IntegrabilityViolated,
                            "W^T DV - V^T DW does not vanish for this data");
    return assemble_simple_form(n, d, k, v, w);
}

Unitary random_signed_permutation_unitary(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng() % i)]);

    Mat s(n, n), t(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = perm[i];
        const Coeff sign = (rng() & 1) ? Coeff(1) : Coeff(-1);
        if (rng() & 1) {
            t(j, i) = sign; // quarter turn on this pair
        } else {
            s(j, i) = sign;
        }
    }
    const Unitary u{s, t};
    if (!is_unitary_exact(u))
        throw JoltError(ErrorCode::Internal, "signed permutation failed the unitary check");
    return u;
}

DUnitary random_float_unitary(std::size_t n, std::mt19937_64& rng) {
    const auto uniform = [&rng]() {
        return static_cast<double>(static_cast<long>(rng() % 2000001) - 1000000) / 1000000.0;
    };
    Eigen::MatrixXcd g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::complex<double>(uniform(), uniform());
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    // Fix the phase so the factorization is unique-ish and reproducible.
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < n; ++j) {
        const auto rjj = r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        if (std::abs(rjj) > 0)
            q.col(static_cast<Eigen::Index>(j)) *= rjj / std::abs(rjj);
    }
    DMat s(n, n), t(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto z = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            s(i, j) = z.real();
            t(i, j) = z.imag();
        }
    return DUnitary{s, t};
}

Poly random_momentum_polynomial(std::size_t n, std::size_t degree, std::mt19937_64& rng) {
    const std::size_t nv = 2 * n;
    const auto monos = monomials_of_degree(n, degree);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Poly k(nv);
        for (const auto& mono : monos) {
            if (rng() % 3 == 0) continue; // keep it sparse-ish
            Monomial full(nv, 0);
            for (std::size_t i = 0; i < n; ++i) full[n + i] = mono[i];
            k.add_term(std::move(full), small_rational(rng));
        }
        if (k.is_zero()) continue;
        // Keep only K whose momentum Hessian is nonsingular somewhere, so
        // the zeta machinery has valid points to work with.
        const Hamiltonian ham(n, k);
        const auto blocks = hessian_blocks(ham);
        bool invertible = false;
        for (long probe = 1; probe <= 8 && !invertible; ++probe) {
            ExactPoint x(nv, Coeff(0));
            for (std::size_t i = 0; i < n; ++i)
                x[n + i] = Coeff(rand_in(rng, -5, 5));
            if (exact_rank(blocks.A.evaluate(std::span<const Coeff>(x))) == n) invertible = true;
        }
        if (invertible) return k;
    }
    throw JoltError(ErrorCode::Internal,
                    "failed to draw a momentum polynomial with invertible Hessian");
}

Hamiltonian conjugated_shear(std::size_t n, std::size_t degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Poly k = random_momentum_polynomial(n, degree, rng);
    const Unitary u = random_signed_permutation_unitary(n, rng);
    return apply_linear(Hamiltonian(n, k), u);
}

DHamiltonian conjugated_shear_float(std::size_t n, std::size_t degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Poly k = random_momentum_polynomial(n, degree, rng);
    const DUnitary u = random_float_unitary(n, rng);
    return apply_linear(DHamiltonian(n, to_dpoly(k)), u.full());
}

SimpleFormInstance random_simple_form(std::size_t n, std::size_t d, std::size_t vw_degree,
                                      std::uint64_t seed) {
    if (d >= n)
        throw JoltError(ErrorCode::ArityMismatch, "simple form needs d < n");
    std::mt19937_64 rng(seed);
    const std::size_t nv = 2 * n;
    const std::size_t nb = n - d;
    const auto monos = monomials_of_degree(nb, vw_degree);
    const std::size_t mcount = monos.size();

    const auto pbar_mono = [&](const Monomial& m) {
        Monomial full(nv, 0);
        for (std::size_t i = 0; i < nb; ++i) full[n + d + i] = m[i];
        return full;
    };

    // Random V over the degree-vw_degree monomials in pbar.
    PolyVec v;
    for (std::size_t i = 0; i < d; ++i) {
        Poly vi(nv);
        for (const auto& m : monos) {
            if (rng() % 2 == 0) continue;
            vi.add_term(pbar_mono(m), small_rational(rng));
        }
        if (vi.is_zero()) vi.add_term(pbar_mono(monos[rng() % mcount]), small_rational(rng));
        v.push_back(std::move(vi));
    }

    // Solve W^T DV - V^T DW = 0 for the coefficients of W, exactly. The
    // unknown order is (component i, monomial index a).
    std::map<std::pair<std::size_t, Monomial>, std::size_t> row_index;
    std::vector<std::vector<Coeff>> row_data;
    const auto row_of = [&](std::size_t j, const Monomial& m) {
        const auto key = std::make_pair(j, m);
        auto it = row_index.find(key);
        if (it == row_index.end()) {
            it = row_index.emplace(key, row_data.size()).first;
            row_data.emplace_back(d * mcount, Coeff(0));
        }
        return it->second;
    };
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t a = 0; a < mcount; ++a) {
            Poly wia(nv);
            wia.add_term(pbar_mono(monos[a]), Coeff(1));
            // Contribution of W_{i,a} to residual_j = W_i d_j V_i - V_i d_j W_i.
            for (std::size_t j = 0; j < nb; ++j) {
                const std::size_t var = n + d + j;
                const Poly contrib = wia * v[i].derive(var) - v[i] * wia.derive(var);
                for (const auto& [m, c] : contrib.terms())
                    row_data[row_of(j, m)][i * mcount + a] = c;
            }
        }
    }
    Mat a_mat(row_data.size(), d * mcount);
    for (std::size_t r = 0; r < row_data.size(); ++r)
        for (std::size_t c = 0; c < d * mcount; ++c) a_mat(r, c) = row_data[r][c];
    const auto nullspace = exact_nullspace(a_mat);
    if (nullspace.empty())
        throw JoltError(ErrorCode::Internal, "integrability system lost the W = cV solution");

    std::vector<Coeff> w_coeffs;
    bool nonzero = false;
    while (!nonzero) {
        w_coeffs.assign(d * mcount, Coeff(0));
        for (std::size_t b = 0; b < nullspace.size(); ++b) {
            const Coeff c(rand_in(rng, -3, 3));
            for (std::size_t k = 0; k < w_coeffs.size(); ++k)
                w_coeffs[k] += c * nullspace[b][k];
        }
        for (const auto& c : w_coeffs)
            if (!c.is_zero()) nonzero = true;
    }
    PolyVec w;
    for (std::size_t i = 0; i < d; ++i) {
        Poly wi(nv);
        for (std::size_t a = 0; a < mcount; ++a)
            wi.add_term(pbar_mono(monos[a]), w_coeffs[i * mcount + a]);
        w.push_back(std::move(wi));
    }

    // Homogeneous K one degree up.
    Poly k(nv);
    for (const auto& m : monomials_of_degree(nb, vw_degree + 1)) {
        if (rng() % 2 == 0) continue;
        k.add_term(pbar_mono(m), small_rational(rng));
    }

    SimpleFormInstance instance{simple_form(n, d, k, v, w), SimpleForm{}};
    instance.form.n = n;
    instance.form.d = d;
    instance.form.K = k;
    instance.form.V = v;
    instance.form.W = w;
    instance.form.U = Mat::identity(nv);
    if (!is_affine_integrable(instance.h).integrable)
        throw JoltError(ErrorCode::Internal, "generated simple form is not affine-integrable");
    return instance;
}

Hamiltonian conjugated_simple(std::size_t n, std::size_t d, std::size_t vw_degree,
                              std::uint64_t seed) {
    const SimpleFormInstance instance = random_simple_form(n, d, vw_degree, seed);
    std::mt19937_64 rng(seed ^ 0xc0417ULL);
    const Unitary u = random_signed_permutation_unitary(n, rng);
    return apply_linear(instance.h, u);
}

std::vector<std::string> names() {
    return {"counterexample_1_4", "trivial_example", "cubic_shear",
            "simple_form_d1",     "conjugated_shear", "conjugated_simple"};
}

Hamiltonian by_name(const std::string& name, std::uint64_t seed) {
    if (name == "counterexample_1_4") return counterexample_1_4();
    if (name == "trivial_example") return trivial_example();
    if (name == "cubic_shear") {
        const FieldSpec q = FieldSpec::rational();
        return Hamiltonian(2, parse_poly("p1^3 + 2*p1*p2^2 - p2^3", 2, q));
    }
    if (name == "simple_form_d1") {
        const std::size_t nv = 4;
        const Poly p2sq = Poly::variable(nv, 3).pow(2);
        const Poly k = Poly::variable(nv, 3).pow(3);
        return simple_form(2, 1, k, {p2sq}, {p2sq.scale(Coeff(2))});
    }
    if (name == "conjugated_shear") return conjugated_shear(2, 3, seed);
    if (name == "conjugated_simple") return conjugated_simple(3, 1, 3, seed);
    throw JoltError(ErrorCode::Parse, "unknown corpus entry '" + name + "'");
}

} // namespace jolt::corpus
