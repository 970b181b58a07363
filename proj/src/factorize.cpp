#include "jolt/factorize.hpp"

namespace jolt {

namespace {

// Common homogeneity degree of the nonzero components; -1 for the zero map.
long map_homogeneous_degree(const PolyVec& x) {
    long deg = -1;
    for (const auto& xi : x) {
        if (xi.is_zero()) continue;
        if (!xi.is_homogeneous()) return -2;
        if (deg == -1) {
            deg = xi.degree();
        } else if (deg != xi.degree()) {
            return -2;
        }
    }
    return deg;
}

} // namespace

Hamiltonian hamiltonian_from_map(const PolyVec& f, std::size_t n) {
    const std::size_t nv = 2 * n;
    if (f.size() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "map must have 2n components");

    const auto check = is_symplectic(f, n);
    if (!check.ok)
        throw JoltError(ErrorCode::NotSymplectic, "map is not symplectic");

    PolyVec x;
    x.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) x.push_back(f[i] - Poly::variable(nv, i));

    const long m = map_homogeneous_degree(x);
    if (m == -2 || m == 0)
        throw JoltError(ErrorCode::NotHomogeneous,
                        "F - I must be homogeneous of positive degree");
    if (m == -1) return Hamiltonian(n, Poly(nv)); // F = I

    // Euler primitive: H = -1/(m+1) x^T J X = -1/(m+1) sum (q_i X_{n+i} - p_i X_i).
    Poly h(nv);
    for (std::size_t i = 0; i < n; ++i) {
        h += Poly::variable(nv, i) * x[n + i];
        h -= Poly::variable(nv, n + i) * x[i];
    }
    h = h.scale(Coeff(make_rational(-1, m + 1)));

    const Hamiltonian result(n, h);
    if (vector_field(result) != x)
        throw JoltError(ErrorCode::VerificationFailed, "J grad H does not reproduce F - I");
    if (!is_affine_integrable(result).integrable)
        throw JoltError(ErrorCode::VerificationFailed,
                        "recovered Hamiltonian is not affine-integrable");
    return result;
}

SplitResult split_simple(const SimpleForm& s) {
    const std::size_t n = s.n;
    const std::size_t nv = 2 * n;
    for (const auto& r : simple_form_integrability_residual(n, s.d, s.V, s.W))
        if (!r.is_zero())
            throw JoltError(ErrorCode::IntegrabilityViolated,
                            "W^T DV - V^T DW does not vanish on this form");

    Poly h1(nv), h2 = s.K;
    Poly vw(nv);
    for (std::size_t i = 0; i < s.d; ++i) {
        h1 += Poly::variable(nv, i) * s.V[i];
        h2 += Poly::variable(nv, n + i) * s.W[i];
        vw += s.V[i] * s.W[i];
    }
    const Poly h3 = poisson(h1, h2, n).scale(Coeff(make_rational(1, 2)));
    if (h3 != vw.scale(Coeff(make_rational(1, 2))))
        throw JoltError(ErrorCode::Internal, "1/2 {H1, H2} disagrees with 1/2 V^T W");

    return SplitResult{n,
                       s.d,
                       Hamiltonian(n, h1 + h2),
                       Hamiltonian(n, h1),
                       Hamiltonian(n, h2),
                       Hamiltonian(n, h3),
                       Hamiltonian(n, h2 - h3)};
}

// The factor order matches the flow composition Phi_{H0} = Phi_{H1} o
// Phi_{H4}: pulling back f through the composition applies the H1
// exponential first, so the written product acts on f left factor first.
bool verify_bch_identity(const SplitResult& s, const Poly& f) {
    const std::size_t nv = 2 * s.n;
    if (f.nvars() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "f must live in the 2n principal variables");
    const std::size_t ext = nv + 1;
    const Poly fe = f.extend_vars(ext);
    const Poly t = Poly::variable(ext, nv);
    const Poly h0 = s.H0.H.extend_vars(ext);
    const Poly h1 = s.H1.H.extend_vars(ext);
    const Poly h2 = s.H2.H.extend_vars(ext);
    const Poly h3 = s.H3.H.extend_vars(ext);

    const Poly lhs = lie_exp_sym(s.n, h0, fe, t);
    const Poly rhs1 =
        lie_exp_sym(s.n, h3, lie_exp_sym(s.n, h2, lie_exp_sym(s.n, h1, fe, t), t), -(t * t));
    const Poly rhs2 = lie_exp_sym(s.n, h2 - t * h3, lie_exp_sym(s.n, h1, fe, t), t);
    return lhs == rhs1 && lhs == rhs2;
}

bool verify_bch_identity(const SplitResult& s, const Poly& f, const Coeff& t) {
    const std::size_t nv = 2 * s.n;
    if (f.nvars() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "f must live in the 2n principal variables");
    const Poly lhs = lie_exp(s.H0, f, t);
    const Poly rhs1 = lie_exp(s.H3, lie_exp(s.H2, lie_exp(s.H1, f, t), t), -(t * t));
    const Hamiltonian gen2(s.n, s.H2.H - s.H3.H.scale(t));
    const Poly rhs2 = lie_exp(gen2, lie_exp(s.H1, f, t), t);
    return lhs == rhs1 && lhs == rhs2;
}

bool time_one_composition_check(const SplitResult& s) {
    for (const Hamiltonian* h : {&s.H0, &s.H1, &s.H4})
        if (!is_affine_integrable(*h).integrable)
            throw JoltError(ErrorCode::PreconditionViolated,
                            "time_one_composition_check needs affine-integrable H0, H1, H4");
    const PolyVec f0 = linear_flow(s.H0, Coeff(1));
    const PolyVec f1 = linear_flow(s.H1, Coeff(1));
    const PolyVec f4 = linear_flow(s.H4, Coeff(1));
    return compose_map(f1, f4) == f0;
}

namespace {

// q_i := p_i substitution for the elementary shear potential h(p) = H(p, p).
template <class R>
BasicPoly<R> diagonal_restriction(const BasicPoly<R>& h, std::size_t n) {
    PolyVecT<R> subs;
    subs.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) subs.push_back(BasicPoly<R>::variable(2 * n, n + i));
    for (std::size_t i = 0; i < n; ++i) subs.push_back(BasicPoly<R>::variable(2 * n, n + i));
    return compose(h, subs);
}

} // namespace

JoltFactorization jolt_factorize(const PolyVec& f, std::size_t n, const SampleBudget& budget,
                                 const NormalFormTolerances& tol) {
    const std::size_t nv = 2 * n;
    if (f.size() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "map must have 2n components");

    {
        PolyVec x;
        for (std::size_t i = 0; i < nv; ++i) x.push_back(f[i] - Poly::variable(nv, i));
        const long m = map_homogeneous_degree(x);
        if (m != 3)
            throw JoltError(ErrorCode::PreconditionViolated,
                            "jolt factorization needs F - I homogeneous of degree 3");
    }

    const Hamiltonian h = hamiltonian_from_map(f, n);

    SimpleFormResult reduction;
    try {
        reduction = simple_form_reduction(h, budget, tol);
    } catch (const JoltError& e) {
        if (e.code() == ErrorCode::NoRankNPoint)
            throw JoltError(ErrorCode::DegenerateMap,
                            "no rank-n point found; the map is degenerate within the budget");
        throw;
    }

    JoltFactorization result;
    result.n = n;

    if (reduction.is_exact()) {
        const SimpleForm& form = *reduction.exact;
        const SplitResult split = split_simple(form);
        const auto u_inv = exact_inverse(form.U);
        if (!u_inv)
            throw JoltError(ErrorCode::Internal, "reduction returned a singular change of variables");

        ExactJoltFactors factors{
            form.U,
            apply_linear(split.H1, *u_inv),
            apply_linear(split.H4, *u_inv),
            {},
            {},
            diagonal_restriction(split.H1.H, n),
            diagonal_restriction(split.H4.H, n),
        };
        factors.F1 = linear_flow(factors.H1U, Coeff(1));
        factors.F4 = linear_flow(factors.H4U, Coeff(1));
        if (compose_map(factors.F1, factors.F4) != f)
            throw JoltError(ErrorCode::Internal, "exact factorization does not compose to F");
        result.exact = std::move(factors);
        result.residual = 0.0;
        return result;
    }

    // Float route: split the numeric reduced form and verify with tolerances.
    const NumericSimpleForm& form = *reduction.numeric;
    DPoly h1(nv), h2 = form.K, vw(nv);
    for (std::size_t i = 0; i < form.d; ++i) {
        h1 += DPoly::variable(nv, i) * form.V[i];
        h2 += DPoly::variable(nv, n + i) * form.W[i];
        vw += form.V[i] * form.W[i];
    }
    const DPoly h3 = vw.scale(0.5);
    const DHamiltonian h1_ham(n, h1), h4_ham(n, h2 - h3);

    const DMat u_inv = form.U.transpose(); // orthogonal by construction
    NumericJoltFactors factors{
        form.U,
        apply_linear(h1_ham, u_inv, 1e-6),
        apply_linear(h4_ham, u_inv, 1e-6),
        {},
        {},
        diagonal_restriction(h1, n),
        diagonal_restriction(h2 - h3, n),
    };
    const auto flow1 = [&](const DHamiltonian& ham) {
        DPolyVec out;
        const DPolyVec x = vector_field(ham);
        for (std::size_t i = 0; i < nv; ++i) out.push_back(DPoly::variable(nv, i) + x[i]);
        return out;
    };
    factors.F1 = flow1(factors.H1U);
    factors.F4 = flow1(factors.H4U);
    // Expanding F1 o F4 symbolically is prohibitive for dense float maps;
    // the composition is verified pointwise on a seeded sample instead.
    DPolyVec f_num;
    for (std::size_t i = 0; i < nv; ++i) f_num.push_back(to_dpoly(f[i]));
    double residual = 0.0;
    std::mt19937_64 rng(budget.seed ^ 0xfac70ULL);
    for (int sample = 0; sample < 200; ++sample) {
        std::vector<double> x(nv);
        for (auto& c : x)
            c = static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 1000.0;
        std::vector<double> mid(nv), out(nv);
        for (std::size_t i = 0; i < nv; ++i)
            mid[i] = factors.F4[i].evaluate(std::span<const double>(x));
        for (std::size_t i = 0; i < nv; ++i)
            out[i] = factors.F1[i].evaluate(std::span<const double>(mid));
        for (std::size_t i = 0; i < nv; ++i)
            residual = std::max(residual, std::abs(out[i] - f_num[i].evaluate(std::span<const double>(x))));
    }
    result.numeric = std::move(factors);
    result.residual = residual;
    if (residual > 1e-8 * std::max(1.0, max_abs_coeff(to_dpoly(h.H))))
        throw JoltError(ErrorCode::NumericFailure,
                        "float factorization residual exceeds tolerance");
    return result;
}

} // namespace jolt
