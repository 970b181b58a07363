#include "jolt/hamalg.hpp"

namespace jolt {

namespace {

void require_symmetric(const Mat& m, const char* what) {
    if (m.rows() != m.cols())
        throw JoltError(ErrorCode::ArityMismatch, std::string(what) + " must be square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i))
                throw JoltError(ErrorCode::ArityMismatch, std::string(what) + " must be symmetric");
}

} // namespace

Mat quad_bracket(const Mat& fmat, const Mat& gmat) {
    require_symmetric(fmat, "quad_bracket F");
    require_symmetric(gmat, "quad_bracket G");
    if (fmat.rows() != gmat.rows() || fmat.rows() % 2 != 0)
        throw JoltError(ErrorCode::ArityMismatch, "quad_bracket needs equal 2n x 2n inputs");
    const std::size_t n = fmat.rows() / 2;
    const Mat j = Mat::symplectic_j(n);
    // E = F J G - G J F, so that 1/2 x^T E x = {1/2 x^T F x, 1/2 x^T G x}.
    const Mat e = fmat * j * gmat - gmat * j * fmat;
    require_symmetric(e, "quad_bracket result");
    return e;
}

Poly quadratic_form(const Mat& fmat) {
    require_symmetric(fmat, "quadratic form matrix");
    const std::size_t nv = fmat.rows();
    const Coeff half = Coeff(make_rational(1, 2));
    Poly p(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            if (fmat(i, j).is_zero()) continue;
            Monomial m(nv, 0);
            m[i] += 1;
            m[j] += 1;
            p.add_term(std::move(m), half * fmat(i, j));
        }
    }
    return p;
}

Poly lie_exp(const Hamiltonian& h, const Poly& f, const Coeff& t, std::size_t cap) {
    if (f.nvars() != 2 * h.n)
        throw JoltError(ErrorCode::ArityMismatch, "lie_exp argument variable mismatch");
    Poly acc = f;
    Poly bracket = f;
    Coeff tk(1);
    for (std::size_t k = 1; k <= cap; ++k) {
        bracket = poisson(bracket, h.H, h.n);
        if (bracket.is_zero()) return acc;
        tk = tk * t;
        acc += bracket.scale(tk * RingOps<Coeff>::inv_factorial(k));
    }
    throw JoltError(ErrorCode::NonNilpotent,
                    "adjoint of H not nilpotent on f within " + std::to_string(cap) +
                        " iterations");
}

Poly lie_exp_sym(std::size_t n, const Poly& generator, const Poly& f, const Poly& tau,
                 std::size_t cap) {
    if (generator.nvars() != f.nvars() || tau.nvars() != f.nvars())
        throw JoltError(ErrorCode::ArityMismatch, "lie_exp_sym operands mix variable spaces");
    Poly acc = f;
    Poly bracket = f;
    Poly tk = Poly::constant(f.nvars(), Coeff(1));
    for (std::size_t k = 1; k <= cap; ++k) {
        bracket = poisson(bracket, generator, n);
        if (bracket.is_zero()) return acc;
        tk *= tau;
        acc += (tk * bracket).scale(RingOps<Coeff>::inv_factorial(k));
    }
    throw JoltError(ErrorCode::NonNilpotent,
                    "adjoint of H not nilpotent on f within " + std::to_string(cap) +
                        " iterations");
}

PolyVec linear_flow(const Hamiltonian& h, const Coeff& t) {
    const std::size_t nv = 2 * h.n;
    PolyVec x = vector_field(h);
    PolyVec out;
    out.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i)
        out.push_back(Poly::variable(nv, i) + x[i].scale(t));
    return out;
}

PolyVec linear_flow_symbolic(const Hamiltonian& h) {
    const std::size_t nv = 2 * h.n;
    const std::size_t ext = nv + 1;
    const Poly t = Poly::variable(ext, nv);
    PolyVec x = vector_field(h);
    PolyVec out;
    out.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i)
        out.push_back(Poly::variable(ext, i) + t * x[i].extend_vars(ext));
    return out;
}

SymplecticCheck is_symplectic(const PolyVec& f, std::size_t n) {
    const std::size_t nv = 2 * n;
    if (f.size() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "map must have 2n components");
    const PolyMat df = jacobian(f, nv);
    const PolyMat j = PolyMat::from_const(Mat::symplectic_j(n), nv);
    PolyMat residual = df.transpose() * j * df - j;
    return SymplecticCheck{residual.is_zero(), std::move(residual)};
}

bool is_unitary_exact(const Unitary& u) {
    const std::size_t m = u.S.rows();
    const Mat sts_ttt = u.S.transpose() * u.S + u.T.transpose() * u.T;
    const Mat st = u.S.transpose() * u.T;
    const Mat ts = u.T.transpose() * u.S;
    return sts_ttt == Mat::identity(m) && st == ts;
}

double unitary_residual(const DUnitary& u) {
    const std::size_t m = u.S.rows();
    const DMat sts_ttt = u.S.transpose() * u.S + u.T.transpose() * u.T;
    const DMat st = u.S.transpose() * u.T;
    const DMat ts = u.T.transpose() * u.S;
    return std::max(max_abs(sts_ttt - DMat::identity(m)), max_abs(st - ts));
}

Hamiltonian apply_linear(const Hamiltonian& h, const Mat& u) {
    const std::size_t nv = 2 * h.n;
    if (u.rows() != nv || u.cols() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "change of variables must be 2n x 2n");
    const Mat j = Mat::symplectic_j(h.n);
    if (!(u.transpose() * j * u == j))
        throw JoltError(ErrorCode::NotSymplectic, "change of variables is not symplectic");
    return Hamiltonian(h.n, compose(h.H, linear_substitution(u)));
}

DHamiltonian apply_linear(const DHamiltonian& h, const DMat& u, double tol) {
    const std::size_t nv = 2 * h.n;
    if (u.rows() != nv || u.cols() != nv)
        throw JoltError(ErrorCode::ArityMismatch, "change of variables must be 2n x 2n");
    const DMat j = to_dmat(Mat::symplectic_j(h.n));
    if (max_abs(u.transpose() * j * u - j) > tol)
        throw JoltError(ErrorCode::NotSymplectic, "change of variables is not symplectic");
    return DHamiltonian(h.n, compose(h.H, linear_substitution(u)));
}

} // namespace jolt
