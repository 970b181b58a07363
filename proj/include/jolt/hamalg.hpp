#ifndef JOLT_HAMALG_HPP
#define JOLT_HAMALG_HPP

#include <optional>
#include <utility>

#include "jolt/matrix.hpp"
#include "jolt/poly.hpp"

namespace jolt {

// Variable order is (q1..qn, p1..pn) with J = [[0, I], [-I, 0]], fixed
// globally. Auxiliary blocks (w, y, t) always come after the 2n principal
// variables.
template <class R>
struct HamiltonianT {
    std::size_t n;
    BasicPoly<R> H;

    HamiltonianT(std::size_t n_, BasicPoly<R> h) : n(n_), H(std::move(h)) {
        if (H.nvars() != 2 * n)
            throw JoltError(ErrorCode::ArityMismatch,
                            "Hamiltonian must live in 2n variables");
    }
};

using Hamiltonian = HamiltonianT<Coeff>;
using DHamiltonian = HamiltonianT<double>;

inline DHamiltonian to_dhamiltonian(const Hamiltonian& h) { return {h.n, to_dpoly(h.H)}; }

// Matrix with polynomial entries sharing one variable space.
template <class R>
class PolyMatT {
  public:
    PolyMatT() = default;
    PolyMatT(std::size_t rows, std::size_t cols, std::size_t nvars)
        : rows_(rows), cols_(cols), nvars_(nvars),
          entries_(rows * cols, BasicPoly<R>(nvars)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nvars() const { return nvars_; }

    BasicPoly<R>& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const BasicPoly<R>& operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    PolyMatT operator+(const PolyMatT& o) const {
        check_shape(o);
        PolyMatT r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += o.entries_[i];
        return r;
    }

    PolyMatT operator-(const PolyMatT& o) const {
        check_shape(o);
        PolyMatT r = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] -= o.entries_[i];
        return r;
    }

    PolyMatT operator*(const PolyMatT& o) const {
        if (cols_ != o.rows_ || nvars_ != o.nvars_)
            throw JoltError(ErrorCode::ArityMismatch, "polynomial matrix product mismatch");
        PolyMatT r(rows_, o.cols_, nvars_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const auto& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    if (o(k, j).is_zero()) continue;
                    r(i, j) += a * o(k, j);
                }
            }
        return r;
    }

    PolyMatT transpose() const {
        PolyMatT r(cols_, rows_, nvars_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    std::size_t term_count() const {
        std::size_t t = 0;
        for (const auto& e : entries_) t += e.term_count();
        return t;
    }

    PolyMatT shift_vars(std::size_t offset, std::size_t new_nvars) const {
        PolyMatT r(rows_, cols_, new_nvars);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] = entries_[i].shift_vars(offset, new_nvars);
        return r;
    }

    MatT<R> evaluate(std::span<const R> point) const {
        MatT<R> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).evaluate(point);
        return m;
    }

    static PolyMatT from_const(const MatT<R>& m, std::size_t nvars) {
        PolyMatT r(m.rows(), m.cols(), nvars);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                r(i, j) = BasicPoly<R>::constant(nvars, m(i, j));
        return r;
    }

    bool operator==(const PolyMatT& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

  private:
    void check_shape(const PolyMatT& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || nvars_ != o.nvars_)
            throw JoltError(ErrorCode::ArityMismatch, "polynomial matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0, nvars_ = 0;
    std::vector<BasicPoly<R>> entries_;
};

using PolyMat = PolyMatT<Coeff>;
using DPolyMat = PolyMatT<double>;

// X = J grad H = (dH/dp1..dH/dpn, -dH/dq1..-dH/dqn).
template <class R>
PolyVecT<R> vector_field(const HamiltonianT<R>& h) {
    const std::size_t n = h.n;
    PolyVecT<R> x;
    x.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) x.push_back(h.H.derive(n + i));
    for (std::size_t i = 0; i < n; ++i) x.push_back(-h.H.derive(i));
    return x;
}

template <class R>
PolyMatT<R> jacobian(const PolyVecT<R>& f, std::size_t nvars) {
    PolyMatT<R> j(f.size(), nvars, nvars);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].nvars() != nvars)
            throw JoltError(ErrorCode::ArityMismatch, "jacobian entry variable mismatch");
        for (std::size_t k = 0; k < nvars; ++k) j(i, k) = f[i].derive(k);
    }
    return j;
}

template <class R>
PolyMatT<R> hessian_of(const BasicPoly<R>& f) {
    const std::size_t nv = f.nvars();
    PolyMatT<R> h(nv, nv, nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const auto di = f.derive(i);
        for (std::size_t j = i; j < nv; ++j) {
            h(i, j) = di.derive(j);
            if (j != i) h(j, i) = h(i, j);
        }
    }
    return h;
}

// Blocks of the Hessian HH = [[B, Z], [Z^T, A]]; DX = J HH = [[Z^T, A], [-B, -Z]].
template <class R>
struct HessianBlocksT {
    std::size_t n;
    PolyMatT<R> A, B, Z;

    PolyMatT<R> assemble() const {
        PolyMatT<R> h(2 * n, 2 * n, A.nvars());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                h(i, j) = B(i, j);
                h(i, n + j) = Z(i, j);
                h(n + i, j) = Z(j, i);
                h(n + i, n + j) = A(i, j);
            }
        return h;
    }
};

using HessianBlocks = HessianBlocksT<Coeff>;

template <class R>
HessianBlocksT<R> hessian_blocks(const HamiltonianT<R>& h) {
    const std::size_t n = h.n;
    HessianBlocksT<R> blocks{n, PolyMatT<R>(n, n, 2 * n), PolyMatT<R>(n, n, 2 * n),
                             PolyMatT<R>(n, n, 2 * n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto dqi = h.H.derive(i);
        const auto dpi = h.H.derive(n + i);
        for (std::size_t j = 0; j < n; ++j) {
            blocks.B(i, j) = dqi.derive(j);
            blocks.Z(i, j) = dqi.derive(n + j);
            blocks.A(i, j) = dpi.derive(n + j);
        }
    }
    return blocks;
}

// Numeric blocks at a point.
template <class R>
struct HessianBlocksAtT {
    std::size_t n;
    MatT<R> A, B, Z;

    MatT<R> assemble() const {
        MatT<R> h(2 * n, 2 * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                h(i, j) = B(i, j);
                h(i, n + j) = Z(i, j);
                h(n + i, j) = Z(j, i);
                h(n + i, n + j) = A(i, j);
            }
        return h;
    }
};

template <class R>
HessianBlocksAtT<R> hessian_blocks_at(const HamiltonianT<R>& h, const std::vector<R>& point) {
    const auto blocks = hessian_blocks(h);
    const std::span<const R> pt(point);
    return HessianBlocksAtT<R>{h.n, blocks.A.evaluate(pt), blocks.B.evaluate(pt),
                               blocks.Z.evaluate(pt)};
}

// Poisson bracket over the first 2n variables (extra trailing variables, such
// as a symbolic flow parameter, are treated as constants).
template <class R>
BasicPoly<R> poisson(const BasicPoly<R>& f, const BasicPoly<R>& g, std::size_t n) {
    if (f.nvars() != g.nvars())
        throw JoltError(ErrorCode::ArityMismatch, "poisson operands mix variable spaces");
    if (f.nvars() < 2 * n)
        throw JoltError(ErrorCode::ArityMismatch, "poisson needs at least 2n variables");
    BasicPoly<R> acc(f.nvars());
    for (std::size_t j = 0; j < n; ++j)
        acc += f.derive(j) * g.derive(n + j) - f.derive(n + j) * g.derive(j);
    return acc;
}

// Bracket of quadratic forms x -> 1/2 x^T F x on the matrix level:
// returns E with J E = 1/2 (J F)(J G) - 1/2 (J G)(J F).
Mat quad_bracket(const Mat& fmat, const Mat& gmat);

// The quadratic form 1/2 x^T F x as a polynomial in 2n variables.
Poly quadratic_form(const Mat& fmat);

inline constexpr std::size_t kLieExpDefaultCap = 64;

// exp(t [[H]]) f with [[H]] f = {f, H}; exact, finite by nilpotency.
Poly lie_exp(const Hamiltonian& h, const Poly& f, const Coeff& t,
             std::size_t cap = kLieExpDefaultCap);

// Same with a polynomial time argument tau; f, tau, and the generator all
// live in the same (possibly extended) variable space, brackets over the
// first 2n variables.
Poly lie_exp_sym(std::size_t n, const Poly& generator, const Poly& f, const Poly& tau,
                 std::size_t cap = kLieExpDefaultCap);

// The time-t flow map I + tX.
PolyVec linear_flow(const Hamiltonian& h, const Coeff& t);

// I + tX with t a fresh symbolic variable appended after the principal block.
PolyVec linear_flow_symbolic(const Hamiltonian& h);

struct SymplecticCheck {
    bool ok;
    PolyMat residual; // DF^T J DF - J
};

SymplecticCheck is_symplectic(const PolyVec& f, std::size_t n);

// Unitary = orthogonal + symplectic: U = [[S, T], [-T, S]] with
// S^T S + T^T T = I and S^T T = T^T S.
template <class R>
struct UnitaryT {
    MatT<R> S, T;

    std::size_t n() const { return S.rows(); }

    MatT<R> full() const {
        const std::size_t m = S.rows();
        MatT<R> u(2 * m, 2 * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                u(i, j) = S(i, j);
                u(i, m + j) = T(i, j);
                u(m + i, j) = -T(i, j);
                u(m + i, m + j) = S(i, j);
            }
        return u;
    }

    static UnitaryT identity(std::size_t m) {
        return UnitaryT{MatT<R>::identity(m), MatT<R>(m, m)};
    }

    // Split a 2n x 2n matrix of unitary shape into (S, T); the shape itself
    // is not validated here.
    static UnitaryT from_full(const MatT<R>& u) {
        const std::size_t m = u.rows() / 2;
        UnitaryT r{MatT<R>(m, m), MatT<R>(m, m)};
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                r.S(i, j) = u(i, j);
                r.T(i, j) = u(i, m + j);
            }
        return r;
    }
};

using Unitary = UnitaryT<Coeff>;
using DUnitary = UnitaryT<double>;

bool is_unitary_exact(const Unitary& u);
double unitary_residual(const DUnitary& u);

inline DUnitary to_dunitary(const Unitary& u) { return DUnitary{to_dmat(u.S), to_dmat(u.T)}; }

// H o U for a linear symplectic change of variables U (x_old = U x_new).
// Symplecticity of U is verified: exactly for Coeff, within tol for double.
Hamiltonian apply_linear(const Hamiltonian& h, const Mat& u);
DHamiltonian apply_linear(const DHamiltonian& h, const DMat& u, double tol = 1e-9);

inline Hamiltonian apply_linear(const Hamiltonian& h, const Unitary& u) {
    return apply_linear(h, u.full());
}

// Substitution polynomials (Ux)_i for composing with a linear map.
template <class R>
PolyVecT<R> linear_substitution(const MatT<R>& u) {
    const std::size_t m = u.rows();
    PolyVecT<R> subs;
    subs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        BasicPoly<R> s(u.cols());
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (RingOps<R>::is_zero(u(i, j))) continue;
            Monomial mono(u.cols(), 0);
            mono[j] = 1;
            s.add_term(std::move(mono), u(i, j));
        }
        subs.push_back(std::move(s));
    }
    return subs;
}

// F o G (apply G first). Entries of G share F's variable count.
template <class R>
PolyVecT<R> compose_map(const PolyVecT<R>& f, const PolyVecT<R>& g,
                        std::size_t degree_cap = kDefaultComposeDegreeCap) {
    PolyVecT<R> out;
    out.reserve(f.size());
    for (const auto& fi : f) out.push_back(fi.compose(std::span<const BasicPoly<R>>(g), degree_cap));
    return out;
}

template <class R>
BasicPoly<R> compose(const BasicPoly<R>& p, const PolyVecT<R>& args,
                     std::size_t degree_cap = kDefaultComposeDegreeCap) {
    return p.compose(std::span<const BasicPoly<R>>(args), degree_cap);
}

// The identity map in `nvars` variables restricted to the first `count`.
template <class R>
PolyVecT<R> identity_map(std::size_t count, std::size_t nvars) {
    PolyVecT<R> id;
    id.reserve(count);
    for (std::size_t i = 0; i < count; ++i) id.push_back(BasicPoly<R>::variable(nvars, i));
    return id;
}

} // namespace jolt

#endif
