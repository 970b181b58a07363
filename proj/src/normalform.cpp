#include "jolt/normalform.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace jolt {

namespace {

Eigen::MatrixXd to_eig(const DMat& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

DMat from_eig(const Eigen::MatrixXd& e) {
    DMat m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

long field_radicand(const Poly& p) {
    for (const auto& [m, c] : p.terms())
        if (c.d() != 0) return c.d();
    return 0;
}

// Sign convention: first component above the cutoff is positive.
void normalize_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-10) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

// Extends orthonormal vectors u_1..u_d satisfying u_i _|_ J u_j into a full
// set of n such vectors (dimension 2n).
std::vector<Eigen::VectorXd> complete_pairs(std::vector<Eigen::VectorXd> us,
                                            const Eigen::MatrixXd& j) {
    const std::size_t nv = static_cast<std::size_t>(j.rows());
    const std::size_t n = nv / 2;
    for (std::size_t k = 0; k < nv && us.size() < n; ++k) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
        w(static_cast<Eigen::Index>(k)) = 1.0;
        for (const auto& u : us) {
            w -= u.dot(w) * u;
            const Eigen::VectorXd ju = j * u;
            w -= ju.dot(w) * ju;
        }
        if (w.norm() > 1e-8) {
            w.normalize();
            us.push_back(w);
        }
    }
    if (us.size() != n)
        throw JoltError(ErrorCode::NumericFailure, "failed to complete a unitary basis");
    return us;
}

DUnitary unitary_from_us(const std::vector<Eigen::VectorXd>& us, const Eigen::MatrixXd& j) {
    const std::size_t n = us.size();
    Eigen::MatrixXd full(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        full.col(static_cast<Eigen::Index>(i)) = j * us[i];
        full.col(static_cast<Eigen::Index>(n + i)) = us[i];
    }
    return DUnitary::from_full(from_eig(full));
}

} // namespace

PointwiseNormalForm pointwise_normal_form(const Hamiltonian& h, const ExactPoint& x,
                                          const NormalFormTolerances& tol) {
    const std::size_t n = h.n;
    const Mat hh = hessian_blocks_at(h, x).assemble();
    const Mat j_exact = Mat::symplectic_j(n);
    if (!(hh * j_exact * hh).is_zero())
        throw JoltError(ErrorCode::PreconditionMJM,
                        "HH(x) J HH(x) != 0; H is not affine-integrable at this point");

    const Eigen::MatrixXd m = to_eig(to_dmat(hh));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw JoltError(ErrorCode::NumericFailure, "eigensolver did not converge");

    const double lambda_max = es.eigenvalues().cwiseAbs().maxCoeff();
    const double cutoff = tol.rank_rel * std::max(lambda_max, 1.0);
    std::vector<std::pair<double, Eigen::VectorXd>> nonzero;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i)) > cutoff) {
            Eigen::VectorXd v = es.eigenvectors().col(i);
            normalize_sign(v);
            nonzero.emplace_back(es.eigenvalues()(i), std::move(v));
        }
    }
    std::sort(nonzero.begin(), nonzero.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (nonzero.size() > n)
        throw JoltError(ErrorCode::NumericFailure, "more than n nonzero eigenvalues under MJM = 0");

    const Eigen::MatrixXd j = to_eig(to_dmat(j_exact));
    std::vector<Eigen::VectorXd> us;
    us.reserve(n);
    for (auto& [lambda, v] : nonzero) us.push_back(v);
    us = complete_pairs(std::move(us), j);

    PointwiseNormalForm result;
    result.U = unitary_from_us(us, j);
    result.rank = nonzero.size();
    result.eigenvalues.assign(n, 0.0);
    for (std::size_t i = 0; i < nonzero.size(); ++i) result.eigenvalues[i] = nonzero[i].first;

    // Verify U^T HH U = [[0,0],[0,A]] and the unitary structure.
    const Eigen::MatrixXd ufull = to_eig(result.U.full());
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        target(static_cast<Eigen::Index>(n + i), static_cast<Eigen::Index>(n + i)) =
            result.eigenvalues[i];
    const double r1 = (ufull.transpose() * m * ufull - target).cwiseAbs().maxCoeff();
    result.residual = std::max(r1, unitary_residual(result.U));
    if (result.residual > std::max(tol.residual, 1e-7 * std::max(lambda_max, 1.0)))
        throw JoltError(ErrorCode::NumericFailure, "normal form verification residual too large");
    return result;
}

namespace {

SemiNormalResult seminormal_core(std::size_t n, const DMat& a, const DMat& b, const DMat& z,
                                 const NormalFormTolerances& tol, bool redundancy) {
    const Eigen::MatrixXd ae = to_eig(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ae);
    const double sv_max = svd.singularValues().maxCoeff();
    const double sv_min = svd.singularValues().minCoeff();
    if (sv_max == 0.0 || sv_min < 1e-10 * sv_max)
        throw JoltError(ErrorCode::SingularA, "A(x) is singular at the requested point");

    const Eigen::MatrixXd ze = to_eig(z);
    // zeta = Z A^{-1}, then symmetrized; asymmetry beyond tolerance flags a
    // point where H cannot be affine-integrable.
    const Eigen::MatrixXd zeta_raw = ae.transpose().fullPivLu().solve(ze.transpose()).transpose();
    const double asym = (zeta_raw - zeta_raw.transpose()).cwiseAbs().maxCoeff();
    const double zeta_scale = std::max(zeta_raw.cwiseAbs().maxCoeff(), 1.0);
    if (asym > tol.asym * zeta_scale)
        throw JoltError(ErrorCode::AsymmetricZeta,
                        "zeta is not symmetric; H is not affine-integrable at this point");
    const Eigen::MatrixXd zeta = 0.5 * (zeta_raw + zeta_raw.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zeta);
    if (es.info() != Eigen::Success)
        throw JoltError(ErrorCode::NumericFailure, "eigensolver did not converge on zeta");
    Eigen::VectorXd theta_vals(es.eigenvalues().size());
    Eigen::VectorXd s_vals(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        theta_vals(i) = std::atan(lam);
        s_vals(i) = 1.0 / std::sqrt(1.0 + lam * lam);
    }
    const Eigen::MatrixXd q = es.eigenvectors();
    const Eigen::MatrixXd theta = q * theta_vals.asDiagonal() * q.transpose();
    const Eigen::MatrixXd s = q * s_vals.asDiagonal() * q.transpose(); // cos(theta)
    const Eigen::MatrixXd t = zeta * s;                                // sin(theta)

    SemiNormalResult result;
    result.U = DUnitary{from_eig(s), from_eig(t)};
    result.zeta = from_eig(zeta);
    result.theta = from_eig(theta);

    // Conjugate the full Hessian and read the off-blocks.
    const Eigen::Index ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd hh(2 * ni, 2 * ni);
    const Eigen::MatrixXd be = to_eig(b);
    hh.topLeftCorner(ni, ni) = be;
    hh.topRightCorner(ni, ni) = ze;
    hh.bottomLeftCorner(ni, ni) = ze.transpose();
    hh.bottomRightCorner(ni, ni) = ae;
    const Eigen::MatrixXd u = to_eig(result.U.full());
    const Eigen::MatrixXd r = u.transpose() * hh * u;
    result.residual_B = r.topLeftCorner(ni, ni).cwiseAbs().maxCoeff();
    result.residual_Z = std::max(r.topRightCorner(ni, ni).cwiseAbs().maxCoeff(),
                                 r.bottomLeftCorner(ni, ni).cwiseAbs().maxCoeff());
    if (redundancy) {
        result.redundancy_checked = true;
        result.redundancy_residual = (be - ze * zeta).cwiseAbs().maxCoeff();
    }
    return result;
}

} // namespace

SemiNormalResult seminormal_at(const Hamiltonian& h, const ExactPoint& x,
                               const NormalFormTolerances& tol) {
    const auto blocks = hessian_blocks_at(h, x);
    const bool ai = is_affine_integrable(h).integrable;
    return seminormal_core(h.n, to_dmat(blocks.A), to_dmat(blocks.B), to_dmat(blocks.Z), tol, ai);
}

SemiNormalResult seminormal_at(const DHamiltonian& h, const std::vector<double>& x,
                               const NormalFormTolerances& tol) {
    const auto blocks = hessian_blocks_at(h, x);
    return seminormal_core(h.n, blocks.A, blocks.B, blocks.Z, tol, false);
}

Mat zeta_at_exact(const Hamiltonian& h, const ExactPoint& x) {
    const auto blocks = hessian_blocks_at(h, x);
    const auto inv = exact_inverse(blocks.A);
    if (!inv) throw JoltError(ErrorCode::SingularA, "A(x) is singular at the requested point");
    return blocks.Z * *inv;
}

DMat zeta_at(const DHamiltonian& h, const std::vector<double>& x,
             const NormalFormTolerances& tol) {
    const auto blocks = hessian_blocks_at(h, x);
    const Eigen::MatrixXd ae = to_eig(blocks.A);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ae);
    const double sv_max = svd.singularValues().maxCoeff();
    if (sv_max == 0.0 || svd.singularValues().minCoeff() < tol.rank_rel * sv_max)
        throw JoltError(ErrorCode::SingularA, "A(x) is singular at the requested point");
    const Eigen::MatrixXd zeta =
        ae.transpose().fullPivLu().solve(to_eig(blocks.Z).transpose()).transpose();
    return from_eig(zeta);
}

namespace {

template <class R>
std::vector<double> to_double_point(const std::vector<R>& p) {
    std::vector<double> d;
    d.reserve(p.size());
    for (const auto& c : p) {
        if constexpr (std::is_same_v<R, Coeff>) {
            d.push_back(c.to_double());
        } else {
            d.push_back(c);
        }
    }
    return d;
}

ZetaScanResult zeta_scan_impl(const DHamiltonian& hd, const SampleBudget& budget,
                              const NormalFormTolerances& tol) {
    const std::size_t nv = 2 * hd.n;

    // Base point: first sample with nonsingular A(x).
    PointSampler sampler(nv, budget);
    std::optional<std::vector<double>> base;
    DMat zeta0;
    while (auto pt = sampler.next()) {
        const auto xd = to_double_point(*pt);
        try {
            zeta0 = zeta_at(hd, xd, tol);
            base = xd;
            break;
        } catch (const JoltError& e) {
            if (e.code() != ErrorCode::SingularA) throw;
        }
    }
    if (!base)
        throw JoltError(ErrorCode::NoValidPoint,
                        "no sample point with nonsingular A(x) within the budget");

    // Perturb around the base point and watch zeta.
    std::mt19937_64 rng(budget.seed ^ 0x5eedULL);
    ZetaScanResult result{ZetaVerdict::Constant, zeta0, 0.0, 1};
    std::size_t valid = 0;
    for (std::size_t attempt = 0; attempt < 48 && valid < 12; ++attempt) {
        std::vector<double> y = *base;
        for (auto& c : y)
            c += static_cast<double>(static_cast<long>(rng() % 9) - 4) / 8.0;
        try {
            const DMat zeta_y = zeta_at(hd, y, tol);
            ++valid;
            double dev = 0.0;
            for (std::size_t i = 0; i < zeta_y.rows(); ++i)
                for (std::size_t j = 0; j < zeta_y.cols(); ++j)
                    dev = std::max(dev, std::abs(zeta_y(i, j) - zeta0(i, j)));
            result.max_deviation = std::max(result.max_deviation, dev);
        } catch (const JoltError& e) {
            if (e.code() != ErrorCode::SingularA) throw;
        }
    }
    result.points_used = valid + 1;
    if (valid == 0)
        throw JoltError(ErrorCode::NoValidPoint, "no valid neighborhood samples for the zeta scan");
    result.verdict =
        result.max_deviation <= tol.residual ? ZetaVerdict::Constant : ZetaVerdict::NonConstant;
    return result;
}

} // namespace

ZetaScanResult zeta_constancy_scan(const Hamiltonian& h, const SampleBudget& budget,
                                   const NormalFormTolerances& tol) {
    return zeta_scan_impl(to_dhamiltonian(h), budget, tol);
}

ZetaScanResult zeta_constancy_scan(const DHamiltonian& h, const SampleBudget& budget,
                                   const NormalFormTolerances& tol) {
    return zeta_scan_impl(h, budget, tol);
}

// --- Shear conjugation ------------------------------------------------

namespace {

// Coefficient vectors of the columns of the symbolic Hessian: their span is
// the span of all HH(y) z.
std::vector<std::vector<Coeff>> hessian_column_vectors(const PolyMat& hess) {
    const std::size_t nv = hess.rows();
    std::vector<std::vector<Coeff>> vecs;
    for (std::size_t j = 0; j < nv; ++j) {
        std::map<Monomial, std::vector<Coeff>, GrlexLess> rows;
        for (std::size_t i = 0; i < nv; ++i) {
            for (const auto& [m, c] : hess(i, j).terms()) {
                auto it = rows.try_emplace(m, std::vector<Coeff>(nv, Coeff(0))).first;
                it->second[i] = c;
            }
        }
        for (auto& [m, v] : rows) vecs.push_back(std::move(v));
    }
    return vecs;
}

std::optional<Unitary> exact_unitary_from_span(const std::vector<std::vector<Coeff>>& span_basis,
                                               std::size_t n, long field_d) {
    auto on = exact_orthonormalize(span_basis, field_d);
    if (!on) return std::nullopt;
    std::vector<std::vector<Coeff>> us = *on;
    const std::size_t nv = 2 * n;
    const Mat j = Mat::symplectic_j(n);

    const auto apply_j = [&](const std::vector<Coeff>& v) { return j * v; };
    for (std::size_t k = 0; k < nv && us.size() < n; ++k) {
        std::vector<Coeff> w(nv, Coeff(0));
        w[k] = Coeff(1);
        for (const auto& u : us) {
            const auto ju = apply_j(u);
            const Coeff cu = dot(w, u);
            const Coeff cju = dot(w, ju);
            for (std::size_t i = 0; i < nv; ++i) w[i] = w[i] - cu * u[i] - cju * ju[i];
        }
        bool zero = true;
        for (const auto& c : w)
            if (!c.is_zero()) {
                zero = false;
                break;
            }
        if (zero) continue;
        const auto norm = coeff_sqrt(dot(w, w), field_d);
        if (!norm) return std::nullopt; // square root leaves the field
        const Coeff inv = norm->inverse();
        for (auto& c : w) c = c * inv;
        us.push_back(std::move(w));
    }
    if (us.size() != n)
        throw JoltError(ErrorCode::Internal, "unitary completion ran out of directions");

    Mat full(nv, nv);
    for (std::size_t i = 0; i < n; ++i) {
        full.set_col(i, apply_j(us[i]));
        full.set_col(n + i, us[i]);
    }
    const Unitary u = Unitary::from_full(full);
    if (!is_unitary_exact(u))
        throw JoltError(ErrorCode::Internal, "constructed change of variables is not unitary");
    return u;
}

double q_coefficient_weight(const DPoly& p, std::size_t n) {
    double w = 0.0;
    for (const auto& [m, c] : p.terms()) {
        std::uint64_t qdeg = 0;
        for (std::size_t i = 0; i < n; ++i) qdeg += m[i];
        if (qdeg > 0) w = std::max(w, std::abs(c));
    }
    return w;
}

} // namespace

ShearConjugation shear_conjugator(const Hamiltonian& h, const SampleBudget& budget,
                                  const NormalFormTolerances& tol) {
    const auto sh = is_shear(h, budget);
    if (!sh.shear) throw JoltError(ErrorCode::NotAShear, "H fails the shear criterion");

    const std::size_t n = h.n;
    const std::size_t nv = 2 * n;
    const PolyMat hess = hessian_of(h.H);
    const auto vecs = hessian_column_vectors(hess);
    const auto basis = exact_span_basis(vecs);
    const long fd = field_radicand(h.H);

    if (auto u = exact_unitary_from_span(basis, n, fd)) {
        const Hamiltonian hu = apply_linear(h, u->full());
        for (const auto& [m, c] : hu.H.terms()) {
            for (std::size_t i = 0; i < n; ++i)
                if (m[i] > 0)
                    throw JoltError(ErrorCode::Internal,
                                    "exact shear conjugation left a q-dependent term");
        }
        ShearConjugation result;
        result.exact = true;
        result.U = *u;
        result.K = hu.H;
        result.residual = 0.0;
        return result;
    }

    // Float fallback: orthonormal span basis by SVD, then the same pairing.
    Eigen::MatrixXd stack(static_cast<Eigen::Index>(vecs.size()), static_cast<Eigen::Index>(nv));
    for (std::size_t r = 0; r < vecs.size(); ++r)
        for (std::size_t c = 0; c < nv; ++c)
            stack(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                vecs[r][c].to_double();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
    const double sv_max = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
    std::vector<Eigen::VectorXd> us;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > tol.rank_rel * std::max(sv_max, 1.0)) {
            Eigen::VectorXd v = svd.matrixV().col(i);
            normalize_sign(v);
            us.push_back(v);
        }
    }
    const Eigen::MatrixXd j = to_eig(to_dmat(Mat::symplectic_j(n)));
    us = complete_pairs(std::move(us), j);

    ShearConjugation result;
    result.exact = false;
    result.U_num = unitary_from_us(us, j);
    const DHamiltonian hu = apply_linear(to_dhamiltonian(h), result.U_num.full());
    result.residual = q_coefficient_weight(hu.H, n);
    if (result.residual > tol.residual * std::max(1.0, max_abs_coeff(hu.H)))
        throw JoltError(ErrorCode::NumericFailure,
                        "float shear conjugation left q-dependence above tolerance");
    DPoly k(nv);
    for (const auto& [m, c] : hu.H.terms()) {
        bool has_q = false;
        for (std::size_t i = 0; i < n; ++i)
            if (m[i] > 0) has_q = true;
        if (!has_q) k.add_term(m, c);
    }
    result.K_num = k;
    return result;
}

// --- Simple-form reduction ----------------------------------------------

Hamiltonian assemble_simple_form(std::size_t n, std::size_t d, const Poly& k, const PolyVec& v,
                                 const PolyVec& w) {
    const std::size_t nv = 2 * n;
    if (k.nvars() != nv || v.size() != d || w.size() != d)
        throw JoltError(ErrorCode::ArityMismatch, "simple form pieces have inconsistent shapes");
    const auto pbar_only = [&](const Poly& p) {
        for (std::size_t var = 0; var < n + d; ++var)
            if (p.depends_on(var)) return false;
        return true;
    };
    if (!pbar_only(k))
        throw JoltError(ErrorCode::ArityMismatch, "K must depend only on the pbar block");
    Poly h = k;
    for (std::size_t i = 0; i < d; ++i) {
        if (!pbar_only(v[i]) || !pbar_only(w[i]))
            throw JoltError(ErrorCode::ArityMismatch, "V, W must depend only on the pbar block");
        h += Poly::variable(nv, i) * v[i];
        h += Poly::variable(nv, n + i) * w[i];
    }
    return Hamiltonian(n, h);
}

PolyVec simple_form_integrability_residual(std::size_t n, std::size_t d, const PolyVec& v,
                                           const PolyVec& w) {
    const std::size_t nv = 2 * n;
    PolyVec residual;
    for (std::size_t j = n + d; j < nv; ++j) {
        Poly acc(nv);
        for (std::size_t i = 0; i < d; ++i)
            acc += w[i] * v[i].derive(j) - v[i] * w[i].derive(j);
        residual.push_back(std::move(acc));
    }
    return residual;
}

namespace {

enum class PairRole { BaseKeep, BaseSwap, Linear };

// Detects "simple form up to a signed permutation" and performs the exact
// reduction when the structure is present.
std::optional<SimpleForm> try_structural_simple_form(const Hamiltonian& h) {
    const std::size_t n = h.n;
    const std::size_t nv = 2 * n;
    std::vector<PairRole> role(n);
    std::vector<std::size_t> linear_idx, base_idx;
    for (std::size_t i = 0; i < n; ++i) {
        const bool dq = h.H.depends_on(i);
        const bool dp = h.H.depends_on(n + i);
        if (!dq) {
            role[i] = PairRole::BaseKeep;
            base_idx.push_back(i);
        } else if (!dp) {
            role[i] = PairRole::BaseSwap;
            base_idx.push_back(i);
        } else {
            if (h.H.degree_in(i) > 1 || h.H.degree_in(n + i) > 1) return std::nullopt;
            role[i] = PairRole::Linear;
            linear_idx.push_back(i);
        }
    }
    const std::size_t d = linear_idx.size();
    if (d == n) return std::nullopt; // the reduced form needs d < n

    // x_old = U x_new: linear pairs first, base pairs after; swapped base
    // pairs get a quarter turn (q, p) -> (p, -q).
    Mat u(nv, nv);
    std::vector<std::size_t> order = linear_idx;
    order.insert(order.end(), base_idx.begin(), base_idx.end());
    for (std::size_t slot = 0; slot < n; ++slot) {
        const std::size_t old = order[slot];
        if (role[old] == PairRole::BaseSwap) {
            u(old, n + slot) = Coeff(1);  // q_old = p_new
            u(n + old, slot) = Coeff(-1); // p_old = -q_new
        } else {
            u(old, slot) = Coeff(1);
            u(n + old, n + slot) = Coeff(1);
        }
    }

    const Hamiltonian hu = apply_linear(h, u);
    for (const auto& [m, c] : hu.H.terms()) {
        std::uint64_t linear_deg = 0, qbar_deg = 0;
        for (std::size_t i = 0; i < d; ++i) linear_deg += m[i] + m[n + i];
        for (std::size_t i = d; i < n; ++i) qbar_deg += m[i];
        if (qbar_deg > 0 || linear_deg > 1) return std::nullopt;
    }

    SimpleForm form;
    form.n = n;
    form.d = d;
    form.U = u;
    form.K = Poly(nv);
    for (const auto& [m, c] : hu.H.terms()) {
        std::uint64_t linear_deg = 0;
        for (std::size_t i = 0; i < d; ++i) linear_deg += m[i] + m[n + i];
        if (linear_deg == 0) form.K.add_term(m, c);
    }
    for (std::size_t i = 0; i < d; ++i) {
        form.V.push_back(hu.H.derive(i));
        form.W.push_back(hu.H.derive(n + i));
    }

    // Affine integrability of H forces the reduced integrability condition.
    for (const auto& r : simple_form_integrability_residual(n, d, form.V, form.W))
        if (!r.is_zero())
            throw JoltError(ErrorCode::Internal,
                            "structural reduction violated the integrability condition");
    return form;
}

std::optional<Rational> snap_rational(double v, double tol) {
    // Continued fraction expansion with a small denominator bound: a generic
    // irrational is approximable only to ~1/q^2 = 6e-8, which keeps bogus
    // matches out of reach of the tolerances used here.
    const double target = v;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int iter = 0; iter < 40; ++iter) {
        const double fl = std::floor(x);
        if (std::abs(fl) > 1e15) return std::nullopt;
        const long a = static_cast<long>(fl);
        const long p2 = a * p1 + p0;
        const long q2 = a * q1 + q0;
        if (q2 > 4096 || q2 < 0) return std::nullopt;
        if (q2 != 0 && std::abs(static_cast<double>(p2) / static_cast<double>(q2) - target) <=
                           tol * std::max(1.0, std::abs(target)))
            return make_rational(p2, q2);
        const double frac = x - fl;
        if (frac < 1e-12) return std::nullopt;
        x = 1.0 / frac;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return std::nullopt;
}

} // namespace

std::optional<Coeff> snap_to_field(double value, long field_d, double tol) {
    if (auto r = snap_rational(value, tol)) {
        if (std::abs(r->get_d() - value) <= tol * std::max(1.0, std::abs(value)))
            return Coeff(*r);
    }
    if (field_d >= 2) {
        const double root = std::sqrt(static_cast<double>(field_d));
        if (auto r = snap_rational(value / root, tol)) {
            const Coeff c(Rational(0), *r, field_d);
            if (std::abs(c.to_double() - value) <= tol * std::max(1.0, std::abs(value)))
                return c;
        }
    }
    return std::nullopt;
}

namespace {

std::optional<Poly> snap_poly(const DPoly& p, long field_d, double tol) {
    Poly out(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        const auto snapped = snap_to_field(c, field_d, tol);
        if (!snapped) return std::nullopt;
        out.add_term(m, *snapped);
    }
    return out;
}

NumericSimpleForm numeric_simple_form(const Hamiltonian& h, const ExactPoint& x0,
                                      const NormalFormTolerances& tol) {
    const std::size_t n = h.n;
    const std::size_t nv = 2 * n;
    const PointwiseNormalForm pnf = pointwise_normal_form(h, x0, tol);
    const DHamiltonian h1 = apply_linear(to_dhamiltonian(h), pnf.U.full());
    const double scale = std::max(max_abs_coeff(h1.H), 1.0);

    double residual = 0.0;
    // After the unitary at x0 the q-q block vanishes identically, so q enters
    // at most linearly (up to numeric noise, tracked in `residual`).
    DPolyVec vcal(n, DPoly(nv));
    for (const auto& [m, c] : h1.H.terms()) {
        std::uint64_t qdeg = 0;
        for (std::size_t i = 0; i < n; ++i) qdeg += m[i];
        if (qdeg >= 2) {
            residual = std::max(residual, std::abs(c));
            continue;
        }
        if (qdeg == 0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] > 0) {
                Monomial stripped = m;
                stripped[i] -= 1;
                vcal[i].add_term(std::move(stripped), c);
                break;
            }
        }
    }

    // Span of the values of Vcal = span of its coefficient vectors.
    std::map<Monomial, Eigen::VectorXd, GrlexLess> rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [m, c] : vcal[i].terms()) {
            auto it =
                rows.try_emplace(m, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))).first;
            it->second(static_cast<Eigen::Index>(i)) = c;
        }
    }
    Eigen::MatrixXd stack = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(std::max<std::size_t>(rows.size(), 1)),
        static_cast<Eigen::Index>(n));
    {
        Eigen::Index r = 0;
        for (const auto& [m, v] : rows) stack.row(r++) = v.transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
    const double sv_max = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
    std::size_t d = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol.rank_rel * std::max(sv_max, 1.0)) ++d;
    if (d >= n)
        throw JoltError(ErrorCode::NumericFailure,
                        "span of the q-gradient has full dimension; reduction impossible");

    // Rotate so the span becomes the first d coordinates (block-diagonal on
    // q and p, hence unitary).
    const Eigen::MatrixXd s = svd.matrixV();
    const Eigen::Index ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd u2 = Eigen::MatrixXd::Zero(2 * ni, 2 * ni);
    u2.topLeftCorner(ni, ni) = s;
    u2.bottomRightCorner(ni, ni) = s;
    const DHamiltonian h2 = apply_linear(h1, from_eig(u2));

    NumericSimpleForm result;
    result.n = n;
    result.d = d;
    result.K = DPoly(nv);
    result.V.assign(d, DPoly(nv));
    result.W.assign(d, DPoly(nv));
    for (const auto& [m, c] : h2.H.terms()) {
        std::uint64_t q_linear = 0, q_rest = 0, p_linear = 0;
        for (std::size_t i = 0; i < d; ++i) {
            q_linear += m[i];
            p_linear += m[n + i];
        }
        for (std::size_t i = d; i < n; ++i) q_rest += m[i];

        if (q_rest > 0 || q_linear > 1 || (q_linear == 1 && p_linear > 0) ||
            (q_linear == 0 && p_linear > 1)) {
            residual = std::max(residual, std::abs(c));
            continue;
        }
        if (q_linear == 1) {
            for (std::size_t i = 0; i < d; ++i) {
                if (m[i] > 0) {
                    Monomial stripped = m;
                    stripped[i] -= 1;
                    result.V[i].add_term(std::move(stripped), c);
                    break;
                }
            }
        } else if (p_linear == 1) {
            for (std::size_t i = 0; i < d; ++i) {
                if (m[n + i] > 0) {
                    Monomial stripped = m;
                    stripped[n + i] -= 1;
                    result.W[i].add_term(std::move(stripped), c);
                    break;
                }
            }
        } else {
            result.K.add_term(m, c);
        }
    }
    result.U = from_eig(to_eig(pnf.U.full()) * u2);
    result.residual = residual;
    if (residual > 1e-6 * scale)
        throw JoltError(ErrorCode::NumericFailure,
                        "simple-form extraction left large residual terms");

    // Integrability condition, float and (when snapping succeeds) exact.
    double int_res = 0.0;
    for (std::size_t j = n + d; j < nv; ++j) {
        DPoly acc(nv);
        for (std::size_t i = 0; i < d; ++i)
            acc += result.W[i] * result.V[i].derive(j) - result.V[i] * result.W[i].derive(j);
        int_res = std::max(int_res, max_abs_coeff(acc));
    }
    result.integrability_residual = int_res;

    const long fd = field_radicand(h.H);
    bool snapped_all = true;
    PolyVec v_exact, w_exact;
    for (std::size_t i = 0; i < d && snapped_all; ++i) {
        const auto sv_ = snap_poly(chop(result.V[i], 1e-9 * scale), fd, 1e-6);
        const auto sw_ = snap_poly(chop(result.W[i], 1e-9 * scale), fd, 1e-6);
        if (!sv_ || !sw_) {
            snapped_all = false;
            break;
        }
        v_exact.push_back(*sv_);
        w_exact.push_back(*sw_);
    }
    if (d == 0) {
        result.integrability_exact = true;
    } else if (snapped_all) {
        bool zero = true;
        for (const auto& r : simple_form_integrability_residual(n, d, v_exact, w_exact))
            if (!r.is_zero()) zero = false;
        result.integrability_exact = zero;
    }
    return result;
}

} // namespace

SimpleFormResult simple_form_reduction(const Hamiltonian& h, const SampleBudget& budget,
                                       const NormalFormTolerances& tol) {
    if (!is_affine_integrable(h).integrable)
        throw JoltError(ErrorCode::PreconditionViolated,
                        "simple_form_reduction requires an affine-integrable Hamiltonian");

    if (auto exact = try_structural_simple_form(h)) {
        SimpleFormResult result;
        result.exact = std::move(exact);
        return result;
    }

    const auto tn = is_triple_nilpotent(h, budget);
    if (!tn.nilpotent)
        throw JoltError(ErrorCode::NotTripleNilpotent,
                        "DX(x) DX(y) DX(z) does not vanish identically");
    const auto nd = is_nondegenerate(h, budget);
    if (nd.verdict != TriState::Yes)
        throw JoltError(ErrorCode::NoRankNPoint,
                        "no rank-n point of HH found within the sample budget");

    SimpleFormResult result;
    result.numeric = numeric_simple_form(h, *nd.witness, tol);
    return result;
}

} // namespace jolt
