#include "jolt/classify.hpp"

namespace jolt {

const char* tristate_name(TriState t) {
    switch (t) {
        case TriState::Yes: return "yes";
        case TriState::No: return "no";
        case TriState::Unknown: return "unknown";
    }
    return "?";
}

namespace {

constexpr long kGridValues[] = {-2, -1, 1, 2, 3};
constexpr std::size_t kGridBase = 5;

long rand_in(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

} // namespace

PointSampler::PointSampler(std::size_t dim, const SampleBudget& budget)
    : dim_(dim), budget_(budget), rng_(budget.seed) {}

std::optional<ExactPoint> PointSampler::next() {
    while (emitted_grid_ < budget_.grid_points) {
        // Counter digits map to grid values, least significant digit on the
        // last coordinate, so enumeration is lexicographic from (-2,..,-2).
        ExactPoint p(dim_, Coeff(-2));
        std::size_t c = emitted_grid_++;
        std::size_t slot = dim_;
        while (c > 0 && slot > 0) {
            --slot;
            p[slot] = Coeff(kGridValues[c % kGridBase]);
            c /= kGridBase;
        }
        if (c > 0) continue; // grid for this dimension exhausted
        return p;
    }
    if (emitted_random_ < budget_.random_points) {
        ++emitted_random_;
        ExactPoint p(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            p[i] = Coeff(make_rational(rand_in(rng_, -budget_.max_numerator, budget_.max_numerator),
                                       rand_in(rng_, 1, budget_.max_denominator)));
        return p;
    }
    return std::nullopt;
}

AffineIntegrability is_affine_integrable(const Hamiltonian& h) {
    const std::size_t nv = 2 * h.n;
    const PolyVec x = vector_field(h);
    const PolyMat dx = jacobian(x, nv);
    PolyVec residual;
    residual.reserve(nv);
    bool ok = true;
    for (std::size_t i = 0; i < nv; ++i) {
        Poly acc(nv);
        for (std::size_t j = 0; j < nv; ++j) {
            if (dx(i, j).is_zero() || x[j].is_zero()) continue;
            acc += dx(i, j) * x[j];
        }
        if (!acc.is_zero()) ok = false;
        residual.push_back(std::move(acc));
    }
    const bool dx2_zero = (dx * dx).is_zero();
    return AffineIntegrability{ok, std::move(residual), dx2_zero};
}

RegularityResult is_regular(const Hamiltonian& h, const SampleBudget& budget) {
    const std::size_t nv = 2 * h.n;
    const PolyVec x = vector_field(h);
    const PolyMat dx = jacobian(x, nv);

    // X(0) = 0 covers homogeneous H of degree >= 2 ("vector field vanishes at
    // the origin") and anything else without low-order terms.
    const ExactPoint origin(nv, Coeff(0));
    {
        bool zero_at_origin = true;
        for (const auto& xi : x)
            if (!xi.evaluate(std::span<const Coeff>(origin)).is_zero()) {
                zero_at_origin = false;
                break;
            }
        if (zero_at_origin) return {TriState::Yes, origin};
    }

    if (dx.is_zero()) {
        // X is a nonzero constant: range(DX) = {0} everywhere, certified no.
        return {TriState::No, std::nullopt};
    }

    PointSampler sampler(nv, budget);
    while (auto pt = sampler.next()) {
        const std::span<const Coeff> sp(*pt);
        const Mat a = dx.evaluate(sp);
        std::vector<Coeff> b(nv);
        for (std::size_t i = 0; i < nv; ++i) b[i] = x[i].evaluate(sp);
        if (exact_consistent(a, b)) return {TriState::Yes, *pt};
    }
    return {TriState::Unknown, std::nullopt};
}

namespace {

// First nonzero entry (row-major) of a polynomial matrix.
std::optional<std::pair<std::size_t, std::size_t>> first_nonzero(const PolyMat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) return std::make_pair(i, j);
    return std::nullopt;
}

void check_term_budget(std::size_t have, std::size_t budget, const char* stage) {
    if (have > budget)
        throw JoltError(ErrorCode::DegreeCapExceeded,
                        std::string("symbolic blow-up guard tripped during ") + stage + " (" +
                            std::to_string(have) + " term products)");
}

} // namespace

ShearResult is_shear(const Hamiltonian& h, const SampleBudget& budget) {
    const std::size_t nv = 2 * h.n;

    // q-independent Hamiltonians are shears by definition (U = I).
    bool mentions_q = false;
    for (std::size_t i = 0; i < h.n; ++i)
        if (h.H.depends_on(i)) {
            mentions_q = true;
            break;
        }
    if (!mentions_q) return {true, std::nullopt};

    const RegularityResult reg = is_regular(h, budget);
    if (reg.verdict != TriState::Yes)
        throw JoltError(ErrorCode::RegularityUnknown,
                        reg.verdict == TriState::No
                            ? "H is certified not regular; the shear criterion needs regularity"
                            : "regularity could not be certified within the sample budget");

    const PolyMat dx = jacobian(vector_field(h), nv);
    const PolyMat dx_x = dx.shift_vars(0, 2 * nv);
    const PolyMat dx_y = dx.shift_vars(nv, 2 * nv);
    const PolyMat product = dx_x * dx_y;
    if (product.is_zero()) return {true, std::nullopt};

    const auto entry = first_nonzero(product);
    const Poly& target = product(entry->first, entry->second);
    PointSampler sampler(2 * nv, budget);
    while (auto pt = sampler.next()) {
        const Coeff value = target.evaluate(std::span<const Coeff>(*pt));
        if (!value.is_zero()) {
            PairWitness w;
            w.x.assign(pt->begin(), pt->begin() + static_cast<long>(nv));
            w.y.assign(pt->begin() + static_cast<long>(nv), pt->end());
            w.row = entry->first;
            w.col = entry->second;
            w.value = value;
            return {false, std::move(w)};
        }
    }
    // A nonzero residual with no nonzero sample in the budget is implausible,
    // but stay honest: non-shear without a stored witness.
    return {false, std::nullopt};
}

TripleNilpotency is_triple_nilpotent(const Hamiltonian& h, const SampleBudget& budget,
                                     std::size_t term_budget) {
    const std::size_t nv = 2 * h.n;
    const PolyMat dx = jacobian(vector_field(h), nv);
    check_term_budget(dx.term_count() * dx.term_count(), term_budget, "pair product");
    const PolyMat dx_x = dx.shift_vars(0, 3 * nv);
    const PolyMat dx_y = dx.shift_vars(nv, 3 * nv);
    const PolyMat dx_z = dx.shift_vars(2 * nv, 3 * nv);
    const PolyMat pair = dx_x * dx_y;
    check_term_budget(pair.term_count() * dx.term_count(), term_budget, "triple product");
    const PolyMat triple = pair * dx_z;
    if (triple.is_zero()) return {true, std::nullopt};

    const auto entry = first_nonzero(triple);
    const Poly& target = triple(entry->first, entry->second);
    PointSampler sampler(3 * nv, budget);
    while (auto pt = sampler.next()) {
        const Coeff value = target.evaluate(std::span<const Coeff>(*pt));
        if (!value.is_zero()) {
            TripleWitness w;
            w.x.assign(pt->begin(), pt->begin() + static_cast<long>(nv));
            w.y.assign(pt->begin() + static_cast<long>(nv),
                       pt->begin() + static_cast<long>(2 * nv));
            w.z.assign(pt->begin() + static_cast<long>(2 * nv), pt->end());
            w.row = entry->first;
            w.col = entry->second;
            w.value = value;
            return {false, std::move(w)};
        }
    }
    return {false, std::nullopt};
}

PolyMat hessian_uvu_residual(const Hamiltonian& h) {
    const std::size_t nv = 2 * h.n;
    const PolyMat hess = hessian_of(h.H);
    const PolyMat h_u = hess.shift_vars(0, 2 * nv);
    const PolyMat h_v = hess.shift_vars(nv, 2 * nv);
    const PolyMat j = PolyMat::from_const(Mat::symplectic_j(h.n), 2 * nv);
    return h_u * j * h_v * j * h_u;
}

NondegeneracyResult is_nondegenerate(const Hamiltonian& h, const SampleBudget& budget) {
    const std::size_t nv = 2 * h.n;
    const PolyMat hess = hessian_of(h.H);
    PointSampler sampler(nv, budget);
    while (auto pt = sampler.next()) {
        const Mat m = hess.evaluate(std::span<const Coeff>(*pt));
        const std::size_t rank = exact_rank(m);
        if (rank >= h.n) return {TriState::Yes, *pt, rank};
    }
    // The property is existential; exhausting the budget proves nothing.
    return {TriState::Unknown, std::nullopt, 0};
}

bool affine_subspace_invariance(const Hamiltonian& h) {
    const auto ai = is_affine_integrable(h);
    if (!ai.integrable)
        throw JoltError(ErrorCode::PreconditionViolated,
                        "affine_subspace_invariance requires an affine-integrable Hamiltonian");
    const std::size_t nv = 2 * h.n;
    const std::size_t ext = 2 * nv; // x block then w block
    const PolyVec x = vector_field(h);
    const PolyMat dx = jacobian(x, nv);

    PolyVec subs;
    subs.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        Poly s = Poly::variable(ext, i);
        for (std::size_t j = 0; j < nv; ++j) {
            if (dx(i, j).is_zero()) continue;
            s += dx(i, j).shift_vars(0, ext) * Poly::variable(ext, nv + j);
        }
        subs.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < nv; ++i) {
        if (compose(x[i], subs) != x[i].shift_vars(0, ext)) return false;
    }
    return compose(h.H, subs) == h.H.shift_vars(0, ext);
}

bool local_level_set_check(const Hamiltonian& h, const ExactPoint& x,
                           const SampleBudget& budget) {
    const auto ai = is_affine_integrable(h);
    if (!ai.integrable)
        throw JoltError(ErrorCode::PreconditionViolated,
                        "local_level_set_check requires an affine-integrable Hamiltonian");
    const std::size_t nv = 2 * h.n;
    const PolyVec xf = vector_field(h);
    const Mat dx = jacobian(xf, nv).evaluate(std::span<const Coeff>(x));
    if (exact_rank(dx) != h.n)
        throw JoltError(ErrorCode::PreconditionViolated,
                        "local_level_set_check requires rank HH(x) = n at the base point");

    // range(DX(x)) and its orthogonal complement, exact.
    std::vector<std::vector<Coeff>> columns;
    for (std::size_t j = 0; j < nv; ++j) columns.push_back(dx.col(j));
    const auto range_basis = exact_span_basis(columns);
    const auto perp_basis = exact_nullspace(dx.transpose());

    const auto eval_field = [&](const ExactPoint& p) {
        std::vector<Coeff> v(nv);
        for (std::size_t i = 0; i < nv; ++i) v[i] = xf[i].evaluate(std::span<const Coeff>(p));
        return v;
    };
    const auto base_value = eval_field(x);

    std::mt19937_64 rng(budget.seed);
    const std::size_t samples = 6;
    for (std::size_t s = 0; s < samples; ++s) {
        // Small rational step inside the range...
        ExactPoint u(nv, Coeff(0));
        for (const auto& r : range_basis) {
            const Coeff c(make_rational(rand_in(rng, -2, 2), 8));
            for (std::size_t i = 0; i < nv; ++i) u[i] += c * r[i];
        }
        // ... leaves X exactly unchanged (first clause of the theorem).
        ExactPoint on_plane = x;
        for (std::size_t i = 0; i < nv; ++i) on_plane[i] += u[i];
        if (eval_field(on_plane) != base_value) return false;

        // ... while a nonzero perpendicular part separates for small steps.
        ExactPoint v(nv, Coeff(0));
        bool v_zero = true;
        while (v_zero) {
            for (const auto& b : perp_basis) {
                const Coeff c(make_rational(rand_in(rng, -2, 2), 8));
                for (std::size_t i = 0; i < nv; ++i) v[i] += c * b[i];
            }
            for (const auto& vi : v)
                if (!vi.is_zero()) {
                    v_zero = false;
                    break;
                }
        }
        bool separated = false;
        Coeff scale(1);
        for (int shrink = 0; shrink < 10 && !separated; ++shrink) {
            scale = scale * Coeff(make_rational(1, 8));
            ExactPoint off_plane = x;
            for (std::size_t i = 0; i < nv; ++i) off_plane[i] += scale * (u[i] + v[i]);
            if (eval_field(off_plane) != base_value) separated = true;
        }
        if (!separated) return false;
    }
    return true;
}

bool commutation_report(const Hamiltonian& h) {
    const auto ai = is_affine_integrable(h);
    if (!ai.integrable)
        throw JoltError(ErrorCode::PreconditionViolated,
                        "commutation_report requires an affine-integrable Hamiltonian");
    const std::size_t nv = 2 * h.n;
    std::vector<Poly> first(nv);
    for (std::size_t u = 0; u < nv; ++u) {
        first[u] = h.H.derive(u);
        if (!poisson(first[u], h.H, h.n).is_zero()) return false;
    }
    for (std::size_t u = 0; u < nv; ++u) {
        for (std::size_t v = u; v < nv; ++v) {
            if (!poisson(first[u].derive(v), h.H, h.n).is_zero()) return false;
            if (!poisson(first[u], first[v], h.n).is_zero()) return false;
        }
    }
    return true;
}

ClassificationReport classify_hamiltonian(const Hamiltonian& h, const SampleBudget& budget) {
    ClassificationReport report;
    report.n = h.n;

    for (const auto& [deg, comp] : h.H.homogeneous_components())
        report.degrees.push_back(deg);
    report.homogeneous = h.H.is_homogeneous();

    const auto ai = is_affine_integrable(h);
    report.affine_integrable = ai.integrable;
    report.ai_consistent = ai.consistent();

    report.symplectic_flow = is_symplectic(linear_flow(h, Coeff(1)), h.n).ok;

    const auto reg = is_regular(h, budget);
    report.regular = reg.verdict;
    report.regular_witness = reg.witness;

    const auto nd = is_nondegenerate(h, budget);
    report.nondegenerate = nd.verdict;
    report.nondegenerate_witness = nd.witness;
    report.rank = nd.rank;

    try {
        auto sh = is_shear(h, budget);
        report.shear = sh.shear;
        report.shear_witness = std::move(sh.witness);
    } catch (const JoltError& e) {
        if (e.code() != ErrorCode::RegularityUnknown) throw;
        report.shear = false;
        report.shear_note = e.what();
    }

    auto tn = is_triple_nilpotent(h, budget);
    report.triple_nilpotent = tn.nilpotent;
    report.triple_witness = std::move(tn.witness);

    if (report.shear && !report.triple_nilpotent)
        throw JoltError(ErrorCode::Internal, "shear verdict without triple nilpotency");
    if (report.nondegenerate == TriState::Yes && report.rank < h.n)
        throw JoltError(ErrorCode::Internal, "nondegeneracy witness with rank < n");
    return report;
}

// --- Randomized identity testing ---------------------------------------

namespace {

ExactPoint random_integer_point(std::mt19937_64& rng, std::size_t dim) {
    ExactPoint p(dim);
    for (auto& c : p) c = Coeff(rand_in(rng, -10, 10));
    return p;
}

double sz_bound(long degree) {
    if (degree <= 0) return 0.0;
    return std::min(1.0, static_cast<double>(degree) / 21.0);
}

} // namespace

SampledIdentity is_affine_integrable_sampled(const Hamiltonian& h, std::size_t trials,
                                             std::uint64_t seed) {
    const std::size_t nv = 2 * h.n;
    const PolyVec x = vector_field(h);
    const PolyMat dx = jacobian(x, nv);
    std::mt19937_64 rng(seed);
    const double bound = sz_bound(2 * h.H.degree() - 3);
    for (std::size_t t = 0; t < trials; ++t) {
        const ExactPoint p = random_integer_point(rng, nv);
        const std::span<const Coeff> sp(p);
        const Mat dxm = dx.evaluate(sp);
        std::vector<Coeff> xv(nv);
        for (std::size_t i = 0; i < nv; ++i) xv[i] = x[i].evaluate(sp);
        for (const auto& c : dxm * xv)
            if (!c.is_zero()) return {false, t + 1, bound};
    }
    return {true, trials, bound};
}

SampledIdentity is_shear_sampled(const Hamiltonian& h, std::size_t trials, std::uint64_t seed) {
    const std::size_t nv = 2 * h.n;
    const PolyMat dx = jacobian(vector_field(h), nv);
    std::mt19937_64 rng(seed);
    const double bound = sz_bound(2 * (h.H.degree() - 2));
    for (std::size_t t = 0; t < trials; ++t) {
        const ExactPoint px = random_integer_point(rng, nv);
        const ExactPoint py = random_integer_point(rng, nv);
        const Mat product = dx.evaluate(std::span<const Coeff>(px)) *
                            dx.evaluate(std::span<const Coeff>(py));
        if (!product.is_zero()) return {false, t + 1, bound};
    }
    return {true, trials, bound};
}

SampledIdentity is_triple_nilpotent_sampled(const Hamiltonian& h, std::size_t trials,
                                            std::uint64_t seed) {
    const std::size_t nv = 2 * h.n;
    const PolyMat dx = jacobian(vector_field(h), nv);
    std::mt19937_64 rng(seed);
    const double bound = sz_bound(3 * (h.H.degree() - 2));
    for (std::size_t t = 0; t < trials; ++t) {
        const ExactPoint px = random_integer_point(rng, nv);
        const ExactPoint py = random_integer_point(rng, nv);
        const ExactPoint pz = random_integer_point(rng, nv);
        const Mat product = dx.evaluate(std::span<const Coeff>(px)) *
                            dx.evaluate(std::span<const Coeff>(py)) *
                            dx.evaluate(std::span<const Coeff>(pz));
        if (!product.is_zero()) return {false, t + 1, bound};
    }
    return {true, trials, bound};
}

} // namespace jolt
