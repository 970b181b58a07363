#ifndef JOLT_POLY_HPP
#define JOLT_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "jolt/coeff.hpp"
#include "jolt/errors.hpp"

namespace jolt {

// Exponent vector over the active variables. Within one polynomial all
// monomials have the same length (= nvars).
using Monomial = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

// Graded-lexicographic order: degree first, then lexicographic with earlier
// variables more significant. This is the canonical term order everywhere.
struct GrlexLess {
    bool operator()(const Monomial& x, const Monomial& y) const {
        const auto dx = total_degree(x), dy = total_degree(y);
        if (dx != dy) return dx < dy;
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    }
};

// Coefficient-ring hooks shared by the exact and double instantiations.
template <class R>
struct RingOps;

template <>
struct RingOps<Coeff> {
    static Coeff zero() { return Coeff(0); }
    static Coeff one() { return Coeff(1); }
    static Coeff from_long(long v) { return Coeff(v); }
    static bool is_zero(const Coeff& c) { return c.is_zero(); }
    static Coeff inv_factorial(unsigned long k) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), k);
        return Coeff(make_rational(mpz_class(1), f));
    }
    static std::string str(const Coeff& c) { return c.str(); }
};

template <>
struct RingOps<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_long(long v) { return static_cast<double>(v); }
    static bool is_zero(double c) { return c == 0.0; }
    static double inv_factorial(unsigned long k) {
        double f = 1.0;
        for (unsigned long i = 2; i <= k; ++i) f *= static_cast<double>(i);
        return 1.0 / f;
    }
    static std::string str(double c);
};

inline constexpr std::size_t kDefaultComposeDegreeCap = 64;

// Sparse multivariate polynomial in canonical form: no stored zero
// coefficients, terms ordered graded-lex. Equality is structural equality of
// the term maps. Values are immutable in spirit; all operations return new
// polynomials.
template <class R>
class BasicPoly {
  public:
    using TermMap = std::map<Monomial, R, GrlexLess>;

    explicit BasicPoly(std::size_t nvars = 0) : nvars_(nvars) {}

    static BasicPoly constant(std::size_t nvars, R c) {
        BasicPoly p(nvars);
        p.add_term(Monomial(nvars, 0), std::move(c));
        return p;
    }

    static BasicPoly variable(std::size_t nvars, std::size_t index) {
        if (index >= nvars)
            throw JoltError(ErrorCode::IndexOutOfRange,
                            "variable index " + std::to_string(index) + " out of range");
        BasicPoly p(nvars);
        Monomial m(nvars, 0);
        m[index] = 1;
        p.add_term(std::move(m), RingOps<R>::one());
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Total degree; -1 for the zero polynomial.
    long degree() const {
        if (terms_.empty()) return -1;
        return static_cast<long>(total_degree(terms_.rbegin()->first));
    }

    long degree_in(std::size_t var) const {
        check_var(var);
        std::uint32_t best = 0;
        bool any = false;
        for (const auto& [m, c] : terms_) {
            best = std::max(best, m[var]);
            any = true;
        }
        return any ? static_cast<long>(best) : -1;
    }

    bool depends_on(std::size_t var) const {
        check_var(var);
        for (const auto& [m, c] : terms_)
            if (m[var] > 0) return true;
        return false;
    }

    R coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? RingOps<R>::zero() : it->second;
    }

    void add_term(Monomial m, R c) {
        if (m.size() != nvars_)
            throw JoltError(ErrorCode::ArityMismatch, "monomial length != nvars");
        if (RingOps<R>::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second = it->second + c;
            if (RingOps<R>::is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicPoly operator-() const {
        BasicPoly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    BasicPoly operator+(const BasicPoly& o) const {
        check_same_vars(o);
        BasicPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    BasicPoly operator-(const BasicPoly& o) const {
        check_same_vars(o);
        BasicPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }

    BasicPoly operator*(const BasicPoly& o) const {
        check_same_vars(o);
        BasicPoly r(nvars_);
        for (const auto& [ma, ca] : terms_) {
            for (const auto& [mb, cb] : o.terms_) {
                Monomial m(nvars_);
                for (std::size_t i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(std::move(m), ca * cb);
            }
        }
        return r;
    }

    BasicPoly& operator+=(const BasicPoly& o) { return *this = *this + o; }
    BasicPoly& operator-=(const BasicPoly& o) { return *this = *this - o; }
    BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

    BasicPoly scale(const R& c) const {
        BasicPoly r(nvars_);
        if (RingOps<R>::is_zero(c)) return r;
        for (const auto& [m, cur] : terms_) r.add_term(m, cur * c);
        return r;
    }

    BasicPoly pow(unsigned long e) const {
        BasicPoly result = constant(nvars_, RingOps<R>::one());
        BasicPoly base = *this;
        while (e > 0) {
            if (e & 1) result = result * base;
            if (e >>= 1) base = base * base;
        }
        return result;
    }

    // Formal partial derivative.
    BasicPoly derive(std::size_t var) const {
        check_var(var);
        BasicPoly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Monomial dm = m;
            dm[var] -= 1;
            r.add_term(std::move(dm), c * RingOps<R>::from_long(static_cast<long>(m[var])));
        }
        return r;
    }

    // Substitution: one replacement polynomial per variable; all replacements
    // share a common variable space. The degree cap guards runaway expansion.
    BasicPoly compose(std::span<const BasicPoly> args,
                      std::size_t degree_cap = kDefaultComposeDegreeCap) const {
        if (args.size() != nvars_)
            throw JoltError(ErrorCode::ArityMismatch,
                            "compose expects " + std::to_string(nvars_) + " arguments, got " +
                                std::to_string(args.size()));
        const std::size_t out_vars = args.empty() ? 0 : args[0].nvars();
        std::vector<long> arg_deg(args.size(), 0);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i].nvars() != out_vars)
                throw JoltError(ErrorCode::ArityMismatch, "compose arguments mix variable spaces");
            arg_deg[i] = std::max<long>(args[i].degree(), 0);
        }
        for (const auto& [m, c] : terms_) {
            long est = 0;
            for (std::size_t i = 0; i < nvars_; ++i) est += static_cast<long>(m[i]) * arg_deg[i];
            if (est > static_cast<long>(degree_cap))
                throw JoltError(ErrorCode::DegreeCapExceeded,
                                "compose result degree estimate " + std::to_string(est) +
                                    " exceeds cap " + std::to_string(degree_cap));
        }
        // Power tables keyed by needed exponents.
        std::vector<std::vector<BasicPoly>> powers(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) {
            std::uint32_t maxe = 0;
            for (const auto& [m, c] : terms_) maxe = std::max(maxe, m[i]);
            powers[i].reserve(maxe + 1);
            powers[i].push_back(constant(out_vars, RingOps<R>::one()));
            for (std::uint32_t e = 1; e <= maxe; ++e)
                powers[i].push_back(powers[i].back() * args[i]);
        }
        BasicPoly r(out_vars);
        for (const auto& [m, c] : terms_) {
            BasicPoly t = constant(out_vars, c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (m[i] > 0) t = t * powers[i][m[i]];
            r += t;
        }
        return r;
    }

    R evaluate(std::span<const R> point) const {
        if (point.size() != nvars_)
            throw JoltError(ErrorCode::ArityMismatch, "evaluation point has wrong dimension");
        R acc = RingOps<R>::zero();
        for (const auto& [m, c] : terms_) {
            R t = c;
            for (std::size_t i = 0; i < nvars_; ++i) {
                for (std::uint32_t e = 0; e < m[i]; ++e) t = t * point[i];
            }
            acc = acc + t;
        }
        return acc;
    }

    std::vector<std::pair<std::size_t, BasicPoly>> homogeneous_components() const {
        std::map<std::uint64_t, BasicPoly> buckets;
        for (const auto& [m, c] : terms_) {
            auto [it, inserted] = buckets.try_emplace(total_degree(m), BasicPoly(nvars_));
            it->second.add_term(m, c);
        }
        std::vector<std::pair<std::size_t, BasicPoly>> out;
        out.reserve(buckets.size());
        for (auto& [deg, p] : buckets) out.emplace_back(static_cast<std::size_t>(deg), std::move(p));
        return out;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const auto d = total_degree(terms_.begin()->first);
        for (const auto& [m, c] : terms_)
            if (total_degree(m) != d) return false;
        return true;
    }

    // Same exponents re-homed in a wider variable space, block starting at
    // `offset`. Used to build identities over doubled/tripled variable sets.
    BasicPoly shift_vars(std::size_t offset, std::size_t new_nvars) const {
        if (offset + nvars_ > new_nvars)
            throw JoltError(ErrorCode::ArityMismatch, "shift_vars block does not fit");
        BasicPoly r(new_nvars);
        for (const auto& [m, c] : terms_) {
            Monomial nm(new_nvars, 0);
            for (std::size_t i = 0; i < nvars_; ++i) nm[offset + i] = m[i];
            r.terms_.emplace(std::move(nm), c);
        }
        return r;
    }

    BasicPoly extend_vars(std::size_t new_nvars) const { return shift_vars(0, new_nvars); }

    template <class F>
    auto map_coeffs(F&& f) const {
        using R2 = decltype(f(std::declval<const R&>()));
        BasicPoly<R2> r(nvars_);
        for (const auto& [m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

    bool operator==(const BasicPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const BasicPoly& o) const { return !(*this == o); }

  private:
    void check_var(std::size_t var) const {
        if (var >= nvars_)
            throw JoltError(ErrorCode::IndexOutOfRange,
                            "variable index " + std::to_string(var) + " out of range");
    }
    void check_same_vars(const BasicPoly& o) const {
        if (nvars_ != o.nvars_)
            throw JoltError(ErrorCode::ArityMismatch, "operands live in different variable spaces");
    }

    std::size_t nvars_;
    TermMap terms_;
};

using Poly = BasicPoly<Coeff>;
using DPoly = BasicPoly<double>;

template <class R>
using PolyVecT = std::vector<BasicPoly<R>>;
using PolyVec = PolyVecT<Coeff>;
using DPolyVec = PolyVecT<double>;

inline DPoly to_dpoly(const Poly& p) {
    return p.map_coeffs([](const Coeff& c) { return c.to_double(); });
}

// Largest |coefficient|, 0 for the zero polynomial.
inline double max_abs_coeff(const DPoly& p) {
    double m = 0.0;
    for (const auto& [mono, c] : p.terms()) m = std::max(m, std::abs(c));
    return m;
}

// Drop double terms below `tol` in absolute value.
DPoly chop(const DPoly& p, double tol);

// --- Variable naming and printing ---------------------------------------

// Principal variables q1..qn, p1..pn; auxiliary blocks appended after:
// 2n+1 -> flow parameter t; 4n -> w1..w2n; 6n -> w1..w2n, y1..y2n.
struct VarNames {
    std::vector<std::string> names;

    static VarNames for_space(std::size_t n, std::size_t nvars);
    const std::string& operator[](std::size_t i) const { return names[i]; }
};

template <class R>
std::string to_string(const BasicPoly<R>& p, const VarNames& vars);

template <class R>
std::string to_string(const BasicPoly<R>& p, std::size_t n) {
    return to_string(p, VarNames::for_space(n, p.nvars()));
}

template <class R>
std::string to_string(const PolyVecT<R>& v, std::size_t n) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i], n);
    }
    return s + ")";
}

extern template std::string to_string<Coeff>(const BasicPoly<Coeff>&, const VarNames&);
extern template std::string to_string<double>(const BasicPoly<double>&, const VarNames&);

// --- Parsing --------------------------------------------------------------

// Grammar: variables q1..qn / p1..pn, integers, rationals a/b, sqrt(d)
// matching the field, + - * ^, parentheses, unary minus.
Poly parse_poly(std::string_view text, std::size_t n, const FieldSpec& field);

// Field inferred from the coefficients actually present.
FieldSpec infer_field(const Poly& p);

} // namespace jolt

#endif
