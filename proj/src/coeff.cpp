#include "jolt/coeff.hpp"

#include <cmath>
#include <utility>

namespace jolt {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
        case ErrorCode::NonNilpotent: return "NonNilpotent";
        case ErrorCode::RegularityUnknown: return "RegularityUnknown";
        case ErrorCode::PreconditionMJM: return "PreconditionMJM";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::SingularA: return "SingularA";
        case ErrorCode::AsymmetricZeta: return "AsymmetricZeta";
        case ErrorCode::NotAShear: return "NotAShear";
        case ErrorCode::NotTripleNilpotent: return "NotTripleNilpotent";
        case ErrorCode::NoRankNPoint: return "NoRankNPoint";
        case ErrorCode::NotSymplectic: return "NotSymplectic";
        case ErrorCode::NotHomogeneous: return "NotHomogeneous";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::IntegrabilityViolated: return "IntegrabilityViolated";
        case ErrorCode::DegenerateMap: return "DegenerateMap";
        case ErrorCode::NoValidPoint: return "NoValidPoint";
        case ErrorCode::NumericFailure: return "NumericFailure";
        case ErrorCode::Internal: return "InternalError";
    }
    return "UnknownError";
}

Rational make_rational(long num, long den) {
    if (den == 0) throw JoltError(ErrorCode::Parse, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw JoltError(ErrorCode::Parse, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    const mpz_class num = r.get_num();
    const mpz_class den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    return make_rational(sn, sd);
}

bool is_square_free(long d) {
    if (d < 1) return false;
    for (long f = 2; f * f <= d; ++f) {
        if (d % (f * f) == 0) return false;
    }
    return true;
}

FieldSpec FieldSpec::quadratic(long d) {
    if (d < 2 || !is_square_free(d))
        throw JoltError(ErrorCode::FieldMismatch,
                        "radicand must be square-free and >= 2, got " + std::to_string(d));
    return FieldSpec{Kind::Quadratic, d};
}

std::string FieldSpec::str() const {
    switch (kind) {
        case Kind::Rational: return "rational";
        case Kind::Quadratic: return "sqrt" + std::to_string(d);
        case Kind::Float: return "float";
    }
    return "?";
}

Coeff::Coeff(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_ == 0) {
        d_ = 0;
    } else if (d_ < 2 || !is_square_free(d_)) {
        throw JoltError(ErrorCode::FieldMismatch,
                        "radicand must be square-free and >= 2, got " + std::to_string(d));
    }
}

int Coeff::sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: |a| beats |b| sqrt(d) iff a^2 > d b^2 (never equal for
    // nonzero b).
    const Rational diff = a_ * a_ - d_ * b_ * b_;
    return sgn(diff) > 0 ? sa : sb;
}

long combine_radicand(long d1, long d2) {
    if (d1 == 0) return d2;
    if (d2 == 0) return d1;
    if (d1 == d2) return d1;
    throw JoltError(ErrorCode::FieldMismatch, "cannot mix sqrt(" + std::to_string(d1) +
                                                  ") and sqrt(" + std::to_string(d2) + ")");
}

Coeff Coeff::operator+(const Coeff& o) const {
    return Coeff(a_ + o.a_, b_ + o.b_, combine_radicand(d_, o.d_));
}

Coeff Coeff::operator-(const Coeff& o) const {
    return Coeff(a_ - o.a_, b_ - o.b_, combine_radicand(d_, o.d_));
}

Coeff Coeff::operator*(const Coeff& o) const {
    const long d = combine_radicand(d_, o.d_);
    return Coeff(a_ * o.a_ + Rational(d) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, d);
}

Coeff Coeff::inverse() const {
    if (is_zero()) throw JoltError(ErrorCode::NumericFailure, "inverse of zero coefficient");
    const Rational norm = a_ * a_ - Rational(d_) * b_ * b_;
    return Coeff(a_ / norm, -b_ / norm, d_);
}

Coeff Coeff::pow(unsigned long e) const {
    Coeff result(1);
    Coeff base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

double Coeff::to_double() const {
    double v = a_.get_d();
    if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
}

std::string Coeff::str() const {
    if (b_ == 0) return a_.get_str();
    std::string rad = "sqrt(" + std::to_string(d_) + ")";
    std::string bs;
    if (b_ == 1) {
        bs = rad;
    } else if (b_ == -1) {
        bs = "-" + rad;
    } else {
        bs = b_.get_str() + "*" + rad;
    }
    if (a_ == 0) return bs;
    if (sgn(b_) > 0) {
        if (b_ == 1) return "(" + a_.get_str() + " + " + rad + ")";
        return "(" + a_.get_str() + " + " + b_.get_str() + "*" + rad + ")";
    }
    const Rational nb = -b_;
    if (nb == 1) return "(" + a_.get_str() + " - " + rad + ")";
    return "(" + a_.get_str() + " - " + nb.get_str() + "*" + rad + ")";
}

std::optional<Coeff> coeff_sqrt(const Coeff& c, long field_d) {
    if (c.sign() < 0) return std::nullopt;
    if (c.is_zero()) return Coeff(0);
    if (c.is_rational()) {
        if (auto s = rational_sqrt(c.a())) return Coeff(*s);
        // A rational can still be the square of t*sqrt(d) in the ambient field.
        if (field_d >= 2) {
            if (auto t = rational_sqrt(c.a() / field_d))
                return Coeff(Rational(0), *t, field_d);
        }
        return std::nullopt;
    }
    // Look for (s + t sqrt(d))^2 = a + b sqrt(d):
    //   s^2 + d t^2 = a,  2 s t = b.
    const long d = c.d();
    const Rational a = c.a();
    const Rational b = c.b();
    // s^2 solves 4 s^4 - 4 a s^2 + d b^2 = 0, so s^2 = (a +- sqrt(a^2 - d b^2)) / 2
    // with a^2 - d b^2 a rational square.
    const Rational disc = a * a - Rational(d) * b * b;
    const auto root = rational_sqrt(disc);
    if (!root) return std::nullopt;
    for (int branch = 0; branch < 2; ++branch) {
        const Rational s2 = branch == 0 ? Rational((a + *root) / 2) : Rational((a - *root) / 2);
        if (s2 <= 0) continue;
        const auto s = rational_sqrt(s2);
        if (!s) continue;
        const Rational t = b / (2 * *s);
        const Coeff candidate(*s, t, d);
        if (candidate * candidate == c) {
            return candidate.sign() > 0 ? candidate : -candidate;
        }
    }
    return std::nullopt;
}

} // namespace jolt
