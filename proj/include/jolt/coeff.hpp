#ifndef JOLT_COEFF_HPP
#define JOLT_COEFF_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "jolt/errors.hpp"

namespace jolt {

using Rational = mpq_class;

// mpq_class does not canonicalize two-argument constructions on its own.
Rational make_rational(long num, long den = 1);
Rational make_rational(const mpz_class& num, const mpz_class& den);

// Exact square root of a nonnegative rational, if it is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& r);

// Coefficient field of one document: Q, Q(sqrt(d)), or double-precision mode.
struct FieldSpec {
    enum class Kind { Rational, Quadratic, Float };

    Kind kind = Kind::Rational;
    long d = 0; // radicand, meaningful for Kind::Quadratic

    static FieldSpec rational() { return FieldSpec{Kind::Rational, 0}; }
    static FieldSpec quadratic(long d);
    static FieldSpec floating() { return FieldSpec{Kind::Float, 0}; }

    bool has_radical() const { return kind == Kind::Quadratic; }
    bool operator==(const FieldSpec&) const = default;

    std::string str() const;
};

bool is_square_free(long d);

// Element a + b*sqrt(d) of Q(sqrt(d)), exact.
//
// Invariants: a, b canonical rationals; b == 0 implies d == 0, so equality is
// structural. Elements from genuinely different quadratic fields never combine
// arithmetically (FieldMismatch); pure rationals (d == 0) combine with anything.
class Coeff {
  public:
    Coeff() : a_(0), b_(0), d_(0) {}
    Coeff(long v) : a_(v), b_(0), d_(0) {}
    explicit Coeff(Rational a) : a_(std::move(a)), b_(0), d_(0) {}
    Coeff(Rational a, Rational b, long d);

    static Coeff sqrt_d(long d) { return Coeff(Rational(0), Rational(1), d); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    long d() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_one() const { return b_ == 0 && a_ == 1; }
    bool is_rational() const { return b_ == 0; }

    // Exact sign of the real number a + b*sqrt(d): -1, 0, or +1.
    int sign() const;

    Coeff operator-() const { return Coeff(-a_, -b_, d_); }
    Coeff operator+(const Coeff& o) const;
    Coeff operator-(const Coeff& o) const;
    Coeff operator*(const Coeff& o) const;
    Coeff operator/(const Coeff& o) const { return *this * o.inverse(); }
    Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
    Coeff& operator-=(const Coeff& o) { return *this = *this - o; }
    Coeff& operator*=(const Coeff& o) { return *this = *this * o; }

    // (a - b sqrt(d)) / (a^2 - d b^2); defined for all nonzero elements since
    // sqrt(d) is irrational.
    Coeff inverse() const;
    Coeff pow(unsigned long e) const;
    Coeff abs() const { return sign() < 0 ? -*this : *this; }

    bool operator==(const Coeff& o) const { return a_ == o.a_ && b_ == o.b_ && d_ == o.d_; }
    bool operator!=(const Coeff& o) const { return !(*this == o); }

    double to_double() const;
    std::string str() const;

  private:
    Rational a_, b_;
    long d_;
};

// Radicand of the combined field, or FieldMismatch.
long combine_radicand(long d1, long d2);

// Exact square root within Q(sqrt(d)), when one exists (input must be >= 0).
// `field_d` names the ambient field so that rationals like 12 can resolve to
// 2*sqrt(3); pass 0 when no radical is in play.
std::optional<Coeff> coeff_sqrt(const Coeff& c, long field_d = 0);

} // namespace jolt

#endif
