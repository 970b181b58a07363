#include "jolt/poly.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace jolt {

std::string RingOps<double>::str(double c) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
}

DPoly chop(const DPoly& p, double tol) {
    DPoly r(p.nvars());
    for (const auto& [m, c] : p.terms())
        if (std::abs(c) > tol) r.add_term(m, c);
    return r;
}

VarNames VarNames::for_space(std::size_t n, std::size_t nvars) {
    VarNames v;
    v.names.reserve(nvars);
    const std::size_t two_n = 2 * n;
    for (std::size_t i = 0; i < nvars; ++i) {
        std::string name;
        if (i < n) {
            name = "q" + std::to_string(i + 1);
        } else if (i < two_n) {
            name = "p" + std::to_string(i - n + 1);
        } else if (nvars == two_n + 1) {
            name = "t";
        } else if (i < 4 * n) {
            name = "w" + std::to_string(i - two_n + 1);
        } else if (nvars == 6 * n) {
            name = "y" + std::to_string(i - 4 * n + 1);
        } else {
            name = "x" + std::to_string(i + 1);
        }
        v.names.push_back(std::move(name));
    }
    return v;
}

namespace {

template <class R>
std::string term_string(const Monomial& m, const R& c, const VarNames& vars, bool leading) {
    std::string body;
    bool constant_term = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        constant_term = false;
        if (!body.empty()) body += "*";
        body += vars[i];
        if (m[i] > 1) body += "^" + std::to_string(m[i]);
    }

    std::string cs;
    bool negative = false;
    if constexpr (std::is_same_v<R, Coeff>) {
        Coeff cc = c;
        if (cc.sign() < 0) {
            negative = true;
            cc = -cc;
        }
        cs = cc.str();
        if (!constant_term && cc.is_one()) cs.clear();
    } else {
        double cc = c;
        if (cc < 0) {
            negative = true;
            cc = -cc;
        }
        cs = RingOps<double>::str(cc);
        if (!constant_term && cc == 1.0) cs.clear();
    }

    std::string out;
    if (leading) {
        if (negative) out += "-";
    } else {
        out += negative ? " - " : " + ";
    }
    if (cs.empty()) {
        out += body;
    } else if (body.empty()) {
        out += cs;
    } else {
        out += cs + "*" + body;
    }
    return out;
}

} // namespace

template <class R>
std::string to_string(const BasicPoly<R>& p, const VarNames& vars) {
    if (p.is_zero()) return "0";
    std::string out;
    bool leading = true;
    // Highest graded-lex terms first.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        out += term_string(it->first, it->second, vars, leading);
        leading = false;
    }
    return out;
}

template std::string to_string<Coeff>(const BasicPoly<Coeff>&, const VarNames&);
template std::string to_string<double>(const BasicPoly<double>&, const VarNames&);

// --- Parser -----------------------------------------------------------------

namespace {

class Parser {
  public:
    Parser(std::string_view text, std::size_t n, const FieldSpec& field)
        : text_(text), n_(n), field_(field) {}

    Poly run() {
        Poly p = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    Poly parse_expr() {
        Poly acc = parse_term();
        while (true) {
            if (accept('+')) {
                acc += parse_term();
            } else if (accept('-')) {
                acc -= parse_term();
            } else {
                return acc;
            }
        }
    }

    Poly parse_term() {
        Poly acc = parse_factor();
        while (accept('*')) acc *= parse_factor();
        return acc;
    }

    Poly parse_factor() {
        Poly base = parse_primary();
        while (accept('^')) {
            const unsigned long e = parse_nat("exponent");
            base = base.pow(e);
        }
        return base;
    }

    Poly parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = parse_expr();
            expect(')', "to close parenthesis");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            return -parse_factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (c == 'q' || c == 'p') return parse_variable();
        if (text_.compare(pos_, 4, "sqrt") == 0) return parse_sqrt();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    unsigned long parse_nat(const char* what) {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail(std::string("expected ") + what);
        unsigned long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
            if (v > 1000000) fail("number too large");
            ++pos_;
        }
        return v;
    }

    mpz_class parse_integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
    }

    Poly parse_number() {
        mpz_class num = parse_integer();
        mpz_class den = 1;
        if (accept('/')) {
            den = parse_integer();
            if (den == 0) fail("zero denominator");
        }
        return Poly::constant(2 * n_, Coeff(make_rational(num, den)));
    }

    Poly parse_variable() {
        const char kind = text_[pos_++];
        const unsigned long idx = parse_nat("variable index");
        if (idx < 1 || idx > n_)
            fail("variable index " + std::to_string(idx) + " out of range 1.." +
                 std::to_string(n_));
        const std::size_t var = (kind == 'q') ? idx - 1 : n_ + idx - 1;
        return Poly::variable(2 * n_, var);
    }

    Poly parse_sqrt() {
        pos_ += 4;
        expect('(', "after sqrt");
        const unsigned long d = parse_nat("radicand");
        expect(')', "to close sqrt");
        if (!field_.has_radical() || static_cast<long>(d) != field_.d)
            fail("radical sqrt(" + std::to_string(d) + ") does not match field " + field_.str());
        return Poly::constant(2 * n_, Coeff::sqrt_d(static_cast<long>(d)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t n_;
    FieldSpec field_;
};

} // namespace

Poly parse_poly(std::string_view text, std::size_t n, const FieldSpec& field) {
    return Parser(text, n, field).run();
}

FieldSpec infer_field(const Poly& p) {
    for (const auto& [m, c] : p.terms())
        if (c.d() != 0) return FieldSpec::quadratic(c.d());
    return FieldSpec::rational();
}

} // namespace jolt
