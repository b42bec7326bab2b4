#include "peritl/scalar.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace peritl {

std::complex<double> Scalar::evaluate(const Assignment& a) const {
    if (!exact()) return num_;
    auto power = [&](Var v, int e) -> std::complex<double> {
        if (e == 0) return {1.0, 0.0};
        if (!a.has[(int)v]) throw std::domain_error("evaluate: unassigned variable");
        std::complex<double> base = a.val[(int)v];
        if (std::abs(base) == 0.0) throw std::domain_error("evaluate: zero assignment");
        return std::pow(base, e);
    };
    std::complex<double> total{0.0, 0.0};
    for (const auto& [e, c] : poly_.terms()) {
        std::complex<double> t = c.to_complex();
        t *= power(Var::s, e.s);
        t *= power(Var::x1, e.x1);
        t *= power(Var::x2, e.x2);
        t *= power(Var::u, e.u);
        total += t;
    }
    return total;
}

namespace {

void print_rat(std::ostream& os, const mpq_class& q) { os << q; }

// Coefficient syntax: `3/2`, `-1`, or `(a+bi)` / `(a-bi)` for complex ones.
void print_coeff(std::ostream& os, const CRat& c) {
    if (c.im == 0) {
        print_rat(os, c.re);
        return;
    }
    os << '(';
    print_rat(os, c.re);
    if (c.im >= 0) os << '+';
    print_rat(os, c.im);
    os << "i)";
}

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) pos++;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            pos++;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("scalar parse error at position " + std::to_string(pos) +
                                    ": " + what);
    }
};

mpq_class parse_rat(Cursor& cur) {
    cur.skip_ws();
    size_t start = cur.pos;
    if (cur.pos < cur.s.size() && (cur.s[cur.pos] == '-' || cur.s[cur.pos] == '+')) cur.pos++;
    while (cur.pos < cur.s.size() && std::isdigit((unsigned char)cur.s[cur.pos])) cur.pos++;
    if (cur.pos < cur.s.size() && cur.s[cur.pos] == '/') {
        cur.pos++;
        while (cur.pos < cur.s.size() && std::isdigit((unsigned char)cur.s[cur.pos])) cur.pos++;
    }
    if (cur.pos == start) cur.fail("expected rational number");
    mpq_class q(cur.s.substr(start, cur.pos - start));
    q.canonicalize();
    return q;
}

int parse_int(Cursor& cur) {
    cur.skip_ws();
    size_t start = cur.pos;
    if (cur.pos < cur.s.size() && (cur.s[cur.pos] == '-' || cur.s[cur.pos] == '+')) cur.pos++;
    while (cur.pos < cur.s.size() && std::isdigit((unsigned char)cur.s[cur.pos])) cur.pos++;
    if (cur.pos == start) cur.fail("expected integer");
    return std::stoi(cur.s.substr(start, cur.pos - start));
}

}  // namespace

// Textual form: sum of monomials `c * s^a * x1^b * x2^c * u^d`, integer
// exponents, unit exponents printed without `^1`, no zero-exponent factors.
std::string Scalar::str() const {
    std::ostringstream os;
    if (!exact()) {
        os << "numeric(" << num_.real() << (num_.imag() < 0 ? "" : "+") << num_.imag() << "i)";
        return os.str();
    }
    if (poly_.is_zero()) return "0";
    bool first = true;
    for (const auto& [e, c] : poly_.terms()) {
        if (!first) os << " + ";
        first = false;
        print_coeff(os, c);
        auto var = [&](const char* name, int exp) {
            if (exp == 0) return;
            os << '*' << name;
            if (exp != 1) os << '^' << exp;
        };
        var("s", e.s);
        var("x1", e.x1);
        var("x2", e.x2);
        var("u", e.u);
    }
    return os.str();
}

Scalar Scalar::parse(const std::string& text) {
    Cursor cur{text};
    Laurent total;
    bool first = true;
    while (true) {
        cur.skip_ws();
        if (cur.pos >= text.size()) {
            if (first) cur.fail("empty scalar");
            break;
        }
        mpq_class sign(1);
        if (!first) {
            if (cur.eat('+')) {
            } else if (cur.eat('-')) {
                sign = -1;
            } else {
                cur.fail("expected '+' or '-' between terms");
            }
        }
        CRat coeff;
        if (cur.peek() == '(') {
            cur.eat('(');
            mpq_class re = parse_rat(cur);
            mpq_class im = parse_rat(cur);
            if (!cur.eat('i')) cur.fail("expected 'i' in complex coefficient");
            if (!cur.eat(')')) cur.fail("expected ')'");
            coeff = CRat(re, im);
        } else {
            coeff = CRat(parse_rat(cur));
        }
        coeff = CRat(sign) * coeff;
        Exps e;
        while (cur.eat('*')) {
            cur.skip_ws();
            int* slot = nullptr;
            if (text.compare(cur.pos, 2, "x1") == 0) {
                slot = &e.x1;
                cur.pos += 2;
            } else if (text.compare(cur.pos, 2, "x2") == 0) {
                slot = &e.x2;
                cur.pos += 2;
            } else if (text.compare(cur.pos, 1, "s") == 0) {
                slot = &e.s;
                cur.pos += 1;
            } else if (text.compare(cur.pos, 1, "u") == 0) {
                slot = &e.u;
                cur.pos += 1;
            } else {
                cur.fail("expected variable name");
            }
            int exp = 1;
            if (cur.eat('^')) exp = parse_int(cur);
            *slot += exp;
        }
        total.add_term(e, coeff);
        first = false;
    }
    return Scalar(total);
}

}  // namespace peritl
