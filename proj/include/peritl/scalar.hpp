#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace peritl {

// Complex rational a + b*i. The imaginary part exists for the XXZ operators;
// everything else keeps it at zero.
struct CRat {
    mpq_class re, im;

    CRat() : re(0), im(0) {}
    CRat(long v) : re(v), im(0) {}
    CRat(mpq_class r) : re(std::move(r)), im(0) {}
    CRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    static CRat i_unit() { return CRat(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }

    CRat operator+(const CRat& o) const { return CRat(re + o.re, im + o.im); }
    CRat operator-(const CRat& o) const { return CRat(re - o.re, im - o.im); }
    CRat operator-() const { return CRat(-re, -im); }
    CRat operator*(const CRat& o) const {
        return CRat(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    CRat inv() const {
        mpq_class n = re * re + im * im;
        if (n == 0) throw std::domain_error("CRat: division by zero");
        return CRat(re / n, -im / n);
    }
    CRat operator/(const CRat& o) const { return *this * o.inv(); }

    bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const CRat& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const CRat& o) const {
        if (int c = cmp(re, o.re); c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        int c = cmp(im, o.im);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::complex<double> to_complex() const {
        return {re.get_d(), im.get_d()};
    }
};

// Exponent vector of a Laurent monomial in the formal variables
// s (= q^{1/2}), x1, x2, u (= e^{i phi}).
struct Exps {
    int s = 0, x1 = 0, x2 = 0, u = 0;

    friend auto operator<=>(const Exps&, const Exps&) = default;
    Exps operator+(const Exps& o) const { return {s + o.s, x1 + o.x1, x2 + o.x2, u + o.u}; }
    Exps operator-() const { return {-s, -x1, -x2, -u}; }
    bool is_const() const { return s == 0 && x1 == 0 && x2 == 0 && u == 0; }
};

enum class Var { s, x1, x2, u };

// Exact Laurent polynomial: finitely supported map from exponent vectors to
// complex rationals. Zero coefficients are never stored.
class Laurent {
  public:
    using Map = std::map<Exps, CRat>;

    Laurent() = default;
    explicit Laurent(CRat c) {
        if (!c.is_zero()) terms_[Exps{}] = std::move(c);
    }
    Laurent(CRat c, Exps e) {
        if (!c.is_zero()) terms_[e] = std::move(c);
    }

    static Laurent var(Var v, int power = 1) {
        Exps e;
        switch (v) {
            case Var::s: e.s = power; break;
            case Var::x1: e.x1 = power; break;
            case Var::x2: e.x2 = power; break;
            case Var::u: e.u = power; break;
        }
        return Laurent(CRat(1), e);
    }

    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_const() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_const());
    }
    CRat const_value() const {
        if (terms_.empty()) return CRat(0);
        if (!is_const()) throw std::domain_error("Laurent: not a constant");
        return terms_.begin()->second;
    }

    Laurent operator+(const Laurent& o) const {
        Laurent r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    Laurent operator-(const Laurent& o) const {
        Laurent r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    Laurent operator-() const {
        Laurent r;
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    Laurent operator*(const Laurent& o) const {
        Laurent r;
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }

    // Inverse of a single monomial; general division is out of scope.
    Laurent monomial_inv() const {
        if (terms_.size() != 1) throw std::domain_error("Laurent: inverse of non-monomial");
        const auto& [e, c] = *terms_.begin();
        return Laurent(c.inv(), -e);
    }

    // Exact division: requires that `d` divides this (used by fraction-free
    // elimination, where exactness is guaranteed).
    Laurent div_exact(const Laurent& d) const {
        if (d.is_zero()) throw std::domain_error("Laurent: division by zero");
        Laurent rem = *this, quot;
        const auto& [de, dc] = *d.terms_.rbegin();
        CRat dinv = dc.inv();
        size_t guard = 4 * (terms_.size() + 1) * (d.terms_.size() + 1) + 64;
        while (!rem.terms_.empty()) {
            if (quot.terms_.size() > guard) throw std::domain_error("Laurent: inexact division");
            const auto& [re, rc] = *rem.terms_.rbegin();
            Exps qe{re.s - de.s, re.x1 - de.x1, re.x2 - de.x2, re.u - de.u};
            CRat qc = rc * dinv;
            quot.add_term(qe, qc);
            Laurent sub;
            for (const auto& [e2, c2] : d.terms_) sub.add_term(e2 + qe, c2 * qc);
            rem = rem - sub;
        }
        return quot;
    }

    bool operator==(const Laurent& o) const { return terms_ == o.terms_; }
    std::strong_ordering operator<=>(const Laurent& o) const {
        auto a = terms_.begin(), b = o.terms_.begin();
        for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
            if (auto c = a->first <=> b->first; c != 0) return c;
            if (auto c = a->second <=> b->second; c != 0) return c;
        }
        if (a != terms_.end()) return std::strong_ordering::greater;
        if (b != o.terms_.end()) return std::strong_ordering::less;
        return std::strong_ordering::equal;
    }

    void add_term(const Exps& e, const CRat& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

  private:
    Map terms_;
};

// Assignment of numeric values to variables, for evaluate().
struct Assignment {
    bool has[4] = {false, false, false, false};
    std::complex<double> val[4];

    void set(Var v, std::complex<double> z) {
        has[(int)v] = true;
        val[(int)v] = z;
    }
};

// A scalar of the computation: exact multivariate Laurent polynomial, or a
// complex double in numeric mode (used by the RSOS family). The two modes
// never mix inside one expression.
class Scalar {
  public:
    enum class Mode { exact, numeric };

    Scalar() : mode_(Mode::exact) {}
    explicit Scalar(long v) : mode_(Mode::exact), poly_(CRat(v)) {}
    explicit Scalar(Laurent p) : mode_(Mode::exact), poly_(std::move(p)) {}
    explicit Scalar(std::complex<double> z) : mode_(Mode::numeric), num_(z) {}

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar numeric(std::complex<double> z) { return Scalar(z); }
    static Scalar var(Var v, int power = 1) { return Scalar(Laurent::var(v, power)); }

    // beta = -q - q^{-1} = -s^2 - s^{-2}
    static Scalar beta() {
        Laurent p;
        p.add_term(Exps{2, 0, 0, 0}, CRat(-1));
        p.add_term(Exps{-2, 0, 0, 0}, CRat(-1));
        return Scalar(p);
    }

    Mode mode() const { return mode_; }
    bool exact() const { return mode_ == Mode::exact; }
    const Laurent& poly() const { return poly_; }
    std::complex<double> num() const { return num_; }

    bool is_zero() const {
        return exact() ? poly_.is_zero() : std::abs(num_) == 0.0;
    }

    Scalar operator+(const Scalar& o) const {
        check_mode(o);
        return exact() ? Scalar(poly_ + o.poly_) : Scalar(num_ + o.num_);
    }
    Scalar operator-(const Scalar& o) const {
        check_mode(o);
        return exact() ? Scalar(poly_ - o.poly_) : Scalar(num_ - o.num_);
    }
    Scalar operator-() const { return exact() ? Scalar(-poly_) : Scalar(-num_); }
    Scalar operator*(const Scalar& o) const {
        check_mode(o);
        return exact() ? Scalar(poly_ * o.poly_) : Scalar(num_ * o.num_);
    }

    Scalar pow(long n) const {
        Scalar r = Scalar::one();
        if (!exact()) r = Scalar(std::complex<double>(1.0, 0.0));
        if (n < 0) return inv().pow(-n);
        Scalar b = *this;
        for (; n > 0; n >>= 1) {
            if (n & 1) r = r * b;
            b = b * b;
        }
        return r;
    }

    // Only monomials (exact) or nonzero numerics are invertible here.
    Scalar inv() const {
        if (exact()) return Scalar(poly_.monomial_inv());
        if (std::abs(num_) == 0.0) throw std::domain_error("Scalar: 1/0");
        return Scalar(1.0 / num_);
    }

    // Structural equality in exact mode, 1e-12 relative tolerance in numeric.
    bool eq(const Scalar& o) const {
        check_mode(o);
        if (exact()) return poly_ == o.poly_;
        double scale = std::max(std::abs(num_), std::abs(o.num_));
        if (scale == 0.0) return true;
        return std::abs(num_ - o.num_) <= 1e-12 * std::max(scale, 1.0);
    }

    bool operator==(const Scalar& o) const {
        if (mode_ != o.mode_) return false;
        return exact() ? poly_ == o.poly_ : num_ == o.num_;
    }
    bool operator<(const Scalar& o) const {
        if (mode_ != o.mode_) return mode_ < o.mode_;
        if (exact()) return poly_ < o.poly_;
        if (num_.real() != o.num_.real()) return num_.real() < o.num_.real();
        return num_.imag() < o.num_.imag();
    }

    // Numeric value under a variable assignment. Every variable in the
    // support must be assigned a nonzero value.
    std::complex<double> evaluate(const Assignment& a) const;

    std::string str() const;
    static Scalar parse(const std::string& text);

  private:
    void check_mode(const Scalar& o) const {
        if (mode_ != o.mode_) throw std::domain_error("Scalar: mixed exact/numeric modes");
    }

    Mode mode_;
    Laurent poly_;
    std::complex<double> num_{0.0, 0.0};
};

inline Scalar operator*(long v, const Scalar& s) { return Scalar(v) * s; }

}  // namespace peritl
