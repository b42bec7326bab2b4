#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "peritl/scalar.hpp"

using namespace peritl;

TEST_CASE("beta and its arithmetic") {
    Scalar b = Scalar::beta();
    CHECK(b.str() == "-1*s^-2 + -1*s^2");

    Assignment at_one;
    at_one.set(Var::s, 1.0);
    CHECK(b.evaluate(at_one).real() == doctest::Approx(-2.0));

    Scalar sq = b * b;
    CHECK(sq == Scalar::parse("1*s^4 + 2 + 1*s^-4"));

    CHECK(b.pow(0) == Scalar::one());
    CHECK((Scalar::var(Var::s) * Scalar::var(Var::s, -1)) == Scalar::one());
    CHECK((b + Scalar::var(Var::s, 2) + Scalar::var(Var::s, -2)).is_zero());
}

TEST_CASE("evaluate") {
    Scalar p = Scalar::var(Var::s, 2) + Scalar::var(Var::s, -2);
    Assignment a;
    a.set(Var::s, 2.0);
    CHECK(p.evaluate(a).real() == doctest::Approx(4.25));

    Assignment ai;
    ai.set(Var::s, std::complex<double>(0, 1));
    CHECK(Scalar::beta().evaluate(ai).real() == doctest::Approx(2.0));
    CHECK(Scalar::beta().evaluate(ai).imag() == doctest::Approx(0.0));

    Scalar q = Scalar::var(Var::x1) + Scalar::var(Var::x1, -1);
    Assignment ax;
    ax.set(Var::x1, 3.0);
    CHECK(q.evaluate(ax).real() == doctest::Approx(10.0 / 3.0));

    Assignment missing;
    CHECK_THROWS(p.evaluate(missing));
    Assignment zero;
    zero.set(Var::s, 0.0);
    CHECK_THROWS(p.evaluate(zero));
}

TEST_CASE("mixed modes are rejected") {
    CHECK_THROWS(Scalar::beta() + Scalar::numeric({1.0, 0.0}));
    CHECK(Scalar::numeric({1.0, 0.0}).eq(Scalar::numeric({1.0, 1e-14})));
}

TEST_CASE("textual form round-trips bit-exactly") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 200; trial++) {
        Laurent p;
        int terms = 1 + rng() % 4;
        for (int t = 0; t < terms; t++) {
            Exps e{(int)(rng() % 7) - 3, (int)(rng() % 5) - 2, (int)(rng() % 3) - 1,
                   (int)(rng() % 3) - 1};
            mpq_class re((long)(rng() % 19) - 9, 1 + rng() % 7);
            mpq_class im = rng() % 3 == 0 ? mpq_class((long)(rng() % 9) - 4, 1 + rng() % 5)
                                          : mpq_class(0);
            re.canonicalize();
            im.canonicalize();
            p.add_term(e, CRat(re, im));
        }
        Scalar s(p);
        CHECK(Scalar::parse(s.str()) == s);
    }
}

TEST_CASE("evaluate is a ring homomorphism") {
    std::mt19937 rng(7);
    auto rand_scalar = [&]() {
        Laurent p;
        int terms = 1 + rng() % 3;
        for (int t = 0; t < terms; t++) {
            Exps e{(int)(rng() % 5) - 2, (int)(rng() % 3) - 1, 0, (int)(rng() % 3) - 1};
            p.add_term(e, CRat(mpq_class((long)(rng() % 9) - 4)));
        }
        return Scalar(p);
    };
    for (int trial = 0; trial < 100; trial++) {
        Scalar p = rand_scalar(), q = rand_scalar();
        Assignment a;
        a.set(Var::s, {0.7, 0.3});
        a.set(Var::x1, {1.2, -0.4});
        a.set(Var::x2, {0.5, 0.5});
        a.set(Var::u, {-0.8, 0.1});
        auto lhs = (p * q).evaluate(a);
        auto rhs = p.evaluate(a) * q.evaluate(a);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))));
    }
}

TEST_CASE("exact division") {
    Scalar b = Scalar::beta();
    Scalar p = b * b * (Scalar::var(Var::x1) + Scalar::one());
    CHECK(Scalar(p.poly().div_exact(b.poly())) == b * (Scalar::var(Var::x1) + Scalar::one()));
    CHECK_THROWS(Scalar::one().poly().div_exact(b.poly()));
}
