#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peritl/transform.hpp"

using namespace peritl;

TEST_CASE("transformed actions") {
    // minus: act(c_0, v^-) = -(c_0 v)^-
    auto W = make_wkx(2);
    auto Wm = with_transform(W, TransformTag::minus);
    for (const auto& s : basis(Wm, 4)) {
        auto lhs = act_c(Wm, 4, 0, s);
        auto rhs = act_c(W, 4, 0, s) * -Scalar::one();
        CHECK(lhs.terms == rhs.terms);
        // j >= 1 letters are untouched
        CHECK(act_c(Wm, 4, 1, s).terms == act_c(W, 4, 1, s).terms);
    }
    // reflect: act(c_{6,2}, v^r) = (c_{6,4} v)^r
    auto Wr = with_transform(W, TransformTag::reflect);
    for (const auto& s : basis(Wr, 6))
        CHECK(act_c(Wr, 6, 2, s).terms == act_c(W, 6, 4, s).terms);
    // minus twice is the identity transform
    auto Wmm = with_transform(Wm, TransformTag::minus);
    for (const auto& s : basis(Wmm, 4))
        for (int j = 0; j <= 3; j++) CHECK(act_c(Wmm, 4, j, s).terms == act_c(W, 4, j, s).terms);
}

TEST_CASE("sigma-twisted action satisfies the composition law") {
    auto W = make_wkx(2);
    auto Wm = with_transform(W, TransformTag::minus);
    // act(lambda' lambda) = act(lambda') act(lambda) on the minus family
    for (const auto& s : basis(Wm, 4)) {
        auto v = unit_vector(Wm, 4, s);
        auto [prod, f] = compose(c_gen(2, 1), c_gen(4, 0));
        auto lhs = act_diagram(prod, v) * f;
        auto rhs = act_diagram(c_gen(2, 1), act_diagram(c_gen(4, 0), v));
        CHECK(lhs.eq(rhs));
    }
}

TEST_CASE("dual right action") {
    // (u^dag . lambda) . lambda' = u^dag . (lambda lambda')
    auto W = make_wkx(2);
    for (const auto& s : basis(W, 4)) {
        auto v = unit_vector(W, 4, s);
        AnnularDiagram lam = cdag_gen(6, 2);   // L(6,4): right action lowers to...
        AnnularDiagram lamp = c_gen(6, 1);     // L(4,6)
        auto lhs = act_dual_right(lamp, act_dual_right(lam, v));
        auto [prod, f] = compose(lam, lamp);
        auto rhs = act_dual_right(prod, v) * f;
        CHECK(lhs.eq(rhs));
    }
}

TEST_CASE("isomorphism witnesses pass verify_intertwiner") {
    auto run = [&](WitnessKind k, FamilyPtr base, int nmax) {
        IsoWitness w(k, std::move(base));
        auto rep = verify_intertwiner(w, nmax);
        INFO(witness_kind_str(k), " ", rep.first_failure);
        CHECK(rep.pass);
        CHECK(rep.bijective);
        return rep;
    };
    run(WitnessKind::Wk_minus, make_wk(2), 5);
    run(WitnessKind::Wk_reflect, make_wk(2), 5);
    run(WitnessKind::Wk_minus, make_wk(1), 5);
    run(WitnessKind::Wkx_minus, make_wkx(2), 5);
    run(WitnessKind::Wkx_reflect, make_wkx(2), 5);
    run(WitnessKind::Wkx_minus, make_wkx(1), 5);
    run(WitnessKind::Wkx_reflect, make_wkx(1), 5);
    run(WitnessKind::V_reflect, make_vacuum(), 5);
    run(WitnessKind::RSOS_minus, make_rsos({ADE::A, 3, 1, {}}), 5);
    run(WitnessKind::RSOS_reflect, make_rsos({ADE::A, 3, 1, {}}), 5);
    run(WitnessKind::RSOS_reflect, make_rsos({ADE::A, 4, 1, {}}), 5);
    run(WitnessKind::XXZ_minus, make_xxz(0), 5);
    run(WitnessKind::XXZ_minus, make_xxz(1), 5);
    run(WitnessKind::XXZ_reflect, make_xxz(0), 4);
    run(WitnessKind::XXZ_reflect, make_xxz(1), 5);
}

TEST_CASE("identity map passes trivially") {
    // the Wkx minus witness at x and -x with no transform is just a signed
    // identity table; spot-check it maps basis to basis
    IsoWitness w(WitnessKind::Wkx_minus, make_wkx(2));
    auto& tab = w.table(4);
    CHECK(tab.size() == 4);
    for (auto& [s, img] : tab) CHECK(img.terms.size() == 1);
}

TEST_CASE("sabotaged witness fails at a c_0 instance") {
    IsoWitness w(WitnessKind::Wkx_minus, make_wkx(2));
    w.sabotage();
    auto rep = verify_intertwiner(w, 5);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("V versus V^- negative control: F characters differ") {
    auto V = make_vacuum();
    auto Vm = with_transform(V, TransformTag::minus);
    // F = beta id on V, and sigma(F) = -1 makes it -beta id on V^-
    for (int n = 2; n <= 4; n += 2)
        for (const auto& s : basis(V, n)) {
            auto v = unit_vector(V, n, s);
            auto vm = unit_vector(Vm, n, s);
            CHECK(act_diagram(braid_f(n), v).eq(v * Scalar::beta()));
            CHECK(act_diagram(braid_f(n), vm).eq(vm * -Scalar::beta()));
        }
    // at a specialization with beta != 0 the characters are distinct
    Assignment a;
    a.set(Var::s, 2.0);
    CHECK(std::abs(Scalar::beta().evaluate(a) - (-Scalar::beta()).evaluate(a)) > 1.0);
}
