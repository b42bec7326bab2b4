#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "peritl/checks.hpp"
#include "peritl/diagram.hpp"

using namespace peritl;

namespace {

AnnularDiagram random_diagram(std::mt19937& rng, int no, int ni, long lmax = 3) {
    std::vector<int> bs;
    for (int b = no % 2; b <= std::min(no, ni); b += 2)
        if ((ni - b) % 2 == 0) bs.push_back(b);
    int b = bs[rng() % bs.size()];
    auto to = opener_tuples(no, b);
    auto ti = opener_tuples(ni, b);
    long l = b == 0 ? (long)(rng() % (lmax + 1)) : (long)(rng() % (2 * lmax + 1)) - lmax;
    return {no, ni, b, l, to[rng() % to.size()], ti[rng() % ti.size()]};
}

}  // namespace

TEST_CASE("generator constructors and basic products") {
    CHECK(compose(omega(4), omega_inv(4)) == std::pair{id_diagram(4), Scalar::one()});
    CHECK(compose(e_gen(4, 1), e_gen(4, 1)) == std::pair{e_gen(4, 1), Scalar::beta()});
    CHECK(compose(c_gen(2, 1), cdag_gen(2, 0)) == std::pair{f_loop(), Scalar::one()});
    CHECK(compose(c_gen(4, 0), omega(4)) == std::pair{c_gen(4, 1), Scalar::one()});
    // e_{N,j} = c^dag_{N,j} c_{N,j}
    for (int j = 0; j <= 3; j++)
        CHECK(compose(cdag_gen(4, j), c_gen(4, j)) == std::pair{e_gen(4, j), Scalar::one()});
    // F_0 = f
    CHECK(braid_f(0) == diag_sum(f_loop()));
}

TEST_CASE("the worked product of two connectivity diagrams") {
    AnnularDiagram l1{12, 4, 2, 0, {1, 4, 7, 9, 12}, {2}};
    AnnularDiagram l2{4, 6, 2, 0, {2}, {2, 5}};
    auto [d, f] = compose(l1, l2);
    CHECK(d == AnnularDiagram{12, 6, 2, 0, {1, 4, 7, 9, 12}, {2, 5}});
    CHECK(f == Scalar::beta());
}

TEST_CASE("explicit form round trip") {
    // id_N -> radial strands
    ExplicitForm e = canonical_to_explicit(id_diagram(3));
    CHECK(e.strands.size() == 3);
    for (const auto& s : e.strands) CHECK(s.seam_cross == 0);
    // Omega_4 -> exactly one seam-crossing strand
    e = canonical_to_explicit(omega(4));
    int crossing = 0;
    for (const auto& s : e.strands) crossing += s.seam_cross != 0;
    CHECK(crossing == 1);
    // f -> no strands, one loop
    e = canonical_to_explicit(f_loop());
    CHECK(e.strands.empty());
    REQUIRE(e.loops.size() == 1);
    CHECK(std::abs(e.loops[0]) == 1);

    for (int no = 0; no <= 6; no++)
        for (int ni = no % 2; ni <= 6; ni += 2)
            for (int b = no % 2; b <= std::min(no, ni); b += 2)
                for (const auto& d : enumerate_basis(no, ni, b, {-3, -2, -1, 0, 1, 2, 3})) {
                    auto [dd, ff] = explicit_to_canonical(canonical_to_explicit(d));
                    CHECK(dd == d);
                    CHECK(ff == Scalar::one());
                }
}

TEST_CASE("composition is associative, scalars included") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; trial++) {
        int n1 = 1 + rng() % 6, n2, n3, n4;
        auto match = [&](int base) {
            int v = rng() % 7;
            while ((v - base) % 2 != 0) v = rng() % 7;
            return v;
        };
        n2 = match(n1);
        n3 = match(n1);
        n4 = match(n1);
        auto d1 = random_diagram(rng, n1, n2);
        auto d2 = random_diagram(rng, n2, n3);
        auto d3 = random_diagram(rng, n3, n4);
        auto [a12, f12] = compose(d1, d2);
        auto [lhs, fl] = compose(a12, d3);
        auto [a23, f23] = compose(d2, d3);
        auto [rhs, fr] = compose(d1, a23);
        CHECK(lhs == rhs);
        CHECK(f12 * fl == f23 * fr);
    }
}

TEST_CASE("relations (2.5) hold under composition") {
    SuiteReport rep = check_relations_diagram(5);
    INFO(rep.first_failure);
    CHECK(rep.pass);
    CHECK(rep.checked > 300);
}

TEST_CASE("Omega^N lambda = lambda Omega^N'") {
    SuiteReport rep = check_omega_centrality(6, 200, 3);
    INFO(rep.first_failure);
    CHECK(rep.pass);
}

TEST_CASE("push-through relations of the braid transfer matrices") {
    SuiteReport rep = check_push_through(5);
    INFO(rep.first_failure);
    CHECK(rep.pass);
}

TEST_CASE("adjoint") {
    CHECK(adjoint(omega(4)) == omega_inv(4));
    CHECK(adjoint(e_gen(4, 2)) == e_gen(4, 2));
    CHECK(adjoint(f_loop()) == f_loop());
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; trial++) {
        auto d1 = random_diagram(rng, 4, 2 + 2 * (rng() % 2));
        auto d2 = random_diagram(rng, d1.n_in, 2 + 2 * (rng() % 3));
        CHECK(adjoint(adjoint(d1)) == d1);
        // (l' l)^dag = l^dag l'^dag
        auto [p, fp] = compose(d1, d2);
        auto [q, fq] = compose(adjoint(d2), adjoint(d1));
        CHECK(adjoint(p) == q);
        CHECK(fp == fq);
    }
}

TEST_CASE("parity sign") {
    CHECK(sigma(id_diagram(4)) == 1);
    CHECK(sigma(c_gen(4, 0)) == -1);
    CHECK(sigma(cdag_gen(4, 0)) == -1);
    for (int j = 1; j <= 3; j++) CHECK(sigma(c_gen(4, j)) == 1);
    CHECK(sigma(omega(4)) == -1);
    // multiplicative on random pairs
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; trial++) {
        auto d1 = random_diagram(rng, 4, 2 + 2 * (rng() % 2));
        auto d2 = random_diagram(rng, d1.n_in, 2 + 2 * (rng() % 3));
        auto [p, fp] = compose(d1, d2);
        (void)fp;
        CHECK(sigma(p) == sigma(d1) * sigma(d2));
    }
}

TEST_CASE("reflection") {
    CHECK(reflect(c_gen(6, 2)) == c_gen(6, 4));
    CHECK(reflect(c_gen(6, 0)) == c_gen(6, 0));
    for (int j = 1; j <= 5; j++) CHECK(reflect(c_gen(6, j)) == c_gen(6, 6 - j));
    CHECK(reflect(omega(4)) == omega_inv(4));
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; trial++) {
        auto d1 = random_diagram(rng, 5, 1 + 2 * (rng() % 3));
        CHECK(reflect(reflect(d1)) == d1);
        auto d2 = random_diagram(rng, d1.n_in, 1 + 2 * (rng() % 3));
        auto [p, fp] = compose(d1, d2);
        auto [q, fq] = compose(reflect(d1), reflect(d2));
        CHECK(reflect(p) == q);
        CHECK(fp == fq);
    }
}

TEST_CASE("basis enumeration counts") {
    CHECK(enumerate_basis(4, 0, 0, {0}).size() == 6);
    CHECK(enumerate_basis(2, 2, 2, {0}).size() == 1);
    CHECK(enumerate_basis(0, 0, 0, {0, 1, 2}).size() == 3);  // id, f, f^2
    // |I_k(N)| = binom(N, N/2 - k)
    CHECK(opener_tuples(6, 2).size() == 15);
    CHECK(opener_tuples(6, 0).size() == 20);
}

TEST_CASE("surjectivity of composition (witness search)") {
    // L(N,N') L(N',N'') = L(N,N'') for N' >= min(N,N''): every basis diagram
    // with b <= N' arises from a composed pair
    int N = 4, Np = 4, Npp = 2;
    for (int b = 0; b <= std::min(N, Npp); b += 2)
        for (const auto& target : enumerate_basis(N, Npp, b, {-1, 0, 1})) {
            bool found = false;
            for (int b1 = 0; b1 <= std::min(N, Np) && !found; b1 += 2)
                for (const auto& d1 : enumerate_basis(N, Np, b1, {-1, 0, 1}))
                    for (int b2 = 0; b2 <= std::min(Np, Npp); b2 += 2) {
                        for (const auto& d2 : enumerate_basis(Np, Npp, b2, {-1, 0, 1})) {
                            auto [p, fp] = compose(d1, d2);
                            (void)fp;
                            if (p == target) {
                                found = true;
                                break;
                            }
                        }
                        if (found) break;
                    }
            CHECK(found);
        }
}
