#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "peritl/word.hpp"

using namespace peritl;

TEST_CASE("normal form examples") {
    // c_{6,1} cd_{6,0} is Omega_4
    auto st = normalize(parse_word("c[6,1] cd[6,0]"));
    CHECK(st.k2 == 4);
    CHECK(st.l == 1);
    CHECK(st.beta_pow == 0);
    CHECK(state_to_diagram(st) == omega(4));

    // c_{4,0} cd_{4,0} = beta id_2
    st = normalize(parse_word("c[4,0] cd[4,0]"));
    CHECK(st.beta_pow == 1);
    CHECK(state_to_diagram(st) == id_diagram(2));

    // (2.5i): c_1 cd_0 c_0 cd_1 = id_2 at N = 4
    st = normalize(parse_word("c[4,1] cd[4,0] c[4,0] cd[4,1]"));
    CHECK(st.beta_pow == 0);
    CHECK(state_to_diagram(st) == id_diagram(2));
}

TEST_CASE("normalize is idempotent on canonical words") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; trial++) {
        Word w;
        w.start = rng() % 5;
        for (int i = 0; i < 4; i++) {
            int cur = w.n_in();
            bool dag = cur >= 2 && rng() % 2;
            if (dag)
                w.letters.push_back({true, cur, (int)(rng() % cur)});
            else if (cur + 2 <= 7)
                w.letters.push_back({false, cur + 2, (int)(rng() % (cur + 2))});
        }
        auto st = normalize(w);
        auto st2 = normalize(canonical_word(st));
        CHECK(st.same_form(st2));
        CHECK(st2.beta_pow == 0);
    }
}

TEST_CASE("word to diagram") {
    auto [d, f] = word_to_diagram(parse_word("c[6,1] cd[6,0]"));
    CHECK(d == omega(4));
    CHECK(f == Scalar::one());
    Word empty;
    empty.start = 5;
    auto [d2, f2] = word_to_diagram(empty);
    CHECK(d2 == id_diagram(5));
    CHECK(f2 == Scalar::one());
}

TEST_CASE("diagram to word") {
    CHECK(word_str(diagram_to_word(e_gen(4, 1))) == "cd[4,1] c[4,1]");
    CHECK(diagram_to_word(id_diagram(4)).letters.empty());
    CHECK(word_str(diagram_to_word(f_loop())) == "c[2,1] cd[2,0]");
    // the emitted word reproduces the diagram with scalar one
    for (int no = 0; no <= 5; no++)
        for (int ni = no % 2; ni <= 5; ni += 2)
            for (int b = no % 2; b <= std::min(no, ni); b += 2)
                for (const auto& d : enumerate_basis(no, ni, b, {-2, -1, 0, 1, 2})) {
                    auto [dd, ff] = word_to_diagram(diagram_to_word(d));
                    CHECK(dd == d);
                    CHECK(ff == Scalar::one());
                }
}

TEST_CASE("normalize agrees with diagram composition (cross-oracle)") {
    // exhaustive over all words of length <= 4 at sizes <= 6
    long checked = 0;
    auto rec = [&](auto&& self, Word& w, int depth) -> void {
        if (!w.letters.empty()) {
            checked++;
            auto st = normalize(w);
            auto [d, f] = word_to_diagram(w);
            CHECK(state_to_diagram(st) == d);
            CHECK(st.scalar() == f);
        }
        if (depth == 4) return;
        int cur = w.n_in();
        if (cur + 2 <= 6)
            for (int j = 0; j <= cur + 1; j++) {
                w.letters.push_back({false, cur + 2, j});
                self(self, w, depth + 1);
                w.letters.pop_back();
            }
        if (cur >= 2)
            for (int j = 0; j <= cur - 1; j++) {
                w.letters.push_back({true, cur, j});
                self(self, w, depth + 1);
                w.letters.pop_back();
            }
    };
    for (int n0 = 0; n0 <= 6; n0++) {
        Word w;
        w.start = n0;
        rec(rec, w, 0);
    }
    CHECK(checked > 10000);
}

TEST_CASE("word equivalence") {
    // c_{N,0} Omega_N = c_{N,1} at N = 4: as words
    Word w1 = parse_word("c[4,0] c[6,1] cd[6,0]");  // wrong order: build via sizes
    // c_{4,0} then Omega_4 = c_{6,1} cd_{6,0}? Omega_4 sits at size 4:
    // the word c_{4,0} Omega_4 reads c[4,0] then Omega at size 4
    w1 = Word{2, {{false, 4, 0}, {false, 6, 1}, {true, 6, 0}}};
    // as letters: c_{4,0} in L(2,4), Omega_4 = c_{6,1} cd_{6,0} in L(4,4)
    REQUIRE(w1.size_consistent());
    Word w2 = Word{2, {{false, 4, 1}}};
    auto eq = words_equivalent(w1, w2);
    CHECK(eq.equivalent);
    CHECK(eq.beta_ratio == 0);

    // Omega Omega^{-1} = empty word
    Word w3 = Word{4, {{false, 6, 1}, {true, 6, 0}, {false, 6, 0}, {true, 6, 1}}};
    Word w4 = Word{4, {}};
    eq = words_equivalent(w3, w4);
    CHECK(eq.equivalent);
    CHECK(eq.beta_ratio == 0);

    // applying one relation (2.5a) locally keeps the word equivalent
    Word w5 = Word{2, {{false, 4, 1}, {false, 6, 3}}};
    Word w6 = Word{2, {{false, 4, 1}, {false, 6, 3}}};
    // 2.5a with j=1 <= k-2=1: c_{4,1} c_{6,3} = c_{4,1} c_{6,3} -> use j>=k case:
    // c_{4,3}? keep simple: j=3,k=2: c_{4,3} c_{6,2} = c_{4,2} c_{6,5}
    w5 = Word{2, {{false, 4, 3}, {false, 6, 2}}};
    w6 = Word{2, {{false, 4, 2}, {false, 6, 5}}};
    eq = words_equivalent(w5, w6);
    CHECK(eq.equivalent);
    CHECK(eq.beta_ratio == 0);

    // beta ratio: c_0 cd_0 vs empty
    Word w7 = Word{2, {{false, 4, 0}, {true, 4, 0}}};
    Word w8 = Word{2, {}};
    eq = words_equivalent(w7, w8);
    CHECK(eq.equivalent);
    CHECK(eq.beta_ratio == 1);
}

TEST_CASE("canonical basis counts match the diagram enumeration") {
    // |B^a_k(N,N')| with |l| <= L equals |I_k(N)| |I_k(N')| (2L+1)
    for (int n = 2; n <= 6; n += 2)
        for (int np = 0; np <= 6; np += 2)
            for (int b = 2; b <= std::min(n, np); b += 2) {
                long L = 2;
                long count = 0;
                // enumerate canonical states via tuples: I_k counts arches
                count = (long)opener_tuples(n, b).size() * opener_tuples(np, b).size() *
                        (2 * L + 1);
                CHECK(count == (long)enumerate_basis(n, np, b,
                                                     {-2, -1, 0, 1, 2})
                                   .size());
            }
}

TEST_CASE("word parser") {
    Word w = parse_word("c[6,1] cd[6,0]");
    CHECK(w.letters.size() == 2);
    CHECK(w.letters[0].dag == false);
    CHECK(w.letters[1].dag == true);
    CHECK(word_str(w) == "c[6,1] cd[6,0]");
    CHECK_THROWS(parse_word("c[6,1] cd[4,0]"));  // inconsistent sizes
    CHECK_THROWS(parse_word("nonsense"));
    CHECK(parse_word("id[4]").n_in() == 4);
}
