#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peritl/diagram.hpp"

namespace peritl {

// One generator letter c_{size,j} or c^dag_{size,j}. `size` is the N of the
// paper's c_{N,j}: c maps N -> N-2 (outer N-2, inner N), c^dag maps
// N-2 -> N (outer N, inner N-2).
struct Letter {
    bool dag = false;
    int size = 0;
    int j = 0;

    int outer() const { return dag ? size : size - 2; }
    int inner() const { return dag ? size - 2 : size; }

    friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A word is an ordered product, leftmost letter first (leftmost = outermost).
struct Word {
    int start = 0;  // outer size of the first letter; the size at N for the empty word
    std::vector<Letter> letters;

    int n_out() const { return start; }
    int n_in() const { return letters.empty() ? start : letters.back().inner(); }
    bool size_consistent() const;
};

// Canonical basis form (w^{s_out}_{Jout})^dag (c_1 c_0^dag)^l w^{s_in}_{Jin},
// with an accumulated beta power.
struct CanonicalWordState {
    int k2 = 0;  // bridge count 2k
    long l = 0;
    int s_out = 0, s_in = 0;
    std::vector<int> j_out, j_in;
    long beta_pow = 0;
    int n_out = 0, n_in = 0;

    Scalar scalar() const { return Scalar::beta().pow(beta_pow); }
    bool same_form(const CanonicalWordState& o) const {
        return k2 == o.k2 && l == o.l && s_out == o.s_out && s_in == o.s_in && j_out == o.j_out &&
               j_in == o.j_in && n_out == o.n_out && n_in == o.n_in;
    }
};

CanonicalWordState normalize(const Word& w);

// Letters of the canonical basis element represented by the state (scalar
// factor not included).
Word canonical_word(const CanonicalWordState& st);

std::pair<AnnularDiagram, Scalar> word_to_diagram(const Word& w);

Word diagram_to_word(const AnnularDiagram& d);

// Diagram image of a canonical state through the Appendix A bijection.
AnnularDiagram state_to_diagram(const CanonicalWordState& st);

struct Equivalence {
    bool equivalent = false;
    long beta_ratio = 0;  // w1 = beta^{beta_ratio} * w2 when equivalent
};
Equivalence words_equivalent(const Word& w1, const Word& w2);

// Textual syntax: `c[6,1] cd[6,0]`, space separated, left factor first.
std::string word_str(const Word& w);
Word parse_word(const std::string& text, std::optional<int> empty_size = std::nullopt);

}  // namespace peritl
