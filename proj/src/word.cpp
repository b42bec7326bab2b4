#include "peritl/word.hpp"

#include <algorithm>

#include "wordcore.hpp"
#include <cassert>
#include <deque>
#include <sstream>

namespace peritl {

bool Word::size_consistent() const {
    int cur = start;
    for (const Letter& l : letters) {
        if (l.outer() != cur) return false;
        if (l.j < 0 || l.j > l.size - 1 || l.size < 2) return false;
        cur = l.inner();
        if (cur < 0) return false;
    }
    return true;
}

namespace {

using wordcore::CWord;
using wordcore::SideState;

struct State {
    SideState inner;
    CWord outer;
    int n_out = 0;
};

void check_bounds(const State& st) {
    // J_n(N) bounds: 1 <= j_m <= N - 2n + 2m - 1 (m 1-indexed)
    auto chk = [](const CWord& w, int n_boundary) {
        int n = (int)w.j.size();
        int prev = 0;
        for (int m = 1; m <= n; m++) {
            int v = w.j[m - 1];
            if (v <= prev || v > n_boundary - 2 * n + 2 * m - 1)
                throw std::logic_error("canonical word out of J_n bounds");
            prev = v;
        }
    };
    chk(st.inner.word, st.inner.n_in);
    chk(st.outer, st.n_out);
    if (st.inner.k2 == 0 && st.inner.l < 0) throw std::logic_error("negative winding at k = 0");
}

// Absorb an escaped dagger on the outer side: prepend c_{k2,idx} to the
// outer c-word and re-sort.
void outer_prepend(State& st, int idx) {
    CWord fresh;
    fresh.append_c(idx);
    for (int i = 0; i < st.outer.s; i++) fresh.append_c(0);
    for (int v : st.outer.j) fresh.append_c(v);
    st.outer = fresh;
}

State fold(const Word& w) {
    if (!w.size_consistent()) throw std::invalid_argument("word: inconsistent sizes");
    State st;
    st.inner.k2 = w.start;
    st.inner.n_in = w.start;
    st.n_out = w.start;
    for (const Letter& lt : w.letters) {
        if (lt.dag) {
            if (auto esc = st.inner.append_cdag(lt.j)) outer_prepend(st, esc->idx);
        } else {
            st.inner.append_c(lt.j);
        }
        check_bounds(st);
    }
    return st;
}

}  // namespace

CanonicalWordState normalize(const Word& w) {
    State st = fold(w);
    CanonicalWordState out;
    out.k2 = st.inner.k2;
    out.l = st.inner.l;
    out.s_out = st.outer.s;
    out.s_in = st.inner.word.s;
    out.j_out = st.outer.j;
    out.j_in = st.inner.word.j;
    out.beta_pow = st.inner.beta_pow;
    out.n_out = st.n_out;
    out.n_in = st.inner.n_in;
    return out;
}

Word canonical_word(const CanonicalWordState& st) {
    Word w;
    w.start = st.n_out;
    // (w^{s_out}_{Jout})^dag: reversed, daggered
    {
        int size = st.n_out;
        for (int t = (int)st.j_out.size() - 1; t >= 0; t--) {
            w.letters.push_back({true, size, st.j_out[t]});
            size -= 2;
        }
        for (int i = 0; i < st.s_out; i++) {
            w.letters.push_back({true, size, 0});
            size -= 2;
        }
        assert(size == st.k2);
    }
    // winding block at size 2k
    {
        int m = st.k2 + 2;
        long n = st.l >= 0 ? st.l : -st.l;
        for (long i = 0; i < n; i++) {
            if (st.l >= 0) {
                w.letters.push_back({false, m, 1});
                w.letters.push_back({true, m, 0});
            } else {
                w.letters.push_back({false, m, 0});
                w.letters.push_back({true, m, 1});
            }
        }
    }
    // w^{s_in}_{Jin}
    {
        int size = st.k2 + 2;
        for (int i = 0; i < st.s_in; i++) {
            w.letters.push_back({false, size, 0});
            size += 2;
        }
        for (int v : st.j_in) {
            w.letters.push_back({false, size, v});
            size += 2;
        }
        assert(size - 2 == st.n_in || (st.s_in == 0 && st.j_in.empty() && st.k2 == st.n_in));
    }
    assert(w.size_consistent());
    return w;
}

std::pair<AnnularDiagram, Scalar> word_to_diagram(const Word& w) {
    if (!w.size_consistent()) throw std::invalid_argument("word: inconsistent sizes");
    AnnularDiagram d = id_diagram(w.start);
    Scalar factor = Scalar::one();
    for (const Letter& lt : w.letters) {
        AnnularDiagram g = lt.dag ? cdag_gen(lt.size, lt.j) : c_gen(lt.size, lt.j);
        auto [nd, f] = compose(d, g);
        d = nd;
        factor = factor * f;
    }
    return {d, factor};
}

AnnularDiagram state_to_diagram(const CanonicalWordState& st) {
    auto [d, f] = word_to_diagram(canonical_word(st));
    assert(f == Scalar::one());
    return d;
}

Word diagram_to_word(const AnnularDiagram& d) {
    d.check();
    CanonicalWordState st;
    st.k2 = d.b;
    st.l = d.l;
    st.n_out = d.n_out;
    st.n_in = d.n_in;
    auto split = [](int n, const std::vector<int>& tuple, int& s, std::vector<int>& J) {
        Completion c = complete_tuple(n, tuple);
        s = 0;
        for (const auto& a : c.arches) {
            if (a.wraps)
                s++;
            else
                J.push_back(a.opener);
        }
        std::sort(J.begin(), J.end());
    };
    split(d.n_out, d.out, st.s_out, st.j_out);
    split(d.n_in, d.in, st.s_in, st.j_in);
    return canonical_word(st);
}

Equivalence words_equivalent(const Word& w1, const Word& w2) {
    if (w1.n_out() != w2.n_out() || w1.n_in() != w2.n_in())
        throw std::invalid_argument("words_equivalent: mismatched (N, N')");
    CanonicalWordState a = normalize(w1), b = normalize(w2);
    Equivalence eq;
    eq.equivalent = a.same_form(b);
    if (eq.equivalent) eq.beta_ratio = a.beta_pow - b.beta_pow;
    return eq;
}

std::string word_str(const Word& w) {
    std::ostringstream os;
    bool first = true;
    for (const Letter& lt : w.letters) {
        if (!first) os << ' ';
        first = false;
        os << (lt.dag ? "cd[" : "c[") << lt.size << ',' << lt.j << ']';
    }
    if (w.letters.empty()) os << "id[" << w.start << ']';
    return os.str();
}

Word parse_word(const std::string& text, std::optional<int> empty_size) {
    Word w;
    std::istringstream is(text);
    std::string tok;
    bool first = true;
    while (is >> tok) {
        Letter lt;
        size_t p = 0;
        if (tok.rfind("cd[", 0) == 0) {
            lt.dag = true;
            p = 3;
        } else if (tok.rfind("c[", 0) == 0) {
            lt.dag = false;
            p = 2;
        } else if (tok.rfind("id[", 0) == 0) {
            w.start = std::stoi(tok.substr(3));
            first = false;
            continue;
        } else {
            throw std::invalid_argument("word parse error at token '" + tok + "'");
        }
        size_t comma = tok.find(',', p);
        size_t close = tok.find(']', p);
        if (comma == std::string::npos || close == std::string::npos || close < comma)
            throw std::invalid_argument("word parse error at token '" + tok + "'");
        lt.size = std::stoi(tok.substr(p, comma - p));
        lt.j = std::stoi(tok.substr(comma + 1, close - comma - 1));
        if (first) {
            w.start = lt.outer();
            first = false;
        }
        w.letters.push_back(lt);
    }
    if (first) {
        if (!empty_size) throw std::invalid_argument("empty word needs a size");
        w.start = *empty_size;
    }
    if (!w.size_consistent()) throw std::invalid_argument("word: inconsistent sizes");
    return w;
}

}  // namespace peritl
