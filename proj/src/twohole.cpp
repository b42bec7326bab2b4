#include "peritl/twohole.hpp"

#include <cassert>
#include <sstream>

#include "wordcore.hpp"

namespace peritl {

namespace {

using wordcore::CWord;
using wordcore::SideState;

Word cws_word(const CanonicalWordState& st) { return canonical_word(st); }

// The sandwich outer . P . (a (x) b): the outer zone is a one-hole state with
// an empty inner word, P an interface word, and the subsystems are full
// one-hole canonical states whose out-parts are peeled letter by letter.
struct Machine {
    CWord outer_dag;
    SideState outer;           // winding at kc2; inner word kept empty
    std::vector<Letter> pend;  // interface word, rightmost letter pair-adjacent
    CanonicalWordState a, b;
    long beta = 0;

    int wa() const { return a.n_out; }
    int wb() const { return b.n_out; }
};

void outer_prepend(Machine& m, int idx) {
    CWord fresh;
    fresh.append_c(idx);
    for (int i = 0; i < m.outer_dag.s; i++) fresh.append_c(0);
    for (int v : m.outer_dag.j) fresh.append_c(v);
    m.outer_dag = fresh;
}

void outer_feed(Machine& m, const Letter& lt) {
    if (lt.dag) {
        if (auto esc = m.outer.append_cdag(lt.j)) outer_prepend(m, esc->idx);
    } else {
        m.outer.append_c(lt.j);
    }
    m.beta += m.outer.beta_pow;
    m.outer.beta_pow = 0;
}

// prefix ++ (subsystem word), renormalized
void sub_prepend(Machine& m, CanonicalWordState& side, std::vector<Letter> prefix) {
    Word w;
    Word body = cws_word(side);
    w.start = prefix.empty() ? body.start : prefix.front().outer();
    for (const Letter& lt : prefix) w.letters.push_back(lt);
    for (const Letter& lt : body.letters) w.letters.push_back(lt);
    if (!w.size_consistent()) throw std::logic_error("two-hole: inconsistent subsystem word");
    CanonicalWordState st = normalize(w);
    m.beta += st.beta_pow;
    st.beta_pow = 0;
    side = st;
}

// leftmost letter of the subsystem's daggered out-part, if any
std::optional<Letter> out_leftmost(const CanonicalWordState& st) {
    if (!st.j_out.empty()) return Letter{true, st.n_out, st.j_out.back()};
    if (st.s_out > 0) return Letter{true, st.n_out, 0};
    return std::nullopt;
}

void drop_out_leftmost(CanonicalWordState& st) {
    if (!st.j_out.empty()) {
        st.j_out.pop_back();
    } else {
        assert(st.s_out > 0);
        st.s_out--;
    }
    st.n_out -= 2;
}

// count of interface c_0 letters at the tail of P (P is settled to
// (c_0)^s c_{J...} between calls; after routing, only c_0s remain)
bool pend_all_c0(const Machine& m) {
    for (const Letter& lt : m.pend)
        if (lt.dag || lt.j != 0) return false;
    return true;
}

// Normalize P; move its daggered part and winding into the outer zone.
void settle_pending(Machine& m) {
    if (m.pend.empty()) return;
    Word w;
    w.start = m.pend.front().outer();
    w.letters = m.pend;
    if (!w.size_consistent()) throw std::logic_error("two-hole: inconsistent pending word");
    CanonicalWordState st = normalize(w);
    m.beta += st.beta_pow;
    int size = st.n_out;
    for (int t = (int)st.j_out.size() - 1; t >= 0; t--) {
        outer_feed(m, {true, size, st.j_out[t]});
        size -= 2;
    }
    for (int i = 0; i < st.s_out; i++) {
        outer_feed(m, {true, size, 0});
        size -= 2;
    }
    int mm = st.k2 + 2;
    long nblk = st.l >= 0 ? st.l : -st.l;
    for (long i = 0; i < nblk; i++) {
        if (st.l >= 0) {
            outer_feed(m, {false, mm, 1});
            outer_feed(m, {true, mm, 0});
        } else {
            outer_feed(m, {false, mm, 0});
            outer_feed(m, {true, mm, 1});
        }
    }
    m.pend.clear();
    size = st.k2 + 2;
    for (int i = 0; i < st.s_in; i++) {
        m.pend.push_back({false, size, 0});
        size += 2;
    }
    for (int v : st.j_in) {
        m.pend.push_back({false, size, v});
        size += 2;
    }
}

}  // namespace

TwoHoleForm two_hole_normal_form(const AnnularDiagram& lambda, const AnnularDiagram& lambda_a,
                                 const AnnularDiagram& lambda_b) {
    if (lambda.n_in != lambda_a.n_out + lambda_b.n_out)
        throw std::invalid_argument("two-hole: lambda inner size != N'_a + N'_b");
    Machine m;
    m.a = normalize(diagram_to_word(lambda_a));
    m.b = normalize(diagram_to_word(lambda_b));
    m.beta += m.a.beta_pow + m.b.beta_pow;
    m.a.beta_pow = m.b.beta_pow = 0;
    {
        CanonicalWordState st = normalize(diagram_to_word(lambda));
        m.beta += st.beta_pow;
        m.outer.k2 = st.k2;
        m.outer.l = st.l;
        m.outer.n_in = st.k2;
        m.outer_dag.s = st.s_out;
        m.outer_dag.j = st.j_out;
        int size = st.k2 + 2;
        for (int i = 0; i < st.s_in; i++) {
            m.pend.push_back({false, size, 0});
            size += 2;
        }
        for (int v : st.j_in) {
            m.pend.push_back({false, size, v});
            size += 2;
        }
    }

    for (int guard = 0;; guard++) {
        if (guard > 50000) throw std::logic_error("two-hole: reduction did not stabilize");

        // peel the a-subsystem's out-part: daggers with j >= 1 move to the
        // interface; c^dag_0 stays as connector material
        if (auto lt = out_leftmost(m.a); lt && lt->j >= 1) {
            drop_out_leftmost(m.a);
            m.pend.push_back({true, lt->size + m.wb(), lt->j});
            settle_pending(m);
            continue;
        }
        // peel the b-subsystem's out-part
        if (auto lt = out_leftmost(m.b); lt) {
            drop_out_leftmost(m.b);
            if (lt->j >= 1) {
                m.pend.push_back({true, lt->size + m.wa(), lt->j + m.wa()});
                settle_pending(m);
            } else {
                // (u (x) cdag_0 v) = Omega (cdag_0 u (x) v), Omega at the
                // pair width after the dagger crosses to the a side
                int W = m.wa() + lt->size;
                m.pend.push_back({false, W + 2, 1});
                m.pend.push_back({true, W + 2, 0});
                sub_prepend(m, m.a, {{true, m.wa() + 2, 0}});
                settle_pending(m);
            }
            continue;
        }
        // interface c_0 against a-side cdag_0: annihilate through the pair
        // relation lambda c_0 (cdag_0 u (x) v) = lambda (u (x) cdag_0 c_1 v)
        if (m.a.s_out > 0 && !m.pend.empty() && !m.pend.back().dag && m.pend.back().j == 0) {
            m.pend.pop_back();
            drop_out_leftmost(m.a);  // s_out > 0 and j_out empty here
            int bw = m.wb();
            if (bw >= 2)
                sub_prepend(m, m.b, {{true, bw, 0}, {false, bw, 1}});
            else
                sub_prepend(m, m.b, {{false, 2, 1}, {true, 2, 0}});  // f on the empty side
            continue;
        }
        // route the innermost pending c_{j >= 1} into the subsystems
        if (!m.pend.empty() && !m.pend.back().dag && m.pend.back().j >= 1) {
            Letter lt = m.pend.back();
            m.pend.pop_back();
            int wa = m.wa(), wb = m.wb();
            if (lt.size != wa + wb) throw std::logic_error("two-hole: width mismatch");
            if (lt.j <= wa - 1) {
                sub_prepend(m, m.a, {{false, wa, lt.j}});
            } else if (lt.j >= wa + 1) {
                sub_prepend(m, m.b, {{false, wb, lt.j - wa}});
            } else {
                // c_{Wa}(u (x) v) = c_0 (Omega^{-1} u (x) Omega v)
                m.pend.push_back({false, lt.size, 0});
                sub_prepend(m, m.a, {{false, wa + 2, 0}, {true, wa + 2, 1}});
                sub_prepend(m, m.b, {{false, wb + 2, 1}, {true, wb + 2, 0}});
            }
            continue;
        }
        if (!pend_all_c0(m)) {
            settle_pending(m);
            continue;
        }
        break;
    }

    TwoHoleForm f;
    f.kc2 = m.outer.k2;
    f.l_out = m.outer.l;
    f.s_out = m.outer_dag.s;
    f.j_out = m.outer_dag.j;
    f.conn = (int)m.pend.size() - m.a.s_out;  // c_0 count or -(cdag_0 count)
    assert(m.pend.empty() || m.a.s_out == 0);
    f.ka2 = m.a.k2;
    f.kb2 = m.b.k2;
    f.l_a = m.a.l;
    f.l_b = m.b.l;
    f.s_a = m.a.s_in;
    f.j_a = m.a.j_in;
    f.s_b = m.b.s_in;
    f.j_b = m.b.j_in;
    f.beta_pow = m.beta;
    f.n_out = lambda.n_out;
    f.n_a = lambda_a.n_in;
    f.n_b = lambda_b.n_in;
    int atop = m.a.k2 + 2 * m.a.s_out;  // a's width toward the connector
    if (f.conn >= 0) {
        if (f.kc2 + 2 * f.conn != atop + f.kb2)
            throw std::logic_error("two-hole: connector bookkeeping broke");
    } else {
        if (f.kc2 != atop + f.kb2) throw std::logic_error("two-hole: dagger connector broke");
    }
    return f;
}

ModuleVector two_hole_via_fusion(const AnnularDiagram& lambda, const AnnularDiagram& lambda_a,
                                 const AnnularDiagram& lambda_b) {
    FamilyPtr la = make_ldiag(lambda_a.n_in);
    FamilyPtr lb = make_ldiag(lambda_b.n_in);
    FamilyPtr fused = make_fused(la, lb);
    ModuleVector u = unit_vector(la, lambda_a.n_out, ldiag_state(lambda_a));
    ModuleVector v = unit_vector(lb, lambda_b.n_out, ldiag_state(lambda_b));
    return reduce_term(fused, raw_term(lambda, u, v, Scalar::one()));
}

std::string TwoHoleForm::str() const {
    std::ostringstream os;
    auto tuple = [&](const std::vector<int>& t) {
        os << '[';
        for (size_t i = 0; i < t.size(); i++) os << (i ? "," : "") << t[i];
        os << ']';
    };
    os << "beta^" << beta_pow << " (kc=" << kc2 << " l=" << l_out << " s=" << s_out << " j=";
    tuple(j_out);
    os << ") conn=" << conn << " (ka=" << ka2 << " l=" << l_a << " s=" << s_a << " j=";
    tuple(j_a);
    os << ") (kb=" << kb2 << " l=" << l_b << " s=" << s_b << " j=";
    tuple(j_b);
    os << ")";
    return os.str();
}

}  // namespace peritl
