#include "peritl/diagram.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>

namespace peritl {

bool AnnularDiagram::valid() const {
    if (n_out < 0 || n_in < 0 || b < 0) return false;
    if ((n_out - b) % 2 != 0 || (n_in - b) % 2 != 0) return false;
    if (b > std::min(n_out, n_in)) return false;
    if (b == 0 && l < 0) return false;
    if ((int)out.size() != (n_out - b) / 2 || (int)in.size() != (n_in - b) / 2) return false;
    auto increasing = [](const std::vector<int>& t, int n) {
        int prev = 0;
        for (int v : t) {
            if (v <= prev || v > n) return false;
            prev = v;
        }
        return true;
    };
    return increasing(out, n_out) && increasing(in, n_in);
}

void AnnularDiagram::check() const {
    if (!valid()) throw std::invalid_argument("invalid canonical diagram data");
}

Completion complete_tuple(int n, const std::vector<int>& openers) {
    std::vector<int> state(n + 1, 0);  // 0 free, 1 opener, 2 matched
    for (int o : openers) state[o] = 1;
    Completion out;
    int remaining = (int)openers.size();
    while (remaining > 0) {
        bool progress = false;
        for (int o = 1; o <= n; o++) {
            if (state[o] != 1) continue;
            // next free position counter-clockwise
            int f = 0;
            bool wrapped = false;
            for (int step = 1; step < n; step++) {
                int p = o + step;
                if (p > n) {
                    p -= n;
                    wrapped = true;
                }
                if (state[p] == 2) continue;
                f = p;
                break;
            }
            if (f == 0 || state[f] == 1) continue;  // nested opener resolves first
            state[o] = state[f] = 2;
            out.arches.push_back({o, f, wrapped});
            remaining--;
            progress = true;
        }
        if (!progress) throw std::logic_error("tuple completion stalled");
    }
    for (int p = 1; p <= n; p++)
        if (state[p] == 0) out.bridge_slots.push_back(p);
    return out;
}

ExplicitForm canonical_to_explicit(const AnnularDiagram& d) {
    d.check();
    ExplicitForm e;
    e.n_out = d.n_out;
    e.n_in = d.n_in;
    Completion co = complete_tuple(d.n_out, d.out);
    Completion ci = complete_tuple(d.n_in, d.in);
    for (const auto& a : co.arches)
        e.strands.push_back({{0, a.opener}, {0, a.closer}, a.wraps ? 1 : 0});
    for (const auto& a : ci.arches)
        e.strands.push_back({{1, a.opener}, {1, a.closer}, a.wraps ? 1 : 0});
    if (d.b > 0) {
        // Bridges realize Omega^l: slot m on the outside connects to slot
        // m + l (periodically) on the inside; floor division counts the
        // seam crossings.
        for (int m = 0; m < d.b; m++) {
            long t = m + d.l;
            long w = t >= 0 ? t / d.b : -((-t + d.b - 1) / d.b);
            int q = (int)(t - w * d.b);
            e.strands.push_back({{0, co.bridge_slots[m]}, {1, ci.bridge_slots[q]}, (int)w});
        }
    } else {
        for (long i = 0; i < d.l; i++) e.loops.push_back(1);
    }
    return e;
}

std::pair<AnnularDiagram, Scalar> explicit_to_canonical(const ExplicitForm& e) {
    AnnularDiagram d;
    d.n_out = e.n_out;
    d.n_in = e.n_in;
    Scalar factor = Scalar::one();
    long loop_winding = 0;

    std::vector<std::pair<int, bool>> bridges;       // (outer node, placeholder)
    std::vector<std::pair<int, int>> bridge_pairs;   // outer node -> (inner node, w)
    std::vector<int> seen_out(e.n_out + 1, 0), seen_in(e.n_in + 1, 0);

    auto note = [&](const Endpoint& p) {
        auto& v = p.side == 0 ? seen_out : seen_in;
        if (p.index < 1 || p.index > (p.side == 0 ? e.n_out : e.n_in) || v[p.index]++)
            throw std::invalid_argument("explicit form: bad or repeated endpoint");
    };

    std::map<int, std::pair<int, int>> bridge_by_out;
    for (const auto& s : e.strands) {
        note(s.a);
        note(s.b);
        if (s.a.side == s.b.side) {
            // arch: net seam crossing decides opener vs closer
            int p = s.a.index, q = s.b.index, c = s.seam_cross;
            if (std::abs(c) > 1) throw std::invalid_argument("arch with |seam total| >= 2");
            int opener, closer;
            if (c == 0) {
                opener = std::min(p, q);
                closer = std::max(p, q);
            } else {
                opener = c == 1 ? p : q;
                closer = c == 1 ? q : p;
                if (opener <= closer) throw std::invalid_argument("non-simple crossing arch");
            }
            (s.a.side == 0 ? d.out : d.in).push_back(opener);
        } else {
            int w = s.a.side == 0 ? s.seam_cross : -s.seam_cross;
            int po = s.a.side == 0 ? s.a.index : s.b.index;
            int pi = s.a.side == 0 ? s.b.index : s.a.index;
            bridge_by_out[po] = {pi, w};
        }
    }
    for (int p = 1; p <= e.n_out; p++)
        if (!seen_out[p]) throw std::invalid_argument("outer node unused");
    for (int p = 1; p <= e.n_in; p++)
        if (!seen_in[p]) throw std::invalid_argument("inner node unused");

    d.b = (int)bridge_by_out.size();
    for (int t : e.loops) {
        if (std::abs(t) > 1) throw std::invalid_argument("loop with |seam total| >= 2");
        if (t == 0) {
            factor = factor * Scalar::beta();
        } else {
            if (d.b > 0) throw std::invalid_argument("non-contractible loop next to bridges");
            loop_winding++;
        }
    }
    std::sort(d.out.begin(), d.out.end());
    std::sort(d.in.begin(), d.in.end());

    if (d.b == 0) {
        d.l = loop_winding;
    } else {
        long total = 0;
        for (const auto& [po, piw] : bridge_by_out) total += piw.second;
        d.l = total;
        // sanity: the winding distribution must match the Omega^l pattern
    }
    d.check();
    return {d, factor};
}

namespace {

// Node of the glued picture during composition.
struct GlueRef {
    int diag;   // 1 or 2
    int side;   // 0 outer, 1 inner
    int index;  // 1-indexed
};

struct Partner {
    int side = -1, index = 0, w = 0;
};

// partner tables for one explicit form
struct Tables {
    std::vector<Partner> out, in;  // 1-indexed

    explicit Tables(const ExplicitForm& e) : out(e.n_out + 1), in(e.n_in + 1) {
        for (const auto& s : e.strands) {
            set(s.a, s.b, s.seam_cross);
            set(s.b, s.a, -s.seam_cross);
        }
    }
    void set(const Endpoint& from, const Endpoint& to, int w) {
        auto& v = from.side == 0 ? out : in;
        v[from.index] = {to.side, to.index, w};
    }
    const Partner& at(int side, int index) const { return side == 0 ? out[index] : in[index]; }
};

}  // namespace

std::pair<AnnularDiagram, Scalar> compose(const AnnularDiagram& d1, const AnnularDiagram& d2) {
    if (d1.n_in != d2.n_out) throw std::invalid_argument("compose: boundary size mismatch");
    ExplicitForm e1 = canonical_to_explicit(d1);
    ExplicitForm e2 = canonical_to_explicit(d2);
    Tables t1(e1), t2(e2);

    ExplicitForm r;
    r.n_out = d1.n_out;
    r.n_in = d2.n_in;
    for (int t : e1.loops) r.loops.push_back(t);
    for (int t : e2.loops) r.loops.push_back(t);

    int ng = d1.n_in;
    std::vector<char> used1o(d1.n_out + 1, 0), used2i(d2.n_in + 1, 0), usedg(ng + 1, 0);

    // walk from an open endpoint through the glued row until the far end
    auto trace = [&](int diag, int side, int index) {
        int acc = 0;
        int cd = diag, cs = side, ci = index;
        while (true) {
            const Partner& p = cd == 1 ? t1.at(cs, ci) : t2.at(cs, ci);
            acc += p.w;
            if (cd == 1 && p.side == 0) return std::tuple{0, p.index, acc};  // ends on outer
            if (cd == 2 && p.side == 1) return std::tuple{1, p.index, acc};  // ends on inner
            // hit the glued row: hop between the diagrams
            usedg[p.index] = 1;
            cd = cd == 1 ? 2 : 1;
            cs = cd == 1 ? 1 : 0;
            ci = p.index;
        }
    };

    for (int p = 1; p <= d1.n_out; p++) {
        if (used1o[p]) continue;
        used1o[p] = 1;
        auto [side, q, acc] = trace(1, 0, p);
        if (side == 0) {
            used1o[q] = 1;
            r.strands.push_back({{0, p}, {0, q}, acc});
        } else {
            used2i[q] = 1;
            r.strands.push_back({{0, p}, {1, q}, acc});
        }
    }
    for (int p = 1; p <= d2.n_in; p++) {
        if (used2i[p]) continue;
        used2i[p] = 1;
        auto [side, q, acc] = trace(2, 1, p);
        assert(side == 1);
        used2i[q] = 1;
        r.strands.push_back({{1, p}, {1, q}, acc});
    }
    // remaining glued nodes belong to closed loops
    for (int g = 1; g <= ng; g++) {
        if (usedg[g]) continue;
        int acc = 0;
        int cd = 2, cs = 0, ci = g;  // start downward into d2
        while (true) {
            usedg[ci] = 1;
            const Partner& p = cd == 1 ? t1.at(cs, ci) : t2.at(cs, ci);
            acc += p.w;
            assert((cd == 1 && p.side == 1) || (cd == 2 && p.side == 0));
            cd = cd == 1 ? 2 : 1;
            cs = cd == 1 ? 1 : 0;
            ci = p.index;
            if (cd == 2 && ci == g) break;
        }
        r.loops.push_back(acc);
    }
    return explicit_to_canonical(r);
}

DiagSum diag_sum(const AnnularDiagram& d, const Scalar& c) {
    DiagSum s;
    if (!c.is_zero()) s[d] = c;
    return s;
}

DiagSum add(const DiagSum& a, const DiagSum& b) {
    DiagSum r = a;
    for (const auto& [d, c] : b) {
        auto it = r.find(d);
        if (it == r.end()) {
            r.emplace(d, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

DiagSum scale(const DiagSum& a, const Scalar& c) {
    DiagSum r;
    if (c.is_zero()) return r;
    for (const auto& [d, s] : a) {
        Scalar t = s * c;
        if (!t.is_zero()) r[d] = t;
    }
    return r;
}

DiagSum compose(const DiagSum& a, const DiagSum& b) {
    DiagSum r;
    for (const auto& [d1, c1] : a)
        for (const auto& [d2, c2] : b) {
            auto [d, f] = compose(d1, d2);
            Scalar c = c1 * c2 * f;
            if (c.is_zero()) continue;
            auto it = r.find(d);
            if (it == r.end()) {
                r.emplace(d, c);
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    return r;
}

AnnularDiagram id_diagram(int n) { return {n, n, n, 0, {}, {}}; }

AnnularDiagram c_gen(int n, int j) {
    if (n < 2 || j < 0 || j > n - 1) throw std::invalid_argument("c_gen: index out of range");
    return {n - 2, n, n - 2, 0, {}, {j == 0 ? n : j}};
}

AnnularDiagram cdag_gen(int n, int j) { return adjoint(c_gen(n, j)); }

AnnularDiagram e_gen(int n, int j) {
    if (n < 2 || j < 0 || j > n - 1) throw std::invalid_argument("e_gen: index out of range");
    int o = j == 0 ? n : j;
    return {n, n, n - 2, 0, {o}, {o}};
}

AnnularDiagram omega(int n) {
    if (n < 1) throw std::invalid_argument("omega: n >= 1");
    return {n, n, n, 1, {}, {}};
}

AnnularDiagram omega_inv(int n) {
    if (n < 1) throw std::invalid_argument("omega_inv: n >= 1");
    return {n, n, n, -1, {}, {}};
}

AnnularDiagram omega_pow(int n, long p) {
    if (n == 0) return {0, 0, 0, std::abs(p), {}, {}};
    return {n, n, n, p, {}, {}};
}

AnnularDiagram f_loop() { return {0, 0, 0, 1, {}, {}}; }

DiagSum braid(int n, int j) {
    DiagSum s = diag_sum(id_diagram(n), Scalar::var(Var::s));
    return add(s, diag_sum(e_gen(n, j), Scalar::var(Var::s, -1)));
}

DiagSum braid_bar(int n, int j) {
    DiagSum s = diag_sum(id_diagram(n), Scalar::var(Var::s, -1));
    return add(s, diag_sum(e_gen(n, j), Scalar::var(Var::s)));
}

DiagSum braid_f(int n) {
    if (n == 0) return diag_sum(f_loop());
    DiagSum r = diag_sum(c_gen(n + 2, 1));
    for (int j = 2; j <= n + 1; j++) r = compose(r, braid(n + 2, j));
    return compose(r, diag_sum(cdag_gen(n + 2, 0)));
}

DiagSum braid_fbar(int n) {
    if (n == 0) return diag_sum(f_loop());
    DiagSum r = diag_sum(c_gen(n + 2, 1));
    for (int j = 2; j <= n + 1; j++) r = compose(r, braid_bar(n + 2, j));
    return compose(r, diag_sum(cdag_gen(n + 2, 0)));
}

AnnularDiagram adjoint(const AnnularDiagram& d) {
    AnnularDiagram r;
    r.n_out = d.n_in;
    r.n_in = d.n_out;
    r.b = d.b;
    r.l = d.b > 0 ? -d.l : d.l;
    r.out = d.in;
    r.in = d.out;
    return r;
}

int sigma(const AnnularDiagram& d) {
    long crossings = d.l;
    Completion co = complete_tuple(d.n_out, d.out);
    Completion ci = complete_tuple(d.n_in, d.in);
    for (const auto& a : co.arches) crossings += a.wraps ? 1 : 0;
    for (const auto& a : ci.arches) crossings += a.wraps ? 1 : 0;
    return crossings % 2 == 0 ? 1 : -1;
}

AnnularDiagram reflect(const AnnularDiagram& d) {
    ExplicitForm e = canonical_to_explicit(d);
    ExplicitForm m;
    m.n_out = e.n_out;
    m.n_in = e.n_in;
    m.loops = e.loops;
    for (const auto& s : e.strands) {
        auto mir = [&](Endpoint p) {
            p.index = (p.side == 0 ? e.n_out : e.n_in) + 1 - p.index;
            return p;
        };
        m.strands.push_back({mir(s.a), mir(s.b), -s.seam_cross});
    }
    auto [r, f] = explicit_to_canonical(m);
    assert(f == Scalar::one());
    return r;
}

DiagSum adjoint(const DiagSum& s) {
    DiagSum r;
    for (const auto& [d, c] : s) r[adjoint(d)] = c;
    return r;
}

DiagSum reflect(const DiagSum& s) {
    DiagSum r;
    for (const auto& [d, c] : s) r[reflect(d)] = c;
    return r;
}

std::vector<std::vector<int>> opener_tuples(int n, int b) {
    int len = (n - b) / 2;
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if ((int)cur.size() == len) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= n; v++) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

std::vector<AnnularDiagram> enumerate_basis(int n_out, int n_in, int b,
                                            const std::vector<long>& l_range) {
    if (b > std::min(n_out, n_in) || (n_out - b) % 2 || (n_in - b) % 2)
        throw std::invalid_argument("enumerate_basis: invalid bridge count");
    std::vector<AnnularDiagram> out;
    for (const auto& to : opener_tuples(n_out, b))
        for (const auto& ti : opener_tuples(n_in, b))
            for (long l : l_range) {
                if (b == 0 && l < 0) continue;
                out.push_back({n_out, n_in, b, l, to, ti});
            }
    return out;
}

}  // namespace peritl
