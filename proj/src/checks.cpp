#include "peritl/checks.hpp"

#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace peritl {

int worker_count() {
    if (const char* env = std::getenv("PERITL_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

namespace {

struct DiagExpr {
    DiagSum sum;
};

DiagExpr word2(const AnnularDiagram& a, const AnnularDiagram& b) {
    return {compose(diag_sum(a), diag_sum(b))};
}

bool eq(const DiagExpr& a, const DiagExpr& b) { return a.sum == b.sum; }

std::string tag(const char* rel, int n, int j, int k) {
    std::ostringstream os;
    os << rel << " N=" << n << " j=" << j << " k=" << k;
    return os.str();
}

}  // namespace

SuiteReport check_relations_diagram(int nmax) {
    SuiteReport rep;
    Scalar beta = Scalar::beta();
    auto expect = [&](const DiagExpr& lhs, const DiagExpr& rhs, const std::string& what) {
        rep.checked++;
        if (!eq(lhs, rhs)) rep.fail(what);
    };
    for (int n = 2; n <= nmax; n++) {
        // (a) c_{N,j} c_{N+2,k}
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n + 1; k++) {
                if (j <= k - 2)
                    expect(word2(c_gen(n, j), c_gen(n + 2, k)),
                           word2(c_gen(n, k - 2), c_gen(n + 2, j)), tag("2.5a", n, j, k));
                else if (j >= k)
                    expect(word2(c_gen(n, j), c_gen(n + 2, k)),
                           word2(c_gen(n, k), c_gen(n + 2, j + 2)), tag("2.5a", n, j, k));
            }
        // (b) c^dag_{N+2,j} c^dag_{N,k}
        for (int j = 1; j <= n + 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                if (j <= k)
                    expect(word2(cdag_gen(n + 2, j), cdag_gen(n, k)),
                           word2(cdag_gen(n + 2, k + 2), cdag_gen(n, j)), tag("2.5b", n, j, k));
                else if (j >= k + 2)
                    expect(word2(cdag_gen(n + 2, j), cdag_gen(n, k)),
                           word2(cdag_gen(n + 2, k), cdag_gen(n, j - 2)), tag("2.5b", n, j, k));
            }
        // (c) c^dag_{N,j} c_{N,k}
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                DiagExpr lhs = word2(cdag_gen(n, j), c_gen(n, k));
                if (j <= k - 1)
                    expect(lhs, word2(c_gen(n + 2, k + 2), cdag_gen(n + 2, j)),
                           tag("2.5c", n, j, k));
                else if (j == k) {
                    expect(lhs, word2(c_gen(n + 2, j), cdag_gen(n + 2, j + 2)),
                           tag("2.5c=", n, j, k));
                    expect(lhs, word2(c_gen(n + 2, j + 2), cdag_gen(n + 2, j)),
                           tag("2.5c='", n, j, k));
                } else
                    expect(lhs, word2(c_gen(n + 2, k), cdag_gen(n + 2, j + 2)),
                           tag("2.5c", n, j, k));
            }
        // (d) c_{N,j} c^dag_{N,k}
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                DiagExpr lhs = word2(c_gen(n, j), cdag_gen(n, k));
                if (j <= k - 2)
                    expect(lhs, word2(cdag_gen(n - 2, k - 2), c_gen(n - 2, j)),
                           tag("2.5d", n, j, k));
                else if (j == k - 1 || j == k + 1)
                    expect(lhs, {diag_sum(id_diagram(n - 2))}, tag("2.5d-id", n, j, k));
                else if (j == k)
                    expect(lhs, {diag_sum(id_diagram(n - 2), beta)}, tag("2.5d-beta", n, j, k));
                else
                    expect(lhs, word2(cdag_gen(n - 2, k), c_gen(n - 2, j - 2)),
                           tag("2.5d", n, j, k));
            }
        // (e) c_{N,0} c_{N+2,j} = c_{N,j-1} c_{N+2,0}
        for (int j = 2; j <= n; j++)
            expect(word2(c_gen(n, 0), c_gen(n + 2, j)), word2(c_gen(n, j - 1), c_gen(n + 2, 0)),
                   tag("2.5e", n, j, 0));
        // (f) c^dag_{N+2,0} c^dag_{N,j} = c^dag_{N+2,j+1} c^dag_{N,0}
        for (int j = 1; j <= n - 1; j++)
            expect(word2(cdag_gen(n + 2, 0), cdag_gen(n, j)),
                   word2(cdag_gen(n + 2, j + 1), cdag_gen(n, 0)), tag("2.5f", n, j, 0));
        // (g) c^dag_{N,0} c_{N,j} = c_{N+2,j+1} c^dag_{N+2,0}
        for (int j = 1; j <= n - 1; j++)
            expect(word2(cdag_gen(n, 0), c_gen(n, j)),
                   word2(c_gen(n + 2, j + 1), cdag_gen(n + 2, 0)), tag("2.5g", n, j, 0));
        // (h) c_{N,0} c^dag_{N,j}
        for (int j = 0; j <= n - 1; j++) {
            DiagExpr lhs = word2(c_gen(n, 0), cdag_gen(n, j));
            if (j == 0)
                expect(lhs, {diag_sum(id_diagram(n - 2), beta)}, tag("2.5h", n, j, 0));
            else if (j == 1)
                expect(lhs, word2(c_gen(n, n - 1), cdag_gen(n, 0)), tag("2.5h", n, j, 0));
            else if (j == n - 1)
                expect(lhs, word2(c_gen(n, 1), cdag_gen(n, 0)), tag("2.5h", n, j, 0));
            else
                expect(lhs, word2(cdag_gen(n - 2, j - 1), c_gen(n - 2, 0)), tag("2.5h", n, j, 0));
        }
        // (i) c_1 c^dag_0 c_0 c^dag_1 = c_0 c^dag_1 c_1 c^dag_0 = id
        {
            DiagSum w1 = compose(word2(c_gen(n, 1), cdag_gen(n, 0)).sum,
                                 word2(c_gen(n, 0), cdag_gen(n, 1)).sum);
            DiagSum w2 = compose(word2(c_gen(n, 0), cdag_gen(n, 1)).sum,
                                 word2(c_gen(n, 1), cdag_gen(n, 0)).sum);
            expect({w1}, {diag_sum(id_diagram(n - 2))}, tag("2.5i", n, 0, 0));
            expect({w2}, {diag_sum(id_diagram(n - 2))}, tag("2.5i'", n, 0, 0));
        }
    }
    return rep;
}

namespace {

// Operator built from up to four letters, applied to every basis state of
// the family at the innermost size; both routes must produce equal vectors.
struct FamCheck {
    const FamilyPtr& fam;
    int nmax;
    double tol;
    SuiteReport& rep;

    void operator()(const std::vector<Letter>& lhs, const std::vector<Letter>& rhs,
                    const Scalar& rhs_scale, const std::string& what) const {
        Word wl{lhs.empty() ? 0 : lhs.front().outer(), lhs};
        Word wr{rhs.empty() ? 0 : rhs.front().outer(), rhs};
        int inner = lhs.empty() ? (rhs.empty() ? -1 : wr.n_in()) : wl.n_in();
        if (rhs.empty()) wr.start = inner;
        if (lhs.empty()) wl.start = inner;
        if (inner > nmax + 2 || inner < 0 || !fam->admissible(inner)) return;
        if (!wl.size_consistent() || !wr.size_consistent() || wr.n_in() != inner) return;
        for (const BState& s : basis(fam, inner)) {
            ModuleVector v = unit_vector(fam, inner, s);
            ModuleVector a = act_word(wl, v);
            ModuleVector b = act_word(wr, v) * to_family_scalar(fam, rhs_scale);
            rep.checked++;
            if (fam->numeric()) {
                double dev = a.max_dev(b);
                rep.max_dev = std::max(rep.max_dev, dev);
                if (dev > tol) rep.fail(what + " " + s.str());
            } else if (!a.eq(b)) {
                rep.fail(what + " " + s.str());
            }
        }
    }
};

}  // namespace

SuiteReport check_relations_family(const FamilyPtr& fam, int nmax, double tol) {
    SuiteReport rep;
    Scalar one = Scalar::one();
    Scalar beta = Scalar::beta();
    FamCheck chk{fam, nmax, tol, rep};
    auto C = [](int n, int j) { return Letter{false, n, j}; };
    auto D = [](int n, int j) { return Letter{true, n, j}; };
    for (int n = 2; n <= nmax; n++) {
        // (a)
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n + 1; k++) {
                if (j <= k - 2)
                    chk({C(n, j), C(n + 2, k)}, {C(n, k - 2), C(n + 2, j)}, one,
                        tag("2.5a", n, j, k));
                else if (j >= k)
                    chk({C(n, j), C(n + 2, k)}, {C(n, k), C(n + 2, j + 2)}, one,
                        tag("2.5a", n, j, k));
            }
        // (e)
        for (int j = 2; j <= n; j++)
            chk({C(n, 0), C(n + 2, j)}, {C(n, j - 1), C(n + 2, 0)}, one, tag("2.5e", n, j, 0));
    }
    for (int n = 2; n <= nmax; n++) {
        // (b)
        for (int j = 1; j <= n + 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                if (j <= k)
                    chk({D(n + 2, j), D(n, k)}, {D(n + 2, k + 2), D(n, j)}, one,
                        tag("2.5b", n, j, k));
                else if (j >= k + 2)
                    chk({D(n + 2, j), D(n, k)}, {D(n + 2, k), D(n, j - 2)}, one,
                        tag("2.5b", n, j, k));
            }
        // (f)
        for (int j = 1; j <= n - 1; j++)
            chk({D(n + 2, 0), D(n, j)}, {D(n + 2, j + 1), D(n, 0)}, one, tag("2.5f", n, j, 0));
        // (c): both sides end at size n; inner size n
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                if (j <= k - 1)
                    chk({D(n, j), C(n, k)}, {C(n + 2, k + 2), D(n + 2, j)}, one,
                        tag("2.5c", n, j, k));
                else if (j == k) {
                    chk({D(n, j), C(n, k)}, {C(n + 2, j), D(n + 2, j + 2)}, one,
                        tag("2.5c=", n, j, k));
                    chk({D(n, j), C(n, k)}, {C(n + 2, j + 2), D(n + 2, j)}, one,
                        tag("2.5c='", n, j, k));
                } else {
                    chk({D(n, j), C(n, k)}, {C(n + 2, k), D(n + 2, j + 2)}, one,
                        tag("2.5c", n, j, k));
                }
            }
        // (g)
        for (int j = 1; j <= n - 1; j++)
            chk({D(n, 0), C(n, j)}, {C(n + 2, j + 1), D(n + 2, 0)}, one, tag("2.5g", n, j, 0));
        // (d)
        for (int j = 1; j <= n - 1; j++)
            for (int k = 1; k <= n - 1; k++) {
                if (j <= k - 2)
                    chk({C(n, j), D(n, k)}, {D(n - 2, k - 2), C(n - 2, j)}, one,
                        tag("2.5d", n, j, k));
                else if (j == k - 1 || j == k + 1)
                    chk({C(n, j), D(n, k)}, {}, one, tag("2.5d-id", n, j, k));
                else if (j == k)
                    chk({C(n, j), D(n, k)}, {}, beta, tag("2.5d-beta", n, j, k));
                else
                    chk({C(n, j), D(n, k)}, {D(n - 2, k), C(n - 2, j - 2)}, one,
                        tag("2.5d", n, j, k));
            }
        // (h)
        for (int j = 0; j <= n - 1; j++) {
            if (j == 0)
                chk({C(n, 0), D(n, 0)}, {}, beta, tag("2.5h", n, j, 0));
            else if (j == 1)
                chk({C(n, 0), D(n, 1)}, {C(n, n - 1), D(n, 0)}, one, tag("2.5h", n, j, 0));
            else if (j == n - 1)
                chk({C(n, 0), D(n, n - 1)}, {C(n, 1), D(n, 0)}, one, tag("2.5h", n, j, 0));
            else
                chk({C(n, 0), D(n, j)}, {D(n - 2, j - 1), C(n - 2, 0)}, one,
                    tag("2.5h", n, j, 0));
        }
        // (i)
        chk({C(n, 1), D(n, 0), C(n, 0), D(n, 1)}, {}, one, tag("2.5i", n, 0, 0));
        chk({C(n, 0), D(n, 1), C(n, 1), D(n, 0)}, {}, one, tag("2.5i'", n, 0, 0));
    }
    return rep;
}

SuiteReport check_omega_centrality(int nmax, int samples, uint64_t seed) {
    SuiteReport rep;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < samples; trial++) {
        int no = 1 + (int)(rng() % nmax);
        int ni = no % 2 + (int)(rng() % ((nmax - no % 2) / 2 + 1)) * 2;
        if (ni > nmax) ni = no;
        if ((no - ni) % 2) ni = no;
        std::vector<int> bs;
        for (int b = no % 2; b <= std::min(no, ni); b += 2) bs.push_back(b);
        int b = bs[rng() % bs.size()];
        auto to = opener_tuples(no, b);
        auto ti = opener_tuples(ni, b);
        long l = b == 0 ? (long)(rng() % 3) : (long)(rng() % 5) - 2;
        AnnularDiagram d{no, ni, b, l, to[rng() % to.size()], ti[rng() % ti.size()]};
        auto lhs = compose(diag_sum(omega_pow(no, no)), diag_sum(d));
        auto rhs = compose(diag_sum(d), diag_sum(omega_pow(ni, ni)));
        rep.checked++;
        if (!(lhs == rhs)) rep.fail("Omega^N centrality at N=" + std::to_string(no));
    }
    return rep;
}

SuiteReport check_push_through(int nmax) {
    SuiteReport rep;
    for (int n = 2; n <= nmax; n++) {
        DiagSum Fn = braid_f(n), Fm = braid_f(n - 2);
        DiagSum Fbn = braid_fbar(n), Fbm = braid_fbar(n - 2);
        for (int j = 0; j <= n - 1; j++) {
            rep.checked++;
            if (!(compose(diag_sum(c_gen(n, j)), Fn) == compose(Fm, diag_sum(c_gen(n, j)))))
                rep.fail("push-through F c_" + std::to_string(j) + " N=" + std::to_string(n));
            rep.checked++;
            if (!(compose(Fn, diag_sum(cdag_gen(n, j))) == compose(diag_sum(cdag_gen(n, j)), Fm)))
                rep.fail("push-through F cdag_" + std::to_string(j) + " N=" + std::to_string(n));
            rep.checked++;
            if (!(compose(diag_sum(c_gen(n, j)), Fbn) == compose(Fbm, diag_sum(c_gen(n, j)))))
                rep.fail("push-through Fbar c_" + std::to_string(j) + " N=" + std::to_string(n));
        }
    }
    return rep;
}

}  // namespace peritl
