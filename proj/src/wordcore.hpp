#pragma once

// Internal letter-folding machinery shared by the word normal form and the
// two-hole reduction: one subsystem holds a winding block (c_1 c_0^dag)^l at
// bridge count k2 followed by a sorted c-word (c_0)^s c_{J_1}..c_{J_n}.
// Letters append on the inner (right) side; a c^dag may be absorbed (beta
// powers, winding shifts) or escape past the bridges, shrinking k2 by two.

#include <cassert>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace peritl::wordcore {

struct CWord {
    int s = 0;
    std::vector<int> j;

    void append_c(int idx) {
        if (idx == 0) {
            s++;
            for (int& v : j) v++;
            return;
        }
        int pos = (int)j.size();
        while (pos >= 1 && j[pos - 1] >= idx) {
            j[pos - 1] += 2;
            pos--;
        }
        j.insert(j.begin() + pos, idx);
    }
};

// Pushes c^dag_{k2, cur} through an Omega^l block of size k2: passing shifts
// the index, meeting an Omega^{+-1} at index 0 or 1 (resp. 0 or k2-1)
// consumes that factor.
struct BlockPass {
    int idx;
    long l;
};

inline BlockPass pass_winding(int k2, long l, int cur) {
    long remaining = l, kept = 0;
    int n = k2;
    while (remaining != 0) {
        if (remaining > 0) {
            if (cur >= 2) {
                cur -= 1;
                kept += 1;
            } else {
                cur = cur == 1 ? 0 : n - 1;
            }
            remaining -= 1;
        } else {
            if (cur >= 1 && cur <= n - 2) {
                cur += 1;
                kept -= 1;
            } else {
                cur = cur == 0 ? 1 : 0;
            }
            remaining += 1;
        }
    }
    return {cur, kept};
}

struct SideState {
    int k2 = 0;
    long l = 0;       // winding at bridge count k2 (f power when k2 == 0)
    CWord word;       // (c_0)^s c_{J...}
    long beta_pow = 0;
    int n_in = 0;

    struct Escape {
        int idx;  // escaped dagger c^dag_{k2_before, idx}, 0 <= idx <= k2_before-1
    };

    void append_c(int idx) {
        word.append_c(idx);
        n_in += 2;
    }

    // Appends c^dag_{n_in, idx}; n_in drops by two either way.
    std::optional<Escape> append_cdag(int idx) {
        const int M = n_in;
        if (idx < 0 || idx > M - 1) throw std::invalid_argument("append_cdag: bad index");
        n_in = M - 2;

        int cur = idx;
        std::deque<int> trailing;
        auto& J = word.j;
        int t = (int)J.size();

        while (t >= 1) {
            int jt = J[t - 1];
            int mt = k2 + 2 * word.s + 2 * t;
            if (cur == 0) {
                if (mt == 2 && jt == 1) {
                    // c_{2,1} c^dag_{2,0} = f
                    assert(k2 == 0 && word.s == 0 && t == 1);
                    l += 1;
                    J.pop_back();
                    replay(trailing);
                    return std::nullopt;
                }
                if (jt == 1) {
                    // c_{m,1} c^dag_{m,0} = c_{m,0} c^dag_{m,m-1}
                    J.pop_back();
                    t--;
                    word.s++;
                    for (int i = 0; i < t; i++) J[i]++;
                    cur = mt - 1;
                    continue;
                }
                if (jt == mt - 1) {
                    // c_{m,m-1} c^dag_{m,0} = c_{m,0} c^dag_{m,1}
                    J.pop_back();
                    t--;
                    word.s++;
                    for (int i = 0; i < t; i++) J[i]++;
                    cur = 1;
                    continue;
                }
                // 2 <= jt <= mt-2
                trailing.push_front(jt - 1);
                J.pop_back();
                t--;
                continue;
            }
            if (jt <= cur - 2) {
                trailing.push_front(jt);
                cur -= 2;
                J.pop_back();
                t--;
            } else if (jt == cur - 1 || jt == cur + 1 || jt == cur) {
                if (jt == cur) beta_pow += 1;
                J.pop_back();
                replay(trailing);
                return std::nullopt;
            } else {
                trailing.push_front(jt - 2);
                J.pop_back();
                t--;
            }
        }

        int s = word.s;
        if (s == 0) return escape(cur, trailing);
        if (cur == 0) {
            word.s = s - 1;
            beta_pow += 1;
        } else if (cur <= s - 1) {
            word.s = s - 2;
            word.append_c(2 * s + k2 - cur - 2);
        } else if (cur == s) {
            word.s = s - 1;
            l -= k2 > 0 ? 1 : -1;  // c_0 c^dag_1 = Omega^{-1}; f at k2 = 0
        } else if (cur <= s + k2 - 1) {
            word.s = s;
            return escape(cur - s, trailing);
        } else if (cur == s + k2) {
            word.s = s - 1;
            l += 1;
        } else {
            word.s = s - 2;
            word.append_c(2 * s + k2 - cur);
        }
        replay(trailing);
        return std::nullopt;
    }

  private:
    void replay(const std::deque<int>& trailing) {
        for (int v : trailing) word.append_c(v);
    }
    std::optional<Escape> escape(int cur, const std::deque<int>& trailing) {
        assert(k2 >= 2 && cur >= 0 && cur <= k2 - 1);
        BlockPass bp = pass_winding(k2, l, cur);
        l = bp.l;
        k2 -= 2;
        replay(trailing);
        return Escape{bp.idx};
    }
};

}  // namespace peritl::wordcore
