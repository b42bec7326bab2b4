#include "peritl/fprank.hpp"

#include <algorithm>

namespace peritl {

uint64_t FpRank::powmod(uint64_t a, uint64_t e) const {
    uint64_t r = 1;
    a %= p_;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

bool FpRank::in_span(std::vector<std::pair<long, uint64_t>> row) const {
    std::sort(row.begin(), row.end());
    while (!row.empty()) {
        long lead = row.front().first;
        uint64_t val = row.front().second % p_;
        if (val == 0) {
            row.erase(row.begin());
            continue;
        }
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), lead,
                                   [](const auto& a, long c) { return a.first < c; });
        if (it == pivots_.end() || it->first != lead) return false;
        const auto& prow = it->second;
        std::vector<std::pair<long, uint64_t>> next;
        next.reserve(row.size() + prow.size());
        size_t i = 0, j = 0;
        while (i < row.size() || j < prow.size()) {
            if (j == prow.size() || (i < row.size() && row[i].first < prow[j].first)) {
                next.push_back(row[i++]);
            } else if (i == row.size() || prow[j].first < row[i].first) {
                uint64_t sub = mulmod(val, prow[j].second);
                next.push_back({prow[j].first, sub == 0 ? 0 : p_ - sub});
                j++;
            } else {
                uint64_t sub = mulmod(val, prow[j].second);
                uint64_t nv = (row[i].second + p_ - sub) % p_;
                if (nv) next.push_back({row[i].first, nv});
                i++;
                j++;
            }
        }
        next.erase(std::remove_if(next.begin(), next.end(),
                                  [](const auto& e) { return e.second == 0; }),
                   next.end());
        row = std::move(next);
    }
    return true;
}

bool FpRank::add_row(std::vector<std::pair<long, uint64_t>> row) {
    std::sort(row.begin(), row.end());
    while (!row.empty()) {
        long lead = row.front().first;
        uint64_t val = row.front().second % p_;
        if (val == 0) {
            row.erase(row.begin());
            continue;
        }
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), lead,
                                   [](const auto& a, long c) { return a.first < c; });
        if (it == pivots_.end() || it->first != lead) {
            // normalize and install as a new pivot row
            uint64_t inv = invmod(val);
            for (auto& [c, v] : row) v = mulmod(v, inv);
            pivots_.insert(it, {lead, std::move(row)});
            return true;
        }
        // eliminate: row -= val * pivot
        const auto& prow = it->second;
        std::vector<std::pair<long, uint64_t>> next;
        next.reserve(row.size() + prow.size());
        size_t i = 0, j = 0;
        while (i < row.size() || j < prow.size()) {
            if (j == prow.size() || (i < row.size() && row[i].first < prow[j].first)) {
                next.push_back(row[i++]);
            } else if (i == row.size() || prow[j].first < row[i].first) {
                uint64_t sub = mulmod(val, prow[j].second);
                next.push_back({prow[j].first, p_ - sub == p_ ? 0 : p_ - sub});
                j++;
            } else {
                uint64_t sub = mulmod(val, prow[j].second);
                uint64_t nv = (row[i].second + p_ - sub) % p_;
                if (nv) next.push_back({row[i].first, nv});
                i++;
                j++;
            }
        }
        next.erase(std::remove_if(next.begin(), next.end(),
                                  [](const auto& e) { return e.second == 0; }),
                   next.end());
        row = std::move(next);
    }
    return false;
}

}  // namespace peritl
