#pragma once

#include <cstdint>
#include <vector>

namespace peritl {

// Incremental row-space rank over F_p, rows fed sparsely.
class FpRank {
  public:
    explicit FpRank(uint64_t p) : p_(p) {}

    uint64_t p() const { return p_; }
    long rank() const { return (long)pivots_.size(); }

    uint64_t mulmod(uint64_t a, uint64_t b) const {
        return (uint64_t)((unsigned __int128)a * b % p_);
    }
    uint64_t powmod(uint64_t a, uint64_t e) const;
    uint64_t invmod(uint64_t a) const { return powmod(a % p_, p_ - 2); }

    // Returns true if the row was independent (rank grew).
    bool add_row(std::vector<std::pair<long, uint64_t>> row);

    // Non-destructive membership test of the row space.
    bool in_span(std::vector<std::pair<long, uint64_t>> row) const;

  private:
    uint64_t p_;
    // pivot column -> normalized row (leading coefficient 1)
    std::vector<std::pair<long, std::vector<std::pair<long, uint64_t>>>> pivots_;
};

}  // namespace peritl
