#pragma once

#include <cstdint>
#include <vector>

namespace conleykit {

/// Dense GF(2) vector over 64-bit words.
struct BitVec {
    int n = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(int size) : n(size), w((size + 63) / 64, 0) {}

    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
    void flip(int i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }

    void operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= o.w[k];
    }

    bool none() const {
        for (uint64_t x : w)
            if (x) return false;
        return true;
    }

    /// Highest set index, -1 if zero.
    int low() const {
        for (int k = int(w.size()) - 1; k >= 0; --k)
            if (w[k]) return k * 64 + 63 - __builtin_clzll(w[k]);
        return -1;
    }

    int popcount() const {
        int c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }

    std::vector<int> ones() const {
        std::vector<int> out;
        for (std::size_t k = 0; k < w.size(); ++k) {
            uint64_t x = w[k];
            while (x) {
                out.push_back(int(k * 64 + __builtin_ctzll(x)));
                x &= x - 1;
            }
        }
        return out;
    }

    bool operator==(const BitVec& o) const { return n == o.n && w == o.w; }
};

/// Left-to-right column reduction R = D V over GF(2): after the call each
/// nonzero column of `cols` has a distinct low.  V (optional) records the
/// column operations; V[j] has top entry j.
inline void reduce_columns(std::vector<BitVec>& cols, int rows, std::vector<BitVec>* V = nullptr,
                           std::vector<int>* low_to_col = nullptr) {
    std::vector<int> owner(rows, -1);
    if (V) {
        V->assign(cols.size(), BitVec(int(cols.size())));
        for (std::size_t j = 0; j < cols.size(); ++j) (*V)[j].set(int(j));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        int l = cols[j].low();
        while (l >= 0 && owner[l] >= 0) {
            cols[j] ^= cols[owner[l]];
            if (V) (*V)[j] ^= (*V)[owner[l]];
            l = cols[j].low();
        }
        if (l >= 0) owner[l] = int(j);
    }
    if (low_to_col) *low_to_col = owner;
}

/// Rank of a set of GF(2) columns (destructive helper for oracles).
inline int gf2_rank(std::vector<BitVec> cols, int rows) {
    reduce_columns(cols, rows);
    int r = 0;
    for (auto& c : cols)
        if (!c.none()) ++r;
    return r;
}

}  // namespace conleykit
