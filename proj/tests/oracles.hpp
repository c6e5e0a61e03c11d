#pragma once

// Brute-force reference implementations, independent of the library's
// solver paths. Exponential in n; meant for n <= ~14.

#include <map>
#include <optional>
#include <vector>

#include "lor/bigint.hpp"
#include "lor/core.hpp"

namespace lor::oracle {

// Minimum flip count by trying every subset of coordinates, plus the
// lexicographically smallest minimum-cardinality flip set.
struct BruteResult {
    std::optional<int> value;
    std::vector<std::size_t> lex_witness;
};

inline BruteResult brute_resilience(const WeightSequence& a, const SignVector& xi,
                                    const BigInt& x) {
    const std::size_t n = a.size();
    BruteResult best;
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        SignVector flipped = xi;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) {
                flipped.flip(i);
                idx.push_back(i);
            }
        if (evaluate(a, flipped) != x) continue;
        int card = static_cast<int>(idx.size());
        if (!best.value || card < *best.value ||
            (card == *best.value && idx < best.lex_witness)) {
            best.value = card;
            best.lex_witness = idx;
        }
    }
    return best;
}

// Distribution of R_x over all sign vectors, as distance -> count.
inline std::map<int, uint64_t> brute_profile(const WeightSequence& a, const BigInt& x) {
    const std::size_t n = a.size();
    std::map<int, uint64_t> counts;
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        SignVector xi = SignVector::from_vertex(static_cast<uint32_t>(v), n);
        auto r = brute_resilience(a, xi, x);
        if (r.value) ++counts[*r.value];
    }
    return counts;
}

// True iff every value in [n] is a sum of at most h distinct elements,
// by enumerating element subsets of size <= h.
inline bool brute_verify_basis(const std::vector<int64_t>& elems, int h, int64_t n) {
    std::vector<bool> covered(static_cast<std::size_t>(n) + 1, false);
    const std::size_t ne = elems.size();
    if (ne > 24) return false;  // oracle envelope
    for (uint64_t mask = 0; mask < (uint64_t(1) << ne); ++mask) {
        if (std::popcount(mask) > h) continue;
        int64_t sum = 0;
        for (std::size_t i = 0; i < ne; ++i)
            if ((mask >> i) & 1) sum += elems[i];
        if (sum >= 1 && sum <= n) covered[static_cast<std::size_t>(sum)] = true;
    }
    for (int64_t xv = 1; xv <= n; ++xv)
        if (!covered[static_cast<std::size_t>(xv)]) return false;
    return true;
}

// Exact minimum sum of squares over all order-h bases of [n], by full
// subset enumeration over [n] (n <= 12).
inline BigInt brute_min_basis_sos(int h, int64_t n) {
    BigInt best = -1;
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        std::vector<int64_t> elems;
        BigInt sos = 0;
        for (int64_t b = 1; b <= n; ++b)
            if ((mask >> (b - 1)) & 1) {
                elems.push_back(b);
                sos += BigInt(b) * b;
            }
        if (best >= 0 && sos >= best) continue;
        if (brute_verify_basis(elems, h, n)) best = sos;
    }
    return best;
}

}  // namespace lor::oracle
