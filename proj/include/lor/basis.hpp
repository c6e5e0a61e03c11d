#pragma once

#include <cstdint>
#include <vector>

#include "lor/bigint.hpp"

namespace lor {

// An order-h additive basis of [n]: every x in [n] is a sum of at most h
// DISTINCT elements. sum_of_squares is the minimized objective.
struct AdditiveBasis {
    std::vector<int64_t> elements;  // sorted ascending, distinct, positive
    int order = 1;
    int64_t range = 1;
    BigInt sum_of_squares;
};

// Rohrbach-style recursive construction:
//   h = 1            -> [n]
//   h > 1, m < n     -> [m] union m*B' with m = ceil(n^(2*3^(h-1)/(3^h-1)))
//                       and B' an order-(h-1) basis of [floor(n/m)]
//   h > 1, m >= n    -> [n]   (the recursion degenerates at small n)
// m is computed with exact integer q-th roots; no floating point.
AdditiveBasis build_basis(int h, int64_t n);

// True iff every x in [n] is a sum of at most h distinct elements of B.
// 0/1 min-count subset-sum DP, O(|B| * n).
bool verify_basis(const std::vector<int64_t>& elements, int h, int64_t n);

// Exact minimizer of the sum of squares over all order-h bases of [n],
// by branch-and-bound subset search (independent oracle; n <= 24).
AdditiveBasis optimal_basis_bruteforce(int h, int64_t n);

// Exact check of  sum_of_squares <= 10^h * n^(2 + 2/(3^h - 1)),
// compared as integers after raising both sides to the power 3^h - 1.
bool meets_square_sum_bound(const AdditiveBasis& basis);

}  // namespace lor
