#include "lor/basis.hpp"

#include <algorithm>
#include <set>

#include "lor/errors.hpp"

namespace lor {

namespace {

constexpr uint8_t kUncovered = 0xFF;

BigInt squares_sum(const std::vector<int64_t>& elements) {
    BigInt s = 0;
    for (int64_t b : elements) s += BigInt(b) * b;
    return s;
}

std::vector<int64_t> range_set(int64_t n) {
    std::vector<int64_t> v(static_cast<std::size_t>(n));
    for (int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return v;
}

void check_order_range(int h, int64_t n) {
    if (h < 1) throw UsageError("basis order must be >= 1");
    if (n < 1) throw UsageError("basis range must be >= 1");
    if (h > 12) throw ResourceLimitError("basis order above 12 is not supported");
}

// Minimum number of distinct elements of B summing to each value in
// [0, n]; kUncovered where no subset of size < 255 reaches the value.
std::vector<uint8_t> min_count_table(const std::vector<int64_t>& elements, int64_t n) {
    std::vector<uint8_t> cnt(static_cast<std::size_t>(n) + 1, kUncovered);
    cnt[0] = 0;
    for (int64_t b : elements) {
        if (b > n) continue;
        for (int64_t v = n; v >= b; --v) {
            uint8_t c = cnt[static_cast<std::size_t>(v - b)];
            if (c != kUncovered && c + 1 < cnt[static_cast<std::size_t>(v)])
                cnt[static_cast<std::size_t>(v)] = static_cast<uint8_t>(c + 1);
        }
    }
    return cnt;
}

}  // namespace

AdditiveBasis build_basis(int h, int64_t n) {
    check_order_range(h, n);
    AdditiveBasis basis;
    basis.order = h;
    basis.range = n;
    if (h == 1) {
        basis.elements = range_set(n);
        basis.sum_of_squares = squares_sum(basis.elements);
        return basis;
    }
    // m = ceil(n^(2*3^(h-1) / (3^h - 1))), exactly.
    const unsigned p = 2 * static_cast<unsigned>(to_int64(ipow(3, h - 1)));
    const unsigned q = static_cast<unsigned>(to_int64(ipow(3, h))) - 1;
    BigInt m_big = pow_ratio_ceil(n, p, q);
    if (m_big >= n) {
        basis.elements = range_set(n);
        basis.sum_of_squares = squares_sum(basis.elements);
        return basis;
    }
    const int64_t m = to_int64(m_big);
    AdditiveBasis inner = build_basis(h - 1, n / m);
    std::set<int64_t> elems;
    for (int64_t b = 1; b <= m; ++b) elems.insert(b);
    for (int64_t b : inner.elements) elems.insert(m * b);
    basis.elements.assign(elems.begin(), elems.end());
    basis.sum_of_squares = squares_sum(basis.elements);
    return basis;
}

bool verify_basis(const std::vector<int64_t>& elements, int h, int64_t n) {
    if (h < 1 || n < 1) return false;
    std::vector<int64_t> elems(elements);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!elems.empty() && elems.front() < 1)
        throw UsageError("basis elements must be positive integers");
    std::vector<uint8_t> cnt = min_count_table(elems, n);
    for (int64_t x = 1; x <= n; ++x)
        if (cnt[static_cast<std::size_t>(x)] > h) return false;
    return true;
}

AdditiveBasis optimal_basis_bruteforce(int h, int64_t n) {
    check_order_range(h, n);
    if (n > 24)
        throw ResourceLimitError("brute-force basis search is capped at n <= 24");

    // DFS over elements 1..n in order. Once element e is decided, the
    // coverage of the value e is final (sums use elements <= e only), so
    // a branch dies the moment any prefix value is left uncovered.
    const std::size_t N = static_cast<std::size_t>(n);
    std::vector<uint8_t> cnt(N + 1, kUncovered);
    cnt[0] = 0;

    AdditiveBasis seed = build_basis(h, n);
    BigInt best_sos = seed.sum_of_squares;
    std::vector<int64_t> best = seed.elements;
    std::vector<int64_t> chosen;
    BigInt cur_sos = 0;

    struct Undo {
        std::size_t v;
        uint8_t old;
    };
    std::vector<std::vector<Undo>> undo_stack;

    auto include = [&](int64_t b) {
        undo_stack.emplace_back();
        auto& log = undo_stack.back();
        for (int64_t v = n; v >= b; --v) {
            uint8_t c = cnt[static_cast<std::size_t>(v - b)];
            if (c != kUncovered && c + 1 < cnt[static_cast<std::size_t>(v)]) {
                log.push_back({static_cast<std::size_t>(v), cnt[static_cast<std::size_t>(v)]});
                cnt[static_cast<std::size_t>(v)] = static_cast<uint8_t>(c + 1);
            }
        }
        chosen.push_back(b);
        cur_sos += BigInt(b) * b;
    };
    auto undo = [&] {
        for (auto it = undo_stack.back().rbegin(); it != undo_stack.back().rend(); ++it)
            cnt[it->v] = it->old;
        undo_stack.pop_back();
        cur_sos -= BigInt(chosen.back()) * chosen.back();
        chosen.pop_back();
    };

    auto dfs = [&](auto&& self, int64_t e) -> void {
        if (e > n) {
            if (cur_sos < best_sos) {
                best_sos = cur_sos;
                best = chosen;
            }
            return;
        }
        // include e (explored first so small-element optima are found early)
        if (cur_sos + BigInt(e) * e < best_sos) {
            include(e);
            if (cnt[static_cast<std::size_t>(e)] <= h) self(self, e + 1);
            undo();
        }
        // exclude e
        if (cnt[static_cast<std::size_t>(e)] <= h) self(self, e + 1);
    };
    dfs(dfs, 1);

    AdditiveBasis basis;
    basis.order = h;
    basis.range = n;
    basis.elements = std::move(best);
    basis.sum_of_squares = best_sos;
    return basis;
}

bool meets_square_sum_bound(const AdditiveBasis& basis) {
    // sos <= 10^h * n^(2 + 2/(3^h-1))  <=>  sos^q <= 10^(h*q) * n^p
    // with p = 2*3^h and q = 3^h - 1; both sides exact integers.
    const unsigned p = 2 * static_cast<unsigned>(to_int64(ipow(3, basis.order)));
    const unsigned q = static_cast<unsigned>(to_int64(ipow(3, basis.order))) - 1;
    BigInt lhs = ipow(basis.sum_of_squares, q);
    BigInt rhs = ipow(10, static_cast<unsigned>(basis.order) * q) * ipow(basis.range, p);
    return lhs <= rhs;
}

}  // namespace lor
