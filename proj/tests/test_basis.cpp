#include <doctest.h>

#include "lor/basis.hpp"
#include "oracles.hpp"

using namespace lor;

TEST_CASE("build_basis base case and worked examples") {
    auto b1 = build_basis(1, 5);
    CHECK(b1.elements == std::vector<int64_t>{1, 2, 3, 4, 5});
    CHECK(b1.sum_of_squares == 55);

    auto b2 = build_basis(2, 9);  // m = ceil(9^(6/8)) = 6, B' = {1}
    CHECK(b2.elements == std::vector<int64_t>{1, 2, 3, 4, 5, 6});
    CHECK(b2.sum_of_squares == 91);

    auto tiny = build_basis(2, 1);
    CHECK(tiny.elements == std::vector<int64_t>{1});
}

TEST_CASE("verify_basis agrees with the subset oracle") {
    CHECK_FALSE(verify_basis({1, 2, 4}, 2, 7));  // 7 needs three elements
    CHECK(verify_basis({1, 2, 3, 4, 5, 6}, 2, 9));
    CHECK(verify_basis({1}, 1, 1));
    CHECK_FALSE(verify_basis({1, 2}, 2, 4));  // 4 = 2+2 is not distinct
    CHECK_FALSE(verify_basis({1, 3}, 2, 4));  // 2 is uncovered
    CHECK(verify_basis({1, 2, 3}, 2, 5));
    for (int h = 1; h <= 3; ++h)
        for (int64_t n = 1; n <= 10; ++n) {
            // pseudo-random small element sets
            for (uint64_t mask = 1; mask < 32; mask += 3) {
                std::vector<int64_t> elems;
                for (int64_t b = 1; b <= 5; ++b)
                    if ((mask >> (b - 1)) & 1) elems.push_back(b);
                CHECK(verify_basis(elems, h, n) == oracle::brute_verify_basis(elems, h, n));
            }
        }
}

TEST_CASE("exponent identity 2 + 2/(3^h - 1) = 2*3^h/(3^h - 1)") {
    for (int h = 1; h <= 10; ++h) {
        BigInt p3 = ipow(3, static_cast<unsigned>(h));
        BigRational lhs = BigRational(2) + BigRational(2, p3 - 1);
        BigRational rhs = BigRational(2 * p3, p3 - 1);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("construction verifies and meets the square-sum bound (sampled)") {
    for (int h = 1; h <= 4; ++h)
        for (int64_t n : {1, 2, 3, 5, 9, 17, 33, 64, 100, 200, 321, 500}) {
            auto b = build_basis(h, n);
            CHECK(verify_basis(b.elements, h, n));
            CHECK(meets_square_sum_bound(b));
        }
}

TEST_CASE("monotone coverage in order and range") {
    auto b = build_basis(2, 60);
    CHECK(verify_basis(b.elements, 3, 60));
    CHECK(verify_basis(b.elements, 5, 60));
    CHECK(verify_basis(b.elements, 2, 45));
    CHECK(verify_basis(b.elements, 2, 1));
}

TEST_CASE("brute-force optimum on the worked examples") {
    auto f1 = optimal_basis_bruteforce(1, 4);
    CHECK(f1.elements == std::vector<int64_t>{1, 2, 3, 4});  // order 1 forces [n]

    auto f2 = optimal_basis_bruteforce(2, 4);
    CHECK(f2.sum_of_squares == 14);
    CHECK(f2.elements == std::vector<int64_t>{1, 2, 3});

    auto f3 = optimal_basis_bruteforce(2, 1);
    CHECK(f3.elements == std::vector<int64_t>{1});
}

TEST_CASE("brute-force optimum matches full enumeration at tiny n") {
    for (int h = 1; h <= 3; ++h)
        for (int64_t n = 1; n <= 11; ++n) {
            auto got = optimal_basis_bruteforce(h, n);
            CHECK(verify_basis(got.elements, h, n));
            CHECK(got.sum_of_squares == oracle::brute_min_basis_sos(h, n));
        }
}

TEST_CASE("oracle dominance: the construction never beats the optimum") {
    for (int h = 1; h <= 2; ++h)
        for (int64_t n = 1; n <= 24; ++n) {
            auto built = build_basis(h, n);
            auto best = optimal_basis_bruteforce(h, n);
            CHECK(verify_basis(built.elements, h, n));
            CHECK(verify_basis(best.elements, h, n));
            CHECK(built.sum_of_squares >= best.sum_of_squares);
        }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(build_basis(0, 5), UsageError);
    CHECK_THROWS_AS(build_basis(2, 0), UsageError);
    CHECK_THROWS_AS(optimal_basis_bruteforce(2, 25), ResourceLimitError);
    CHECK_THROWS_AS(verify_basis({0, 1}, 1, 2), UsageError);
}
