#include <doctest.h>

#include "lor/core.hpp"
#include "lor/rng.hpp"

using namespace lor;

namespace {
WeightSequence seq(std::initializer_list<int64_t> w) {
    return WeightSequence::from_int64(std::vector<int64_t>(w));
}
SignVector signs(const std::string& s) { return SignVector::from_string(s); }
}  // namespace

TEST_CASE("evaluate on the worked examples") {
    CHECK(evaluate(seq({1, 1, 1, 1}), signs("+++-")) == 2);
    CHECK(evaluate(seq({1, 2, 4}), signs("---")) == -7);
    std::vector<int64_t> arith;
    for (int64_t i = 1; i <= 10; ++i) arith.push_back(i);
    CHECK(evaluate(WeightSequence::from_int64(arith), signs("++++++++++")) == 55);
}

TEST_CASE("evaluate_partial") {
    WeightSequence a = seq({1, 2, 4});
    SignVector xi = signs("++-");
    CHECK(evaluate_partial(a, xi, IndexSet::from_one_based({1, 3}, 3)) == -3);
    CHECK(evaluate_partial(a, xi, IndexSet({}, 3)) == 0);
    WeightSequence b = seq({5, 5});
    CHECK(evaluate_partial(b, signs("+-"), IndexSet::from_one_based({1, 2}, 2)) == 0);
    CHECK(evaluate_partial(a, xi, IndexSet::full(3)) == evaluate(a, xi));
}

TEST_CASE("dimension and input validation") {
    CHECK_THROWS_AS(evaluate(seq({1, 2}), signs("+++")), DimensionError);
    CHECK_THROWS_AS(seq({1, 0, 2}), UsageError);
    CHECK_THROWS_AS(WeightSequence({}), UsageError);
    CHECK_THROWS_AS(IndexSet::from_one_based({0}, 3), DimensionError);
    CHECK_THROWS_AS(IndexSet::from_one_based({4}, 3), DimensionError);
    CHECK_THROWS_AS(IndexSet::from_one_based({2, 2}, 3), UsageError);
    CHECK_THROWS_AS(SignVector::from_string("+x-"), ParseError);
}

TEST_CASE("canonicalize") {
    auto c1 = canonicalize(seq({3, -1, 2}));
    CHECK(c1.weights() == std::vector<BigInt>{1, 2, 3});
    CHECK(canonicalize(seq({-1, -1})).weights() == std::vector<BigInt>{1, 1});
    CHECK(canonicalize(seq({1, 2, 3})).weights() == std::vector<BigInt>{1, 2, 3});
}

TEST_CASE("parity_fix") {
    CHECK(parity_fix(seq({1, 1, 1})).weights() == std::vector<BigInt>{1, 1, 2});
    CHECK(parity_fix(seq({1, 1})).weights() == std::vector<BigInt>{1, 1});
    CHECK(parity_fix(seq({3, 5})).weights() == std::vector<BigInt>{3, 5});  // even sum
    CHECK_THROWS_AS(parity_fix(seq({3, 5, 5})), ParityError);
    // the promoted entry is the last unit
    CHECK(parity_fix(seq({1, 2, 1, 4, 1})).weights() == std::vector<BigInt>{1, 2, 1, 4, 2});
}

TEST_CASE("linearity of evaluate under weight scaling") {
    for (uint64_t trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + CounterRng::below(11, trial, 0, 10);
        std::vector<int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            int64_t v = 1 + static_cast<int64_t>(CounterRng::below(11, trial, i + 1, 8));
            w[i] = (CounterRng::word(11, trial, 100 + i) & 1) ? v : -v;
        }
        WeightSequence a = WeightSequence::from_int64(w);
        SignVector xi = SignVector::random(n, 12, trial);
        int64_t c = 1 + static_cast<int64_t>(CounterRng::below(13, trial, 0, 5));
        std::vector<int64_t> cw(n);
        for (std::size_t i = 0; i < n; ++i) cw[i] = c * w[i];
        CHECK(evaluate(WeightSequence::from_int64(cw), xi) == BigInt(c) * evaluate(a, xi));
    }
}

TEST_CASE("flip identity: X(xi') = X(xi) - 2 sum_{i in S} a_i xi_i") {
    for (uint64_t trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + CounterRng::below(21, trial, 0, 12);
        std::vector<int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            int64_t v = 1 + static_cast<int64_t>(CounterRng::below(21, trial, i + 1, 9));
            w[i] = (CounterRng::word(21, trial, 200 + i) & 1) ? v : -v;
        }
        WeightSequence a = WeightSequence::from_int64(w);
        SignVector xi = SignVector::random(n, 22, trial);
        uint64_t mask = CounterRng::word(23, trial, 0) & ((uint64_t(1) << n) - 1);
        SignVector flipped = xi;
        BigInt flip_sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) {
                flipped.flip(i);
                flip_sum += xi.bit(i) ? a.weight(i) : -a.weight(i);
            }
        CHECK(evaluate(a, flipped) == evaluate(a, xi) - 2 * flip_sum);
    }
}

TEST_CASE("parity: X is congruent to the total sum mod 2") {
    for (uint64_t trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + CounterRng::below(31, trial, 0, 10);
        std::vector<int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 1 + static_cast<int64_t>(CounterRng::below(31, trial, i + 1, 15));
        WeightSequence a = WeightSequence::from_int64(w);
        SignVector xi = SignVector::random(n, 32, trial);
        BigInt diff = evaluate(a, xi) - a.total_sum();
        CHECK(diff % 2 == 0);
    }
}

TEST_CASE("run-compressed int64 evaluation matches the generic path") {
    for (uint64_t trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + CounterRng::below(41, trial, 0, 200);
        std::vector<int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            // long runs of equal values with occasional jumps
            int64_t v = 1 + static_cast<int64_t>(CounterRng::below(41, trial, i / 7 + 1, 6));
            w[i] = (CounterRng::word(41, trial, 300 + i / 7) & 1) ? v : -v;
        }
        WeightSequence a = WeightSequence::from_int64(w);
        SignVector xi = SignVector::random(n, 42, trial);
        BigInt slow = 0;
        for (std::size_t i = 0; i < n; ++i) slow += xi.bit(i) ? a.weight(i) : -a.weight(i);
        CHECK(BigInt(evaluate_i64(a, xi)) == slow);
    }
}

TEST_CASE("big-integer weights evaluate exactly") {
    std::vector<BigInt> w{BigInt(1) << 100, -(BigInt(3) << 80), BigInt(7)};
    WeightSequence a(w);
    CHECK_FALSE(a.fits_int64());
    CHECK(evaluate(a, signs("+-+")) == (BigInt(1) << 100) + (BigInt(3) << 80) + 7);
    CHECK(a.total_sum_of_squares() ==
          (BigInt(1) << 200) + (BigInt(9) << 160) + 49);
}

TEST_CASE("sign vector bit utilities") {
    SignVector xi = SignVector::from_string("+--+-++-");
    CHECK(xi.to_string() == "+--+-++-");
    CHECK(xi.popcount() == 4);
    CHECK(xi.popcount_range(1, 3) == 1);
    CHECK(xi.find_in_range(1, 3, true) == 3);
    CHECK(xi.find_in_range(1, 2, true) == SignVector::npos);
    CHECK(xi.find_in_range(0, 8, false) == 1);
    SignVector big = SignVector::random(200, 1, 2);
    std::size_t manual = 0;
    for (std::size_t i = 64; i < 64 + 70; ++i) manual += big.bit(i) ? 1 : 0;
    CHECK(big.popcount_range(64, 70) == manual);
    for (bool plus : {true, false}) {
        std::size_t found = big.find_in_range(70, 100, plus);
        std::size_t expect = SignVector::npos;
        for (std::size_t i = 70; i < 170; ++i)
            if (big.bit(i) == plus) {
                expect = i;
                break;
            }
        CHECK(found == expect);
    }
}
