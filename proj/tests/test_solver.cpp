#include <doctest.h>

#include "lor/families.hpp"
#include "lor/rng.hpp"
#include "lor/solver.hpp"
#include "oracles.hpp"

using namespace lor;

namespace {
WeightSequence seq(std::initializer_list<int64_t> w) {
    return WeightSequence::from_int64(std::vector<int64_t>(w));
}
SignVector signs(const std::string& s) { return SignVector::from_string(s); }

WeightSequence random_weights(std::size_t n, uint64_t seed, uint64_t stream,
                              int64_t max_abs = 8) {
    std::vector<int64_t> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        int64_t v = 1 + static_cast<int64_t>(
                            CounterRng::below(seed, stream, i + 1, max_abs));
        w[i] = (CounterRng::word(seed, stream, 1000 + i) & 1) ? v : -v;
    }
    return WeightSequence::from_int64(w);
}
}  // namespace

TEST_CASE("resilience_dp on the worked examples") {
    WeightSequence ones4 = seq({1, 1, 1, 1});
    SignVector allp = signs("++++");
    auto r = resilience_dp(ones4, allp, 0);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == 2);
    CHECK(*r.value == evaluate(ones4, allp) / 2);  // R_0 = |X|/2 for all-ones

    WeightSequence a = seq({1, 2, 4});
    SignVector p3 = signs("+++");
    CHECK(*resilience_dp(a, p3, 7).value == 0);
    auto r5 = resilience_dp(a, p3, 5);
    CHECK(*r5.value == 1);
    CHECK(r5.witness->to_one_based() == std::vector<int64_t>{1});
    CHECK(resilience_dp(a, p3, 6).infinite());  // X is always odd
}

TEST_CASE("dp witness is valid and lexicographically smallest") {
    for (uint64_t trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + CounterRng::below(51, trial, 0, 8);
        WeightSequence a = random_weights(n, 52, trial);
        SignVector xi = SignVector::random(n, 53, trial);
        // pick a target from the support so the witness exists
        SignVector target_xi = SignVector::random(n, 54, trial);
        BigInt x = evaluate(a, target_xi);
        auto got = resilience_dp(a, xi, x);
        auto want = oracle::brute_resilience(a, xi, x);
        REQUIRE(got.value.has_value());
        REQUIRE(want.value.has_value());
        CHECK(*got.value == *want.value);
        CHECK(got.witness->indices() == want.lex_witness);
        // applying the witness reaches x exactly
        SignVector flipped = xi;
        for (std::size_t i : got.witness->indices()) flipped.flip(i);
        CHECK(evaluate(a, flipped) == x);
    }
}

TEST_CASE("resilience_bounded on the worked examples") {
    WeightSequence ones4 = seq({1, 1, 1, 1});
    auto ex = resilience_bounded(ones4, signs("++++"), 0, 1);
    CHECK_FALSE(ex.is_value());
    CHECK(ex.value == 1);  // Exceeded(1)

    WeightSequence a = seq({1, 2, 4});
    auto r = resilience_bounded(a, signs("+++"), 5, 3);
    REQUIRE(r.is_value());
    CHECK(r.value == 1);
    for (uint64_t trial = 0; trial < 10; ++trial) {
        std::size_t n = 1 + CounterRng::below(61, trial, 0, 8);
        WeightSequence b = random_weights(n, 62, trial);
        SignVector xi = SignVector::random(n, 63, trial);
        auto r0 = resilience_bounded(b, xi, evaluate(b, xi), 0);
        REQUIRE(r0.is_value());
        CHECK(r0.value == 0);
    }
}

TEST_CASE("bounded witness reaches the target") {
    for (uint64_t trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + CounterRng::below(71, trial, 0, 9);
        WeightSequence a = random_weights(n, 72, trial);
        SignVector xi = SignVector::random(n, 73, trial);
        BigInt x = evaluate(a, SignVector::random(n, 74, trial));
        auto r = resilience_bounded(a, xi, x, static_cast<int>(n), true);
        REQUIRE(r.is_value());
        REQUIRE(r.witness.has_value());
        CHECK(static_cast<int>(r.witness->size()) == r.value);
        SignVector flipped = xi;
        for (std::size_t i : r.witness->indices()) flipped.flip(i);
        CHECK(evaluate(a, flipped) == x);
    }
}

TEST_CASE("hypercube_profile on the worked examples") {
    auto p = hypercube_profile(seq({1, 1}), 0);
    CHECK(p.achievable);
    CHECK(p.counts == std::vector<uint64_t>{2, 2});

    auto p1 = hypercube_profile(seq({1}), 1);
    CHECK(p1.counts == std::vector<uint64_t>{1, 1});

    WeightSequence pw = seq({1, 2, 4, 8});
    for (int64_t x : {1, -5, 15, 7}) {
        auto prof = hypercube_profile(pw, x);
        REQUIRE(prof.achievable);
        REQUIRE(prof.counts.size() == 5);
        for (int d = 0; d <= 4; ++d)
            CHECK(BigInt(prof.counts[static_cast<std::size_t>(d)]) ==
                  binomial(4, static_cast<unsigned>(d)));
    }

    CHECK_FALSE(hypercube_profile(seq({1, 2, 4}), 6).achievable);  // parity
    CHECK_FALSE(hypercube_profile(seq({1, 1}), 100).achievable);   // out of range
}

TEST_CASE("profile counts sum to 2^n and match the brute oracle") {
    for (uint64_t trial = 0; trial < 15; ++trial) {
        std::size_t n = 2 + CounterRng::below(81, trial, 0, 7);
        WeightSequence a = random_weights(n, 82, trial, 5);
        BigInt x = evaluate(a, SignVector::random(n, 83, trial));
        auto prof = hypercube_profile(a, x);
        REQUIRE(prof.achievable);
        uint64_t total = 0;
        for (uint64_t c : prof.counts) total += c;
        CHECK(total == (uint64_t(1) << n));
        auto want = oracle::brute_profile(a, x);
        REQUIRE(want.size() == prof.counts.size());
        for (const auto& [d, c] : want)
            CHECK(prof.counts[static_cast<std::size_t>(d)] == c);
    }
}

TEST_CASE("oracle equivalence: dp == bounded == hypercube BFS distance") {
    for (uint64_t trial = 0; trial < 8; ++trial) {
        std::size_t n = 3 + CounterRng::below(91, trial, 0, 6);
        WeightSequence a = random_weights(n, 92, trial, 6);
        auto atoms = support_atoms(a);
        ProfileOptions opt;
        opt.keep_distances = true;
        for (std::size_t ai = 0; ai < atoms.size(); ai += 1 + atoms.size() / 6) {
            BigInt x(atoms[ai].first);
            auto prof = hypercube_profile(a, x, opt);
            REQUIRE(prof.achievable);
            for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
                SignVector xi = SignVector::from_vertex(static_cast<uint32_t>(v), n);
                FlipSumTable table(a, xi);
                auto dp = table.min_flips(x);
                REQUIRE(dp.has_value());
                CHECK(*dp == prof.distances[v]);
                auto bd = resilience_bounded(a, xi, x, static_cast<int>(n));
                REQUIRE(bd.is_value());
                CHECK(bd.value == *dp);
            }
        }
    }
}

TEST_CASE("R = 0 iff X(xi) = x") {
    for (uint64_t trial = 0; trial < 20; ++trial) {
        std::size_t n = 1 + CounterRng::below(101, trial, 0, 9);
        WeightSequence a = random_weights(n, 102, trial);
        SignVector xi = SignVector::random(n, 103, trial);
        BigInt x = evaluate(a, xi);
        CHECK(*resilience_dp(a, xi, x).value == 0);
        auto off = resilience_dp(a, xi, x + 2);
        CHECK((off.infinite() || *off.value != 0));
    }
}

TEST_CASE("qk_exact on the worked examples") {
    auto q0 = qk_exact(seq({1, 1, 1, 1}), 0);
    CHECK(q0.value == BigRational(6, 16));
    CHECK(q0.argmax_x == 0);

    auto q1 = qk_exact(seq({1, 2, 4}), 1);
    CHECK(q1.value == BigRational(4, 8));

    WeightSequence a = seq({2, 3, 7});
    auto qa = qk_exact(a, 3);
    CHECK(qa.value == 1);
}

TEST_CASE("qk monotone in k, union bound, and ball-volume bound") {
    for (uint64_t trial = 0; trial < 6; ++trial) {
        std::size_t n = 4 + CounterRng::below(111, trial, 0, 5);
        WeightSequence a = random_weights(n, 112, trial, 6);
        auto atom = [&] {
            auto atoms = support_atoms(a);
            uint64_t best = 0;
            for (auto& [v, c] : atoms) best = std::max(best, c);
            return best;
        }();
        BigRational prev = 0;
        for (int k = 0; k <= static_cast<int>(n); ++k) {
            auto qk = qk_exact(a, k);
            CHECK(qk.value >= prev);
            prev = qk.value;
            // q_k <= (#flip sets of size <= k) * max_x Pr[X = x]
            BigInt ball = 0;
            for (int j = 0; j <= k; ++j) ball += binomial(static_cast<unsigned>(n),
                                                          static_cast<unsigned>(j));
            CHECK(BigInt(qk.mass) <= ball * atom);
        }
        // neighbourhood volume: mass_k(x) <= fiber(x) * sum_{j<=k} C(n,j)
        auto atoms = support_atoms(a);
        BigInt x(atoms[atoms.size() / 2].first);
        auto prof = hypercube_profile(a, x);
        for (int k = 0; k <= static_cast<int>(n); ++k) {
            BigInt ball = 0;
            for (int j = 0; j <= k; ++j) ball += binomial(static_cast<unsigned>(n),
                                                          static_cast<unsigned>(j));
            CHECK(BigInt(prof.mass_at_most(k)) <= BigInt(prof.fiber_size()) * ball);
        }
    }
}

TEST_CASE("canonicalization leaves every resilience profile unchanged") {
    for (uint64_t trial = 0; trial < 6; ++trial) {
        std::size_t n = 3 + CounterRng::below(121, trial, 0, 6);
        WeightSequence a = random_weights(n, 122, trial, 8);
        WeightSequence c = canonicalize(a);
        auto atoms = support_atoms(a);
        for (std::size_t ai = 0; ai < atoms.size(); ai += 1 + atoms.size() / 8) {
            BigInt x(atoms[ai].first);
            auto pa = hypercube_profile(a, x);
            auto pc = hypercube_profile(c, x);
            CHECK(pa.achievable == pc.achievable);
            CHECK(pa.counts == pc.counts);
        }
    }
}

TEST_CASE("profile with big-integer weights uses the exact fallback") {
    std::vector<BigInt> w{(BigInt(1) << 70) + 1, BigInt(1) << 70, BigInt(5)};
    WeightSequence a(w);
    BigInt x = evaluate(a, signs("+-+"));  // = 1 + 5 = 6... computed exactly
    auto prof = hypercube_profile(a, x);
    REQUIRE(prof.achievable);
    uint64_t total = 0;
    for (uint64_t c : prof.counts) total += c;
    CHECK(total == 8);
    CHECK(prof.counts[0] == 1);
}

TEST_CASE("bounded search with big-integer weights") {
    std::vector<BigInt> w;
    for (int i = 0; i < 70; ++i) w.push_back(BigInt(1) << i);
    WeightSequence a(w);
    CHECK_FALSE(a.fits_int64());
    SignVector xi(70, true);
    BigInt X = a.total_sum();
    // flipping index 3 changes X by -2*2^3
    auto r = resilience_bounded(a, xi, X - (BigInt(1) << 4), 2, true);
    REQUIRE(r.is_value());
    CHECK(r.value == 1);
    CHECK(r.witness->to_one_based() == std::vector<int64_t>{4});
    auto r2 = resilience_bounded(a, xi, X - (BigInt(1) << 4) - (BigInt(1) << 11), 2, true);
    REQUIRE(r2.is_value());
    CHECK(r2.value == 2);
}

TEST_CASE("resource limits raise structured errors") {
    SolverLimits tight;
    tight.exhaustive_limit = 4;
    WeightSequence a = random_weights(6, 131, 0);
    CHECK_THROWS_AS(hypercube_profile(a, 0, ProfileOptions{-1, false, tight}),
                    ResourceLimitError);
    SolverLimits tiny;
    tiny.dp_span_entries = 4;
    CHECK_THROWS_AS(FlipSumTable(a, SignVector(6), tiny), ResourceLimitError);
}

TEST_CASE("profile is identical across thread counts") {
    WeightSequence a = generate({Family::planted_log, 16, {}, 1, 10, 20});
    SolverLimits t1;
    t1.threads = 1;
    SolverLimits t4;
    t4.threads = 4;
    auto p1 = hypercube_profile(a, 0, ProfileOptions{-1, true, t1});
    auto p4 = hypercube_profile(a, 0, ProfileOptions{-1, true, t4});
    CHECK(p1.counts == p4.counts);
    CHECK(p1.distances == p4.distances);
}
