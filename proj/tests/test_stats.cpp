#include <doctest.h>

#include <cmath>

#include "lor/io.hpp"
#include "lor/rng.hpp"
#include "lor/stats.hpp"

using namespace lor;

namespace {
WeightSequence seq(std::initializer_list<int64_t> w) {
    return WeightSequence::from_int64(std::vector<int64_t>(w));
}
FamilySpec spec(Family f, int64_t n) {
    FamilySpec s;
    s.family = f;
    s.n = n;
    return s;
}
WeightSequence random_family(uint64_t seed, uint64_t stream, std::size_t n) {
    std::vector<int64_t> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        int64_t v = 1 + static_cast<int64_t>(CounterRng::below(seed, stream, i + 1, 8));
        w[i] = (CounterRng::word(seed, stream, 500 + i) & 1) ? v : -v;
    }
    return WeightSequence::from_int64(w);
}
}  // namespace

TEST_CASE("estimate_resilience_prob on the worked example") {
    WeightSequence a = seq({1, 1, 1, 1});
    auto rep = estimate_resilience_prob(a, 0, 0, 1u << 16, 1, 0);
    CHECK(rep.ci_low <= 6.0 / 16.0);
    CHECK(rep.ci_high >= 6.0 / 16.0);
    CHECK(std::abs(rep.estimate - 6.0 / 16.0) < 0.02);

    auto full = estimate_resilience_prob(a, 0, 4, 512, 2, 0);
    CHECK(full.estimate == 1.0);

    auto one = estimate_resilience_prob(a, 0, 0, 1, 3, 0);
    CHECK((one.estimate == 0.0 || one.estimate == 1.0));
    CHECK(one.ci_high - one.ci_low > 0.5);
}

TEST_CASE("exact estimator collapses the interval") {
    WeightSequence a = seq({1, 1, 1, 1});
    auto rep = estimate_resilience_exact(a, 0, 0);
    CHECK(rep.estimate == 6.0 / 16.0);
    CHECK(rep.ci_low == rep.estimate);
    CHECK(rep.ci_high == rep.estimate);
    CHECK(rep.hits == 6);
    CHECK(rep.method == StatMethod::exact_exhaustive);
}

TEST_CASE("estimates are identical across thread counts") {
    WeightSequence a = random_family(7, 0, 24);
    auto r1 = estimate_resilience_prob(a, 0, 1, 20000, 99, 1);
    auto r2 = estimate_resilience_prob(a, 0, 1, 20000, 99, 4);
    CHECK(r1.hits == r2.hits);
    CHECK(r1.estimate == r2.estimate);
    CHECK(r1.ci_low == r2.ci_low);
}

TEST_CASE("wilson interval endpoints") {
    auto [lo0, hi0] = wilson_interval(0, 100);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    auto [lo1, hi1] = wilson_interval(100, 100);
    CHECK(hi1 == 1.0);
    CHECK(lo1 < 1.0);
    auto [lo, hi] = wilson_interval(50, 100);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
}

TEST_CASE("calibration: the exact value falls in the 95% interval") {
    int covered = 0;
    int total = 0;
    for (uint64_t inst = 0; inst < 100; ++inst) {
        std::size_t n = 6 + CounterRng::below(901, inst, 0, 5);  // 6..10
        WeightSequence a = random_family(902, inst, n);
        int k = static_cast<int>(CounterRng::below(903, inst, 0, 3));
        SignVector probe = SignVector::random(n, 904, inst);
        BigInt x = evaluate(a, probe);
        auto exact = estimate_resilience_exact(a, x, k);
        auto mc = estimate_resilience_prob(a, x, k, 1500, 905 + inst, 0);
        ++total;
        if (mc.ci_low <= exact.estimate && exact.estimate <= mc.ci_high) ++covered;
    }
    CHECK(total == 100);
    CHECK(covered >= 90);
}

TEST_CASE("sweep fits a negative slope for the all-ones family") {
    SweepResult res = sweep(spec(Family::ones, 0), 0, {64, 128, 256, 512, 1024}, 4000, 11, 0, 0);
    CHECK(res.rows.size() == 5);
    CHECK(res.fit_rows == 5);
    CHECK(res.fitted_slope < -0.3);
    CHECK(res.fitted_slope > -0.7);
    // determinism across thread counts
    SweepResult res2 = sweep(spec(Family::ones, 0), 0, {64, 128, 256, 512, 1024}, 4000, 11, 0, 3);
    CHECK(sweep_to_json(res) == sweep_to_json(res2));
}

TEST_CASE("sweep input validation and failed rows") {
    CHECK_THROWS_AS(sweep(spec(Family::ones, 0), 0, {64}, 100, 1, 0, 0), UsageError);
    CHECK_THROWS_AS(sweep(spec(Family::ones, 0), 0, {64, 32, 128, 256}, 100, 1, 0, 0),
                    UsageError);
    // rows below the family minimum are marked failed and excluded
    SweepResult res = sweep(spec(Family::planted_log, 0), 30, {1, 8, 16, 32, 64, 128}, 300,
                            5, 0, 0);
    CHECK(res.rows[0].failed);
    CHECK(res.fit_rows == 5);
}

TEST_CASE("berry-esseen stats on closed-form cases") {
    auto one = berry_esseen_check_exhaustive(seq({1}));
    CHECK(one.sigma == 1.0);
    CHECK(one.rho == 1.0);
    CHECK(one.kolmogorov_distance ==
          doctest::Approx(normal_cdf(1.0) - 0.5).epsilon(1e-12));

    auto ones20 = berry_esseen_check_exhaustive(generate(spec(Family::ones, 20)));
    CHECK(ones20.kolmogorov_distance < 0.1);
    CHECK(ones20.ratio < 1.0);

    // scale invariance of X/sigma: distance identical, sigma and rho scale
    auto base = berry_esseen_check_exhaustive(seq({1, 1, 1, 1, 1, 1}));
    auto scaled = berry_esseen_check_exhaustive(seq({3, 3, 3, 3, 3, 3}));
    CHECK(scaled.kolmogorov_distance == doctest::Approx(base.kolmogorov_distance).epsilon(1e-12));
    CHECK(scaled.sigma == doctest::Approx(3.0 * base.sigma).epsilon(1e-12));
    CHECK(scaled.rho == doctest::Approx(27.0 * base.rho).epsilon(1e-12));
}

TEST_CASE("berry-esseen distance decreases along the all-ones family") {
    double prev = 1.0;
    for (int64_t n : {4, 8, 16, 24}) {
        auto st = berry_esseen_check_exhaustive(generate(spec(Family::ones, n)));
        CHECK(st.kolmogorov_distance < prev);
        prev = st.kolmogorov_distance;
    }
}

TEST_CASE("berry-esseen monte carlo mode approximates the exhaustive answer") {
    WeightSequence a = generate(spec(Family::ones, 16));
    auto ex = berry_esseen_check_exhaustive(a);
    auto mc = berry_esseen_check_monte_carlo(a, 40000, 17, 0);
    CHECK(std::abs(ex.kolmogorov_distance - mc.kolmogorov_distance) < 0.02);
}

TEST_CASE("max atom probability: worked examples") {
    auto r = max_atom_probability_exhaustive(seq({1, 1, 1, 1}));
    CHECK(r.value == BigRational(6, 16));
    CHECK(r.argmax_x == 0);

    auto p = max_atom_probability_exhaustive(seq({1, 2, 4, 8}));
    CHECK(p.value == BigRational(1, 16));

    auto s = max_atom_probability_exhaustive(seq({1}));
    CHECK(s.value == BigRational(1, 2));
}

TEST_CASE("distinct weights sharpen the atom bound") {
    for (int64_t n : {10, 14, 18, 20}) {
        auto a = generate(spec(Family::arithmetic, n));
        auto r = max_atom_probability_exhaustive(a);
        BigRational erdos(binomial(static_cast<unsigned>(n), static_cast<unsigned>(n / 2)),
                          BigInt(1) << n);
        CHECK(r.value <= erdos);
    }
    auto r10 = max_atom_probability_exhaustive(generate(spec(Family::arithmetic, 10)));
    auto r20 = max_atom_probability_exhaustive(generate(spec(Family::arithmetic, 20)));
    double ratio10 = static_cast<double>(r10.value) * std::pow(10.0, 1.5);
    double ratio20 = static_cast<double>(r20.value) * std::pow(20.0, 1.5);
    CHECK(ratio20 < 2.0 * ratio10);
}

TEST_CASE("max atom probability is scale invariant") {
    WeightSequence a = random_family(31, 4, 10);
    std::vector<int64_t> scaled;
    for (const auto& w : a.weights()) scaled.push_back(static_cast<int64_t>(w) * 7);
    auto ra = max_atom_probability_exhaustive(a);
    auto rs = max_atom_probability_exhaustive(WeightSequence::from_int64(scaled));
    CHECK(ra.value == rs.value);
    CHECK(rs.argmax_x == 7 * ra.argmax_x);
}

TEST_CASE("monte carlo atom estimate tracks the exact one") {
    WeightSequence a = generate(spec(Family::ones, 10));
    auto ex = max_atom_probability_exhaustive(a);
    auto mc = max_atom_probability_monte_carlo(a, 30000, 23, 0);
    CHECK(std::abs(static_cast<double>(ex.value) - static_cast<double>(mc.value)) < 0.02);
}
