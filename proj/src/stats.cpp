#include "lor/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "lor/parallel.hpp"
#include "lor/rng.hpp"

namespace lor {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct TallyChunk {
    uint64_t hits = 0;
};

uint64_t count_hits(const WeightSequence& a, const BigInt& x, int k, uint64_t samples,
                    uint64_t seed, int threads) {
    const uint64_t chunk_size = std::max<uint64_t>(1, samples / 256);
    std::vector<TallyChunk> chunks((samples + chunk_size - 1) / chunk_size);
    parallel_chunks(samples, chunk_size, threads, [&](uint64_t c, uint64_t lo, uint64_t hi) {
        uint64_t h = 0;
        for (uint64_t s = lo; s < hi; ++s) {
            SignVector xi = SignVector::random(a.size(), seed, s);
            if (resilience_bounded(a, xi, x, k).is_value()) ++h;
        }
        chunks[c].hits = h;
    });
    uint64_t hits = 0;
    for (const TallyChunk& c : chunks) hits += c.hits;
    return hits;
}

}  // namespace

const char* stat_method_name(StatMethod m) {
    return m == StatMethod::exact_exhaustive ? "exact_exhaustive" : "monte_carlo";
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::pair<double, double> wilson_interval(uint64_t hits, uint64_t samples) {
    if (samples == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    // Wilson brackets p-hat mathematically; keep that true numerically.
    double lo = std::min((center - half) / denom, p);
    double hi = std::max((center + half) / denom, p);
    return {std::max(0.0, lo), std::min(1.0, hi)};
}

EstimateReport estimate_resilience_prob(const WeightSequence& a, const BigInt& x, int k,
                                        uint64_t samples, uint64_t seed, int threads) {
    if (samples < 1) throw UsageError("samples must be >= 1");
    if (k < 0) throw UsageError("k must be >= 0");
    EstimateReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.k = k;
    rep.x = x;
    rep.method = StatMethod::monte_carlo;
    rep.hits = count_hits(a, x, k, samples, seed, threads);
    rep.estimate = static_cast<double>(rep.hits) / static_cast<double>(samples);
    std::tie(rep.ci_low, rep.ci_high) = wilson_interval(rep.hits, samples);
    return rep;
}

EstimateReport estimate_resilience_exact(const WeightSequence& a, const BigInt& x, int k,
                                         const SolverLimits& limits) {
    ProfileOptions opt;
    opt.limits = limits;
    opt.max_depth = std::min<int>(k, static_cast<int>(a.size()));
    ResilienceProfile prof = hypercube_profile(a, x, opt);
    EstimateReport rep;
    rep.k = k;
    rep.x = x;
    rep.method = StatMethod::exact_exhaustive;
    rep.samples = uint64_t(1) << a.size();
    rep.hits = prof.mass_at_most(k);
    rep.estimate = static_cast<double>(rep.hits) / static_cast<double>(rep.samples);
    rep.ci_low = rep.ci_high = rep.estimate;
    return rep;
}

SweepResult sweep(const FamilySpec& spec_template, int k, const std::vector<int64_t>& n_grid,
                  uint64_t samples, uint64_t seed, const BigInt& x, int threads) {
    if (n_grid.size() < 4) throw UsageError("sweep needs a grid of at least 4 points");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw UsageError("sweep grid must be strictly increasing");

    SweepResult result;
    for (int64_t n : n_grid) {
        SweepRow row;
        row.n = n;
        row.samples = samples;
        auto t0 = std::chrono::steady_clock::now();
        try {
            FamilySpec spec = spec_template;
            spec.n = n;
            WeightSequence a = generate(spec);
            uint64_t row_seed = CounterRng::derive(seed, static_cast<uint64_t>(n));
            EstimateReport rep = estimate_resilience_prob(a, x, k, samples, row_seed, threads);
            row.estimate = rep.estimate;
            row.ci_low = rep.ci_low;
            row.ci_high = rep.ci_high;
            row.hits = rep.hits;
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        result.rows.push_back(std::move(row));
    }

    // log-log least squares over surviving rows with nonzero estimates
    std::vector<double> xs, ys;
    for (const SweepRow& row : result.rows) {
        if (row.failed) continue;
        if (row.hits == 0) {
            result.excluded_zero_rows.push_back(row.n);
            continue;
        }
        xs.push_back(std::log(static_cast<double>(row.n)));
        ys.push_back(std::log(row.estimate));
    }
    if (!result.excluded_zero_rows.empty())
        result.warning = "rows with estimate 0 were excluded from the fit; "
                         "the fitted slope is biased toward shallow decay";
    if (xs.size() < 4)
        throw ConstructionError("sweep fit needs >= 4 surviving rows with nonzero estimates, got " +
                                std::to_string(xs.size()));
    const std::size_t mth = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < mth; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(mth);
    my /= static_cast<double>(mth);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < mth; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    result.fitted_slope = sxy / sxx;
    result.fitted_intercept = my - result.fitted_slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < mth; ++i) {
        double r = ys[i] - (result.fitted_intercept + result.fitted_slope * xs[i]);
        ss_res += r * r;
    }
    result.slope_stderr =
        std::sqrt(ss_res / (static_cast<double>(mth) - 2.0) / sxx);
    result.fit_rows = mth;
    return result;
}

namespace {

// Kolmogorov distance between a discrete CDF (sorted atoms with weights)
// and Phi(v/sigma). The sup is attained at an atom, approached from
// either side.
double kolmogorov_vs_normal(const std::vector<std::pair<int64_t, uint64_t>>& atoms,
                            uint64_t total, double sigma) {
    double ks = 0.0;
    uint64_t cum = 0;
    for (const auto& [v, c] : atoms) {
        const double phi = normal_cdf(static_cast<double>(v) / sigma);
        const double before = static_cast<double>(cum) / static_cast<double>(total);
        cum += c;
        const double after = static_cast<double>(cum) / static_cast<double>(total);
        ks = std::max(ks, std::max(std::abs(after - phi), std::abs(phi - before)));
    }
    return ks;
}

BerryEsseenStats fill_be(const WeightSequence& a) {
    BerryEsseenStats st;
    st.sigma_sq_exact = a.total_sum_of_squares();
    st.rho_exact = a.total_abs_cubes();
    st.sigma = std::sqrt(static_cast<double>(st.sigma_sq_exact));
    st.rho = static_cast<double>(st.rho_exact);
    return st;
}

}  // namespace

BerryEsseenStats berry_esseen_check_exhaustive(const WeightSequence& a,
                                               const SolverLimits& limits) {
    BerryEsseenStats st = fill_be(a);
    st.method = StatMethod::exact_exhaustive;
    auto atoms = support_atoms(a, limits);
    st.kolmogorov_distance =
        kolmogorov_vs_normal(atoms, uint64_t(1) << a.size(), st.sigma);
    st.ratio = st.kolmogorov_distance / (st.rho / (st.sigma * st.sigma * st.sigma));
    return st;
}

BerryEsseenStats berry_esseen_check_monte_carlo(const WeightSequence& a, uint64_t samples,
                                                uint64_t seed, int threads) {
    if (samples < 1) throw UsageError("samples must be >= 1");
    BerryEsseenStats st = fill_be(a);
    st.method = StatMethod::monte_carlo;
    st.samples = samples;
    if (!a.fits_int64())
        throw ResourceLimitError("Monte Carlo CDF sampling requires int64-ranged weights");
    std::vector<int64_t> vals(samples);
    const uint64_t chunk_size = std::max<uint64_t>(1, samples / 256);
    parallel_chunks(samples, chunk_size, threads, [&](uint64_t, uint64_t lo, uint64_t hi) {
        for (uint64_t s = lo; s < hi; ++s) {
            SignVector xi = SignVector::random(a.size(), seed, s);
            vals[s] = evaluate_i64(a, xi);
        }
    });
    std::sort(vals.begin(), vals.end());
    std::vector<std::pair<int64_t, uint64_t>> atoms;
    for (uint64_t i = 0; i < samples;) {
        uint64_t j = i;
        while (j < samples && vals[j] == vals[i]) ++j;
        atoms.emplace_back(vals[i], j - i);
        i = j;
    }
    st.kolmogorov_distance = kolmogorov_vs_normal(atoms, samples, st.sigma);
    st.ratio = st.kolmogorov_distance / (st.rho / (st.sigma * st.sigma * st.sigma));
    return st;
}

AtomProbability max_atom_probability_exhaustive(const WeightSequence& a,
                                                const SolverLimits& limits) {
    AtomProbability out;
    out.method = StatMethod::exact_exhaustive;
    auto atoms = support_atoms(a, limits);
    uint64_t best = 0;
    int64_t arg = 0;
    for (const auto& [v, c] : atoms) {
        if (c > best) {  // atoms sorted ascending: first max is the smallest x
            best = c;
            arg = v;
        }
    }
    out.count = best;
    out.argmax_x = arg;
    out.value = BigRational(BigInt(best), BigInt(1) << a.size());
    return out;
}

AtomProbability max_atom_probability_monte_carlo(const WeightSequence& a, uint64_t samples,
                                                 uint64_t seed, int threads) {
    if (samples < 1) throw UsageError("samples must be >= 1");
    if (!a.fits_int64())
        throw ResourceLimitError("Monte Carlo atom estimation requires int64-ranged weights");
    std::vector<int64_t> vals(samples);
    const uint64_t chunk_size = std::max<uint64_t>(1, samples / 256);
    parallel_chunks(samples, chunk_size, threads, [&](uint64_t, uint64_t lo, uint64_t hi) {
        for (uint64_t s = lo; s < hi; ++s) {
            SignVector xi = SignVector::random(a.size(), seed, s);
            vals[s] = evaluate_i64(a, xi);
        }
    });
    std::sort(vals.begin(), vals.end());
    AtomProbability out;
    out.method = StatMethod::monte_carlo;
    out.samples = samples;
    uint64_t best = 0;
    int64_t arg = 0;
    for (uint64_t i = 0; i < samples;) {
        uint64_t j = i;
        while (j < samples && vals[j] == vals[i]) ++j;
        if (j - i > best) {
            best = j - i;
            arg = vals[i];
        }
        i = j;
    }
    out.count = best;
    out.argmax_x = arg;
    out.value = BigRational(BigInt(best), BigInt(samples));
    return out;
}

}  // namespace lor
