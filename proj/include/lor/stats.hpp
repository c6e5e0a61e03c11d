#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lor/bigint.hpp"
#include "lor/core.hpp"
#include "lor/families.hpp"
#include "lor/solver.hpp"

namespace lor {

enum class StatMethod { exact_exhaustive, monte_carlo };

const char* stat_method_name(StatMethod m);

// Estimate (or exact value) of Pr[R_x <= k] with a 95% Wilson interval.
// hits/samples is the exact sample fraction; the interval endpoints are
// the artifact's intentionally floating-point quantities.
struct EstimateReport {
    double estimate = 0.0;
    uint64_t hits = 0;
    uint64_t samples = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    uint64_t seed = 0;
    int k = 0;
    BigInt x;
    StatMethod method = StatMethod::monte_carlo;
};

// Wilson score interval at 95% (valid at estimate = 0, unlike Wald).
std::pair<double, double> wilson_interval(uint64_t hits, uint64_t samples);

// Draws `samples` uniform sign vectors from the counter-based generator
// keyed by (seed, sample index) and tests R_x <= k via the bounded
// solver. Bit-identical results for any thread count.
EstimateReport estimate_resilience_prob(const WeightSequence& a, const BigInt& x, int k,
                                        uint64_t samples, uint64_t seed, int threads = 0);

// Exhaustive counterpart (n <= exhaustive limit): ci_low = ci_high.
EstimateReport estimate_resilience_exact(const WeightSequence& a, const BigInt& x, int k,
                                         const SolverLimits& limits = {});

struct SweepRow {
    int64_t n = 0;
    bool failed = false;
    std::string error;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    uint64_t hits = 0;
    uint64_t samples = 0;
    double wall_ms = 0.0;  // console diagnostics only; never serialized
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
    double slope_stderr = 0.0;
    uint64_t fit_rows = 0;
    std::vector<int64_t> excluded_zero_rows;  // estimate = 0, left out of the fit
    std::string warning;
};

// Per-n estimate of Pr[R_x <= k] for the family template, plus a
// least-squares slope on (ln n, ln estimate). Rows that fail to generate
// are excluded; the fit needs >= 4 surviving rows. Row s sample streams
// derive from (seed, n) so rows are independent and reproducible.
SweepResult sweep(const FamilySpec& spec_template, int k, const std::vector<int64_t>& n_grid,
                  uint64_t samples, uint64_t seed, const BigInt& x = BigInt(0),
                  int threads = 0);

struct BerryEsseenStats {
    double sigma = 0.0;               // sqrt(sum a_i^2)
    double rho = 0.0;                 // sum |a_i|^3
    BigInt sigma_sq_exact;
    BigInt rho_exact;
    double kolmogorov_distance = 0.0; // sup |CDF(X/sigma) - Phi|
    double ratio = 0.0;               // kolmogorov_distance / (rho/sigma^3)
    StatMethod method = StatMethod::exact_exhaustive;
    uint64_t samples = 0;
};

BerryEsseenStats berry_esseen_check_exhaustive(const WeightSequence& a,
                                               const SolverLimits& limits = {});
BerryEsseenStats berry_esseen_check_monte_carlo(const WeightSequence& a, uint64_t samples,
                                                uint64_t seed, int threads = 0);

struct AtomProbability {
    BigRational value;      // exact (exhaustive) or hits/samples (MC)
    uint64_t count = 0;     // fiber size (exhaustive) or top frequency (MC)
    BigInt argmax_x;        // smallest attaining value
    StatMethod method = StatMethod::exact_exhaustive;
    uint64_t samples = 0;
};

// max_x Pr[X = x].
AtomProbability max_atom_probability_exhaustive(const WeightSequence& a,
                                                const SolverLimits& limits = {});
AtomProbability max_atom_probability_monte_carlo(const WeightSequence& a, uint64_t samples,
                                                 uint64_t seed, int threads = 0);

// Standard normal CDF via erfc; absolute error ~1e-15 (the library's one
// intentionally inexact computation, alongside the Wilson endpoints).
double normal_cdf(double x);

}  // namespace lor
