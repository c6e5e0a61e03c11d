#include "lor/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lor/basis.hpp"
#include "lor/parallel.hpp"
#include "lor/rng.hpp"

namespace lor {

namespace {

// Ceil/floor of a long-double expression with a guard band: values
// within 1e-12 of an integer are treated as that integer, so exact
// boundaries (e.g. log2 of a power of two) do not tip over.
constexpr long double kGuard = 1e-12L;

int64_t guarded_ceil(long double x) {
    long double r = std::round(x);
    if (std::fabs(x - r) < kGuard) return static_cast<int64_t>(r);
    return static_cast<int64_t>(std::ceil(x));
}

int64_t guarded_floor(long double x) {
    long double r = std::round(x);
    if (std::fabs(x - r) < kGuard) return static_cast<int64_t>(r);
    return static_cast<int64_t>(std::floor(x));
}

long double log_base(long double base, long double x) {
    return std::log2(x) / std::log2(base);
}

void append_copies(std::vector<BigInt>& w, int64_t value, int64_t copies) {
    for (int64_t c = 0; c < copies; ++c) w.emplace_back(value);
}

// Replace the last unit entry by 2 when the total is odd; records the
// changed position (or -1) in params.
void fix_parity_in_place(std::vector<BigInt>& w, Params& params) {
    BigInt sum = 0;
    for (const auto& v : w) sum += v;
    params.scalars["parity_changed"] = -1;
    if ((sum & 1) == 0) return;
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] == 1) {
            w[k] = 2;
            params.scalars["parity_changed"] = static_cast<int64_t>(k);
            return;
        }
    }
    throw ParityError("total sum is odd and the construction has no unit entry");
}

void check_epsilon(const FamilySpec& spec) {
    if (spec.eps_den <= 0 || spec.eps_num <= 0 || spec.eps_num >= spec.eps_den)
        throw UsageError("epsilon must be a rational in (0,1)");
}

WeightSequence make_ones(const FamilySpec& spec) {
    std::vector<BigInt> w(static_cast<std::size_t>(spec.n), BigInt(1));
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::ones);
    return WeightSequence(std::move(w), "ones", std::move(p));
}

WeightSequence make_arithmetic(const FamilySpec& spec) {
    std::vector<BigInt> w;
    w.reserve(spec.n);
    for (int64_t i = 1; i <= spec.n; ++i) w.emplace_back(i);
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::arithmetic);
    return WeightSequence(std::move(w), "arithmetic", std::move(p));
}

WeightSequence make_powers2(const FamilySpec& spec) {
    std::vector<BigInt> w;
    w.reserve(spec.n);
    BigInt v = 1;
    for (int64_t i = 0; i < spec.n; ++i, v <<= 1) w.push_back(v);
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::powers2);
    return WeightSequence(std::move(w), "powers2", std::move(p));
}

// Example 1.4: k minimal with k >= log2(n) and n-k odd; n-k ones
// followed by 1, 2, ..., 2^(k-1). The total sum (n-k) + (2^k - 1) is
// automatically even.
WeightSequence make_planted_log(const FamilySpec& spec) {
    if (spec.n < 2)
        throw ConstructionError("planted_log needs n >= 2 (no room for the planted powers)");
    int64_t k = std::bit_width(static_cast<uint64_t>(spec.n - 1));  // ceil(log2 n)
    if (((spec.n - k) & 1) == 0) ++k;
    if (spec.n - k < 1)
        throw ConstructionError("planted_log: n - k = " + std::to_string(spec.n - k) +
                                " leaves no all-ones block");
    std::vector<BigInt> w;
    w.reserve(spec.n);
    append_copies(w, 1, spec.n - k);
    BigInt v = 1;
    for (int64_t i = 0; i < k; ++i, v <<= 1) w.push_back(v);
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::planted_log);
    p.scalars["k"] = k;
    p.scalars["ones"] = spec.n - k;
    return WeightSequence(std::move(w), "planted_log", std::move(p));
}

// The layered low-resilience construction: copies of an order-h basis of
// [ceil(n/log^2 n)], scaled copies of an order-h' basis of
// [ceil(log^2 n / log^2 log n)], the powers m, 2m, ..., 2^(r-1) m, and
// all-ones padding; one 1 becomes 2 if the total is odd.
WeightSequence make_layered(const FamilySpec& spec) {
    check_epsilon(spec);
    const int64_t n = spec.n;
    if (n < 16) throw ConstructionError("layered: n must be at least 16 (log log log n < 1)");
    const long double base = 3.0L - static_cast<long double>(spec.eps_num) / spec.eps_den;
    const long double l2n = std::log2(static_cast<long double>(n));
    const long double l2l2n = std::log2(l2n);

    const int64_t h = guarded_ceil(log_base(base, l2n));
    const int64_t hp = guarded_ceil(log_base(base, l2l2n));
    const int64_t r = guarded_ceil(std::log2(l2l2n * l2l2n));
    if (h < 1 || hp < 1 || r < 1)
        throw ConstructionError("layered: n too small for the asymptotic regime (h=" +
                                std::to_string(h) + ", h'=" + std::to_string(hp) +
                                ", r=" + std::to_string(r) + ")");

    const int64_t n1 = guarded_ceil(static_cast<long double>(n) / (l2n * l2n));
    const int64_t n2 = guarded_ceil(l2n * l2n / (l2l2n * l2l2n));
    const int64_t m = n1 * n2;
    const int64_t copies_b = guarded_ceil(l2n);
    const int64_t copies_bp = guarded_ceil(std::log2(l2n * l2n));

    AdditiveBasis B = build_basis(static_cast<int>(h), n1);
    AdditiveBasis Bp = build_basis(static_cast<int>(hp), n2);

    const int64_t i_len = static_cast<int64_t>(B.elements.size()) * copies_b;
    const int64_t j_len = static_cast<int64_t>(Bp.elements.size()) * copies_bp;
    const int64_t ones = n - r - i_len - j_len;
    if (ones < 1)
        throw ConstructionError(
            "layered: ones padding n - r - |B|*ceil(log n) - |B'|*ceil(log log^2 n) = " +
            std::to_string(n) + " - " + std::to_string(r) + " - " + std::to_string(i_len) +
            " - " + std::to_string(j_len) + " = " + std::to_string(ones) + " < 1");

    std::vector<BigInt> w;
    w.reserve(n);
    for (int64_t b : B.elements) append_copies(w, b, copies_b);
    for (int64_t b : Bp.elements) append_copies(w, n1 * b, copies_bp);
    for (int64_t j = 0; j < r; ++j) w.emplace_back(m * (int64_t(1) << j));
    append_copies(w, 1, ones);

    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::layered);
    p.scalars["eps_num"] = spec.eps_num;
    p.scalars["eps_den"] = spec.eps_den;
    p.scalars["h"] = h;
    p.scalars["h_prime"] = hp;
    p.scalars["r"] = r;
    p.scalars["n1"] = n1;
    p.scalars["n2"] = n2;
    p.scalars["m"] = m;
    p.scalars["copies_b"] = copies_b;
    p.scalars["copies_bp"] = copies_bp;
    p.scalars["i_end"] = i_len;
    p.scalars["j_end"] = i_len + j_len;
    p.scalars["k_end"] = i_len + j_len + r;
    p.lists["basis_b"] = B.elements;
    p.lists["basis_bp"] = Bp.elements;
    fix_parity_in_place(w, p);
    return WeightSequence(std::move(w), "layered", std::move(p));
}

// Section 5.2 general lower-bound construction: ceil(2 log n) copies of
// an order-k basis of [g], g = ceil((eps n / log n)^((3^k-1)/(2*3^k))),
// padded with ones.
WeightSequence make_pk_lower(const FamilySpec& spec) {
    check_epsilon(spec);
    if (!spec.k || *spec.k < 1) throw UsageError("pk_lower requires a basis order k >= 1");
    const int k = *spec.k;
    const int64_t n = spec.n;
    if (n < 4) throw ConstructionError("pk_lower: n must be at least 4");
    const long double eps = static_cast<long double>(spec.eps_num) / spec.eps_den;
    const long double l2n = std::log2(static_cast<long double>(n));
    const long double pow3k = std::pow(3.0L, k);
    const long double exponent = (pow3k - 1.0L) / (2.0L * pow3k);
    const int64_t g = guarded_ceil(std::pow(eps * n / l2n, exponent));
    if (g < 1) throw ConstructionError("pk_lower: derived basis range g < 1");
    const int64_t copies = guarded_ceil(2.0L * l2n);
    AdditiveBasis B = build_basis(k, g);
    const int64_t i_len = static_cast<int64_t>(B.elements.size()) * copies;
    const int64_t ones = n - i_len;
    if (ones < 1)
        throw ConstructionError("pk_lower: ones padding n - |B|*ceil(2 log n) = " +
                                std::to_string(n) + " - " + std::to_string(i_len) + " < 1");
    std::vector<BigInt> w;
    w.reserve(n);
    for (int64_t b : B.elements) append_copies(w, b, copies);
    append_copies(w, 1, ones);
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::pk_lower);
    p.scalars["eps_num"] = spec.eps_num;
    p.scalars["eps_den"] = spec.eps_den;
    p.scalars["k"] = k;
    p.scalars["g"] = g;
    p.scalars["copies"] = copies;
    p.scalars["i_end"] = i_len;
    p.lists["basis_b"] = B.elements;
    fix_parity_in_place(w, p);
    return WeightSequence(std::move(w), "pk_lower", std::move(p));
}

// Theorem 1.7 sharp construction: n-g ones then 1, 2, ..., g with
// g ~ (eps n)^(1/3). g is nudged to the nearest value making the total
// sum even (the construction adjusts epsilon instead of promoting a 1).
WeightSequence make_p1_sharp(const FamilySpec& spec) {
    check_epsilon(spec);
    const int64_t n = spec.n;
    if (n < 8) throw ConstructionError("p1_sharp: n must be at least 8");
    const long double eps = static_cast<long double>(spec.eps_num) / spec.eps_den;
    const int64_t g0 = std::max<int64_t>(
        1, static_cast<int64_t>(std::llround(std::pow(eps * n, 1.0L / 3.0L))));
    auto sum_parity_even = [&](int64_t g) {
        // (n - g) + g(g+1)/2
        __int128 total = static_cast<__int128>(n) - g +
                         static_cast<__int128>(g) * (g + 1) / 2;
        return (total & 1) == 0;
    };
    int64_t g = -1;
    for (int64_t delta : {0, 1, -1, 2, -2, 3, -3}) {
        int64_t cand = g0 + delta;
        if (cand < 1 || cand >= n) continue;
        if (sum_parity_even(cand)) {
            g = cand;
            break;
        }
    }
    if (g < 0) throw ConstructionError("p1_sharp: no parity-valid g near (eps*n)^(1/3)");
    std::vector<BigInt> w;
    w.reserve(n);
    append_copies(w, 1, n - g);
    for (int64_t i = 1; i <= g; ++i) w.emplace_back(i);
    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::p1_sharp);
    p.scalars["eps_num"] = spec.eps_num;
    p.scalars["eps_den"] = spec.eps_den;
    p.scalars["g"] = g;
    p.scalars["g_target"] = g0;
    p.scalars["ones"] = n - g;
    return WeightSequence(std::move(w), "p1_sharp", std::move(p));
}

// Janson-Spencer: all ones, except ceil(1000 log(i+1)) copies of
// round(sqrt(n)/i) for 1 <= i <= n^0.2 and ceil(10 log n) copies of each
// j for 2 <= j <= n^0.3; one 1 becomes 2 if the total is odd.
WeightSequence make_janson_spencer(const FamilySpec& spec) {
    const int64_t n = spec.n;
    if (spec.cheb_l < 1) throw UsageError("cheb_l must be >= 1");
    if (n < 16) throw ConstructionError("janson_spencer: n must be at least 16");
    const long double nl = static_cast<long double>(n);
    const int64_t i_max = guarded_floor(std::pow(nl, 0.2L));
    const int64_t j_max = guarded_floor(std::pow(nl, 0.3L));
    if (j_max < 2)
        throw ConstructionError("janson_spencer: n^0.3 = " + std::to_string(j_max) +
                                " leaves no integer layer");
    const long double sq = std::sqrt(nl);
    const int64_t copies_j = guarded_ceil(10.0L * std::log2(nl));

    std::vector<int64_t> harm_values, harm_copies;
    int64_t harm_len = 0;
    for (int64_t i = 1; i <= i_max; ++i) {
        int64_t v = std::llround(sq / i);
        int64_t c = guarded_ceil(1000.0L * std::log2(static_cast<long double>(i + 1)));
        harm_values.push_back(v);
        harm_copies.push_back(c);
        harm_len += c;
    }
    const int64_t int_len = (j_max - 1) * copies_j;
    const int64_t ones = n - harm_len - int_len;
    if (ones < 1)
        throw ConstructionError(
            "janson_spencer: ones padding n - (harmonic copies) - (integer copies) = " +
            std::to_string(n) + " - " + std::to_string(harm_len) + " - " +
            std::to_string(int_len) + " < 1");

    std::vector<BigInt> w;
    w.reserve(n);
    for (std::size_t i = 0; i < harm_values.size(); ++i)
        append_copies(w, harm_values[i], harm_copies[i]);
    for (int64_t j = 2; j <= j_max; ++j) append_copies(w, j, copies_j);
    append_copies(w, 1, ones);

    Params p;
    p.scalars["family"] = static_cast<int64_t>(Family::janson_spencer);
    p.scalars["i_max"] = i_max;
    p.scalars["j_max"] = j_max;
    p.scalars["sqrt_n"] = std::llround(sq);
    p.scalars["cheb_l"] = spec.cheb_l;
    p.scalars["copies_j"] = copies_j;
    p.scalars["harm_end"] = harm_len;
    p.scalars["int_end"] = harm_len + int_len;
    p.lists["harm_values"] = harm_values;
    p.lists["harm_copies"] = harm_copies;
    fix_parity_in_place(w, p);
    return WeightSequence(std::move(w), "janson_spencer", std::move(p));
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::ones: return "ones";
        case Family::arithmetic: return "arithmetic";
        case Family::powers2: return "powers2";
        case Family::planted_log: return "planted_log";
        case Family::layered: return "layered";
        case Family::pk_lower: return "pk_lower";
        case Family::p1_sharp: return "p1_sharp";
        case Family::janson_spencer: return "janson_spencer";
    }
    return "?";
}

std::optional<Family> family_from_string(const std::string& s) {
    for (Family f : {Family::ones, Family::arithmetic, Family::powers2, Family::planted_log,
                     Family::layered, Family::pk_lower, Family::p1_sharp,
                     Family::janson_spencer})
        if (s == family_name(f)) return f;
    return std::nullopt;
}

WeightSequence generate(const FamilySpec& spec) {
    if (spec.n < 1) throw UsageError("family length n must be >= 1");
    switch (spec.family) {
        case Family::ones: return make_ones(spec);
        case Family::arithmetic: return make_arithmetic(spec);
        case Family::powers2: return make_powers2(spec);
        case Family::planted_log: return make_planted_log(spec);
        case Family::layered: return make_layered(spec);
        case Family::pk_lower: return make_pk_lower(spec);
        case Family::p1_sharp: return make_p1_sharp(spec);
        case Family::janson_spencer: return make_janson_spencer(spec);
    }
    throw UsageError("unknown family");
}

const char* cert_fail_name(CertFail f) {
    switch (f) {
        case CertFail::none: return "none";
        case CertFail::chebyshev: return "chebyshev";
        case CertFail::coverage: return "coverage";
        case CertFail::sign_missing: return "sign_missing";
        case CertFail::progress: return "progress";
        case CertFail::budget: return "budget";
    }
    return "?";
}

bool certificate_is_valid(const WeightSequence& a, const SignVector& xi,
                          const FlipCertificate& cert) {
    SignVector flipped = xi;
    for (std::size_t i : cert.flips.indices()) flipped.flip(i);
    return evaluate(a, flipped) == cert.achieved_target;
}

namespace {

Family family_of(const WeightSequence& a) {
    if (!a.params().has("family")) throw UsageError("sequence carries no family params");
    return static_cast<Family>(a.params().at("family"));
}

// Minimum-cardinality subset of the distinct positive elements summing
// to target, at most cap elements. Returns the chosen values.
std::optional<std::vector<int64_t>> decompose_min_count(const std::vector<int64_t>& elems,
                                                        int64_t target, int cap) {
    if (target == 0) return std::vector<int64_t>{};
    if (target < 0) return std::nullopt;
    const std::size_t ne = elems.size();
    const std::size_t width = static_cast<std::size_t>(target) + 1;
    constexpr uint8_t inf = 0xFF;
    // dp[i][v] = min count using the first i elements
    std::vector<uint8_t> dp((ne + 1) * width, inf);
    dp[0] = 0;
    for (std::size_t i = 1; i <= ne; ++i) {
        const uint8_t* prev = dp.data() + (i - 1) * width;
        uint8_t* cur = dp.data() + i * width;
        const int64_t b = elems[i - 1];
        for (std::size_t v = 0; v < width; ++v) {
            uint8_t best = prev[v];
            if (static_cast<int64_t>(v) >= b && prev[v - b] != inf &&
                prev[v - b] + 1 < best)
                best = static_cast<uint8_t>(prev[v - b] + 1);
            cur[v] = best;
        }
    }
    uint8_t need = dp[ne * width + target];
    if (need == inf || need > cap) return std::nullopt;
    std::vector<int64_t> chosen;
    std::size_t v = static_cast<std::size_t>(target);
    for (std::size_t i = ne; i > 0 && v > 0; --i) {
        const uint8_t* prev = dp.data() + (i - 1) * width;
        const uint8_t* cur = dp.data() + i * width;
        if (cur[v] != prev[v]) {
            chosen.push_back(elems[i - 1]);
            v -= static_cast<std::size_t>(elems[i - 1]);
        }
    }
    return chosen;
}

// Unique representation of an odd |s| <= 2^r - 1 as sum of +-2^j.
std::vector<int> balanced_binary_signs(int64_t s, int64_t r) {
    std::vector<int> sign(static_cast<std::size_t>(r));
    int64_t v = s;
    for (int64_t j = r - 1; j >= 0; --j) {
        sign[static_cast<std::size_t>(j)] = v >= 0 ? +1 : -1;
        v -= sign[static_cast<std::size_t>(j)] * (int64_t(1) << j);
    }
    // v == 0 here: the greedy halves the residual at every level.
    return sign;
}

// A contiguous block of copies of one value, with the sign bookkeeping
// needed to hand out distinct flip indices.
struct Pool {
    std::size_t begin = 0;
    std::size_t len = 0;
    int64_t value = 0;
    std::size_t plus = 0;   // remaining +1 copies
    std::size_t minus = 0;  // remaining -1 copies
    std::size_t cursor_plus;   // scan position for the next +1 copy
    std::size_t cursor_minus;  // scan position for the next -1 copy
};

Pool make_pool(const SignVector& xi, std::size_t begin, std::size_t len, int64_t value) {
    Pool p;
    p.begin = begin;
    p.len = len;
    p.value = value;
    p.plus = xi.popcount_range(begin, len);
    p.minus = len - p.plus;
    p.cursor_plus = begin;
    p.cursor_minus = begin;
    return p;
}

// Takes one copy with the requested sign out of the pool and returns its
// index; npos when exhausted.
std::size_t take_from_pool(Pool& p, const SignVector& xi, bool plus) {
    std::size_t& avail = plus ? p.plus : p.minus;
    if (avail == 0) return SignVector::npos;
    std::size_t& cur = plus ? p.cursor_plus : p.cursor_minus;
    std::size_t idx = xi.find_in_range(cur, p.begin + p.len - cur, plus);
    if (idx == SignVector::npos) return SignVector::npos;
    cur = idx + 1;
    --avail;
    return idx;
}

CertificateOutcome fail_outcome(CertFail reason, int bound) {
    CertificateOutcome out;
    out.success = false;
    out.reason = reason;
    out.size_bound = bound;
    return out;
}

}  // namespace

CertificateOutcome layered_certificate(const WeightSequence& a, const SignVector& xi) {
    if (family_of(a) != Family::layered)
        throw UsageError("layered_certificate needs a sequence from the layered family");
    if (a.size() != xi.size()) throw DimensionError("length mismatch");
    const Params& prm = a.params();
    const int64_t n = static_cast<int64_t>(a.size());
    const int64_t n1 = prm.at("n1"), m = prm.at("m");
    const int64_t h = prm.at("h"), hp = prm.at("h_prime"), r = prm.at("r");
    const int64_t copies_b = prm.at("copies_b"), copies_bp = prm.at("copies_bp");
    const int64_t i_end = prm.at("i_end"), j_end = prm.at("j_end");
    const std::vector<int64_t>& basis_b = prm.list("basis_b");
    const std::vector<int64_t>& basis_bp = prm.list("basis_bp");
    const int bound = static_cast<int>(h + hp + r);

    // Per-element copy pools in the two basis layers.
    std::vector<Pool> pools_b, pools_bp;
    pools_b.reserve(basis_b.size());
    for (std::size_t idx = 0; idx < basis_b.size(); ++idx)
        pools_b.push_back(make_pool(xi, idx * static_cast<std::size_t>(copies_b),
                                    static_cast<std::size_t>(copies_b), basis_b[idx]));
    pools_bp.reserve(basis_bp.size());
    for (std::size_t idx = 0; idx < basis_bp.size(); ++idx)
        pools_bp.push_back(make_pool(
            xi, static_cast<std::size_t>(i_end) + idx * static_cast<std::size_t>(copies_bp),
            static_cast<std::size_t>(copies_bp), n1 * basis_bp[idx]));

    const int64_t X = evaluate_i64(a, xi);
    int64_t xk = 0;
    for (int64_t j = 0; j < r; ++j) {
        std::size_t idx = static_cast<std::size_t>(j_end + j);
        int64_t v = m * (int64_t(1) << j);
        xk += xi.bit(idx) ? v : -v;
    }
    const int64_t x_rest = X - xk;
    if (x_rest > 2 * n || x_rest < -2 * n) return fail_outcome(CertFail::chebyshev, bound);

    // Stage K: retune the power-of-two layer to the odd multiple of m
    // closest to -x_rest.
    const int64_t s_cur = xk / m;
    const int64_t s_max = (int64_t(1) << r) - 1;
    auto clamp_odd = [&](int64_t s) {
        if (s > s_max) s = s_max;
        if (s < -s_max) s = -s_max;
        return s;
    };
    int64_t ideal_lo = -x_rest >= 0 ? -x_rest / m : -((x_rest + m - 1) / m);  // floor(-x_rest/m)
    if (ideal_lo % 2 == 0) --ideal_lo;  // largest odd <= floor
    int64_t best_s = s_cur;
    auto score = [&](int64_t s) {
        int64_t v = x_rest + s * m;
        return v < 0 ? -v : v;
    };
    for (int64_t cand : {clamp_odd(ideal_lo), clamp_odd(ideal_lo + 2), clamp_odd(ideal_lo + 4),
                         clamp_odd(ideal_lo - 2), s_cur}) {
        if ((cand & 1) == 0) continue;
        int64_t sc = score(cand), sb = score(best_s);
        if (sc < sb ||
            (sc == sb && (std::abs(cand) < std::abs(best_s) ||
                          (std::abs(cand) == std::abs(best_s) && cand < best_s))))
            best_s = cand;
    }
    if (score(s_cur) == score(best_s)) best_s = s_cur;  // ties keep the current pattern
    int64_t X1 = x_rest + best_s * m;
    if (X1 > 2 * m || X1 < -2 * m) return fail_outcome(CertFail::coverage, bound);

    std::vector<std::size_t> flips;
    std::vector<int> want = balanced_binary_signs(best_s, r);
    for (int64_t j = 0; j < r; ++j) {
        std::size_t idx = static_cast<std::size_t>(j_end + j);
        int have = xi.bit(idx) ? +1 : -1;
        if (have != want[static_cast<std::size_t>(j)]) flips.push_back(idx);
    }

    // Stage J: bring |X| under 2*n1 with at most h' flips in the scaled
    // basis layer, spending only copies whose sign matches the direction.
    auto take_decomposition = [&](std::vector<Pool>& pools, int64_t scale, int64_t q,
                                  int cap, bool plus) -> std::optional<std::vector<std::size_t>> {
        std::vector<int64_t> avail;
        std::vector<std::size_t> pool_of;
        for (std::size_t idx = 0; idx < pools.size(); ++idx) {
            if ((plus ? pools[idx].plus : pools[idx].minus) > 0) {
                avail.push_back(pools[idx].value / scale);
                pool_of.push_back(idx);
            }
        }
        auto chosen = decompose_min_count(avail, q, cap);
        if (!chosen) return std::nullopt;
        std::vector<std::size_t> out;
        for (int64_t b : *chosen) {
            auto it = std::lower_bound(avail.begin(), avail.end(), b);
            std::size_t idx = pool_of[static_cast<std::size_t>(it - avail.begin())];
            std::size_t fi = take_from_pool(pools[idx], xi, plus);
            if (fi == SignVector::npos) return std::nullopt;
            out.push_back(fi);
        }
        return out;
    };

    int64_t X2 = X1;
    if (X1 > 2 * n1 || X1 < -2 * n1) {
        const bool plus = X1 > 0;
        const int64_t absx = plus ? X1 : -X1;
        const int64_t q = ceil_div_i64(absx / 2, n1);
        auto picked = take_decomposition(pools_bp, n1, q, static_cast<int>(hp), plus);
        if (!picked) return fail_outcome(CertFail::sign_missing, bound);
        flips.insert(flips.end(), picked->begin(), picked->end());
        X2 = X1 - (plus ? 1 : -1) * 2 * n1 * q;
    }

    // Stage I: finish to X = 0 with at most h flips in the base layer.
    if (X2 != 0) {
        const bool plus = X2 > 0;
        const int64_t q2 = (plus ? X2 : -X2) / 2;
        auto picked = take_decomposition(pools_b, 1, q2, static_cast<int>(h), plus);
        if (!picked) return fail_outcome(CertFail::sign_missing, bound);
        flips.insert(flips.end(), picked->begin(), picked->end());
    }

    CertificateOutcome out;
    out.success = true;
    out.size_bound = bound;
    out.certificate.strategy = FlipCertificate::Strategy::layered;
    out.certificate.achieved_target = 0;
    out.certificate.flips = IndexSet(std::move(flips), a.size());
    if (!certificate_is_valid(a, xi, out.certificate))
        throw Error("internal: layered certificate failed exact re-verification");
    return out;
}

CertificateOutcome harmonic_certificate(const WeightSequence& a, const SignVector& xi) {
    if (family_of(a) != Family::janson_spencer)
        throw UsageError("harmonic_certificate needs a janson_spencer sequence");
    if (a.size() != xi.size()) throw DimensionError("length mismatch");
    const Params& prm = a.params();
    const int64_t n = static_cast<int64_t>(a.size());
    const int64_t j_max = prm.at("j_max");
    const int64_t cheb_l = prm.at("cheb_l");

    // Pools grouped by value from the run structure (duplicate values in
    // the construction share a pool list).
    std::map<int64_t, std::vector<Pool>> by_value;
    for (const WeightRun& run : a.runs())
        by_value[run.value].push_back(make_pool(xi, run.begin, run.length, run.value));
    std::vector<int64_t> values;
    values.reserve(by_value.size());
    for (const auto& [v, pools] : by_value) values.push_back(v);

    const int64_t v1 = values.back();  // round(sqrt n), the largest value
    const BigInt ss = a.total_sum_of_squares();
    const BigInt gate_sq = BigInt(cheb_l) * cheb_l * ss;

    const int64_t b0 =
        to_int64((isqrt_ceil(gate_sq) + 2 * v1 - 1) / (2 * v1));  // ceil(L*sigma / 2v1)
    const int64_t stage2_cap =
        guarded_ceil(std::log2(std::log2(static_cast<long double>(n)))) + 4;
    const int bound = static_cast<int>(b0 + stage2_cap + 1);

    int64_t X = evaluate_i64(a, xi);
    if (BigInt(X) * X > gate_sq) return fail_outcome(CertFail::chebyshev, bound);

    std::vector<std::size_t> flips;
    auto take_value = [&](int64_t v, bool plus) -> bool {
        auto it = by_value.find(v);
        if (it == by_value.end()) return false;
        for (Pool& p : it->second) {
            std::size_t idx = take_from_pool(p, xi, plus);
            if (idx != SignVector::npos) {
                flips.push_back(idx);
                return true;
            }
        }
        return false;
    };
    auto has_value = [&](int64_t v, bool plus) {
        auto it = by_value.find(v);
        if (it == by_value.end()) return false;
        for (const Pool& p : it->second)
            if ((plus ? p.plus : p.minus) > 0) return true;
        return false;
    };

    // Stage 1: drain with the top value until |X| <= 2*v1.
    int64_t stage1 = 0;
    while (X > 2 * v1 || X < -2 * v1) {
        if (++stage1 > b0) return fail_outcome(CertFail::budget, bound);
        const bool plus = X > 0;
        if (!take_value(v1, plus)) return fail_outcome(CertFail::sign_missing, bound);
        X -= (plus ? 1 : -1) * 2 * v1;
    }

    // Stage 2: squaring descent through the value grid until the final
    // integer layer can finish.
    int64_t steps = 0;
    while (X > 2 * j_max || X < -2 * j_max) {
        if (++steps > stage2_cap) return fail_outcome(CertFail::budget, bound);
        const bool plus = X > 0;
        const int64_t absx = plus ? X : -X;
        const int64_t target = absx / 2;
        // nearest available value to target, preferring the smaller on ties
        auto it = std::lower_bound(values.begin(), values.end(), target);
        int64_t best_v = -1, best_err = -1;
        auto consider = [&](int64_t v) {
            if (!has_value(v, plus)) return;
            int64_t err = std::abs(absx - 2 * v);
            if (best_v < 0 || err < best_err || (err == best_err && v < best_v)) {
                best_v = v;
                best_err = err;
            }
        };
        // scan outward from the insertion point until both sides are
        // dominated by the best error found so far
        for (auto fw = it; fw != values.end(); ++fw) {
            if (best_v >= 0 && 2 * (*fw - target) > best_err) break;
            consider(*fw);
        }
        for (auto bw = it; bw != values.begin();) {
            --bw;
            if (best_v >= 0 && 2 * (target - *bw) > best_err) break;
            consider(*bw);
        }
        if (best_v < 0 || best_err >= absx) return fail_outcome(CertFail::progress, bound);
        take_value(best_v, plus);
        X -= (plus ? 1 : -1) * 2 * best_v;
    }

    // Stage 3: one exact flip.
    if (X != 0) {
        const bool plus = X > 0;
        const int64_t j = (plus ? X : -X) / 2;
        if (!take_value(j, plus)) return fail_outcome(CertFail::sign_missing, bound);
        X = 0;
    }

    CertificateOutcome out;
    out.success = true;
    out.size_bound = bound;
    out.certificate.strategy = FlipCertificate::Strategy::harmonic;
    out.certificate.achieved_target = 0;
    out.certificate.flips = IndexSet(std::move(flips), a.size());
    if (!certificate_is_valid(a, xi, out.certificate))
        throw Error("internal: harmonic certificate failed exact re-verification");
    return out;
}

CertifyStats certify_monte_carlo(const WeightSequence& a, uint64_t samples, uint64_t seed,
                                 int threads) {
    const Family fam = family_of(a);
    if (fam != Family::layered && fam != Family::janson_spencer)
        throw UsageError("certificates exist for the layered and janson_spencer families");

    struct Chunk {
        uint64_t successes = 0;
        std::map<std::string, uint64_t> failures;
        int max_size = 0;
        bool verified = true;
    };
    const uint64_t chunk_size = std::max<uint64_t>(1, samples / 64);
    std::vector<Chunk> chunks((samples + chunk_size - 1) / chunk_size);
    parallel_chunks(samples, chunk_size, threads, [&](uint64_t c, uint64_t lo, uint64_t hi) {
        Chunk& out = chunks[c];
        for (uint64_t s = lo; s < hi; ++s) {
            SignVector xi = SignVector::random(a.size(), seed, s);
            CertificateOutcome res = fam == Family::layered ? layered_certificate(a, xi)
                                                            : harmonic_certificate(a, xi);
            if (res.success) {
                ++out.successes;
                out.max_size =
                    std::max(out.max_size, static_cast<int>(res.certificate.flips.size()));
                if (!certificate_is_valid(a, xi, res.certificate)) out.verified = false;
            } else {
                ++out.failures[cert_fail_name(res.reason)];
            }
        }
    });

    CertifyStats stats;
    stats.samples = samples;
    SignVector probe(a.size());
    stats.size_bound = (fam == Family::layered ? layered_certificate(a, probe)
                                               : harmonic_certificate(a, probe))
                           .size_bound;
    for (const Chunk& c : chunks) {
        stats.successes += c.successes;
        stats.max_size = std::max(stats.max_size, c.max_size);
        stats.all_verified = stats.all_verified && c.verified;
        for (const auto& [k, v] : c.failures) stats.failures[k] += v;
    }
    return stats;
}

}  // namespace lor
