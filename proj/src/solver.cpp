#include "lor/solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>

#include "lor/parallel.hpp"

namespace lor {

namespace {

constexpr uint16_t kInf16 = 0xFFFF;
constexpr uint32_t kNoEntry = 0xFFFFFFFFu;

void require_same_length(const WeightSequence& a, const SignVector& xi) {
    if (a.size() != xi.size())
        throw DimensionError("weight sequence has length " + std::to_string(a.size()) +
                             " but sign vector has length " + std::to_string(xi.size()));
}

int64_t abs_sum_i64(const WeightSequence& a) {
    return to_int64(a.total_abs_sum());
}

// Lexicographic enumeration of size-s index subsets with an incrementally
// maintained sum. f(sum, min_idx, max_idx, idx) -> bool; returning true
// stops the enumeration.
template <typename SumT, typename F>
void for_each_combination(const std::vector<SumT>& v, int s, F&& f) {
    const int n = static_cast<int>(v.size());
    if (s > n) return;
    std::vector<int> idx(s);
    SumT sum{};
    for (int j = 0; j < s; ++j) {
        idx[j] = j;
        sum += v[j];
    }
    for (;;) {
        if (f(sum, idx, idx.empty() ? -1 : idx.front(), idx.empty() ? -1 : idx.back()))
            return;
        int j = s - 1;
        while (j >= 0 && idx[j] == n - s + j) --j;
        if (j < 0) return;
        sum -= v[idx[j]];
        ++idx[j];
        sum += v[idx[j]];
        for (int t = j + 1; t < s; ++t) {
            sum -= v[idx[t]];
            idx[t] = idx[t - 1] + 1;
            sum += v[idx[t]];
        }
    }
}

uint64_t binomial_clamped(int n, int s, uint64_t clamp) {
    if (s < 0 || s > n) return 0;
    unsigned __int128 r = 1;
    for (int i = 1; i <= s; ++i) {
        r = r * static_cast<uint64_t>(n - s + i) / static_cast<uint64_t>(i);
        if (r > clamp) return clamp + 1;
    }
    return static_cast<uint64_t>(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// FlipSumTable
// ---------------------------------------------------------------------------

FlipSumTable::FlipSumTable(const WeightSequence& a, const SignVector& xi,
                           const SolverLimits& limits)
    : limits_(limits) {
    require_same_length(a, xi);
    if (!a.fits_int64())
        throw ResourceLimitError("flip-sum DP requires int64-ranged weights");
    abs_sum_ = abs_sum_i64(a);
    span_ = static_cast<std::size_t>(2 * abs_sum_ + 1);
    if (span_ > limits_.dp_span_entries)
        throw ResourceLimitError(
            "flip-sum DP span 2*sum|a|+1 = " + std::to_string(span_) +
            " exceeds the limit " + std::to_string(limits_.dp_span_entries));
    if (a.size() >= kInf16)
        throw ResourceLimitError("flip-sum DP supports n < 65535");

    const auto& w = a.weights_i64();
    svals_.resize(w.size());
    base_ = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        svals_[i] = xi.bit(i) ? w[i] : -w[i];
        base_ += svals_[i];
    }

    // 0/1 min-cardinality subset-sum over the signed values. Offset
    // abs_sum_ is sum zero; positive deltas relax downward, negative
    // upward, so each item is used at most once.
    card_.assign(span_, kInf16);
    card_[static_cast<std::size_t>(abs_sum_)] = 0;
    int64_t lo = abs_sum_, hi = abs_sum_;  // reachable offset window
    for (int64_t s : svals_) {
        if (s > 0) {
            int64_t nhi = hi + s;
            for (int64_t o = nhi; o >= lo + s; --o) {
                uint16_t c = card_[static_cast<std::size_t>(o - s)];
                if (c != kInf16 && c + 1 < card_[static_cast<std::size_t>(o)])
                    card_[static_cast<std::size_t>(o)] = static_cast<uint16_t>(c + 1);
            }
            hi = nhi;
        } else {
            int64_t nlo = lo + s;
            for (int64_t o = nlo; o <= hi + s; ++o) {
                uint16_t c = card_[static_cast<std::size_t>(o - s)];
                if (c != kInf16 && c + 1 < card_[static_cast<std::size_t>(o)])
                    card_[static_cast<std::size_t>(o)] = static_cast<uint16_t>(c + 1);
            }
            lo = nlo;
        }
    }
}

std::optional<std::size_t> FlipSumTable::target_slot(const BigInt& x) const {
    BigInt diff = BigInt(base_) - x;
    if ((diff & 1) != 0) return std::nullopt;  // parity obstruction
    BigInt t = diff / 2;
    if (t < -abs_sum_ || t > abs_sum_) return std::nullopt;
    return static_cast<std::size_t>(static_cast<int64_t>(t) + abs_sum_);
}

std::optional<int> FlipSumTable::min_flips(const BigInt& x) const {
    auto slot = target_slot(x);
    if (!slot || card_[*slot] == kInf16) return std::nullopt;
    return static_cast<int>(card_[*slot]);
}

IndexSet FlipSumTable::witness(const BigInt& x) {
    auto slot = target_slot(x);
    if (!slot || card_[*slot] == kInf16)
        throw UsageError("witness requested for an unachievable target");
    const std::size_t n = svals_.size();
    if (suffix_.empty()) {
        std::size_t bytes = (n + 1) * span_ * sizeof(uint16_t);
        if (bytes > limits_.dp_witness_bytes)
            throw ResourceLimitError("witness suffix tables need " + std::to_string(bytes) +
                                     " bytes, above the configured cap");
        suffix_.assign(n + 1, {});
        suffix_[n].assign(span_, kInf16);
        suffix_[n][static_cast<std::size_t>(abs_sum_)] = 0;
        for (std::size_t i = n; i-- > 0;) {
            suffix_[i] = suffix_[i + 1];
            int64_t s = svals_[i];
            auto& cur = suffix_[i];
            const auto& nxt = suffix_[i + 1];
            // cur[o] = min(nxt[o], nxt[o - s] + 1)
            int64_t from = std::max<int64_t>(0, -s);
            int64_t to = std::min<int64_t>(static_cast<int64_t>(span_),
                                           static_cast<int64_t>(span_) - s);
            for (int64_t o = from; o < to; ++o) {
                uint16_t c = nxt[static_cast<std::size_t>(o)];
                if (c == kInf16) continue;
                auto& dst = cur[static_cast<std::size_t>(o + s)];
                if (c + 1 < dst) dst = static_cast<uint16_t>(c + 1);
            }
        }
    }
    // Greedy lowest-index-first walk through the suffix tables.
    int64_t t = static_cast<int64_t>(*slot) - abs_sum_;
    uint16_t c = card_[*slot];
    std::vector<std::size_t> picked;
    picked.reserve(c);
    for (std::size_t i = 0; i < n && c > 0; ++i) {
        int64_t rem = t - svals_[i];
        if (rem < -abs_sum_ || rem > abs_sum_) continue;
        std::size_t o = static_cast<std::size_t>(rem + abs_sum_);
        if (suffix_[i + 1][o] == c - 1) {
            picked.push_back(i);
            t = rem;
            --c;
        }
    }
    assert(t == 0 && c == 0);
    return IndexSet(std::move(picked), n);
}

ResilienceResult resilience_dp(const WeightSequence& a, const SignVector& xi,
                               const BigInt& x, const SolverLimits& limits) {
    FlipSumTable table(a, xi, limits);
    ResilienceResult r;
    r.value = table.min_flips(x);
    if (r.value) r.witness = table.witness(x);
    return r;
}

// ---------------------------------------------------------------------------
// MitmSearcher
// ---------------------------------------------------------------------------

namespace {

// Per half-size lookup structures. `probe` answers "does a subset of this
// size with sum sigma and max index < bound exist"; `iter` enumerates the
// distinct sums with the largest min-index achieving each.
template <typename SumT>
struct SizeTab {
    bool built = false;
    bool dense = false;
    int64_t dense_lo = 0;
    std::vector<uint32_t> dense_probe;                 // min max-index per sum
    std::vector<std::pair<SumT, uint32_t>> probe;      // sorted by sum: min max-index
    std::vector<std::pair<SumT, uint32_t>> iter;       // sorted by sum: max min-index
};

template <typename SumT>
struct MitmCore {
    const WeightSequence* a = nullptr;
    const SignVector* xi = nullptr;
    SolverLimits limits;
    int n = 0;
    SumT base{};                 // X(xi)
    std::vector<SumT> svals;     // built lazily for l >= 2 (int64 keeps runs)
    bool svals_ready = false;
    std::vector<std::size_t> run_plus;  // per-run popcounts (int64 path)
    std::vector<SumT> sorted_abs_unused;
    std::vector<SumT> sorted_vals;      // ascending, for dense range bounds
    std::vector<SizeTab<SumT>> tabs;

    void init(const WeightSequence& aa, const SignVector& xx) {
        a = &aa;
        xi = &xx;
        n = static_cast<int>(aa.size());
        tabs.resize(static_cast<std::size_t>(n / 2 + 2));
        if constexpr (std::is_same_v<SumT, int64_t>) {
            base = 0;
            run_plus.reserve(aa.runs().size());
            for (const WeightRun& r : aa.runs()) {
                std::size_t p = xx.popcount_range(r.begin, r.length);
                run_plus.push_back(p);
                base += r.value * (2 * static_cast<int64_t>(p) -
                                   static_cast<int64_t>(r.length));
            }
        } else {
            base = evaluate(aa, xx);
        }
    }

    void ensure_svals() {
        if (svals_ready) return;
        svals.resize(n);
        for (int i = 0; i < n; ++i) {
            if constexpr (std::is_same_v<SumT, int64_t>)
                svals[i] = xi->bit(i) ? a->weights_i64()[i] : -a->weights_i64()[i];
            else
                svals[i] = xi->bit(i) ? a->weight(i) : -a->weight(i);
        }
        sorted_vals = svals;
        std::sort(sorted_vals.begin(), sorted_vals.end());
        svals_ready = true;
    }

    void build_size(int s) {
        SizeTab<SumT>& tab = tabs[s];
        if (tab.built) return;
        ensure_svals();
        if (s == 0) {
            // The empty suffix half: sum 0, min-index n (no ordering
            // constraint on the prefix half).
            tab.iter.emplace_back(SumT{}, static_cast<uint32_t>(n));
            tab.probe.emplace_back(SumT{}, kNoEntry);
            tab.built = true;
            return;
        }
        uint64_t count = binomial_clamped(n, s, limits.mitm_size_entries);
        if (count > limits.mitm_size_entries)
            throw ResourceLimitError("meet-in-the-middle half of size " + std::to_string(s) +
                                     " needs C(" + std::to_string(n) + "," + std::to_string(s) +
                                     ") > " + std::to_string(limits.mitm_size_entries) +
                                     " enumerated subsets");
        if constexpr (std::is_same_v<SumT, int64_t>) {
            // Dense tables over the reachable sum window when affordable.
            int64_t lo = 0, hi = 0;
            for (int j = 0; j < s; ++j) lo += sorted_vals[j];
            for (int j = 0; j < s; ++j) hi += sorted_vals[n - 1 - j];
            uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
            if (span <= (1u << 22)) {
                tab.dense = true;
                tab.dense_lo = lo;
                tab.dense_probe.assign(span, kNoEntry);
                std::vector<uint32_t> dense_iter(span, kNoEntry);
                for_each_combination(svals, s,
                                     [&](int64_t sum, const std::vector<int>&, int mn, int mx) {
                                         std::size_t o = static_cast<std::size_t>(sum - lo);
                                         if (static_cast<uint32_t>(mx) < tab.dense_probe[o])
                                             tab.dense_probe[o] = static_cast<uint32_t>(mx);
                                         uint32_t& it = dense_iter[o];
                                         if (it == kNoEntry || static_cast<uint32_t>(mn) > it)
                                             it = static_cast<uint32_t>(mn);
                                         return false;
                                     });
                for (std::size_t o = 0; o < span; ++o)
                    if (dense_iter[o] != kNoEntry)
                        tab.iter.emplace_back(lo + static_cast<int64_t>(o), dense_iter[o]);
                tab.built = true;
                return;
            }
        }
        std::vector<std::tuple<SumT, uint32_t, uint32_t>> all;
        all.reserve(static_cast<std::size_t>(count));
        for_each_combination(svals, s,
                             [&](const SumT& sum, const std::vector<int>&, int mn, int mx) {
                                 all.emplace_back(sum, static_cast<uint32_t>(mn),
                                                  static_cast<uint32_t>(mx));
                                 return false;
                             });
        std::sort(all.begin(), all.end(),
                  [](const auto& p, const auto& q) { return std::get<0>(p) < std::get<0>(q); });
        for (std::size_t i = 0; i < all.size();) {
            std::size_t j = i;
            uint32_t min_max = kNoEntry, max_min = 0;
            while (j < all.size() && std::get<0>(all[j]) == std::get<0>(all[i])) {
                min_max = std::min(min_max, std::get<2>(all[j]));
                max_min = std::max(max_min, std::get<1>(all[j]));
                ++j;
            }
            tab.probe.emplace_back(std::get<0>(all[i]), min_max);
            tab.iter.emplace_back(std::get<0>(all[i]), max_min);
            i = j;
        }
        tab.built = true;
    }

    // min max-index over size-s subsets with the given sum; kNoEntry if none.
    uint32_t probe(int s, const SumT& sum) const {
        const SizeTab<SumT>& tab = tabs[s];
        if (tab.dense) {
            if constexpr (std::is_same_v<SumT, int64_t>) {
                int64_t o = sum - tab.dense_lo;
                if (o < 0 || o >= static_cast<int64_t>(tab.dense_probe.size()))
                    return kNoEntry;
                return tab.dense_probe[static_cast<std::size_t>(o)];
            }
        }
        auto it = std::lower_bound(tab.probe.begin(), tab.probe.end(), sum,
                                   [](const auto& p, const SumT& v) { return p.first < v; });
        if (it == tab.probe.end() || it->first != sum) return kNoEntry;
        return it->second;
    }

    // True when some l-subset has flip sum t (split sA | sB with every
    // prefix index below every suffix index).
    bool level_hit(int l, const SumT& t) {
        int sA = (l + 1) / 2, sB = l / 2;
        build_size(sA);
        build_size(sB);
        for (const auto& [sumB, max_min] : tabs[sB].iter) {
            uint32_t got = probe(sA, t - sumB);
            if (got != kNoEntry && got < max_min) return true;
        }
        return false;
    }

    std::optional<IndexSet> extract_witness(int l, const SumT& t) {
        if (l == 0) return IndexSet({}, n);
        int sA = (l + 1) / 2, sB = l / 2;
        std::optional<IndexSet> out;
        if (sB == 0) {
            for_each_combination(svals, sA,
                                 [&](const SumT& sum, const std::vector<int>& idx, int, int) {
                                     if (sum != t) return false;
                                     std::vector<std::size_t> v(idx.begin(), idx.end());
                                     out = IndexSet(std::move(v), n);
                                     return true;
                                 });
            return out;
        }
        for_each_combination(svals, sB, [&](const SumT& sumB, const std::vector<int>& idxB,
                                            int mnB, int) {
            SumT need = t - sumB;
            uint32_t got = probe(sA, need);
            if (got == kNoEntry || got >= static_cast<uint32_t>(mnB)) return false;
            bool done = false;
            for_each_combination(svals, sA, [&](const SumT& sumA, const std::vector<int>& idxA,
                                                int, int mxA) {
                if (sumA != need || mxA >= mnB) return false;
                std::vector<std::size_t> v(idxA.begin(), idxA.end());
                v.insert(v.end(), idxB.begin(), idxB.end());
                out = IndexSet(std::move(v), n);
                done = true;
                return true;
            });
            return done;
        });
        return out;
    }

    // Single-flip shortcut. For the int64 path the run structure answers
    // sign availability in O(#runs); otherwise scan the values.
    std::optional<std::size_t> single_flip_index(const SumT& t) {
        if constexpr (std::is_same_v<SumT, int64_t>) {
            const auto& runs = a->runs();
            for (std::size_t r = 0; r < runs.size(); ++r) {
                const WeightRun& run = runs[r];
                if (run.value == t && run_plus[r] > 0)
                    return xi->find_in_range(run.begin, run.length, true);
                if (-run.value == t && run_plus[r] < run.length)
                    return xi->find_in_range(run.begin, run.length, false);
            }
            return std::nullopt;
        } else {
            ensure_svals();
            for (int i = 0; i < n; ++i)
                if (svals[i] == t) return static_cast<std::size_t>(i);
            return std::nullopt;
        }
    }

    BoundedResult query(const BigInt& x, int kmax, bool want_witness) {
        if (kmax < 0) throw UsageError("kmax must be >= 0");
        BoundedResult res;
        res.kind = BoundedResult::Kind::Exceeded;
        res.value = kmax;

        BigInt diff = BigInt(base) - x;
        if ((diff & 1) != 0) return res;  // parity: unreachable at any depth
        BigInt tb = diff / 2;
        SumT t;
        if constexpr (std::is_same_v<SumT, int64_t>) {
            if (tb < -a->total_abs_sum() || tb > a->total_abs_sum()) return res;
            t = static_cast<int64_t>(tb);
        } else {
            if (tb < -a->total_abs_sum() || tb > a->total_abs_sum()) return res;
            t = tb;
        }

        if (t == SumT{}) {
            res.kind = BoundedResult::Kind::Value;
            res.value = 0;
            if (want_witness) res.witness = IndexSet({}, n);
            return res;
        }
        if (kmax >= 1) {
            auto idx = single_flip_index(t);
            if (idx) {
                res.kind = BoundedResult::Kind::Value;
                res.value = 1;
                if (want_witness) res.witness = IndexSet({*idx}, n);
                return res;
            }
        }
        for (int l = 2; l <= std::min(kmax, n); ++l) {
            if (level_hit(l, t)) {
                res.kind = BoundedResult::Kind::Value;
                res.value = l;
                if (want_witness) res.witness = extract_witness(l, t);
                return res;
            }
        }
        return res;
    }
};

}  // namespace

struct MitmSearcher::Impl {
    bool small = false;
    MitmCore<int64_t> core_i64;
    MitmCore<BigInt> core_big;
};

MitmSearcher::MitmSearcher(const WeightSequence& a, const SignVector& xi,
                           const SolverLimits& limits)
    : impl_(std::make_unique<Impl>()) {
    require_same_length(a, xi);
    impl_->small = a.fits_int64();
    if (impl_->small) {
        impl_->core_i64.limits = limits;
        impl_->core_i64.init(a, xi);
    } else {
        impl_->core_big.limits = limits;
        impl_->core_big.init(a, xi);
    }
}

MitmSearcher::~MitmSearcher() = default;
MitmSearcher::MitmSearcher(MitmSearcher&&) noexcept = default;

BoundedResult MitmSearcher::query(const BigInt& x, int kmax, bool want_witness) {
    return impl_->small ? impl_->core_i64.query(x, kmax, want_witness)
                        : impl_->core_big.query(x, kmax, want_witness);
}

BoundedResult resilience_bounded(const WeightSequence& a, const SignVector& xi,
                                 const BigInt& x, int kmax, bool want_witness,
                                 const SolverLimits& limits) {
    MitmSearcher s(a, xi, limits);
    return s.query(x, kmax, want_witness);
}

// ---------------------------------------------------------------------------
// Exhaustive sweep + hypercube BFS
// ---------------------------------------------------------------------------

namespace {

constexpr uint64_t kAxisMask[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

inline uint64_t axis_shift(uint64_t w, int i) {
    const uint64_t m = kAxisMask[i];
    const int d = 1 << i;
    return ((w & m) << d) | ((w >> d) & m);
}

void check_exhaustive(const WeightSequence& a, const SolverLimits& limits) {
    int n = static_cast<int>(a.size());
    if (n > limits.exhaustive_limit || n > 30)
        throw ResourceLimitError("n = " + std::to_string(n) +
                                 " exceeds the exhaustive limit " +
                                 std::to_string(std::min(limits.exhaustive_limit, 30)));
}

// Gray-code sweep over all 2^n vertices; deterministic chunking keeps
// every chunk inside its own aligned vertex block (and its own bitset
// words once chunks are >= 64 vertices).
template <typename Visit>
void gray_sweep_i64(const std::vector<int64_t>& w, int threads, Visit&& visit) {
    const int n = static_cast<int>(w.size());
    const uint64_t total = 1ull << n;
    int chunk_log = std::max(6, n - 8);
    if (chunk_log > n) chunk_log = n;
    parallel_chunks(total, 1ull << chunk_log, threads,
                    [&](uint64_t chunk, uint64_t lo, uint64_t hi) {
                        uint64_t v = lo ^ (lo >> 1);
                        int64_t x = 0;
                        for (int i = 0; i < n; ++i) x += ((v >> i) & 1) ? w[i] : -w[i];
                        uint64_t g = lo;
                        for (;;) {
                            visit(chunk, v, x);
                            if (++g == hi) break;
                            int b = std::countr_zero(g);
                            uint64_t bit = 1ull << b;
                            v ^= bit;
                            x += (v & bit) ? 2 * w[b] : -2 * w[b];
                        }
                    });
}

// Multi-source BFS over hypercube edges, word-parallel. Returns counts
// per distance level; optionally records per-vertex distances.
std::vector<uint64_t> hypercube_bfs(const std::vector<uint64_t>& fiber, int n,
                                    int max_depth, std::vector<uint8_t>* dist,
                                    int threads) {
    const uint64_t total = 1ull << n;
    const std::size_t nwords = fiber.size();
    std::vector<uint64_t> visited = fiber;
    std::vector<uint64_t> frontier = fiber;
    std::vector<uint64_t> next(nwords);

    auto count_bits = [&](const std::vector<uint64_t>& v) {
        uint64_t c = 0;
        for (uint64_t x : v) c += std::popcount(x);
        return c;
    };
    auto record = [&](const std::vector<uint64_t>& v, uint8_t d) {
        if (!dist) return;
        for (std::size_t j = 0; j < nwords; ++j) {
            uint64_t bits = v[j];
            while (bits) {
                int b = std::countr_zero(bits);
                bits &= bits - 1;
                (*dist)[(j << 6) + b] = d;
            }
        }
    };

    std::vector<uint64_t> counts;
    uint64_t seen = count_bits(fiber);
    counts.push_back(seen);
    record(fiber, 0);

    const int xaxes = std::min(n, 6);
    const bool parallel = nwords >= (1u << 14);
    for (int d = 1; seen < total && (max_depth < 0 || d <= max_depth); ++d) {
        auto expand = [&](uint64_t, uint64_t wlo, uint64_t whi) {
            for (std::size_t j = wlo; j < whi; ++j) {
                uint64_t acc = 0;
                uint64_t fj = frontier[j];
                for (int i = 0; i < xaxes; ++i) acc |= axis_shift(fj, i);
                for (int i = 6; i < n; ++i) acc |= frontier[j ^ (1ull << (i - 6))];
                next[j] = acc & ~visited[j];
            }
        };
        if (parallel)
            parallel_chunks(nwords, nwords / 16 + 1, threads, expand);
        else
            expand(0, 0, nwords);
        uint64_t level = 0;
        for (std::size_t j = 0; j < nwords; ++j) {
            visited[j] |= next[j];
            level += std::popcount(next[j]);
        }
        if (level == 0) break;
        record(next, static_cast<uint8_t>(d));
        counts.push_back(level);
        seen += level;
        frontier.swap(next);
    }
    return counts;
}

std::vector<uint64_t> mark_fiber(const WeightSequence& a, const BigInt& x,
                                 int threads, uint64_t* fiber_count) {
    const int n = static_cast<int>(a.size());
    const uint64_t total = 1ull << n;
    std::vector<uint64_t> fiber((total + 63) / 64, 0);
    uint64_t cnt = 0;
    if (a.fits_int64() && x >= -a.total_abs_sum() && x <= a.total_abs_sum()) {
        const int64_t xi64 = static_cast<int64_t>(x);
        std::atomic<uint64_t> acnt{0};
        gray_sweep_i64(a.weights_i64(), threads,
                       [&](uint64_t, uint64_t v, int64_t val) {
                           if (val == xi64) {
                               fiber[v >> 6] |= 1ull << (v & 63);
                               acnt.fetch_add(1, std::memory_order_relaxed);
                           }
                       });
        cnt = acnt.load();
    } else if (!a.fits_int64()) {
        // Arbitrary-precision sweep; single-threaded, small-n territory.
        BigInt val = 0;
        for (std::size_t i = 0; i < a.size(); ++i) val -= a.weight(i);
        uint64_t v = 0;
        for (uint64_t g = 0;;) {
            if (val == x) {
                fiber[v >> 6] |= 1ull << (v & 63);
                ++cnt;
            }
            if (++g == total) break;
            int b = std::countr_zero(g);
            uint64_t bit = 1ull << b;
            v ^= bit;
            if (v & bit)
                val += 2 * a.weight(b);
            else
                val -= 2 * a.weight(b);
        }
    }
    // else: |x| beyond sum|a| with int64 weights -> empty fiber.
    *fiber_count = cnt;
    return fiber;
}

}  // namespace

uint64_t ResilienceProfile::mass_at_most(int k) const {
    uint64_t m = 0;
    for (std::size_t d = 0; d < counts.size() && static_cast<int>(d) <= k; ++d)
        m += counts[d];
    return m;
}

BigRational ResilienceProfile::prob_at_most(int k) const {
    return BigRational(BigInt(mass_at_most(k)), BigInt(1) << n);
}

ResilienceProfile hypercube_profile(const WeightSequence& a, const BigInt& x,
                                    const ProfileOptions& options) {
    check_exhaustive(a, options.limits);
    const int n = static_cast<int>(a.size());
    ResilienceProfile profile;
    profile.target = x;
    profile.n = n;
    profile.max_depth = options.max_depth;

    uint64_t fiber_count = 0;
    std::vector<uint64_t> fiber = mark_fiber(a, x, options.limits.threads, &fiber_count);
    profile.achievable = fiber_count > 0;
    if (!profile.achievable) return profile;

    std::vector<uint8_t> dist;
    if (options.keep_distances) dist.assign(1ull << n, 0xFF);
    profile.counts = hypercube_bfs(fiber, n, options.max_depth,
                                   options.keep_distances ? &dist : nullptr,
                                   options.limits.threads);
    if (options.keep_distances) profile.distances = std::move(dist);
    uint64_t covered = 0;
    for (uint64_t c : profile.counts) covered += c;
    profile.truncated = covered < (1ull << n);
    return profile;
}

std::vector<std::pair<int64_t, uint64_t>> support_atoms(const WeightSequence& a,
                                                        const SolverLimits& limits) {
    check_exhaustive(a, limits);
    if (!a.fits_int64())
        throw ResourceLimitError("support enumeration requires int64-ranged weights");
    const int n = static_cast<int>(a.size());
    const uint64_t total = 1ull << n;
    std::vector<int64_t> vals(total);
    gray_sweep_i64(a.weights_i64(), limits.threads,
                   [&](uint64_t, uint64_t v, int64_t val) { vals[v] = val; });
    std::sort(vals.begin(), vals.end());
    std::vector<std::pair<int64_t, uint64_t>> atoms;
    for (uint64_t i = 0; i < total;) {
        uint64_t j = i;
        while (j < total && vals[j] == vals[i]) ++j;
        atoms.emplace_back(vals[i], j - i);
        i = j;
    }
    return atoms;
}

QkResult qk_exact(const WeightSequence& a, int k,
                  const std::optional<std::vector<BigInt>>& candidates,
                  const SolverLimits& limits) {
    check_exhaustive(a, limits);
    if (!a.fits_int64())
        throw ResourceLimitError("qk_exact requires int64-ranged weights");
    if (k < 0) throw UsageError("k must be >= 0");
    const int n = static_cast<int>(a.size());
    const uint64_t total = 1ull << n;

    // Vertex list grouped by value: sort vertex ids keyed by X(vertex).
    std::vector<int64_t> vals(total);
    gray_sweep_i64(a.weights_i64(), limits.threads,
                   [&](uint64_t, uint64_t v, int64_t val) { vals[v] = val; });
    std::vector<uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](uint32_t p, uint32_t q) { return vals[p] < vals[q] || (vals[p] == vals[q] && p < q); });

    auto fiber_range = [&](int64_t value) -> std::pair<uint64_t, uint64_t> {
        auto lo = std::lower_bound(order.begin(), order.end(), value,
                                   [&](uint32_t p, int64_t v) { return vals[p] < v; });
        auto hi = std::upper_bound(order.begin(), order.end(), value,
                                   [&](int64_t v, uint32_t p) { return v < vals[p]; });
        return {static_cast<uint64_t>(lo - order.begin()), static_cast<uint64_t>(hi - order.begin())};
    };

    // Candidate targets; masses are computed per magnitude (x and -x tie).
    std::vector<BigInt> cand;
    if (candidates) {
        cand = *candidates;
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    } else {
        std::size_t i = 0;
        while (i < total) {
            std::size_t j = i;
            while (j < total && vals[order[j]] == vals[order[i]]) ++j;
            cand.emplace_back(vals[order[i]]);
            i = j;
        }
    }
    if (cand.empty()) throw UsageError("qk_exact needs at least one candidate target");

    std::vector<uint64_t> scratch((total + 63) / 64, 0);
    std::map<BigInt, uint64_t> mass_by_magnitude;
    auto mass_for = [&](const BigInt& magnitude) -> uint64_t {
        auto it = mass_by_magnitude.find(magnitude);
        if (it != mass_by_magnitude.end()) return it->second;
        uint64_t mass = 0;
        if (fits_int64(magnitude)) {
            int64_t m = static_cast<int64_t>(magnitude);
            auto [lo, hi] = fiber_range(m);
            if (lo == hi && m != 0) {
                auto [lo2, hi2] = fiber_range(-m);  // symmetric fallback
                lo = lo2;
                hi = hi2;
            }
            if (lo < hi) {
                for (uint64_t i = lo; i < hi; ++i)
                    scratch[order[i] >> 6] |= 1ull << (order[i] & 63);
                auto counts = hypercube_bfs(scratch, n, std::min(k, n), nullptr,
                                            limits.threads);
                for (uint64_t c : counts) mass += c;
                std::fill(scratch.begin(), scratch.end(), 0ull);
            }
        }
        mass_by_magnitude.emplace(magnitude, mass);
        return mass;
    };

    QkResult result;
    result.n = n;
    result.candidates = cand.size();
    uint64_t best = 0;
    bool first = true;
    BigInt best_x;
    uint64_t ties = 0;
    for (const BigInt& x : cand) {
        uint64_t m = mass_for(boost::multiprecision::abs(x));
        if (first || m > best) {
            best = m;
            best_x = x;
            ties = 1;
            first = false;
        } else if (m == best) {
            ++ties;
            if (x < best_x) best_x = x;  // cand sorted ascending, kept for clarity
        }
    }
    result.mass = best;
    result.value = BigRational(BigInt(best), BigInt(1) << n);
    result.argmax_x = best_x;
    result.ties = ties;
    return result;
}

}  // namespace lor
