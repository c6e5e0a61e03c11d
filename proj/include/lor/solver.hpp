#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lor/bigint.hpp"
#include "lor/core.hpp"

namespace lor {

// Resource knobs for the exact solvers. Defaults target a desktop-class
// machine; everything is overridable per call.
struct SolverLimits {
    int exhaustive_limit = 26;                 // max n for 2^n enumeration
    std::size_t dp_span_entries = 1u << 26;    // max 2*sum|a|+1 for the DP table
    std::size_t dp_witness_bytes = 1u << 28;   // max memory for witness suffix tables
    std::size_t mitm_size_entries = 1u << 23;  // max C(n, s) per half-size
    int threads = 0;                           // 0 = LOR_THREADS / hardware default
};

// R_x(xi): minimum flip count, or Infinite when x is outside the support.
struct ResilienceResult {
    std::optional<int> value;        // nullopt <=> Infinite
    std::optional<IndexSet> witness; // flip set of size value (when finite)
    bool infinite() const { return !value.has_value(); }
};

// Outcome of the depth-bounded search: the exact value when R <= kmax,
// otherwise Exceeded(kmax).
struct BoundedResult {
    enum class Kind { Value, Exceeded };
    Kind kind = Kind::Exceeded;
    int value = 0;  // exact R when Value; the kmax bound when Exceeded
    std::optional<IndexSet> witness;
    bool is_value() const { return kind == Kind::Value; }
};

// Exact distribution of R_x over all 2^n sign vectors.
struct ResilienceProfile {
    BigInt target;
    int n = 0;
    bool achievable = false;
    // counts[d] = #{xi : R_x(xi) = d}; empty when unachievable.
    std::vector<uint64_t> counts;
    // When built depth-limited (internal to q_k), counts beyond max_depth
    // are absent and the tail mass is unassigned.
    int max_depth = -1;
    bool truncated = false;
    // Per-vertex distances (vertex bit i = sign bit i); filled on request.
    std::vector<uint8_t> distances;

    uint64_t fiber_size() const { return counts.empty() ? 0 : counts[0]; }
    uint64_t mass_at_most(int k) const;
    BigRational prob_at_most(int k) const;
};

struct ProfileOptions {
    int max_depth = -1;          // -1 = full distribution
    bool keep_distances = false;
    SolverLimits limits;
};

struct QkResult {
    BigRational value;    // max_x Pr[R_x <= k]
    uint64_t mass = 0;    // numerator over 2^n
    int n = 0;
    BigInt argmax_x;      // smallest maximizing target
    uint64_t ties = 0;    // number of candidate targets attaining the max
    uint64_t candidates = 0;
};

// --- minimum-cardinality subset-sum DP -------------------------------------
//
// Flipping the signs in S changes X by -2 * sum_{i in S} a_i xi_i, so
// R_x(xi) is the minimum |S| with sum_{i in S} a_i xi_i = (X - x)/2.
// The table stores, for every reachable flip-sum value, that minimum
// cardinality; one build answers every target for the same (a, xi).
class FlipSumTable {
public:
    FlipSumTable(const WeightSequence& a, const SignVector& xi,
                 const SolverLimits& limits = {});

    int64_t base_value() const { return base_; }  // X(xi)
    std::optional<int> min_flips(const BigInt& x) const;

    // Lex-smallest minimum-cardinality flip set (lowest indices first).
    // Builds suffix tables on first use; throws ResourceLimitError when
    // n * span exceeds the witness memory cap.
    IndexSet witness(const BigInt& x);

private:
    std::optional<std::size_t> target_slot(const BigInt& x) const;

    std::vector<int64_t> svals_;      // a_i * xi_i
    int64_t base_ = 0;                // X(xi)
    int64_t abs_sum_ = 0;             // sum |a_i|
    std::size_t span_ = 0;            // 2*abs_sum_+1
    std::vector<uint16_t> card_;      // min cardinality per flip-sum offset
    std::vector<std::vector<uint16_t>> suffix_;  // lazily built, per item
    SolverLimits limits_;
};

ResilienceResult resilience_dp(const WeightSequence& a, const SignVector& xi,
                               const BigInt& x, const SolverLimits& limits = {});

// --- iterative-deepening meet-in-the-middle --------------------------------
//
// For each flip-set size l, splits a sorted l-subset into its first
// ceil(l/2) and last floor(l/2) elements and meets the two halves on the
// needed flip sum, keyed by partial sums. Reusable across targets for a
// fixed (a, xi).
class MitmSearcher {
public:
    MitmSearcher(const WeightSequence& a, const SignVector& xi,
                 const SolverLimits& limits = {});
    ~MitmSearcher();
    MitmSearcher(MitmSearcher&&) noexcept;

    BoundedResult query(const BigInt& x, int kmax, bool want_witness = false);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

BoundedResult resilience_bounded(const WeightSequence& a, const SignVector& xi,
                                 const BigInt& x, int kmax,
                                 bool want_witness = false,
                                 const SolverLimits& limits = {});

// --- exhaustive hypercube sweep + multi-source BFS -------------------------

// Exact distribution of R_x: Gray-code sweep marks the fiber X^{-1}(x),
// then a breadth-first search over hypercube edges assigns every vertex
// its Hamming distance to the fiber.
ResilienceProfile hypercube_profile(const WeightSequence& a, const BigInt& x,
                                    const ProfileOptions& options = {});

// q_k(a) = max_x Pr[R_x <= k], exactly, over the given candidate targets
// (all support atoms when omitted). Ball masses for x and -x coincide
// (xi -> -xi is a distance-preserving bijection between the fibers), so
// each magnitude is computed once.
QkResult qk_exact(const WeightSequence& a, int k,
                  const std::optional<std::vector<BigInt>>& candidates = std::nullopt,
                  const SolverLimits& limits = {});

// Support atoms of X as (value, multiplicity), sorted by value.
// Requires n <= exhaustive_limit and int64-ranged weights.
std::vector<std::pair<int64_t, uint64_t>> support_atoms(const WeightSequence& a,
                                                        const SolverLimits& limits = {});

}  // namespace lor
