#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lor/bigint.hpp"
#include "lor/errors.hpp"
#include "lor/rng.hpp"

namespace lor {

// Construction parameters attached to a generated sequence. Scalar values
// cover counts and layer boundaries; list values cover basis contents.
struct Params {
    std::map<std::string, int64_t> scalars;
    std::map<std::string, std::vector<int64_t>> lists;

    bool has(const std::string& key) const { return scalars.count(key) != 0; }
    int64_t at(const std::string& key) const;
    const std::vector<int64_t>& list(const std::string& key) const;
    bool empty() const { return scalars.empty() && lists.empty(); }
};

// A maximal run of consecutive equal weights. Generators emit weights
// grouped by value, so run-compressed evaluation is the fast path at
// Monte Carlo scale.
struct WeightRun {
    std::size_t begin = 0;
    std::size_t length = 0;
    int64_t value = 0;  // valid only when the sequence fits int64
};

// The fixed sequence a = (a_1, ..., a_n) of nonzero exact integers.
// Immutable after construction; all derived views are computed up front.
class WeightSequence {
public:
    explicit WeightSequence(std::vector<BigInt> weights, std::string name = {},
                            Params params = {});
    static WeightSequence from_int64(const std::vector<int64_t>& weights,
                                     std::string name = {}, Params params = {});

    std::size_t size() const { return weights_.size(); }
    const std::vector<BigInt>& weights() const { return weights_; }
    const BigInt& weight(std::size_t i) const { return weights_[i]; }

    const std::string& name() const { return name_; }
    const Params& params() const { return params_; }

    // True when every weight and the sum of absolute values fit
    // comfortably in int64; the solvers' fast paths require this.
    bool fits_int64() const { return fits_int64_; }
    const std::vector<int64_t>& weights_i64() const;
    const std::vector<WeightRun>& runs() const { return runs_; }

    BigInt total_sum() const;
    BigInt total_sum_of_squares() const;
    BigInt total_abs_sum() const { return abs_sum_; }
    BigInt total_abs_cubes() const;

private:
    std::vector<BigInt> weights_;
    std::vector<int64_t> weights_i64_;
    std::vector<WeightRun> runs_;
    BigInt abs_sum_;
    bool fits_int64_ = false;
    std::string name_;
    Params params_;
};

// An element of {-1,+1}^n, bit-packed. Bit = 1 means xi_i = +1,
// bit = 0 means xi_i = -1 (the convention used by all file formats).
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::size_t n, bool all_plus = false);

    static SignVector from_string(const std::string& s);  // over {+,-}
    // For n <= 32: bit i of `vertex` is the sign bit of coordinate i.
    static SignVector from_vertex(uint32_t vertex, std::size_t n);
    static SignVector random(std::size_t n, uint64_t seed, uint64_t stream);

    std::size_t size() const { return n_; }
    int sign(std::size_t i) const { return bit(i) ? +1 : -1; }
    bool bit(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set_bit(std::size_t i, bool plus) {
        uint64_t mask = 1ull << (i & 63);
        if (plus)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

    std::size_t popcount() const;
    // Number of set bits in [begin, begin+len).
    std::size_t popcount_range(std::size_t begin, std::size_t len) const;
    // Smallest index in [begin, begin+len) whose bit equals `plus`, or
    // npos if none.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_in_range(std::size_t begin, std::size_t len, bool plus) const;

    const std::vector<uint64_t>& words() const { return words_; }
    std::string to_string() const;

    bool operator==(const SignVector&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> words_;
};

// Sorted duplicate-free set of coordinate positions, stored 0-based.
// File formats and reports use 1-based positions.
class IndexSet {
public:
    IndexSet() = default;
    // Validates range against n, sorts, rejects duplicates.
    IndexSet(std::vector<std::size_t> indices, std::size_t n);
    static IndexSet full(std::size_t n);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    std::vector<int64_t> to_one_based() const;
    static IndexSet from_one_based(const std::vector<int64_t>& ids, std::size_t n);

    bool operator==(const IndexSet&) const = default;

private:
    std::vector<std::size_t> indices_;
};

// X(xi) = sum_i a_i xi_i, exactly.
BigInt evaluate(const WeightSequence& a, const SignVector& xi);

// X_I(xi) = sum_{i in I} a_i xi_i.
BigInt evaluate_partial(const WeightSequence& a, const SignVector& xi,
                        const IndexSet& I);

// int64 fast path; requires a.fits_int64().
int64_t evaluate_i64(const WeightSequence& a, const SignVector& xi);

// Absolute values sorted ascending. Construction params are dropped
// (they describe a layout the reordering destroys); the name is kept.
WeightSequence canonicalize(const WeightSequence& a);

// If the total sum is odd, replaces the last entry equal to 1 by 2.
// Throws ParityError when the sum is odd and no unit entry exists.
WeightSequence parity_fix(const WeightSequence& a);

}  // namespace lor
