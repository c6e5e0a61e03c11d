#include "lor/core.hpp"

#include <algorithm>
#include <bit>

namespace lor {

int64_t Params::at(const std::string& key) const {
    auto it = scalars.find(key);
    if (it == scalars.end()) throw UsageError("missing parameter: " + key);
    return it->second;
}

const std::vector<int64_t>& Params::list(const std::string& key) const {
    auto it = lists.find(key);
    if (it == lists.end()) throw UsageError("missing parameter list: " + key);
    return it->second;
}

WeightSequence::WeightSequence(std::vector<BigInt> weights, std::string name,
                               Params params)
    : weights_(std::move(weights)), name_(std::move(name)), params_(std::move(params)) {
    if (weights_.empty()) throw UsageError("weight sequence must have length >= 1");
    abs_sum_ = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] == 0)
            throw UsageError("weight sequence entries must be nonzero (entry " +
                             std::to_string(i + 1) + ")");
        abs_sum_ += boost::multiprecision::abs(weights_[i]);
    }
    // int64 mirror: every value and the absolute sum must stay well below
    // 2^63 so that doubled flip deltas cannot overflow.
    fits_int64_ = abs_sum_ < (BigInt(1) << 62);
    if (fits_int64_) {
        weights_i64_.reserve(weights_.size());
        for (const auto& w : weights_) weights_i64_.push_back(static_cast<int64_t>(w));
        runs_.reserve(16);
        std::size_t i = 0;
        while (i < weights_.size()) {
            std::size_t j = i + 1;
            while (j < weights_.size() && weights_i64_[j] == weights_i64_[i]) ++j;
            runs_.push_back(WeightRun{i, j - i, weights_i64_[i]});
            i = j;
        }
    } else {
        // Runs are only consumed by the int64 fast paths.
        runs_.push_back(WeightRun{0, weights_.size(), 0});
    }
}

WeightSequence WeightSequence::from_int64(const std::vector<int64_t>& weights,
                                          std::string name, Params params) {
    std::vector<BigInt> w(weights.begin(), weights.end());
    return WeightSequence(std::move(w), std::move(name), std::move(params));
}

const std::vector<int64_t>& WeightSequence::weights_i64() const {
    if (!fits_int64_)
        throw ResourceLimitError("weight sequence exceeds the int64 fast-path range");
    return weights_i64_;
}

BigInt WeightSequence::total_sum() const {
    BigInt s = 0;
    for (const auto& w : weights_) s += w;
    return s;
}

BigInt WeightSequence::total_sum_of_squares() const {
    BigInt s = 0;
    for (const auto& w : weights_) s += w * w;
    return s;
}

BigInt WeightSequence::total_abs_cubes() const {
    BigInt s = 0;
    for (const auto& w : weights_) {
        BigInt v = boost::multiprecision::abs(w);
        s += v * v * v;
    }
    return s;
}

SignVector::SignVector(std::size_t n, bool all_plus) : n_(n) {
    words_.assign((n + 63) / 64, all_plus ? ~0ull : 0ull);
    if (all_plus && (n & 63)) words_.back() &= (1ull << (n & 63)) - 1;
}

SignVector SignVector::from_string(const std::string& s) {
    SignVector xi(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+')
            xi.set_bit(i, true);
        else if (s[i] != '-')
            throw ParseError("sign strings use only '+' and '-' (position " +
                             std::to_string(i + 1) + ")");
    }
    return xi;
}

SignVector SignVector::from_vertex(uint32_t vertex, std::size_t n) {
    if (n > 32) throw UsageError("from_vertex supports n <= 32");
    SignVector xi(n);
    if (!xi.words_.empty()) xi.words_[0] = vertex;
    return xi;
}

SignVector SignVector::random(std::size_t n, uint64_t seed, uint64_t stream) {
    SignVector xi(n);
    for (std::size_t w = 0; w < xi.words_.size(); ++w)
        xi.words_[w] = CounterRng::word(seed, stream, w);
    if (n & 63) xi.words_.back() &= (1ull << (n & 63)) - 1;
    return xi;
}

std::size_t SignVector::popcount() const {
    std::size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::size_t SignVector::popcount_range(std::size_t begin, std::size_t len) const {
    if (len == 0) return 0;
    std::size_t end = begin + len;  // exclusive
    std::size_t w0 = begin >> 6, w1 = (end - 1) >> 6;
    uint64_t first_mask = ~0ull << (begin & 63);
    uint64_t last_mask = (end & 63) ? ((1ull << (end & 63)) - 1) : ~0ull;
    if (w0 == w1) return std::popcount(words_[w0] & first_mask & last_mask);
    std::size_t c = std::popcount(words_[w0] & first_mask);
    for (std::size_t w = w0 + 1; w < w1; ++w) c += std::popcount(words_[w]);
    c += std::popcount(words_[w1] & last_mask);
    return c;
}

std::size_t SignVector::find_in_range(std::size_t begin, std::size_t len, bool plus) const {
    std::size_t end = begin + len;
    for (std::size_t w = begin >> 6; (w << 6) < end; ++w) {
        uint64_t bits = plus ? words_[w] : ~words_[w];
        if (w == (begin >> 6)) bits &= ~0ull << (begin & 63);
        if (bits) {
            std::size_t i = (w << 6) + std::countr_zero(bits);
            return i < end ? i : npos;
        }
    }
    return npos;
}

std::string SignVector::to_string() const {
    std::string s(n_, '-');
    for (std::size_t i = 0; i < n_; ++i)
        if (bit(i)) s[i] = '+';
    return s;
}

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t n)
    : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] >= n)
            throw DimensionError("index " + std::to_string(indices_[k] + 1) +
                                 " out of range [1, " + std::to_string(n) + "]");
        if (k > 0 && indices_[k] == indices_[k - 1])
            throw UsageError("duplicate index " + std::to_string(indices_[k] + 1));
    }
}

IndexSet IndexSet::full(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return IndexSet(std::move(v), n);
}

std::vector<int64_t> IndexSet::to_one_based() const {
    std::vector<int64_t> v;
    v.reserve(indices_.size());
    for (auto i : indices_) v.push_back(static_cast<int64_t>(i) + 1);
    return v;
}

IndexSet IndexSet::from_one_based(const std::vector<int64_t>& ids, std::size_t n) {
    std::vector<std::size_t> v;
    v.reserve(ids.size());
    for (int64_t i : ids) {
        if (i < 1) throw DimensionError("indices are 1-based; got " + std::to_string(i));
        v.push_back(static_cast<std::size_t>(i - 1));
    }
    return IndexSet(std::move(v), n);
}

namespace {
void require_same_length(const WeightSequence& a, const SignVector& xi) {
    if (a.size() != xi.size())
        throw DimensionError("weight sequence has length " + std::to_string(a.size()) +
                             " but sign vector has length " + std::to_string(xi.size()));
}
}  // namespace

BigInt evaluate(const WeightSequence& a, const SignVector& xi) {
    require_same_length(a, xi);
    if (a.fits_int64()) return evaluate_i64(a, xi);
    BigInt x = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        x += xi.bit(i) ? a.weight(i) : -a.weight(i);
    return x;
}

int64_t evaluate_i64(const WeightSequence& a, const SignVector& xi) {
    require_same_length(a, xi);
    // sum over runs: value * (2*popcount - length)
    int64_t x = 0;
    for (const WeightRun& r : a.runs()) {
        int64_t plus = static_cast<int64_t>(xi.popcount_range(r.begin, r.length));
        x += r.value * (2 * plus - static_cast<int64_t>(r.length));
    }
    return x;
}

BigInt evaluate_partial(const WeightSequence& a, const SignVector& xi,
                        const IndexSet& I) {
    require_same_length(a, xi);
    BigInt x = 0;
    for (std::size_t i : I.indices()) {
        if (i >= a.size())
            throw DimensionError("index " + std::to_string(i + 1) + " out of range");
        x += xi.bit(i) ? a.weight(i) : -a.weight(i);
    }
    return x;
}

WeightSequence canonicalize(const WeightSequence& a) {
    std::vector<BigInt> w;
    w.reserve(a.size());
    for (const auto& v : a.weights()) w.push_back(boost::multiprecision::abs(v));
    std::sort(w.begin(), w.end());
    return WeightSequence(std::move(w), a.name());
}

WeightSequence parity_fix(const WeightSequence& a) {
    if ((a.total_sum() & 1) == 0) return a;
    std::vector<BigInt> w = a.weights();
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] == 1) {
            w[k] = 2;
            return WeightSequence(std::move(w), a.name(), a.params());
        }
    }
    throw ParityError("total sum is odd and the sequence has no unit entry to promote");
}

}  // namespace lor
