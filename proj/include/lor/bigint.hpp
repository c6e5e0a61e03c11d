#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

#include "lor/errors.hpp"

namespace lor {

// Exact integer type used wherever a sum can exceed the machine word
// (weights, subset sums, 2^n counts, sums of squares).
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline bool fits_int64(const BigInt& v) {
    return v >= std::numeric_limits<int64_t>::min() &&
           v <= std::numeric_limits<int64_t>::max();
}

inline int64_t to_int64(const BigInt& v) {
    if (!fits_int64(v)) throw ResourceLimitError("value exceeds 64-bit range: " + v.str());
    return static_cast<int64_t>(v);
}

inline BigInt ipow(BigInt base, unsigned exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

// Largest m with m^q <= v (v >= 0, q >= 1).
inline BigInt iroot_floor(const BigInt& v, unsigned q) {
    if (v < 0) throw UsageError("iroot_floor of negative value");
    if (v == 0) return 0;
    if (q == 1) return v;
    // Binary search; the bit-length bound gives a safe bracket.
    BigInt lo = 1;
    BigInt hi = BigInt(1) << static_cast<unsigned>(boost::multiprecision::msb(v) / q + 2);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (ipow(mid, q) <= v)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// Smallest m with m^q >= v.
inline BigInt iroot_ceil(const BigInt& v, unsigned q) {
    BigInt r = iroot_floor(v, q);
    if (ipow(r, q) < v) ++r;
    return r;
}

// ceil(n^(p/q)) for n >= 1, computed exactly: the smallest m with m^q >= n^p.
inline BigInt pow_ratio_ceil(const BigInt& n, unsigned p, unsigned q) {
    if (n < 1) throw UsageError("pow_ratio_ceil requires n >= 1");
    return iroot_ceil(ipow(n, p), q);
}

inline BigInt isqrt_ceil(const BigInt& v) { return iroot_ceil(v, 2); }

// ceil(a/b) for positive b.
inline int64_t ceil_div_i64(int64_t a, int64_t b) {
    return a / b + ((a % b != 0 && (a > 0) == (b > 0)) ? 1 : 0);
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

}  // namespace lor
