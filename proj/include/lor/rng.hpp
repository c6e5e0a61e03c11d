#pragma once

#include <cstdint>

namespace lor {

// Counter-based pseudo-random generator built from the splitmix64
// finalizer. Every output word is a pure function of (seed, stream,
// counter), so parallel consumers can draw their own words in any order
// and still reproduce the single-threaded run bit for bit.
//
// stream identifies an independent draw (a Monte Carlo sample index, a
// sweep row); counter indexes the 64-bit words inside that draw.
struct CounterRng {
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static uint64_t mix(uint64_t x) {
        x += kGamma;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    static uint64_t word(uint64_t seed, uint64_t stream, uint64_t counter) {
        uint64_t h = mix(seed ^ 0x6A09E667F3BCC908ull);
        h = mix(h ^ stream);
        h = mix(h ^ counter);
        return h;
    }

    // Derived seed for a sub-experiment (e.g. one row of a sweep).
    static uint64_t derive(uint64_t seed, uint64_t tag) {
        return mix(mix(seed ^ 0xBB67AE8584CAA73Bull) ^ tag);
    }

    // Uniform value in [0, bound) by rejection-free multiply-shift; bias
    // is < 2^-64 * bound, negligible for test-harness use.
    static uint64_t below(uint64_t seed, uint64_t stream, uint64_t counter, uint64_t bound) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(word(seed, stream, counter)) * bound) >> 64);
    }
};

}  // namespace lor
