#pragma once

#include <cstdint>
#include <random>

namespace surf {

// All randomness flows through an injected generator handle so tests are
// reproducible.  mt19937_64 output is identical across platforms, and the
// helpers below avoid std::uniform_*_distribution on purpose: those are
// implementation-defined, these are not.
using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed) { return Rng(seed); }

// derive an independent stream for trial #idx of a seeded experiment
inline Rng make_stream(uint64_t seed, uint64_t idx) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(idx), static_cast<uint32_t>(idx >> 32), 0x9e3779b9u};
    return Rng(seq);
}

// uniform integer in [0, n), unbiased via rejection
inline uint64_t rng_below(Rng& g, uint64_t n) {
    if (n == 0) return 0;
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = g();
    } while (x >= lim);
    return x % n;
}

inline int rng_bit(Rng& g) { return static_cast<int>(g() >> 63); }

// uniform double in [0,1) with 53 random mantissa bits
inline double rng_real53(Rng& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace surf
