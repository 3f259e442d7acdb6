#pragma once

#include <cstdint>

namespace surf {

// Parameter set for the signature scheme built on a length-n (U,U+V) code:
// component dimensions k_u (U block) and k_v (V block), signature weight w,
// security target lambda bits, and salt length lambda0 = 3*lambda bits.
struct SurfParams {
    uint32_t n = 0;
    uint32_t k_u = 0;
    uint32_t k_v = 0;
    uint32_t w = 0;
    uint32_t lambda = 0;
    uint32_t lambda0 = 0;

    uint32_t k() const { return k_u + k_v; }
    uint32_t r() const { return n - k(); }       // parity rows of the full code
    uint32_t half() const { return n / 2; }
    uint32_t r_u() const { return n / 2 - k_u; } // parity rows of the U block
    uint32_t r_v() const { return n / 2 - k_v; } // parity rows of the V block

    // Throws std::invalid_argument when the shape constraints fail:
    // n even and positive, k_u,k_v <= n/2, 2*k_u - k_v <= n/2, 0 < w <= n,
    // lambda > 0, lambda0 == 3*lambda.
    void validate() const;
};

// Rate-1/2 parameter choice minimizing the rejection-sampling constant:
//   w = floor(n*(3-sqrt(5))/4),  k_V = w,  k_U = n/2 - w,  lambda0 = 3*lambda.
// Requires n even, n >= 64.
SurfParams select_params(uint32_t n, uint32_t lambda);

} // namespace surf
