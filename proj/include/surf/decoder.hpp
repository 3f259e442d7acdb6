#pragma once

#include <cstdint>
#include <vector>

#include "surf/bitvec.hpp"
#include "surf/errors.hpp"
#include "surf/params.hpp"
#include "surf/rng.hpp"

namespace surf::decoder {

// Counters accumulated across one decode call (callers may reuse the struct
// to aggregate over many calls).
struct DecodeStats {
    uint64_t v_decodes = 0;         // syndrome decodes attempted on the V layer
    uint64_t u_decodes = 0;         // erasure decodes attempted on the U layer
    uint64_t subset_draws = 0;      // column-set draws across all Prange solves
    uint64_t rejected_weight = 0;   // V-layer outputs heavier than the target
    uint64_t rejected_parity = 0;   // V-layer outputs with infeasible parity
    uint64_t rejected_coin = 0;     // rejection-sampling coin came up tails
    uint64_t insoluble_retries = 0; // U layer had no solution; V layer redrawn
};

// Acceptance probabilities x[i] for a V-layer output of weight i, scaled so
// that the accepted weight matches the first-layer weight law of a uniform
// weight-w word.  sum_i x[i] * P(prange weight = i) == 1 / m_rs.
struct RejectionTable {
    uint32_t n = 0;
    uint32_t w = 0;
    long double m_rs = 1.0L;
    std::vector<long double> x; // index i in [0, w]
};

RejectionTable build_rejection_table(const SurfParams& params);

// Probability that a uniformly random rows x cols binary matrix, used as the
// erased-column block of a consistent system, leaves the residual equations
// solvable when the residual target weight is zero: E[2^(rank - rows)].
long double erased_block_solvable_rate(uint32_t rows, uint32_t cols);

// Solves h e^T = s^T by supporting e on a uniformly random set of rows(h)
// columns, redrawing the whole set until it is invertible.  For uniformly
// random s the weight of the result follows Binomial(rows(h), 1/2).
// Throws RestartBudgetExceeded if no invertible set is found (h not of full
// row rank, in practice).
BitVector prange_decode(const BitMatrix& h, const BitVector& s, Rng& rng,
                        DecodeStats* stats = nullptr);

// As prange_decode, but additionally redraws the column set until the
// solution has Hamming weight exactly t.  Budget: 200 * rows(h) draws.
BitVector prange_decode_fixed(const BitMatrix& h, const BitVector& s, uint32_t t, Rng& rng,
                              DecodeStats* stats = nullptr);

// Solves h e^T = s^T treating the listed positions as erasures (free
// positions whose weight is not constrained).  The erased columns are
// eliminated first; each must contribute a pivot, otherwise
// DependentErasureColumns is thrown.  The remaining system is solved with
// prange_decode and the erased coordinates are recovered by back
// substitution.
BitVector prange_decode_erasure(const BitMatrix& h, const BitVector& s,
                                const std::vector<size_t>& erased, Rng& rng,
                                DecodeStats* stats = nullptr);

// As prange_decode_erasure, but the part of the solution outside the erased
// positions has Hamming weight exactly t.
BitVector prange_decode_erasure_fixed(const BitMatrix& h, const BitVector& s,
                                      const std::vector<size_t>& erased, uint32_t t, Rng& rng,
                                      DecodeStats* stats = nullptr);

// First-generation two-layer decoder: fixed-weight V layer, then a
// fixed-weight U layer with erasures at the V support.  Output weight is
// always rows(h_u) + adjusted V weight; the weight profile of the output
// leaks the layer structure (kept as a regression subject for the
// distribution tests).  Requires 2*k_u - k_v <= n/2.
BitVector uuv_decode_v1(const BitMatrix& h_u, const BitMatrix& h_v, const BitVector& syndrome,
                        Rng& rng, DecodeStats* stats = nullptr);

// Second-generation two-layer decoder with rejection sampling: plain Prange
// on the V layer, acceptance coin from the rejection table, then a U-layer
// erasure decode tuned so the final weight is exactly table.w and the
// V-layer weight follows the law of a uniform weight-w word.  Throws
// IterationBudgetExceeded after 64 * ceil(m_rs) V-layer draws.
BitVector uuv_decode_v2(const BitMatrix& h_u, const BitMatrix& h_v, const BitVector& syndrome,
                        const RejectionTable& table, Rng& rng, DecodeStats* stats = nullptr);

} // namespace surf::decoder
