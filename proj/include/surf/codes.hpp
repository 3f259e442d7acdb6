#pragma once

#include <cstdint>
#include <vector>

#include "surf/bitvec.hpp"
#include "surf/logreal.hpp"

namespace surf::codes {

// Binary [n,k] linear code held as a full-row-rank parity-check matrix;
// dependent parity rows are dropped at construction so parity always has
// exactly n-k rows.  Immutable after construction.
class LinearCode {
public:
    // The code {x : H x^T = 0}.
    explicit LinearCode(const BitMatrix& parity);

    // The code spanned by the given rows.  The length is taken from the
    // matrix, so an empty span keeps its column count (the zero code).
    static LinearCode from_generator(const BitMatrix& span);
    static LinearCode from_generator(const std::vector<BitVector>& span, uint32_t n);

    uint32_t n() const { return static_cast<uint32_t>(parity_.cols()); }
    uint32_t k() const { return n() - static_cast<uint32_t>(parity_.rows()); }
    const BitMatrix& parity() const { return parity_; }
    const BitMatrix& generator() const { return generator_; }

    bool contains(const BitVector& word) const;

private:
    LinearCode() = default;

    BitMatrix parity_;    // (n-k) x n, full row rank
    BitMatrix generator_; // k x n, basis of the code
};

// C^perp: all words orthogonal to every codeword.
LinearCode dual(const LinearCode& c);

// C intersect C^perp, computed as the kernel of [parity; generator].
LinearCode hull(const LinearCode& c);

// Every codeword restricted to the complement of `drop` (listed coordinates
// removed; duplicates and order ignored).
LinearCode puncture(const LinearCode& c, const std::vector<uint32_t>& drop);

// Set equality (same length, same dimension, mutual containment).
bool same_code(const LinearCode& a, const LinearCode& b);

// The two-layer code {(u, u+v) : u in U, v in V} over halves of length n/2.
struct UUVCode {
    LinearCode u;
    LinearCode v;
    LinearCode assembled;

    uint32_t half() const { return u.n(); }
    uint32_t n() const { return assembled.n(); }
    uint32_t k_u() const { return u.k(); }
    uint32_t k_v() const { return v.k(); }
};

// The block parity matrix [[H_U, 0],[H_V, H_V]] itself.  This exact row
// layout defines the syndrome map used by the layered decoders and the
// signature scheme (LinearCode normalizes its stored parity, so
// UUVCode::assembled.parity() is row-equivalent but not identical to it).
// Throws std::invalid_argument on column-count mismatch.
BitMatrix uuv_block_parity(const BitMatrix& h_u, const BitMatrix& h_v);

// Assembles the two-layer code with parity matrix [[H_U, 0],[H_V, H_V]].
// Throws std::invalid_argument on column-count mismatch or rank-deficient
// input blocks.
UUVCode build_uuv(const BitMatrix& h_u, const BitMatrix& h_v);

// Minimum nonzero codeword weight by exhaustive Gray-walk enumeration over
// all 2^k - 1 combinations.  Requires 1 <= k <= 24.
uint32_t min_distance_bruteforce(const LinearCode& c);

// Expected number of weight-w codewords when the parity blocks are drawn
// uniformly at random: a_uuv for the two-layer construction, a_uu and a_0v
// for its (u,u)- and (0,v)-shaped subsets, and a_rand for an unstructured
// code with the same number n - k_u - k_v of parity rows.  All in log domain.
struct WeightEnumerator {
    LogReal a_uuv;
    LogReal a_uu;
    LogReal a_0v;
    LogReal a_rand;
};
WeightEnumerator expected_weight_enumerator(uint32_t n, uint32_t k_u, uint32_t k_v, uint32_t w);

} // namespace surf::codes
