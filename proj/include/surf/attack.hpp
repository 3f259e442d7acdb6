#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "surf/bitvec.hpp"
#include "surf/codes.hpp"
#include "surf/rng.hpp"

namespace surf::attack {

// === Hull distinguisher =====================================================

enum class CodeKind { Public, Random };

// Verdict of the hull-dimension test.
struct DistinguisherVerdict {
    size_t hull_dim = 0;          // dim(c intersect c-dual)
    size_t expected_pub_dim = 0;  // k_u - k_v, forced by the two-layer construction
    CodeKind predicted = CodeKind::Random;  // Public iff hull_dim == expected_pub_dim
};

// Classifies c by comparing its hull dimension with the k_u - k_v value a
// permuted two-layer code forces; a random code's hull dimension stays O(1)
// (almost always <= 3) regardless of length.  One kernel computation, so
// polynomial time.  Requires k_u >= k_v (throws std::invalid_argument).
// When k_u == k_v the expected dimension is 0 and the test degenerates:
// trivial random hulls collide with it.
DistinguisherVerdict hull_distinguish(const codes::LinearCode& c, uint32_t k_u, uint32_t k_v);

// === Matched-pair recovery ==================================================

struct MatchedPairs {
    // Disjoint position pairs whose hull-generator columns are bit-identical
    // and nonzero, sorted by first position.
    std::vector<std::pair<size_t, size_t>> pairs;
    // Hull-support positions left unmatched: their column either has no twin
    // or has more than one (ambiguous group), surfaced for the caller.
    std::vector<size_t> residual;
};

// Every hull word of a permuted two-layer code carries each top-layer
// coordinate at two positions, so the hull generator matrix shows pairs of
// identical columns; grouping equal nonzero columns recovers that part of the
// hidden permutation.  Groups of exactly two become pairs; singletons and
// larger groups land in residual.  Throws EmptyHull on a trivial hull.
MatchedPairs recover_matched_pairs(const codes::LinearCode& c);

// === Layer-confined codeword search =========================================

// Membership oracle deciding whether a full-length codeword lies in the
// hunted layer.  Tests plant a key and check exactly; a blind attacker would
// substitute a weight-threshold heuristic.
using MembershipCheck = std::function<bool(const BitVector&)>;

// One window trial: drop n-k-ell uniformly random positions, enumerate every
// weight-p codeword of the punctured [k+ell, ~k] code exhaustively (a parity
// column-subset scan over all C(k+ell, p) supports), lift each back to the
// full code by solving for its message word (small lift cosets are enumerated
// completely), and keep the lifts the oracle accepts.  Runs `iterations`
// windows; returns a linearly independent list, stopping early once
// stop_after vectors are collected.  Requires p >= 1 and k + ell <= n.
std::vector<BitVector> compute_v(const codes::LinearCode& c_pub, uint32_t p, uint32_t ell,
                                 uint64_t iterations, Rng& rng, const MembershipCheck& check,
                                 size_t stop_after = SIZE_MAX);

// The identical procedure aimed at the replicated top layer: only the oracle
// supplied and the iteration count suggested by the success analysis differ.
std::vector<BitVector> compute_u(const codes::LinearCode& c_pub, uint32_t p, uint32_t ell,
                                 uint64_t iterations, Rng& rng, const MembershipCheck& check,
                                 size_t stop_after = SIZE_MAX);

// === Success-probability lower bounds =======================================

// log2 of f(x) = max(x(1-x/2), 1-1/x): a lower bound on the probability that
// a random code meets a fixed set in which it expects x elements.  Takes and
// returns log2 values (x = 2^lg_x); x == 0 maps to -infinity.
long double lg_hit_probability_bound(long double lg_x);

// Lower bound on the probability that one window trial reaches the
// half-support layer (dimension k_v living on one half of the support):
//   sum_w C(n/2,w) C(n/2, n-k-ell-w) / C(n, n-k-ell)
//         * f( C(n/2-w, p) * 2^(k_v + w - n/2) )
// where w counts hidden-support positions the window dropped.  The lg variant
// returns log2 of the bound and stays exact at sizes where the probability
// underflows; the plain variant maps it into [0,1].
long double lg_psucc_v_lower_bound(uint32_t n, uint32_t k, uint32_t k_v, uint32_t p, uint32_t ell);
long double psucc_v_lower_bound(uint32_t n, uint32_t k, uint32_t k_v, uint32_t p, uint32_t ell);

// Same for the replicated layer (dimension k_u, each coordinate repeated at
// two positions).  w counts coordinate pairs wholly inside the window; a
// candidate support splits its weight p into p-2i on unpaired window
// positions and i pairs, and the best split is kept:
//   sum_w C(n/2,w) C(n/2-w, k+ell-2w) 2^(k+ell-2w) / C(n, k+ell)
//         * max_{0<=i<=p/2} f( C(k+ell-2w, p-2i) C(w, i) / 2^max(0, k+ell-w-k_u) )
long double lg_psucc_u_lower_bound(uint32_t n, uint32_t k, uint32_t k_u, uint32_t p, uint32_t ell);
long double psucc_u_lower_bound(uint32_t n, uint32_t k, uint32_t k_u, uint32_t p, uint32_t ell);

// === Structural key-recovery cost ===========================================

// One minimized attack cost: log2 of (per-window codeword enumeration cost) /
// (per-window success bound), with the grid point attaining it.
struct LayerCost {
    long double log2_cost = std::numeric_limits<long double>::infinity();
    uint32_t p = 0;
    uint32_t ell = 0;
};

// Scan bounds for the (p, ell) minimization.  ell_max == 0 selects
// min(n - dim, round(24 * log2(n))) — the same cap the syndrome-decoding
// workfactor scan uses — where dim is the dimension of the code being
// attacked (k for the public code, n-k for its dual).
struct StructuralGrid {
    uint32_t p_min = 1;
    uint32_t p_max = 40;
    uint32_t ell_min = 1;
    uint32_t ell_max = 0;
};

// Cheapest structural costs for an [n, k] public code with hidden layer
// dimensions (k_u, k_v).  c_v and c_u attack the public code itself.  The
// dual code is two-layered again with the roles exchanged — its replicated
// layer is the dual of the bottom layer (dimension n/2 - k_v) and its
// half-support layer is the dual of the top layer (dimension n/2 - k_u) — so
// c_v_dual and c_u_dual price recovering those through the dual code.  With
// k == n/2 and k_u + k_v == k this forces c_u == c_v_dual and c_v == c_u_dual.
struct StructuralCostReport {
    LayerCost c_v;       // half-support layer of the public code
    LayerCost c_u;       // replicated layer of the public code
    LayerCost c_u_dual;  // half-support layer of the dual code
    LayerCost c_v_dual;  // replicated layer of the dual code
};

// Minimizes enumeration-cost / success-bound over the grid for all four
// targets.  Requires n even, k < n, k_u <= n/2, k_v <= n/2.
StructuralCostReport structural_attack_cost(uint32_t n, uint32_t k, uint32_t k_u, uint32_t k_v,
                                            const StructuralGrid& grid = StructuralGrid{});

}  // namespace surf::attack
