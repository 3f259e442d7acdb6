#pragma once

#include <cstdint>
#include <vector>

#include "surf/logreal.hpp"
#include "surf/params.hpp"

namespace surf::estimator {

// Binary entropy h(p) = -p log2 p - (1-p) log2 (1-p), and its inverse on
// [0,1/2] computed by bisection (100 iterations, bracket [0,1/2]).
long double h2(long double p);
long double h2_inv(long double y);

// log2 of the binomial coefficient C(n,k); -infinity outside 0 <= k <= n.
// Real-valued arguments are accepted (lgamma-based).
long double log2_binomial(long double n, long double k);
LogReal binomial_lr(uint64_t n, uint64_t k);

// Largest weight a random [n,k] code typically needs for syndrome decoding:
// round(n * h2_inv(1 - k/n)).
uint32_t gv_bound(uint32_t n, uint32_t k);

// Law of the V-layer weight when an error is drawn uniformly on the weight-w
// sphere of F_2^n (n even): index i holds
//   2^i * C(n/2,(w-i)/2) * C(n/2-(w-i)/2, i) / C(n,w)   for i == w (mod 2),
// and 0 off parity.  Vector has w+1 entries.
std::vector<long double> uniform_w1_law(uint32_t n, uint32_t w);

// Weight law of a generic information-set decode with r unconstrained parity
// bits: Binomial(r, 1/2).  Vector has r+1 entries.
std::vector<long double> prange_weight_law(uint32_t r);

// Channel-capacity comparison at crossover probability p in [0, 1/2]:
// the plain binary symmetric channel 1-h(p) versus the two-layer decoding
// model 1 - 2h(p) + h(2p(1-p)).
struct CapacityPoint {
    long double bsc;
    long double uuv;
};
CapacityPoint capacity_curves(long double p);

// Syndrome-indistinguishability bound: the expected statistical distance of
// the weight-w syndrome law from uniform is at most sqrt(eps)/2 with
//   eps = 2^(n-k)/C(n,w)
//       + [w even] 2^(n/2-k_U) C(n/2,w/2)/C(n,w)
//       + 2^(n/2-k_V) * sum_{j == w (mod 2)} p1u(j)^2 / C(n/2,j),
// where p1u is the uniform V-layer weight law above.  Requires w <= n/2.
LogReal epsilon_bound(const SurfParams& params);

// Birthday-decoding cost of one iteration with list parameter p and window l:
// max( sqrt(C(k+l,p)), C(k+l,p) / 2^l ), polynomial factors dropped.
LogReal dumer_c1(uint32_t k, uint32_t l, uint32_t p);

// Decoding-cost regimes: one syndrome with a unique solution; one syndrome
// with M = max(1, C(n,w)/2^(n-k)) solutions; q syndromes with M solutions
// each (decoding one out of many).
enum class Regime { single, multi_solution, doom };

struct WorkfactorReport {
    Regime regime = Regime::single;
    long double wf_log2 = 0.0L; // log2 of the minimized cost
    uint32_t p = 0;             // argmin list weight
    uint32_t l = 0;             // argmin window size
    long double q_log2 = 0.0L;  // log2 of the instance count used (doom only)
    LogReal m;                  // solution count max(1, C(n,w)/2^(n-k))
};

// Grid for the (p,l) scan.  A default-constructed grid means
// p in [0, min(w,40)], l in [0, min(n-k, 24*log2(n))], both step 1.
struct DoomGrid {
    uint32_t p_min = 0;
    uint32_t p_max = 0;
    uint32_t l_min = 0;
    uint32_t l_max = 0;
    uint32_t p_step = 1;
    uint32_t l_step = 1;
    bool explicit_bounds = false;
};

// Cheapest workfactor over the grid for the requested regime.
//   single:         min C_1(p,l) / P(p,l)
//   multi_solution: min C_1(p,l) / (1-(1-P)^M)
//   doom:           min C_q(p,l) / (1-(1-P)^(qM)),  q <= C(k+l,p)
// with P(p,l) = C(n-k-l, w-p) C(k+l,p) / C(n,w).  For Regime::doom pass the
// fixed log2 instance count in q_log2, or a negative value to optimize q.
WorkfactorReport doom_workfactor(uint32_t n, uint32_t k, uint32_t w, Regime regime,
                                 long double q_log2 = -1.0L, const DoomGrid& grid = DoomGrid{});

// Asymptotic decoding exponents at rate 1/2 for the given relative weight,
// obtained by evaluating the concrete formulas at a large proxy length and
// dividing by n.
struct ExponentRow {
    long double w_over_n = 0.0L;
    long double m_exp = 0.0L;     // (1/n) log2 M
    long double q_exp = 0.0L;     // (1/n) log2 q at the doom optimum
    long double doom_exp = 0.0L;  // (1/n) log2 of the doom workfactor
    long double dumer_exp = 0.0L; // (1/n) log2 of the single-instance workfactor (M solutions)
};
ExponentRow isd_exponents(long double w_over_n, uint32_t proxy_n = 100000);

// Rejection-sampling constant: sup over admissible i (i == w mod 2) of
// p1u(i) / p(i) with p = Binomial(n/2-k_V, 1/2).  Throws InfeasibleAlignment
// when some i carries p1u mass but no p mass.
long double m_rs(const SurfParams& params);

// Expected number of weight tests the U-layer restart loop performs per
// accepted signature: sum_i p1u(i) * 2^(w-i) / C(w-i, (w-i)/2).
long double expected_u_weight_tests(const SurfParams& params);

// Expected Gaussian-elimination count per signature under the implemented
// decoder: every V-stage attempt and every U-stage weight test pays one
// elimination per sampled column set, and column sets are resampled until
// invertible (success probability beta = prod_{i>=1} (1 - 2^-i) ~ 0.2888);
// the accepted V-decode additionally pays one erasure reduction.
struct EliminationEstimate {
    long double v_decodes = 0.0L;       // expected V-stage attempts ( = m_rs )
    long double elim_per_decode = 0.0L; // eliminations per attempt ( = 1/beta )
    long double u_tests = 0.0L;         // expected U-stage weight tests
    long double total = 0.0L;           // (v_decodes + u_tests)/beta + 1
};
EliminationEstimate expected_eliminations(const SurfParams& params);

} // namespace surf::estimator
