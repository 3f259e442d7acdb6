#include "surf/attack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "surf/errors.hpp"
#include "surf/estimator.hpp"

namespace surf::attack {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();
constexpr long double kInvLn2 = 1.4426950408889634073599246810018921L;

// log2(i!) lookup so every binomial in the bounds is three table reads.
struct Log2Fact {
    std::vector<long double> f;

    explicit Log2Fact(size_t n) : f(n + 1, 0.0L) {
        for (size_t i = 2; i <= n; i++) f[i] = f[i - 1] + log2l(static_cast<long double>(i));
    }

    long double lgC(int64_t a, int64_t b) const {
        if (b < 0 || a < 0 || b > a) return -kInf;
        return f[static_cast<size_t>(a)] - f[static_cast<size_t>(b)] -
               f[static_cast<size_t>(a - b)];
    }
};

// best + log2(sum over terms of 2^(term - best)); terms more than 64 bits
// below the peak cannot move a long double accumulator and are skipped.
long double lg_sum(const std::vector<long double>& terms, long double best) {
    if (terms.empty() || best == -kInf) return -kInf;
    long double acc = 0.0L;
    for (long double t : terms) {
        if (t >= best - 64.0L) acc += exp2l(t - best);
    }
    return best + log2l(acc);
}

// Both bound loops prune a window-weight term once its probability factor
// alone sits 64 bits under the running peak: the hit-probability factor is
// <= 1, so the full term can neither become the new peak nor survive the
// lg_sum cutoff.

long double lg_psucc_v_impl(const Log2Fact& bb, std::vector<long double>& terms, uint32_t n,
                            uint32_t k, uint32_t k_v, uint32_t p, uint32_t ell) {
    const int64_t half = n / 2;
    const int64_t sz = static_cast<int64_t>(n) - static_cast<int64_t>(k) - ell;
    if (sz < 0) return -kInf;
    const long double lg_denom = bb.lgC(n, sz);
    terms.clear();
    long double best = -kInf;
    for (int64_t w = std::max<int64_t>(0, sz - half); w <= std::min<int64_t>(half, sz); w++) {
        const long double t = bb.lgC(half, w) + bb.lgC(half, sz - w) - lg_denom;
        if (t <= best - 64.0L) continue;
        const long double lg_expected =
            bb.lgC(half - w, p) + (static_cast<long double>(k_v) + w - half);
        const long double term = t + lg_hit_probability_bound(lg_expected);
        if (term == -kInf) continue;
        terms.push_back(term);
        if (term > best) best = term;
    }
    return lg_sum(terms, best);
}

long double lg_psucc_u_impl(const Log2Fact& bb, std::vector<long double>& terms, uint32_t n,
                            uint32_t k, uint32_t k_u, uint32_t p, uint32_t ell) {
    const int64_t half = n / 2;
    const int64_t sz = static_cast<int64_t>(k) + ell;
    if (sz > static_cast<int64_t>(n)) return -kInf;
    const long double lg_denom = bb.lgC(n, sz);
    terms.clear();
    long double best = -kInf;
    for (int64_t w = std::max<int64_t>(0, sz - half); 2 * w <= sz; w++) {
        const long double t = bb.lgC(half, w) + bb.lgC(half - w, sz - 2 * w) +
                              static_cast<long double>(sz - 2 * w) - lg_denom;
        if (t == -kInf || t <= best - 64.0L) continue;
        const long double lg_red =
            std::max<long double>(0.0L, static_cast<long double>(sz - w) - k_u);
        // The hit probability is not monotone in the expected count, so the
        // best weight split must maximize f itself, not the count.
        long double best_f = -kInf;
        for (int64_t i = 0; 2 * i <= static_cast<int64_t>(p); i++) {
            const long double lg_expected =
                bb.lgC(sz - 2 * w, static_cast<int64_t>(p) - 2 * i) + bb.lgC(w, i) - lg_red;
            const long double lf = lg_hit_probability_bound(lg_expected);
            if (lf > best_f) best_f = lf;
        }
        const long double term = t + best_f;
        if (term == -kInf) continue;
        terms.push_back(term);
        if (term > best) best = term;
    }
    return lg_sum(terms, best);
}

void check_bound_arguments(uint32_t n, uint32_t p) {
    if (n == 0 || n % 2 != 0) {
        throw std::invalid_argument("success bound: n must be positive and even");
    }
    if (p == 0) throw std::invalid_argument("success bound: p must be >= 1");
}

long double clamp_probability(long double lg) {
    if (lg == -kInf) return 0.0L;
    return std::min<long double>(1.0L, exp2l(lg));
}

// Row-echelon basis of the vectors accepted so far; add() reports whether the
// candidate extended the span.
struct SpanTracker {
    std::vector<BitVector> rows;
    std::vector<size_t> leads;

    bool add(const BitVector& v) {
        BitVector r = v;
        for (size_t i = 0; i < rows.size(); i++) {
            if (r.get(leads[i])) r.xor_assign(rows[i]);
        }
        if (r.is_zero()) return false;
        leads.push_back(r.support().front());
        rows.push_back(std::move(r));
        return true;
    }
};

std::vector<BitVector> window_layer_search(const codes::LinearCode& c_pub, uint32_t p,
                                           uint32_t ell, uint64_t iterations, Rng& rng,
                                           const MembershipCheck& check, size_t stop_after) {
    if (p == 0) throw std::invalid_argument("layer search: p must be >= 1");
    const uint32_t n = c_pub.n();
    const uint32_t k = c_pub.k();
    if (k + ell > n) throw std::invalid_argument("layer search: k + ell exceeds n");
    const uint32_t kept_count = k + ell;
    const uint32_t drop_count = n - kept_count;

    const BitMatrix gt = c_pub.generator().transposed();  // n x k: message -> codeword

    std::vector<BitVector> found;
    SpanTracker span;
    std::vector<uint32_t> shuffle(n);

    for (uint64_t it = 0; it < iterations && found.size() < stop_after; it++) {
        // Drop a uniform (n - k - ell)-subset: partial Fisher-Yates prefix.
        for (uint32_t i = 0; i < n; i++) shuffle[i] = i;
        for (uint32_t i = 0; i < drop_count; i++) {
            const uint32_t j = i + static_cast<uint32_t>(rng_below(rng, n - i));
            std::swap(shuffle[i], shuffle[j]);
        }
        const std::vector<uint32_t> dropped(shuffle.begin(), shuffle.begin() + drop_count);
        std::vector<bool> is_dropped(n, false);
        for (uint32_t d : dropped) is_dropped[d] = true;
        std::vector<size_t> kept;
        kept.reserve(kept_count);
        for (uint32_t i = 0; i < n; i++) {
            if (!is_dropped[i]) kept.push_back(i);
        }

        // puncture() keeps the surviving columns in ascending order, matching
        // `kept`, so window coordinate j is full-code coordinate kept[j].
        const codes::LinearCode punc = codes::puncture(c_pub, dropped);

        // Lift setup: a window word x returns to the full code through any
        // message m with G_kept^T m = x; enumerate the whole solution coset.
        const BitMatrix a = c_pub.generator().select_columns(kept).transposed();
        const RowReduceResult rr = row_reduce(a);
        if (k - rr.rank > 8) continue;  // oversized lift coset; resample the window
        const BitMatrix kern = kernel_basis(a);
        std::vector<BitVector> kernel_words;  // codewords vanishing on the window
        kernel_words.reserve(kern.rows());
        for (size_t t = 0; t < kern.rows(); t++) {
            kernel_words.push_back(mat_vec_mul_transposed(gt, kern.row(t)));
        }

        const BitMatrix& pc = punc.parity();
        std::vector<BitVector> cols(kept_count);
        for (uint32_t j = 0; j < kept_count; j++) cols[j] = pc.column(j);

        // Lift one weight-p window codeword and oracle-check its whole coset.
        std::vector<uint32_t> supp(p);
        auto try_lift = [&]() -> bool {  // false stops the search (quota met)
            BitVector x(kept_count);
            for (uint32_t j : supp) x.set(j, true);
            const BitVector tx = mat_vec_mul_transposed(rr.transform, x);
            for (size_t r = rr.rank; r < kept_count; r++) {
                if (tx.get(r)) return true;  // no preimage; cannot happen for window codewords
            }
            BitVector m(k);
            for (size_t r = 0; r < rr.rank; r++) {
                if (tx.get(r)) m.set(rr.pivots[r], true);
            }
            const BitVector base = mat_vec_mul_transposed(gt, m);
            const size_t combos = size_t{1} << kernel_words.size();
            for (size_t mask = 0; mask < combos; mask++) {
                BitVector cand = base;
                for (size_t t = 0; t < kernel_words.size(); t++) {
                    if (mask & (size_t{1} << t)) cand.xor_assign(kernel_words[t]);
                }
                if (!check(cand)) continue;
                if (!span.add(cand)) continue;
                found.push_back(cand);
                if (found.size() >= stop_after) return false;
            }
            return true;
        };

        // Exhaustive scan of all C(k + ell, p) supports; a support is a window
        // codeword exactly when its parity columns cancel, tracked by prefix.
        auto walk = [&](auto&& self, uint32_t depth, uint32_t start,
                        const BitVector& acc) -> bool {
            if (depth == p) return acc.is_zero() ? try_lift() : true;
            for (uint32_t j = start; j + (p - depth) <= kept_count; j++) {
                supp[depth] = j;
                BitVector nxt = acc;
                nxt.xor_assign(cols[j]);
                if (!self(self, depth + 1, j + 1, nxt)) return false;
            }
            return true;
        };
        if (!walk(walk, 0, 0, BitVector(pc.rows()))) break;
    }
    return found;
}

}  // namespace

DistinguisherVerdict hull_distinguish(const codes::LinearCode& c, uint32_t k_u, uint32_t k_v) {
    if (k_u < k_v) throw std::invalid_argument("hull_distinguish: need k_u >= k_v");
    DistinguisherVerdict v;
    v.hull_dim = codes::hull(c).k();
    v.expected_pub_dim = k_u - k_v;
    v.predicted = v.hull_dim == v.expected_pub_dim ? CodeKind::Public : CodeKind::Random;
    return v;
}

MatchedPairs recover_matched_pairs(const codes::LinearCode& c) {
    const codes::LinearCode h = codes::hull(c);
    if (h.k() == 0) throw EmptyHull("recover_matched_pairs: the hull is trivial");
    const BitMatrix& g = h.generator();

    std::map<std::vector<uint64_t>, std::vector<size_t>> groups;
    for (size_t j = 0; j < g.cols(); j++) {
        const BitVector col = g.column(j);
        if (col.is_zero()) continue;  // position outside the hull support
        groups[col.words()].push_back(j);
    }

    MatchedPairs out;
    for (const auto& [bits, positions] : groups) {
        if (positions.size() == 2) {
            out.pairs.emplace_back(positions[0], positions[1]);
        } else {
            out.residual.insert(out.residual.end(), positions.begin(), positions.end());
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    std::sort(out.residual.begin(), out.residual.end());
    return out;
}

std::vector<BitVector> compute_v(const codes::LinearCode& c_pub, uint32_t p, uint32_t ell,
                                 uint64_t iterations, Rng& rng, const MembershipCheck& check,
                                 size_t stop_after) {
    return window_layer_search(c_pub, p, ell, iterations, rng, check, stop_after);
}

std::vector<BitVector> compute_u(const codes::LinearCode& c_pub, uint32_t p, uint32_t ell,
                                 uint64_t iterations, Rng& rng, const MembershipCheck& check,
                                 size_t stop_after) {
    return window_layer_search(c_pub, p, ell, iterations, rng, check, stop_after);
}

long double lg_hit_probability_bound(long double lg_x) {
    if (lg_x == -kInf) return -kInf;
    if (lg_x > 64.0L) {
        // f(x) = 1 - 1/x; log2 of it is -(1/x)/ln 2 up to O(1/x^2)
        return -exp2l(-lg_x) * kInvLn2;
    }
    if (lg_x < -64.0L) {
        // f(x) = x (1 - x/2); the second factor is 1 to within 2^-65
        return lg_x;
    }
    const long double x = exp2l(lg_x);
    const long double v = std::max(x * (1.0L - x / 2.0L), 1.0L - 1.0L / x);
    if (v <= 0.0L) return -kInf;  // unreachable for x > 0; guards rounding
    return log2l(v);
}

long double lg_psucc_v_lower_bound(uint32_t n, uint32_t k, uint32_t k_v, uint32_t p,
                                   uint32_t ell) {
    check_bound_arguments(n, p);
    const Log2Fact bb(n);
    std::vector<long double> terms;
    return lg_psucc_v_impl(bb, terms, n, k, k_v, p, ell);
}

long double psucc_v_lower_bound(uint32_t n, uint32_t k, uint32_t k_v, uint32_t p, uint32_t ell) {
    return clamp_probability(lg_psucc_v_lower_bound(n, k, k_v, p, ell));
}

long double lg_psucc_u_lower_bound(uint32_t n, uint32_t k, uint32_t k_u, uint32_t p,
                                   uint32_t ell) {
    check_bound_arguments(n, p);
    const Log2Fact bb(n);
    std::vector<long double> terms;
    return lg_psucc_u_impl(bb, terms, n, k, k_u, p, ell);
}

long double psucc_u_lower_bound(uint32_t n, uint32_t k, uint32_t k_u, uint32_t p, uint32_t ell) {
    return clamp_probability(lg_psucc_u_lower_bound(n, k, k_u, p, ell));
}

StructuralCostReport structural_attack_cost(uint32_t n, uint32_t k, uint32_t k_u, uint32_t k_v,
                                            const StructuralGrid& grid) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("structural_attack_cost: n must be positive and even");
    }
    if (k == 0 || k >= n) throw std::invalid_argument("structural_attack_cost: need 0 < k < n");
    const uint32_t half = n / 2;
    if (k_u > half || k_v > half) {
        throw std::invalid_argument("structural_attack_cost: layer dimension exceeds n/2");
    }

    const Log2Fact bb(n);
    std::vector<long double> terms;

    // Cheapest enumeration-cost / success-bound point for one layer hunt on a
    // dimension-`dim` code; `replicated` selects which success bound applies.
    const auto scan = [&](uint32_t dim, uint32_t layer, bool replicated) {
        LayerCost out;
        uint32_t cap = grid.ell_max != 0
                           ? grid.ell_max
                           : static_cast<uint32_t>(llroundl(24.0L * log2l(static_cast<long double>(n))));
        cap = std::min(cap, n - dim);
        for (uint32_t p = grid.p_min; p <= grid.p_max; p++) {
            for (uint32_t ell = grid.ell_min; ell <= cap; ell++) {
                const LogReal c1 = estimator::dumer_c1(dim, ell, p);
                if (c1.is_zero()) continue;
                const long double lg_ps = replicated
                                              ? lg_psucc_u_impl(bb, terms, n, dim, layer, p, ell)
                                              : lg_psucc_v_impl(bb, terms, n, dim, layer, p, ell);
                if (lg_ps == -kInf) continue;
                const long double cost = c1.log2_value() - lg_ps;
                if (cost < out.log2_cost) out = LayerCost{cost, p, ell};
            }
        }
        return out;
    };

    StructuralCostReport rep;
    rep.c_v = scan(k, k_v, false);
    rep.c_u = scan(k, k_u, true);
    if (2 * k == n && k_u + k_v == k) {
        // The dual hunts reduce to the primal ones: the dual code is again
        // two-layered with layer dimensions n/2 - k_v and n/2 - k_u, which
        // equal k_u and k_v here, and its dimension n - k equals k.
        rep.c_v_dual = rep.c_u;
        rep.c_u_dual = rep.c_v;
    } else {
        rep.c_v_dual = scan(n - k, half - k_v, true);
        rep.c_u_dual = scan(n - k, half - k_u, false);
    }
    return rep;
}

}  // namespace surf::attack
