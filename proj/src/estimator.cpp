#include "surf/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surf/errors.hpp"

namespace surf::estimator {

namespace {

constexpr long double INV_LN2 = 1.4426950408889634073599246810018921L;
constexpr long double NEG_INF = -std::numeric_limits<long double>::infinity();

bool finite_lg(long double x) { return x > NEG_INF; }

// log2 of p1u(i) for an error uniform on the weight-w sphere of F_2^n.
long double log2_p1u(uint32_t n, uint32_t w, uint32_t i) {
    if (i > w || (w - i) % 2 != 0) return NEG_INF;
    const long double half = n / 2.0L;
    const long double nu = (w - i) / 2.0L;
    return static_cast<long double>(i) + log2_binomial(half, nu) +
           log2_binomial(half - nu, static_cast<long double>(i)) -
           log2_binomial(static_cast<long double>(n), static_cast<long double>(w));
}

// Probability that a uniform square matrix over F_2 is invertible, in the
// large-dimension limit: prod_{i>=1} (1 - 2^-i).
long double invertibility_rate() {
    long double beta = 1.0L;
    for (int i = 1; i <= 80; ++i) beta *= 1.0L - exp2l(static_cast<long double>(-i));
    return beta;
}

// log2 of 1 - (1-P)^M for log2-domain inputs (lg_p <= 0, lg_mul >= 0).
// Small-product branch: M*P*(1-(M-1)P/2); otherwise expm1/log1p on reals.
long double log2_one_minus_pow(long double lg_p, long double lg_mul) {
    if (lg_p >= 0.0L) return 0.0L; // P == 1
    const long double prod_lg = lg_p + lg_mul;
    const long double p_real = lg_p > -16000.0L ? exp2l(lg_p) : 0.0L;
    if (prod_lg <= -19.93L) { // M*P < 1e-6
        long double half_tail; // (M-1)*P/2
        if (lg_mul < 60.0L) {
            half_tail = (exp2l(lg_mul) - 1.0L) * p_real / 2.0L;
        } else {
            half_tail = exp2l(prod_lg) / 2.0L;
        }
        return prod_lg + log1pl(-half_tail) * INV_LN2;
    }
    if (prod_lg >= 20.0L) return 0.0L; // saturation: 1 - exp(-huge)
    const long double prod = exp2l(prod_lg);
    const long double series = p_real > 1e-17L ? log1pl(-p_real) / (-p_real) : 1.0L;
    return log2l(-expm1l(-prod * series));
}

struct CellCost {
    long double wf = std::numeric_limits<long double>::infinity();
    long double q_log2 = 0.0L;
};

// Cost of one grid cell for the given regime; lg_b = log2 C(k+l,p),
// lg_p = log2 P(p,l), lg_m = log2 M, q_req < 0 means optimize q.
CellCost cell_cost(Regime regime, long double lg_b, long double lg_p, long double lg_m,
                   uint32_t l, long double q_req) {
    CellCost out;
    const long double lgl = static_cast<long double>(l);
    switch (regime) {
    case Regime::single:
        out.wf = std::max(lg_b / 2.0L, lg_b - lgl) - lg_p;
        return out;
    case Regime::multi_solution:
        out.wf = std::max(lg_b / 2.0L, lg_b - lgl) - log2_one_minus_pow(lg_p, lg_m);
        return out;
    case Regime::doom:
        break;
    }
    auto doom_at = [&](long double lg_q) {
        const long double cost = std::max((lg_q + lg_b) / 2.0L, lg_q + lg_b - lgl);
        return cost - log2_one_minus_pow(lg_p, lg_m + lg_q);
    };
    if (q_req >= 0.0L) {
        const long double lg_q = std::min(q_req, lg_b);
        out.wf = doom_at(lg_q);
        out.q_log2 = lg_q;
        return out;
    }
    // The ratio improves with q until q*M*P ~ 1 and degrades after, so the
    // optimum sits near q* = -(lg_p + lg_m), clamped to [0, lg_b].
    const long double q_star = std::min(lg_b, std::max(0.0L, -(lg_p + lg_m)));
    const long double candidates[5] = {0.0L, lg_b, q_star, std::max(0.0L, q_star - 1.0L),
                                       std::min(lg_b, q_star + 1.0L)};
    for (long double lg_q : candidates) {
        const long double wf = doom_at(lg_q);
        if (wf < out.wf) {
            out.wf = wf;
            out.q_log2 = lg_q;
        }
    }
    return out;
}

} // namespace

long double h2(long double p) {
    if (p <= 0.0L || p >= 1.0L) return 0.0L;
    return -p * log2l(p) - (1.0L - p) * log2l(1.0L - p);
}

long double h2_inv(long double y) {
    long double lo = 0.0L;
    long double hi = 0.5L;
    for (int it = 0; it < 100; ++it) {
        const long double mid = (lo + hi) / 2.0L;
        if (h2(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2.0L;
}

long double log2_binomial(long double n, long double k) {
    if (k < 0.0L || k > n || n < 0.0L) return NEG_INF;
    return (lgammal(n + 1.0L) - lgammal(k + 1.0L) - lgammal(n - k + 1.0L)) * INV_LN2;
}

LogReal binomial_lr(uint64_t n, uint64_t k) {
    return LogReal::from_log2(
        log2_binomial(static_cast<long double>(n), static_cast<long double>(k)));
}

uint32_t gv_bound(uint32_t n, uint32_t k) {
    const long double y = 1.0L - static_cast<long double>(k) / static_cast<long double>(n);
    return static_cast<uint32_t>(llroundl(static_cast<long double>(n) * h2_inv(y)));
}

std::vector<long double> uniform_w1_law(uint32_t n, uint32_t w) {
    std::vector<long double> law(w + 1, 0.0L);
    for (uint32_t i = w % 2; i <= w; i += 2) {
        const long double lg = log2_p1u(n, w, i);
        if (finite_lg(lg)) law[i] = exp2l(lg);
    }
    return law;
}

std::vector<long double> prange_weight_law(uint32_t r) {
    std::vector<long double> law(r + 1, 0.0L);
    for (uint32_t i = 0; i <= r; ++i) {
        law[i] = exp2l(log2_binomial(static_cast<long double>(r), static_cast<long double>(i)) -
                       static_cast<long double>(r));
    }
    return law;
}

CapacityPoint capacity_curves(long double p) {
    CapacityPoint out;
    out.bsc = 1.0L - h2(p);
    out.uuv = 1.0L - 2.0L * h2(p) + h2(2.0L * p * (1.0L - p));
    return out;
}

LogReal epsilon_bound(const SurfParams& params) {
    const uint32_t n = params.n;
    const uint32_t w = params.w;
    const long double lg_cnw =
        log2_binomial(static_cast<long double>(n), static_cast<long double>(w));

    LogReal eps = LogReal::from_log2(static_cast<long double>(params.r()) - lg_cnw);
    if (w % 2 == 0) {
        eps += LogReal::from_log2(static_cast<long double>(params.r_u()) +
                                  log2_binomial(n / 2.0L, w / 2.0L) - lg_cnw);
    }
    LogReal tail = LogReal::zero();
    for (uint32_t j = w % 2; j <= w; j += 2) {
        const long double lg_p1 = log2_p1u(n, w, j);
        if (!finite_lg(lg_p1)) continue;
        tail += LogReal::from_log2(2.0L * lg_p1 -
                                   log2_binomial(n / 2.0L, static_cast<long double>(j)));
    }
    eps += LogReal::from_log2(static_cast<long double>(params.r_v())) * tail;
    return eps;
}

LogReal dumer_c1(uint32_t k, uint32_t l, uint32_t p) {
    const long double lg_b = log2_binomial(static_cast<long double>(k) + l, p);
    return LogReal::from_log2(std::max(lg_b / 2.0L, lg_b - static_cast<long double>(l)));
}

WorkfactorReport doom_workfactor(uint32_t n, uint32_t k, uint32_t w, Regime regime,
                                 long double q_log2, const DoomGrid& grid) {
    DoomGrid g = grid;
    if (!g.explicit_bounds) {
        g.p_min = 0;
        g.p_max = std::min(w, 40u);
        g.l_min = 0;
        g.l_max = std::min<uint32_t>(n - k, static_cast<uint32_t>(24.0L * log2l(n)));
        g.p_step = 1;
        g.l_step = 1;
    }
    g.p_max = std::min(g.p_max, w);
    g.l_max = std::min(g.l_max, n - k);
    g.p_step = std::max(g.p_step, 1u);
    g.l_step = std::max(g.l_step, 1u);

    const long double lg_cnw =
        log2_binomial(static_cast<long double>(n), static_cast<long double>(w));
    const long double lg_m = std::max(0.0L, lg_cnw - static_cast<long double>(n - k));

    WorkfactorReport best;
    best.regime = regime;
    best.wf_log2 = std::numeric_limits<long double>::infinity();
    best.m = LogReal::from_log2(lg_m);

    for (uint32_t p = g.p_min; p <= g.p_max; p += g.p_step) {
        for (uint32_t l = g.l_min; l <= g.l_max; l += g.l_step) {
            const long double lg_b = log2_binomial(static_cast<long double>(k) + l, p);
            if (!finite_lg(lg_b)) continue;
            const long double lg_rest = log2_binomial(
                static_cast<long double>(n - k) - l, static_cast<long double>(w) - p);
            if (!finite_lg(lg_rest)) continue;
            const long double lg_p = lg_rest + lg_b - lg_cnw;
            const CellCost cost = cell_cost(regime, lg_b, lg_p, lg_m, l, q_log2);
            if (cost.wf < best.wf_log2) {
                best.wf_log2 = cost.wf;
                best.p = p;
                best.l = l;
                best.q_log2 = regime == Regime::doom ? cost.q_log2 : 0.0L;
            }
        }
    }
    return best;
}

ExponentRow isd_exponents(long double w_over_n, uint32_t proxy_n) {
    const uint32_t n = proxy_n;
    const uint32_t k = n / 2;
    const uint32_t w = static_cast<uint32_t>(llroundl(w_over_n * static_cast<long double>(n)));

    DoomGrid coarse;
    coarse.explicit_bounds = true;
    coarse.p_min = 0;
    coarse.p_max = std::min(w, n / 40);
    coarse.l_min = 0;
    coarse.l_max = std::min(n - k, n / 8);
    coarse.p_step = 16;
    coarse.l_step = 64;

    auto refine = [&](Regime regime) {
        WorkfactorReport c = doom_workfactor(n, k, w, regime, -1.0L, coarse);
        DoomGrid fine;
        fine.explicit_bounds = true;
        fine.p_min = c.p > 32 ? c.p - 32 : 0;
        fine.p_max = c.p + 32;
        fine.l_min = c.l > 128 ? c.l - 128 : 0;
        fine.l_max = c.l + 128;
        fine.p_step = 1;
        fine.l_step = 8;
        return doom_workfactor(n, k, w, regime, -1.0L, fine);
    };

    const WorkfactorReport multi = refine(Regime::multi_solution);
    const WorkfactorReport doom = refine(Regime::doom);

    ExponentRow row;
    row.w_over_n = w_over_n;
    const long double nn = static_cast<long double>(n);
    row.m_exp = multi.m.log2_value() / nn;
    row.q_exp = doom.q_log2 / nn;
    row.doom_exp = doom.wf_log2 / nn;
    row.dumer_exp = multi.wf_log2 / nn;
    return row;
}

long double m_rs(const SurfParams& params) {
    const uint32_t r = params.r_v();
    long double best = NEG_INF;
    for (uint32_t i = params.w % 2; i <= params.w; i += 2) {
        const long double lg_p1 = log2_p1u(params.n, params.w, i);
        if (!finite_lg(lg_p1)) continue;
        if (i > r) throw InfeasibleAlignment("m_rs: V-layer weight " + std::to_string(i) +
                                             " has no decoder mass (r_v = " + std::to_string(r) +
                                             ")");
        const long double lg_p =
            log2_binomial(static_cast<long double>(r), static_cast<long double>(i)) -
            static_cast<long double>(r);
        best = std::max(best, lg_p1 - lg_p);
    }
    if (!finite_lg(best)) throw InfeasibleAlignment("m_rs: empty admissible weight set");
    return static_cast<long double>(exp2l(best));
}

long double expected_u_weight_tests(const SurfParams& params) {
    long double total = 0.0L;
    for (uint32_t i = params.w % 2; i <= params.w; i += 2) {
        const long double lg_p1 = log2_p1u(params.n, params.w, i);
        if (!finite_lg(lg_p1)) continue;
        const uint32_t gap = params.w - i;
        const long double lg_tests =
            static_cast<long double>(gap) -
            log2_binomial(static_cast<long double>(gap), gap / 2.0L);
        total += exp2l(lg_p1 + lg_tests);
    }
    return total;
}

EliminationEstimate expected_eliminations(const SurfParams& params) {
    EliminationEstimate est;
    est.v_decodes = m_rs(params);
    est.elim_per_decode = 1.0L / invertibility_rate();
    est.u_tests = expected_u_weight_tests(params);
    est.total = (est.v_decodes + est.u_tests) * est.elim_per_decode + 1.0L;
    return est;
}

} // namespace surf::estimator
