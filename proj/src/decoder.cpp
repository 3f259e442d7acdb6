#include "surf/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "surf/estimator.hpp"
#include "surf/logreal.hpp"

namespace surf::decoder {

namespace {

constexpr uint64_t kInvertibleSubsetBudget = 1000;
constexpr uint64_t kFixedWeightBudgetPerRow = 200;
constexpr long double kInvLn2 = 1.4426950408889634073599246810018921L;

void check_syndrome_size(const BitMatrix& h, const BitVector& s) {
    if (s.size() != h.rows()) {
        throw std::invalid_argument("decode: syndrome length must equal parity row count");
    }
}

// One subset attempt: pick rows(h) random columns, invert the square
// submatrix if possible, and solve for the coordinates on that set.
bool try_random_information_set(const BitMatrix& h, const BitVector& s, Rng& rng, BitVector& out) {
    const size_t r = h.rows();
    const size_t n = h.cols();
    const BitVector mask = random_weight_vector(n, r, rng);
    const std::vector<size_t> cols = mask.support();
    const RowReduceResult rr = row_reduce(h.select_columns(cols));
    if (rr.rank != r) return false;
    const BitVector x = mat_vec_mul_transposed(rr.transform, s);
    BitVector e(n);
    for (size_t m = 0; m < r; ++m) {
        if (x.get(m)) e.set(cols[m], true);
    }
    out = e;
    return true;
}

// Elimination of the erased columns from h e^T = s^T.  The erased columns are
// pivoted first; rows below the rho erased pivots have zeroes on every erased
// column, so they form a residual system on the kept columns alone.
struct ErasureReduction {
    BitMatrix reduced;          // transform * h, erased columns pivoted first
    std::vector<size_t> pivots; // pivot columns in processing order
    size_t rho = 0;             // erased columns that produced pivots
    std::vector<size_t> erased; // sorted erased columns
    std::vector<size_t> kept;   // sorted remaining columns
    BitMatrix residual;         // rows [rho, rows) restricted to kept columns
    BitVector ts;               // transform * s
    BitVector s_residual;       // ts restricted to the residual rows
};

ErasureReduction reduce_erasures(const BitMatrix& h, const BitVector& s,
                                 const std::vector<size_t>& erased) {
    check_syndrome_size(h, s);
    ErasureReduction red;
    red.erased = erased;
    std::sort(red.erased.begin(), red.erased.end());
    std::vector<char> is_erased(h.cols(), 0);
    for (size_t c : red.erased) {
        if (c >= h.cols()) throw std::invalid_argument("erasure decode: position out of range");
        if (is_erased[c]) throw std::invalid_argument("erasure decode: duplicate position");
        is_erased[c] = 1;
    }
    for (size_t c = 0; c < h.cols(); ++c) {
        if (!is_erased[c]) red.kept.push_back(c);
    }

    RowReduceResult rr = row_reduce(h, red.erased);
    red.rho = 0;
    while (red.rho < rr.pivots.size() && is_erased[rr.pivots[red.rho]]) ++red.rho;
    red.ts = mat_vec_mul_transposed(rr.transform, s);

    const size_t residual_rows = h.rows() - red.rho;
    const BitMatrix kept_cols = rr.reduced.select_columns(red.kept);
    red.residual = BitMatrix(residual_rows, red.kept.size());
    for (size_t r = 0; r < residual_rows; ++r) {
        red.residual.set_row(r, kept_cols.row(red.rho + r));
    }
    red.s_residual = red.ts.slice(red.rho, h.rows());
    red.pivots = std::move(rr.pivots);
    red.reduced = std::move(rr.reduced);
    return red;
}

// Lifts a solution of the residual system back to the full length.  Erased
// positions that did not pivot are free and drawn uniformly at random; the
// pivoted ones are forced by their row equation.
BitVector lift_residual_solution(const ErasureReduction& red, const BitVector& e_kept, Rng& rng) {
    BitVector e(red.reduced.cols());
    for (size_t m = 0; m < red.kept.size(); ++m) {
        if (e_kept.get(m)) e.set(red.kept[m], true);
    }
    std::vector<char> pivoted(red.reduced.cols(), 0);
    for (size_t j = 0; j < red.rho; ++j) pivoted[red.pivots[j]] = 1;
    for (size_t c : red.erased) {
        if (!pivoted[c] && rng_bit(rng)) e.set(c, true);
    }
    // Each pivot row has zeroes at every other pivot column, so the dot picks
    // up only coordinates assigned above.
    for (size_t j = 0; j < red.rho; ++j) {
        const int forced = red.ts.get(j) ^ (red.reduced.row(j).dot(e) & 1);
        if (forced) e.set(red.pivots[j], true);
    }
    return e;
}

BitVector solve_residual_fixed_weight(const ErasureReduction& red, uint32_t t, Rng& rng,
                                      DecodeStats* stats) {
    if (red.residual.rows() == 0) {
        // No residual equations: any weight-t choice on the kept columns works.
        if (t > red.kept.size()) throw RestartBudgetExceeded("erasure decode: weight target too large");
        return random_weight_vector(red.kept.size(), t, rng);
    }
    return prange_decode_fixed(red.residual, red.s_residual, t, rng, stats);
}

} // namespace

BitVector prange_decode(const BitMatrix& h, const BitVector& s, Rng& rng, DecodeStats* stats) {
    check_syndrome_size(h, s);
    if (h.rows() > h.cols()) {
        throw std::invalid_argument("prange_decode: more equations than positions");
    }
    BitVector e(h.cols());
    for (uint64_t attempt = 0; attempt < kInvertibleSubsetBudget; ++attempt) {
        if (stats) ++stats->subset_draws;
        if (try_random_information_set(h, s, rng, e)) return e;
    }
    throw RestartBudgetExceeded("prange_decode: no invertible column set found");
}

BitVector prange_decode_fixed(const BitMatrix& h, const BitVector& s, uint32_t t, Rng& rng,
                              DecodeStats* stats) {
    check_syndrome_size(h, s);
    if (h.rows() > h.cols()) {
        throw std::invalid_argument("prange_decode_fixed: more equations than positions");
    }
    const uint64_t budget = kFixedWeightBudgetPerRow * std::max<uint64_t>(h.rows(), 1);
    BitVector e(h.cols());
    for (uint64_t attempt = 0; attempt < budget; ++attempt) {
        if (stats) ++stats->subset_draws;
        if (!try_random_information_set(h, s, rng, e)) continue;
        if (e.weight() == t) return e;
    }
    throw RestartBudgetExceeded("prange_decode_fixed: no solution of the requested weight");
}

BitVector prange_decode_erasure(const BitMatrix& h, const BitVector& s,
                                const std::vector<size_t>& erased, Rng& rng, DecodeStats* stats) {
    const ErasureReduction red = reduce_erasures(h, s, erased);
    if (red.rho != red.erased.size()) {
        throw DependentErasureColumns("erasure decode: erased columns are linearly dependent");
    }
    const BitVector e_kept = prange_decode(red.residual, red.s_residual, rng, stats);
    return lift_residual_solution(red, e_kept, rng);
}

BitVector prange_decode_erasure_fixed(const BitMatrix& h, const BitVector& s,
                                      const std::vector<size_t>& erased, uint32_t t, Rng& rng,
                                      DecodeStats* stats) {
    const ErasureReduction red = reduce_erasures(h, s, erased);
    if (red.rho != red.erased.size()) {
        throw DependentErasureColumns("erasure decode: erased columns are linearly dependent");
    }
    const BitVector e_kept = solve_residual_fixed_weight(red, t, rng, stats);
    return lift_residual_solution(red, e_kept, rng);
}

RejectionTable build_rejection_table(const SurfParams& params) {
    params.validate();
    RejectionTable table;
    table.n = params.n;
    table.w = params.w;
    table.m_rs = estimator::m_rs(params);
    const std::vector<long double> target = estimator::uniform_w1_law(params.n, params.w);
    const std::vector<long double> source = estimator::prange_weight_law(params.r_v());
    table.x.assign(params.w + 1, 0.0L);
    for (uint32_t i = 0; i <= params.w; ++i) {
        if ((params.w - i) % 2 != 0) continue;
        if (i >= source.size() || source[i] <= 0.0L) continue;
        table.x[i] = target[i] / (table.m_rs * source[i]);
        if (table.x[i] > 1.0L) table.x[i] = 1.0L; // guards rounding at the ratio peak
    }
    return table;
}

long double erased_block_solvable_rate(uint32_t rows, uint32_t cols) {
    // Sum over the rank law of a uniform rows x cols binary matrix of the
    // chance that the unreachable rows happen to carry a zero target:
    // E[2^(rank - rows)].  log2 P(rank = r) decomposes into an exactly
    // cancelling integer part -(rows - r)(cols - r) plus small corrections.
    const uint32_t r_max = std::min(rows, cols);
    long double num_corr = 0.0L; // sum over i < r of log2((1 - 2^(i-rows))(1 - 2^(i-cols)))
    long double den_corr = 0.0L; // sum over j <= r of log2(1 - 2^-j)
    LogReal rate = LogReal::zero();
    for (uint32_t r = 0; r <= r_max; ++r) {
        if (r > 0) {
            const long double i = static_cast<long double>(r - 1);
            num_corr += (log1pl(-exp2l(i - rows)) + log1pl(-exp2l(i - cols))) *
                        kInvLn2;
            den_corr += log1pl(-exp2l(-static_cast<long double>(r))) * kInvLn2;
        }
        const long double lg_rank_prob =
            -static_cast<long double>(rows - r) * static_cast<long double>(cols - r) + num_corr -
            den_corr;
        rate += LogReal::from_log2(lg_rank_prob + static_cast<long double>(r) -
                                   static_cast<long double>(rows));
    }
    return static_cast<long double>(rate.to_double());
}

BitVector uuv_decode_v1(const BitMatrix& h_u, const BitMatrix& h_v, const BitVector& syndrome,
                        Rng& rng, DecodeStats* stats) {
    const size_t half = h_u.cols();
    if (h_v.cols() != half) throw std::invalid_argument("layer decode: column count mismatch");
    const size_t r_u = h_u.rows();
    const size_t r_v = h_v.rows();
    if (syndrome.size() != r_u + r_v) {
        throw std::invalid_argument("layer decode: syndrome length mismatch");
    }
    const size_t k_u = half - r_u;
    const size_t k_v = half - r_v;
    if (2 * k_u > k_v + half) {
        throw std::invalid_argument("layer decode: rates infeasible for fixed-weight layers");
    }

    // V-layer weight: the integer nearest r_v / 2 whose parity matches r_u,
    // rounding up on ties, so the U layer can finish with an integral number
    // of paired positions.
    const long double tau = static_cast<long double>(r_v) / 2.0L;
    uint32_t t = 0;
    long double best = -1.0L;
    const int64_t base = static_cast<int64_t>(std::floor(tau));
    for (int64_t cand = std::max<int64_t>(base - 2, 0); cand <= base + 2; ++cand) {
        if ((static_cast<uint64_t>(cand) % 2) != (r_u % 2)) continue;
        const long double dist = std::fabs(static_cast<long double>(cand) - tau);
        if (best < 0.0L || dist < best || (dist == best && cand > static_cast<int64_t>(t))) {
            best = dist;
            t = static_cast<uint32_t>(cand);
        }
    }
    if (t > r_u) throw std::invalid_argument("layer decode: V-layer weight exceeds U-layer room");
    const uint32_t nu = static_cast<uint32_t>(r_u - t) / 2;

    const BitVector s1 = syndrome.slice(0, r_u);
    const BitVector s2 = syndrome.slice(r_u, r_u + r_v);

    constexpr uint64_t kOuterBudget = 64;
    for (uint64_t attempt = 0; attempt < kOuterBudget; ++attempt) {
        if (stats) ++stats->v_decodes;
        const BitVector e_v = prange_decode_fixed(h_v, s2, t, rng, stats);
        if (stats) ++stats->u_decodes;
        BitVector e_u;
        try {
            e_u = prange_decode_erasure_fixed(h_u, s1, e_v.support(), nu, rng, stats);
        } catch (const DependentErasureColumns&) {
            if (stats) ++stats->insoluble_retries;
            continue;
        } catch (const RestartBudgetExceeded&) {
            if (stats) ++stats->insoluble_retries;
            continue;
        }
        return BitVector::concat(e_u, e_u ^ e_v);
    }
    throw IterationBudgetExceeded("layer decode: no solution within the attempt budget");
}

BitVector uuv_decode_v2(const BitMatrix& h_u, const BitMatrix& h_v, const BitVector& syndrome,
                        const RejectionTable& table, Rng& rng, DecodeStats* stats) {
    const size_t half = h_u.cols();
    if (h_v.cols() != half) throw std::invalid_argument("layer decode: column count mismatch");
    const size_t r_u = h_u.rows();
    const size_t r_v = h_v.rows();
    if (syndrome.size() != r_u + r_v) {
        throw std::invalid_argument("layer decode: syndrome length mismatch");
    }
    if (table.n != 2 * half || table.x.size() != static_cast<size_t>(table.w) + 1) {
        throw std::invalid_argument("layer decode: rejection table does not match the code");
    }
    const uint32_t w = table.w;

    const BitVector s1 = syndrome.slice(0, r_u);
    const BitVector s2 = syndrome.slice(r_u, r_u + r_v);

    // When the V layer lands exactly on weight w the U layer must solve its
    // residual equations with weight zero, which only works when the residual
    // target vanishes.  Dividing the acceptance probability by that rate
    // keeps the accepted-weight law intact despite those redraws.
    const long double full_weight_rate =
        erased_block_solvable_rate(static_cast<uint32_t>(r_u), w);

    const uint64_t budget = 64 * static_cast<uint64_t>(std::ceil(table.m_rs));
    for (uint64_t draws = 0; draws < budget; ++draws) {
        if (stats) ++stats->v_decodes;
        const BitVector e_v = prange_decode(h_v, s2, rng, stats);
        const uint32_t i = static_cast<uint32_t>(e_v.weight());
        if (i > w) {
            if (stats) ++stats->rejected_weight;
            continue;
        }
        if ((w - i) % 2 != 0) {
            if (stats) ++stats->rejected_parity;
            continue;
        }
        long double accept = table.x[i];
        if (i == w) accept = std::min(1.0L, accept / full_weight_rate);
        if (!(static_cast<long double>(rng_real53(rng)) < accept)) {
            if (stats) ++stats->rejected_coin;
            continue;
        }

        const uint32_t nu = (w - i) / 2;
        if (stats) ++stats->u_decodes;
        const ErasureReduction red = reduce_erasures(h_u, s1, e_v.support());
        BitVector e_kept(red.kept.size());
        if (nu == 0) {
            if (!red.s_residual.is_zero()) {
                if (stats) ++stats->insoluble_retries;
                continue;
            }
        } else {
            try {
                e_kept = solve_residual_fixed_weight(red, nu, rng, stats);
            } catch (const RestartBudgetExceeded&) {
                if (stats) ++stats->insoluble_retries;
                continue;
            }
        }
        const BitVector e_u = lift_residual_solution(red, e_kept, rng);
        const BitVector e = BitVector::concat(e_u, e_u ^ e_v);
        if (e.weight() != w) {
            throw std::logic_error("layer decode: assembled word has the wrong weight");
        }
        return e;
    }
    throw IterationBudgetExceeded("layer decode: rejection sampling budget exhausted");
}

} // namespace surf::decoder
