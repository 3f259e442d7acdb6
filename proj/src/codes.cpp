#include "surf/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "surf/estimator.hpp"

namespace surf::codes {

namespace {

constexpr long double INV_LN2 = 1.4426950408889634073599246810018921L;

// log2(2^lga - 2^lgb) for lga >= lgb; -infinity when the difference is zero.
long double log2_diff(long double lga, long double lgb) {
    if (lgb <= -std::numeric_limits<long double>::infinity()) return lga;
    if (lgb >= lga) return -std::numeric_limits<long double>::infinity();
    return lga + log1pl(-exp2l(lgb - lga)) * INV_LN2;
}

BitMatrix keep_rows(const BitMatrix& m, size_t count) {
    BitMatrix out(count, m.cols());
    for (size_t r = 0; r < count; ++r) out.set_row(r, m.row(r));
    return out;
}

} // namespace

LinearCode::LinearCode(const BitMatrix& parity) {
    const RowReduceResult rr = row_reduce(parity);
    parity_ = keep_rows(rr.reduced, rr.rank);
    generator_ = kernel_basis(parity_);
}

LinearCode LinearCode::from_generator(const BitMatrix& span) {
    LinearCode c;
    c.parity_ = kernel_basis(span);
    c.generator_ = kernel_basis(c.parity_);
    return c;
}

LinearCode LinearCode::from_generator(const std::vector<BitVector>& span, uint32_t n) {
    BitMatrix m(span.size(), n);
    for (size_t r = 0; r < span.size(); ++r) m.set_row(r, span[r]);
    return from_generator(m);
}

bool LinearCode::contains(const BitVector& word) const {
    if (word.size() != n()) throw std::invalid_argument("LinearCode::contains: length mismatch");
    return mat_vec_mul_transposed(parity_, word).is_zero();
}

LinearCode dual(const LinearCode& c) {
    if (c.k() == 0) {
        // Dual of the zero code is the full space: empty parity matrix.
        return LinearCode(BitMatrix(0, c.n()));
    }
    return LinearCode(c.generator());
}

LinearCode hull(const LinearCode& c) {
    if (c.k() == 0) return c;
    if (c.k() == c.n()) {
        // Full space: hull is its intersection with the zero dual.
        return LinearCode(BitMatrix::identity(c.n()));
    }
    const BitMatrix stacked = BitMatrix::vstack(c.parity(), c.generator());
    return LinearCode::from_generator(kernel_basis(stacked));
}

LinearCode puncture(const LinearCode& c, const std::vector<uint32_t>& drop) {
    std::vector<bool> dropped(c.n(), false);
    for (uint32_t pos : drop) {
        if (pos >= c.n()) throw std::invalid_argument("puncture: position out of range");
        dropped[pos] = true;
    }
    std::vector<size_t> keep;
    keep.reserve(c.n());
    for (uint32_t j = 0; j < c.n(); ++j) {
        if (!dropped[j]) keep.push_back(j);
    }
    return LinearCode::from_generator(c.generator().select_columns(keep));
}

bool same_code(const LinearCode& a, const LinearCode& b) {
    if (a.n() != b.n() || a.k() != b.k()) return false;
    for (size_t r = 0; r < a.generator().rows(); ++r) {
        if (!b.contains(a.generator().row(r))) return false;
    }
    return true;
}

BitMatrix uuv_block_parity(const BitMatrix& h_u, const BitMatrix& h_v) {
    const size_t half = h_u.cols();
    if (h_v.cols() != half) {
        throw std::invalid_argument("uuv_block_parity: column-count mismatch");
    }
    const size_t ru = h_u.rows();
    const size_t rv = h_v.rows();
    BitMatrix block(ru + rv, 2 * half);
    for (size_t r = 0; r < ru; ++r) {
        for (size_t j = 0; j < half; ++j) {
            if (h_u.get(r, j)) block.set(r, j, true);
        }
    }
    for (size_t r = 0; r < rv; ++r) {
        for (size_t j = 0; j < half; ++j) {
            if (h_v.get(r, j)) {
                block.set(ru + r, j, true);
                block.set(ru + r, half + j, true);
            }
        }
    }
    return block;
}

UUVCode build_uuv(const BitMatrix& h_u, const BitMatrix& h_v) {
    const size_t half = h_u.cols();
    if (h_v.cols() != half) throw std::invalid_argument("build_uuv: column-count mismatch");
    if (h_u.rows() > half || h_v.rows() > half) {
        throw std::invalid_argument("build_uuv: more parity rows than columns");
    }
    if (rank_of(h_u) != h_u.rows()) throw std::invalid_argument("build_uuv: H_U is rank-deficient");
    if (rank_of(h_v) != h_v.rows()) throw std::invalid_argument("build_uuv: H_V is rank-deficient");

    return UUVCode{LinearCode(h_u), LinearCode(h_v), LinearCode(uuv_block_parity(h_u, h_v))};
}

uint32_t min_distance_bruteforce(const LinearCode& c) {
    if (c.k() == 0 || c.k() > 24) {
        throw std::invalid_argument("min_distance_bruteforce: need 1 <= k <= 24");
    }
    const BitMatrix& gen = c.generator();
    BitVector current(c.n());
    size_t best = c.n() + 1;
    const uint64_t total = uint64_t{1} << c.k();
    for (uint64_t g = 1; g < total; ++g) {
        current.xor_assign(gen.row(static_cast<size_t>(std::countr_zero(g))));
        best = std::min(best, current.weight());
    }
    return static_cast<uint32_t>(best);
}

WeightEnumerator expected_weight_enumerator(uint32_t n, uint32_t k_u, uint32_t k_v, uint32_t w) {
    if (n % 2 != 0 || w > n) {
        throw std::invalid_argument("expected_weight_enumerator: need even n and w <= n");
    }
    WeightEnumerator out{LogReal::zero(), LogReal::zero(), LogReal::zero(), LogReal::zero()};
    if (w == 0) return out; // only the excluded zero word has weight 0

    const long double half = n / 2.0L;
    const long double ru = half - k_u;
    const long double rv = half - k_v;
    const long double lg_cnw = estimator::log2_binomial(n, w);
    const long double lg_half_w = estimator::log2_binomial(half, w);

    out.a_rand = LogReal::from_log2(lg_cnw - ru - rv);
    out.a_0v = LogReal::from_log2(lg_half_w - rv);
    if (w % 2 == 0) {
        const long double lg_half_w2 = estimator::log2_binomial(half, w / 2.0L);
        out.a_uu = LogReal::from_log2(lg_half_w2 - ru);
        const long double lg_rest = log2_diff(log2_diff(lg_cnw, lg_half_w), lg_half_w2);
        out.a_uuv = out.a_uu + out.a_0v + LogReal::from_log2(lg_rest - ru - rv);
    } else {
        const long double lg_rest = log2_diff(lg_cnw, lg_half_w);
        out.a_uuv = out.a_0v + LogReal::from_log2(lg_rest - ru - rv);
    }
    return out;
}

} // namespace surf::codes
