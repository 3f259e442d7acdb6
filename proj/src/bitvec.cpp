#include "surf/bitvec.hpp"

#include <stdexcept>

namespace surf {

BitMatrix BitMatrix::from_rows(const std::vector<BitVector>& rows) {
    if (rows.empty()) return BitMatrix();
    BitMatrix m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); r++) {
        if (rows[r].size() != rows[0].size())
            throw std::invalid_argument("from_rows: ragged row lengths");
        m.set_row(r, rows[r]);
    }
    return m;
}

BitMatrix BitMatrix::vstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
        throw std::invalid_argument("vstack: column count mismatch");
    size_t cols = a.rows() ? a.cols() : b.cols();
    BitMatrix m(a.rows() + b.rows(), cols);
    for (size_t r = 0; r < a.rows(); r++) m.set_row(r, a.row(r));
    for (size_t r = 0; r < b.rows(); r++) m.set_row(a.rows() + r, b.row(r));
    return m;
}

BitVector apply(const Permutation& p, const BitVector& v) {
    if (p.size() != v.size()) throw std::invalid_argument("apply: length mismatch");
    BitVector out(v.size());
    for (size_t i = 0; i < v.size(); i++)
        if (v.get(i)) out.set(p.images[i], true);
    return out;
}

BitMatrix permute_columns(const BitMatrix& m, const Permutation& p) {
    if (p.size() != m.cols()) throw std::invalid_argument("permute_columns: length mismatch");
    BitMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++)
        for (size_t c = 0; c < m.cols(); c++)
            if (m.get(r, c)) out.set(r, p.images[c], true);
    return out;
}

BitVector mat_vec_mul_transposed(const BitMatrix& h, const BitVector& e) {
    if (e.size() != h.cols()) throw std::invalid_argument("mat_vec_mul_transposed: dimension mismatch");
    BitVector s(h.rows());
    size_t wpr = h.words_per_row();
    for (size_t r = 0; r < h.rows(); r++) {
        const uint64_t* rw = h.row_words(r);
        uint64_t acc = 0;
        for (size_t i = 0; i < wpr; i++) acc ^= rw[i] & e.words()[i];
        if (std::popcount(acc) & 1) s.set(r, true);
    }
    return s;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
    BitMatrix out(a.rows(), b.cols());
    size_t wpr = out.words_per_row();
    for (size_t r = 0; r < a.rows(); r++) {
        uint64_t* dst = out.row_words(r);
        for (size_t j = 0; j < a.cols(); j++) {
            if (!a.get(r, j)) continue;
            const uint64_t* src = b.row_words(j);
            for (size_t i = 0; i < wpr; i++) dst[i] ^= src[i];
        }
    }
    return out;
}

RowReduceResult row_reduce(const BitMatrix& m, const std::vector<size_t>& pivot_columns_hint) {
    RowReduceResult res;
    res.reduced = m;
    res.transform = BitMatrix::identity(m.rows());
    res.rank = 0;

    std::vector<char> in_hint(m.cols(), 0);
    std::vector<size_t> order;
    order.reserve(m.cols());
    for (size_t c : pivot_columns_hint) {
        if (c >= m.cols()) throw std::invalid_argument("row_reduce: hint column out of range");
        if (!in_hint[c]) {
            in_hint[c] = 1;
            order.push_back(c);
        }
    }
    for (size_t c = 0; c < m.cols(); c++)
        if (!in_hint[c]) order.push_back(c);

    BitMatrix& red = res.reduced;
    BitMatrix& tr = res.transform;
    for (size_t c : order) {
        size_t pivot = red.rows();
        for (size_t r = res.rank; r < red.rows(); r++) {
            if (red.get(r, c)) {
                pivot = r;
                break;
            }
        }
        if (pivot == red.rows()) continue;
        red.swap_rows(pivot, res.rank);
        tr.swap_rows(pivot, res.rank);
        for (size_t r = 0; r < red.rows(); r++) {
            if (r != res.rank && red.get(r, c)) {
                red.xor_row(r, res.rank);
                tr.xor_row(r, res.rank);
            }
        }
        res.pivots.push_back(c);
        res.rank++;
        if (res.rank == red.rows()) break;
    }
    return res;
}

size_t rank_of(const BitMatrix& m) { return row_reduce(m).rank; }

BitMatrix kernel_basis(const BitMatrix& m) {
    RowReduceResult rr = row_reduce(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (size_t c : rr.pivots) is_pivot[c] = 1;

    size_t dim = m.cols() - rr.rank;
    BitMatrix basis(dim, m.cols());
    size_t out = 0;
    for (size_t f = 0; f < m.cols(); f++) {
        if (is_pivot[f]) continue;
        basis.set(out, f, true);
        // pivot row r constrains x[pivots[r]] = reduced[r][f] when x[f] = 1
        for (size_t r = 0; r < rr.rank; r++)
            if (rr.reduced.get(r, f)) basis.set(out, rr.pivots[r], true);
        out++;
    }
    return basis;
}

BitMatrix inverse_of(const BitMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse_of: not square");
    RowReduceResult rr = row_reduce(m);
    if (rr.rank != m.rows()) throw std::invalid_argument("inverse_of: singular matrix");
    // reduced is a row-permuted identity in general; transform already maps m
    // onto it, so compose with the permutation fix-up.
    // pivots[r] = c means reduced row r is unit vector e_c, so row c of the
    // inverse is row r of the transform.
    BitMatrix inv(m.rows(), m.rows());
    for (size_t r = 0; r < m.rows(); r++) inv.set_row(rr.pivots[r], rr.transform.row(r));
    return inv;
}

BitMatrix random_matrix(size_t rows, size_t cols, Rng& rng) {
    BitMatrix m(rows, cols);
    size_t tail = cols & 63;
    uint64_t last_mask = tail ? ((1ull << tail) - 1) : ~0ull;
    size_t wpr = m.words_per_row();
    for (size_t r = 0; r < rows; r++) {
        uint64_t* w = m.row_words(r);
        for (size_t i = 0; i < wpr; i++) w[i] = rng();
        if (wpr) w[wpr - 1] &= last_mask;
    }
    return m;
}

BitMatrix random_invertible(size_t n, Rng& rng) {
    for (;;) {
        BitMatrix m = random_matrix(n, n, rng);
        if (rank_of(m) == n) return m;
    }
}

BitMatrix random_full_rank(size_t rows, size_t cols, Rng& rng) {
    if (rows > cols) throw std::invalid_argument("random_full_rank: rows > cols");
    for (;;) {
        BitMatrix m = random_matrix(rows, cols, rng);
        if (rank_of(m) == rows) return m;
    }
}

Permutation random_permutation(size_t n, Rng& rng) {
    Permutation p = Permutation::identity(n);
    for (size_t i = n; i > 1; i--) {
        size_t j = static_cast<size_t>(rng_below(rng, i));
        std::swap(p.images[i - 1], p.images[j]);
    }
    return p;
}

BitVector random_weight_vector(size_t n, size_t w, Rng& rng) {
    if (w > n) throw std::invalid_argument("random_weight_vector: weight exceeds length");
    // partial Fisher-Yates over position indices
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; i++) idx[i] = i;
    BitVector v(n);
    for (size_t i = 0; i < w; i++) {
        size_t j = i + static_cast<size_t>(rng_below(rng, n - i));
        std::swap(idx[i], idx[j]);
        v.set(idx[i], true);
    }
    return v;
}

}  // namespace surf
