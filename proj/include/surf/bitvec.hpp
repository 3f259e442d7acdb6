#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "surf/rng.hpp"

namespace surf {

// Dense bit-packed row vector over F2.  Bit i lives in word i/64 at position
// i%64; bits past len in the last word are kept zero (canonical padding), so
// whole-word comparison and popcount are valid.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(size_t len) : len_(len), w_(words_for(len), 0) {}

    static BitVector from_bits(std::initializer_list<int> bits) {
        BitVector v(bits.size());
        size_t i = 0;
        for (int b : bits) v.set(i++, b != 0);
        return v;
    }

    size_t size() const { return len_; }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    void set(size_t i, bool b) {
        uint64_t mask = 1ull << (i & 63);
        if (b)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }

    void flip(size_t i) { w_[i >> 6] ^= 1ull << (i & 63); }

    size_t weight() const {
        size_t n = 0;
        for (uint64_t w : w_) n += static_cast<size_t>(std::popcount(w));
        return n;
    }

    bool is_zero() const {
        for (uint64_t w : w_)
            if (w) return false;
        return true;
    }

    void clear() {
        for (uint64_t& w : w_) w = 0;
    }

    void xor_assign(const BitVector& o) {
        for (size_t i = 0; i < w_.size(); i++) w_[i] ^= o.w_[i];
    }

    BitVector operator^(const BitVector& o) const {
        BitVector r = *this;
        r.xor_assign(o);
        return r;
    }

    // parity of the AND of two vectors, i.e. <a,b> over F2
    int dot(const BitVector& o) const {
        uint64_t acc = 0;
        for (size_t i = 0; i < w_.size(); i++) acc ^= w_[i] & o.w_[i];
        return std::popcount(acc) & 1;
    }

    std::vector<size_t> support() const {
        std::vector<size_t> s;
        for (size_t i = 0; i < w_.size(); i++) {
            uint64_t w = w_[i];
            while (w) {
                s.push_back(i * 64 + static_cast<size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return s;
    }

    // v restricted to the given positions, in the given order
    BitVector select(const std::vector<size_t>& positions) const {
        BitVector r(positions.size());
        for (size_t i = 0; i < positions.size(); i++) r.set(i, get(positions[i]));
        return r;
    }

    static BitVector concat(const BitVector& a, const BitVector& b) {
        BitVector r(a.size() + b.size());
        for (size_t i = 0; i < a.size(); i++) r.set(i, a.get(i));
        for (size_t i = 0; i < b.size(); i++) r.set(a.size() + i, b.get(i));
        return r;
    }

    BitVector slice(size_t begin, size_t end) const {
        BitVector r(end - begin);
        for (size_t i = begin; i < end; i++) r.set(i - begin, get(i));
        return r;
    }

    bool operator==(const BitVector& o) const = default;

    const std::vector<uint64_t>& words() const { return w_; }
    std::vector<uint64_t>& words() { return w_; }

    static size_t words_for(size_t bits) { return (bits + 63) / 64; }

  private:
    size_t len_ = 0;
    std::vector<uint64_t> w_;
};

// Row-major bit-packed matrix over F2.  Rows are independently padded like
// BitVector so row-level word operations are safe.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), wpr_(BitVector::words_for(cols)), w_(rows * wpr_, 0) {}

    static BitMatrix identity(size_t n) {
        BitMatrix m(n, n);
        for (size_t i = 0; i < n; i++) m.set(i, i, true);
        return m;
    }

    static BitMatrix from_rows(const std::vector<BitVector>& rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const { return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u; }

    void set(size_t r, size_t c, bool b) {
        uint64_t mask = 1ull << (c & 63);
        if (b)
            w_[r * wpr_ + (c >> 6)] |= mask;
        else
            w_[r * wpr_ + (c >> 6)] &= ~mask;
    }

    BitVector row(size_t r) const {
        BitVector v(cols_);
        for (size_t i = 0; i < wpr_; i++) v.words()[i] = w_[r * wpr_ + i];
        return v;
    }

    void set_row(size_t r, const BitVector& v) {
        for (size_t i = 0; i < wpr_; i++) w_[r * wpr_ + i] = v.words()[i];
    }

    void xor_row(size_t dst, size_t src) {
        uint64_t* d = &w_[dst * wpr_];
        const uint64_t* s = &w_[src * wpr_];
        for (size_t i = 0; i < wpr_; i++) d[i] ^= s[i];
    }

    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        uint64_t* pa = &w_[a * wpr_];
        uint64_t* pb = &w_[b * wpr_];
        for (size_t i = 0; i < wpr_; i++) std::swap(pa[i], pb[i]);
    }

    BitVector column(size_t c) const {
        BitVector v(rows_);
        for (size_t r = 0; r < rows_; r++) v.set(r, get(r, c));
        return v;
    }

    BitMatrix transposed() const {
        BitMatrix t(cols_, rows_);
        for (size_t r = 0; r < rows_; r++)
            for (size_t c = 0; c < cols_; c++)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

    // new matrix keeping the given columns, in the given order
    BitMatrix select_columns(const std::vector<size_t>& cols) const {
        BitMatrix m(rows_, cols.size());
        for (size_t r = 0; r < rows_; r++)
            for (size_t j = 0; j < cols.size(); j++)
                if (get(r, cols[j])) m.set(r, j, true);
        return m;
    }

    // stack a on top of b (same column count)
    static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b);

    bool operator==(const BitMatrix& o) const = default;

    const uint64_t* row_words(size_t r) const { return &w_[r * wpr_]; }
    uint64_t* row_words(size_t r) { return &w_[r * wpr_]; }
    size_t words_per_row() const { return wpr_; }

  private:
    size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> w_;
};

// Permutation of {0,...,n-1}; images[i] is where position i is sent.
struct Permutation {
    std::vector<uint32_t> images;

    size_t size() const { return images.size(); }

    static Permutation identity(size_t n) {
        Permutation p;
        p.images.resize(n);
        for (size_t i = 0; i < n; i++) p.images[i] = static_cast<uint32_t>(i);
        return p;
    }

    Permutation inverse() const {
        Permutation inv;
        inv.images.resize(images.size());
        for (size_t i = 0; i < images.size(); i++) inv.images[images[i]] = static_cast<uint32_t>(i);
        return inv;
    }
};

// out[images[i]] = v[i]; preserves Hamming weight
BitVector apply(const Permutation& p, const BitVector& v);

// column images[j] of the result is column j of m, so for every vector v:
// permute_columns(m, p) * apply(p, v)^T == m * v^T
BitMatrix permute_columns(const BitMatrix& m, const Permutation& p);

// syndrome map e -> e H^T (s_i = parity of AND(row_i(H), e))
BitVector mat_vec_mul_transposed(const BitMatrix& h, const BitVector& e);

// plain matrix product over F2
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);

struct RowReduceResult {
    BitMatrix reduced;           // transform * input, echelon form on the pivot columns
    std::vector<size_t> pivots;  // pivot column of row r, for r < rank
    size_t rank = 0;
    BitMatrix transform;         // invertible rows x rows matrix
};

// Gauss-Jordan elimination.  Columns named in pivot_columns_hint are tried
// first, in order; remaining columns follow in ascending order.  Pivot columns
// of the result have a single 1, at their pivot row.
RowReduceResult row_reduce(const BitMatrix& m, const std::vector<size_t>& pivot_columns_hint = {});

size_t rank_of(const BitMatrix& m);

// rows form a basis of {x : m x^T = 0}; row count == cols - rank(m)
BitMatrix kernel_basis(const BitMatrix& m);

// inverse of a square invertible matrix (throws std::invalid_argument if singular)
BitMatrix inverse_of(const BitMatrix& m);

BitMatrix random_matrix(size_t rows, size_t cols, Rng& rng);

// uniform over invertible n x n matrices, by rejection
BitMatrix random_invertible(size_t n, Rng& rng);

// uniform full-row-rank rows x cols matrix, by rejection (rows <= cols)
BitMatrix random_full_rank(size_t rows, size_t cols, Rng& rng);

// uniform via Fisher-Yates
Permutation random_permutation(size_t n, Rng& rng);

// uniform word of length n and Hamming weight exactly w
BitVector random_weight_vector(size_t n, size_t w, Rng& rng);

}  // namespace surf
