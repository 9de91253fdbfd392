#pragma once

// Packed-bit GF(2) linear algebra: bit matrices, row rank, and a small
// column-space basis for matrices with at most 64 rows.

#include <cstdint>
#include <cstddef>
#include <bit>
#include <vector>
#include <stdexcept>
#include <string>

namespace exitweight {

using word_t = std::uint64_t;
inline constexpr std::size_t word_bits = 64;

/// Row-major bit matrix, 64 columns per word.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + word_bits - 1) / word_bits),
          data_(rows * wpr_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + c / word_bits] >> (c % word_bits)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        word_t& w = data_[r * wpr_ + c / word_bits];
        word_t m = word_t{1} << (c % word_bits);
        if (v) w |= m; else w &= ~m;
    }

    const word_t* row(std::size_t r) const { return data_.data() + r * wpr_; }
    word_t* row(std::size_t r) { return data_.data() + r * wpr_; }

    void xor_row(std::size_t dst, std::size_t src) {
        word_t* d = row(dst);
        const word_t* s = row(src);
        for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        word_t* ra = row(a);
        word_t* rb = row(b);
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(ra[w], rb[w]);
    }

    std::size_t row_weight(std::size_t r) const {
        std::size_t s = 0;
        const word_t* p = row(r);
        for (std::size_t w = 0; w < wpr_; ++w) s += std::popcount(p[w]);
        return s;
    }

    bool row_is_zero(std::size_t r) const {
        const word_t* p = row(r);
        for (std::size_t w = 0; w < wpr_; ++w)
            if (p[w] != 0) return false;
        return true;
    }

    /// GF(2) inner product of row r with row s of another matrix of equal width.
    bool row_dot(std::size_t r, const BitMatrix& other, std::size_t s) const {
        const word_t* a = row(r);
        const word_t* b = other.row(s);
        word_t acc = 0;
        for (std::size_t w = 0; w < wpr_; ++w) acc ^= a[w] & b[w];
        return std::popcount(acc) & 1u;
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<word_t> data_;
};

/// Rank over GF(2) by in-place elimination on a scratch copy.
inline std::size_t row_rank(BitMatrix m) {
    std::size_t rank = 0;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = rank; r < rows; ++r) {
            if (m.get(r, c)) { piv = r; break; }
        }
        if (piv == rows) continue;
        m.swap_rows(rank, piv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r != rank && m.get(r, c)) m.xor_row(r, rank);
        }
        ++rank;
    }
    return rank;
}

/// Incremental basis of a set of GF(2) vectors packed into single words
/// (dimension at most 64). Entries are kept reduced by leading bit.
class Gf2Basis64 {
  public:
    /// Inserts v; returns true if v was independent of the current basis.
    bool insert(word_t v) {
        v = reduce(v);
        if (v == 0) return false;
        pivots_[size_++] = v;
        // keep pivots sorted by leading bit, descending
        for (std::size_t i = size_ - 1; i > 0 && pivots_[i] > pivots_[i - 1]; --i)
            std::swap(pivots_[i], pivots_[i - 1]);
        return true;
    }

    bool contains(word_t v) const { return reduce(v) == 0; }

    std::size_t rank() const { return size_; }
    void clear() { size_ = 0; }

  private:
    word_t reduce(word_t v) const {
        for (std::size_t i = 0; i < size_ && v != 0; ++i) {
            word_t lead = word_t{1} << (word_bits - 1 - std::countl_zero(pivots_[i]));
            if (v & lead) v ^= pivots_[i];
        }
        return v;
    }

    word_t pivots_[64] = {};
    std::size_t size_ = 0;
};

/// Rank of a list of packed single-word GF(2) vectors.
inline std::size_t rank_of_words(const std::vector<word_t>& vecs) {
    Gf2Basis64 b;
    for (word_t v : vecs) b.insert(v);
    return b.rank();
}

} // namespace exitweight
