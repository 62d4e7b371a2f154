#pragma once

/*
 * Exact linear algebra over the field with two elements.
 *
 * Rows are packed 64 bits to a word; addition is XOR and multiplication is
 * AND throughout.  Pivot selection is always the lowest column index, so
 * every echelon form, kernel basis and solution produced here is
 * deterministic.
 */

#include "stmod/common.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace stmod {

using Word = std::uint64_t;

class F2Vec {
public:
    F2Vec() = default;
    explicit F2Vec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v = true)
    {
        if (v)
            w_[i >> 6] |= Word(1) << (i & 63);
        else
            w_[i >> 6] &= ~(Word(1) << (i & 63));
    }
    void flip(std::size_t i) { w_[i >> 6] ^= Word(1) << (i & 63); }

    F2Vec& operator^=(const F2Vec& o)
    {
        for (std::size_t k = 0; k < w_.size(); ++k)
            w_[k] ^= o.w_[k];
        return *this;
    }
    friend F2Vec operator^(F2Vec a, const F2Vec& b)
    {
        a ^= b;
        return a;
    }

    bool any() const
    {
        for (Word w : w_)
            if (w)
                return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (Word w : w_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /* Index of the lowest set bit, or -1. */
    long first_set() const
    {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k])
                return static_cast<long>(k * 64 + std::countr_zero(w_[k]));
        return -1;
    }

    /* Parity of the AND with another vector. */
    bool dot(const F2Vec& o) const
    {
        Word acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k)
            acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }

    std::vector<std::size_t> set_bits() const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < w_.size(); ++k) {
            Word w = w_[k];
            while (w) {
                out.push_back(k * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
        return out;
    }

    bool operator==(const F2Vec& o) const { return n_ == o.n_ && w_ == o.w_; }

    const std::vector<Word>& words() const { return w_; }
    std::vector<Word>& words() { return w_; }

private:
    std::size_t n_ = 0;
    std::vector<Word> w_;
};

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), d_(rows * wpr_, 0)
    {
    }

    static F2Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return (d_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1; }
    void set(std::size_t r, std::size_t c, bool v = true)
    {
        if (v)
            d_[r * wpr_ + (c >> 6)] |= Word(1) << (c & 63);
        else
            d_[r * wpr_ + (c >> 6)] &= ~(Word(1) << (c & 63));
    }
    void flip(std::size_t r, std::size_t c) { d_[r * wpr_ + (c >> 6)] ^= Word(1) << (c & 63); }

    F2Vec row(std::size_t r) const;
    void set_row(std::size_t r, const F2Vec& v);
    void xor_row_into(std::size_t src, std::size_t dst)
    {
        const Word* s = &d_[src * wpr_];
        Word* t = &d_[dst * wpr_];
        for (std::size_t k = 0; k < wpr_; ++k)
            t[k] ^= s[k];
    }
    void append_row(const F2Vec& v);
    void swap_rows(std::size_t a, std::size_t b);

    /* y = M x, with x indexed by columns. */
    F2Vec mul_vec(const F2Vec& x) const;
    F2Matrix operator*(const F2Matrix& o) const;
    F2Matrix transposed() const;

    bool operator==(const F2Matrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<Word> d_;
};

struct RrefResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column per nonzero row, ascending
    F2Matrix reduced;                 // reduced row echelon form, same shape
};

/* Reduced row echelon form; row space is preserved. */
RrefResult rref(F2Matrix m);

std::size_t rank(const F2Matrix& m);

/* One solution x of m x = b, or nothing if b is outside the column space. */
std::optional<F2Vec> solve(const F2Matrix& m, const F2Vec& b);

/* Deterministic basis of { x : m x = 0 }; size = cols - rank. */
std::vector<F2Vec> kernel_basis(const F2Matrix& m);

/*
 * Incremental row space kept in reduced echelon form.  insert() returns true
 * when the vector grows the space; reduce() returns the residual of a vector
 * after elimination.
 */
class RowSpace {
public:
    explicit RowSpace(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t dim() const { return rows_.size(); }

    F2Vec reduce(F2Vec v) const;
    bool contains(const F2Vec& v) const { return reduce(v).none(); }
    bool insert(F2Vec v);

    const std::vector<F2Vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

private:
    std::size_t cols_;
    std::vector<F2Vec> rows_;           // sorted by pivot column, mutually reduced
    std::vector<std::size_t> pivots_;
};

/*
 * Row space that also tracks how each stored row decomposes over the inserted
 * vectors, so members can be expressed in terms of the original family.
 */
class TrackedRowSpace {
public:
    explicit TrackedRowSpace(std::size_t cols) : cols_(cols) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t inserted() const { return n_inserted_; }

    bool insert(const F2Vec& v);

    /* Coefficients over the inserted family reproducing v, if v lies in the span. */
    std::optional<F2Vec> express(const F2Vec& v) const;
    bool contains(const F2Vec& v) const;

private:
    std::size_t cols_;
    std::size_t n_inserted_ = 0;
    std::vector<F2Vec> rows_;
    std::vector<F2Vec> combos_;  // combo over inserted vectors, grown lazily
    std::vector<std::size_t> pivots_;
};

/*
 * Factors a matrix once and answers many solve/membership queries against it.
 */
class F2Solver {
public:
    explicit F2Solver(const F2Matrix& m);

    std::optional<F2Vec> solve(const F2Vec& b) const;
    bool in_column_space(const F2Vec& b) const { return static_cast<bool>(solve(b)); }
    std::size_t rank() const { return pivots_.size(); }

private:
    std::size_t rows_, cols_;
    F2Matrix red_;                      // rref of [m | I]
    std::vector<std::size_t> pivots_;   // pivot columns of m-part
};

}  // namespace stmod
