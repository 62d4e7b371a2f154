#include "stmod/f2.hpp"

#include <algorithm>

namespace stmod {

F2Matrix F2Matrix::identity(std::size_t n)
{
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

F2Vec F2Matrix::row(std::size_t r) const
{
    F2Vec v(cols_);
    std::copy(d_.begin() + r * wpr_, d_.begin() + (r + 1) * wpr_, v.words().begin());
    return v;
}

void F2Matrix::set_row(std::size_t r, const F2Vec& v)
{
    std::copy(v.words().begin(), v.words().end(), d_.begin() + r * wpr_);
}

void F2Matrix::append_row(const F2Vec& v)
{
    if (rows_ == 0 && cols_ == 0) {
        cols_ = v.size();
        wpr_ = (cols_ + 63) / 64;
    }
    d_.insert(d_.end(), v.words().begin(), v.words().end());
    ++rows_;
}

void F2Matrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t k = 0; k < wpr_; ++k)
        std::swap(d_[a * wpr_ + k], d_[b * wpr_ + k]);
}

F2Vec F2Matrix::mul_vec(const F2Vec& x) const
{
    F2Vec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Word acc = 0;
        const Word* p = &d_[r * wpr_];
        for (std::size_t k = 0; k < wpr_; ++k)
            acc ^= p[k] & x.words()[k];
        if (std::popcount(acc) & 1)
            y.set(r);
    }
    return y;
}

F2Matrix F2Matrix::operator*(const F2Matrix& o) const
{
    F2Matrix out(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Word* t = &out.d_[r * out.wpr_];
        const Word* p = &d_[r * wpr_];
        for (std::size_t k = 0; k < wpr_; ++k) {
            Word w = p[k];
            while (w) {
                std::size_t c = k * 64 + static_cast<std::size_t>(std::countr_zero(w));
                w &= w - 1;
                const Word* s = &o.d_[c * o.wpr_];
                for (std::size_t q = 0; q < o.wpr_; ++q)
                    t[q] ^= s[q];
            }
        }
    }
    return out;
}

F2Matrix F2Matrix::transposed() const
{
    F2Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const Word* p = &d_[r * wpr_];
        for (std::size_t k = 0; k < wpr_; ++k) {
            Word w = p[k];
            while (w) {
                std::size_t c = k * 64 + static_cast<std::size_t>(std::countr_zero(w));
                w &= w - 1;
                out.set(c, r);
            }
        }
    }
    return out;
}

RrefResult rref(F2Matrix m)
{
    RrefResult res;
    std::size_t cur = 0;
    for (std::size_t c = 0; c < m.cols() && cur < m.rows(); ++c) {
        std::size_t piv = cur;
        while (piv < m.rows() && !m.get(piv, c))
            ++piv;
        if (piv == m.rows())
            continue;
        m.swap_rows(cur, piv);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != cur && m.get(r, c))
                m.xor_row_into(cur, r);
        res.pivots.push_back(c);
        ++cur;
    }
    res.rank = res.pivots.size();
    res.reduced = std::move(m);
    return res;
}

std::size_t rank(const F2Matrix& m)
{
    return rref(m).rank;
}

std::optional<F2Vec> solve(const F2Matrix& m, const F2Vec& b)
{
    F2Solver s(m);
    return s.solve(b);
}

std::vector<F2Vec> kernel_basis(const F2Matrix& m)
{
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivots)
        is_pivot[p] = true;

    std::vector<F2Vec> out;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        F2Vec v(m.cols());
        v.set(c);
        for (std::size_t i = 0; i < r.rank; ++i)
            if (r.reduced.get(i, c))
                v.set(r.pivots[i]);
        out.push_back(std::move(v));
    }
    return out;
}

F2Vec RowSpace::reduce(F2Vec v) const
{
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i]))
            v ^= rows_[i];
    return v;
}

bool RowSpace::insert(F2Vec v)
{
    v = reduce(std::move(v));
    long p = v.first_set();
    if (p < 0)
        return false;
    std::size_t pc = static_cast<std::size_t>(p);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].get(pc))
            rows_[i] ^= v;
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), pc);
    std::size_t pos = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, pc);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
}

bool TrackedRowSpace::insert(const F2Vec& v)
{
    std::size_t idx = n_inserted_++;
    /* widen the stored combos to the new index space */
    for (auto& c : combos_) {
        F2Vec nc(n_inserted_);
        std::copy(c.words().begin(), c.words().end(), nc.words().begin());
        c = std::move(nc);
    }
    F2Vec w = v;
    F2Vec combo(n_inserted_);
    combo.set(idx);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (w.get(pivots_[i])) {
            w ^= rows_[i];
            combo ^= combos_[i];
        }
    long p = w.first_set();
    if (p < 0)
        return false;
    std::size_t pc = static_cast<std::size_t>(p);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].get(pc)) {
            rows_[i] ^= w;
            combos_[i] ^= combo;
        }
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), pc);
    std::size_t pos = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, pc);
    rows_.insert(rows_.begin() + pos, std::move(w));
    combos_.insert(combos_.begin() + pos, std::move(combo));
    return true;
}

std::optional<F2Vec> TrackedRowSpace::express(const F2Vec& v) const
{
    F2Vec w = v;
    F2Vec combo(n_inserted_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (w.get(pivots_[i])) {
            w ^= rows_[i];
            combo ^= combos_[i];
        }
    if (w.any())
        return std::nullopt;
    return combo;
}

bool TrackedRowSpace::contains(const F2Vec& v) const
{
    F2Vec w = v;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (w.get(pivots_[i]))
            w ^= rows_[i];
    return w.none();
}

F2Solver::F2Solver(const F2Matrix& m) : rows_(m.rows()), cols_(m.cols())
{
    /* Row-reduce [m | I]; the I-part records the row transform. */
    F2Matrix aug(rows_, cols_ + rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c)
            if (m.get(r, c))
                aug.set(r, c);
        aug.set(r, cols_ + r);
    }
    std::size_t cur = 0;
    for (std::size_t c = 0; c < cols_ && cur < rows_; ++c) {
        std::size_t piv = cur;
        while (piv < rows_ && !aug.get(piv, c))
            ++piv;
        if (piv == rows_)
            continue;
        aug.swap_rows(cur, piv);
        for (std::size_t r = 0; r < rows_; ++r)
            if (r != cur && aug.get(r, c))
                aug.xor_row_into(cur, r);
        pivots_.push_back(c);
        ++cur;
    }
    red_ = std::move(aug);
}

std::optional<F2Vec> F2Solver::solve(const F2Vec& b) const
{
    /* c = T b for each row; consistency requires c = 0 on zero rows of rref(m). */
    F2Vec x(cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        bool cr = false;
        for (std::size_t k = 0; k < rows_; ++k)
            if (red_.get(r, cols_ + k) && b.get(k))
                cr = !cr;
        if (r < pivots_.size()) {
            if (cr)
                x.set(pivots_[r]);
        }
        else if (cr) {
            return std::nullopt;
        }
    }
    return x;
}

}  // namespace stmod
