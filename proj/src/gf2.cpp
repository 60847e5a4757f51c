// gf2.cpp
#include "tmap/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace tmap {

BitVec BitVec::from_mask(std::uint64_t mask, std::size_t bits) {
    BitVec v(bits);
    if (bits < 64 && bits > 0 && (mask >> bits) != 0)
        throw std::invalid_argument("BitVec::from_mask: mask wider than vector");
    if (bits == 0 && mask != 0)
        throw std::invalid_argument("BitVec::from_mask: mask wider than vector");
    if (!v.words_.empty()) v.words_[0] = mask;
    return v;
}

void BitVec::set(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t(1) << (i & 63);
    if (value)
        words_[i >> 6] |= bit;
    else
        words_[i >> 6] &= ~bit;
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

bool BitVec::any() const {
    for (std::uint64_t w : words_)
        if (w) return true;
    return false;
}

BitVec& BitVec::operator^=(const BitVec& other) {
    if (size_ != other.size_)
        throw std::invalid_argument("BitVec xor: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
    if (size_ != other.size_)
        throw std::invalid_argument("BitVec and: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

bool BitVec::lex_less(const BitVec& a, const BitVec& b) {
    if (a.size_ != b.size_)
        throw std::invalid_argument("BitVec lex_less: length mismatch");
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        const std::uint64_t diff = a.words_[i] ^ b.words_[i];
        if (diff) {
            const std::uint64_t low = diff & (~diff + 1);
            return (a.words_[i] & low) == 0;  // clear bit first => smaller
        }
    }
    return false;
}

std::string BitVec::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (test(i)) s[i] = '1';
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), rows_store_(rows, BitVec(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

void BitMatrix::append_row(const BitVec& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_)
        throw std::invalid_argument("BitMatrix::append_row: width mismatch");
    rows_store_.push_back(r);
    ++rows_;
}

BitVec BitMatrix::mul(const BitVec& x) const {
    if (x.size() != cols_)
        throw std::invalid_argument("BitMatrix::mul: dimension mismatch");
    BitVec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (dot(rows_store_[r], x)) y.set(r);
    return y;
}

bool dot(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("gf2::dot: length mismatch");
    std::uint64_t acc = 0;
    const auto& aw = a.words();
    const auto& bw = b.words();
    for (std::size_t i = 0; i < aw.size(); ++i) acc ^= aw[i] & bw[i];
    return std::popcount(acc) & 1;
}

RowEchelon row_reduce(const BitMatrix& m) {
    RowEchelon out;
    out.reduced = m;
    BitMatrix& a = out.reduced;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        std::size_t r = pivot_row;
        while (r < a.rows() && !a.at(r, col)) ++r;
        if (r == a.rows()) continue;
        if (r != pivot_row) std::swap(a.row(r), a.row(pivot_row));
        for (std::size_t rr = 0; rr < a.rows(); ++rr)
            if (rr != pivot_row && a.at(rr, col)) a.row(rr) ^= a.row(pivot_row);
        out.pivots.push_back(col);
        ++pivot_row;
    }
    return out;
}

std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b) {
    if (b.size() != a.rows())
        throw std::invalid_argument("gf2::solve: rhs length mismatch");
    // Eliminate on [A | b].
    BitMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        aug.row(r) = BitVec(a.cols() + 1);
        for (std::size_t w = 0; w < a.row(r).words().size(); ++w)
            aug.row(r).words()[w] = a.row(r).words()[w];
        if (b.test(r)) aug.set(r, a.cols());
    }
    std::size_t pivot_row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        std::size_t r = pivot_row;
        while (r < a.rows() && !aug.at(r, col)) ++r;
        if (r == a.rows()) continue;
        if (r != pivot_row) std::swap(aug.row(r), aug.row(pivot_row));
        for (std::size_t rr = 0; rr < a.rows(); ++rr)
            if (rr != pivot_row && aug.at(rr, col)) aug.row(rr) ^= aug.row(pivot_row);
        pivots.push_back(col);
        ++pivot_row;
    }
    for (std::size_t r = pivot_row; r < a.rows(); ++r)
        if (aug.at(r, a.cols())) return std::nullopt;  // 0 = 1 row
    BitVec x(a.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (aug.at(i, a.cols())) x.set(pivots[i]);
    return x;
}

std::vector<BitVec> null_space_basis(const BitMatrix& a) {
    const RowEchelon re = row_reduce(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t p : re.pivots) is_pivot[p] = true;
    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVec v(a.cols());
        v.set(f);
        for (std::size_t i = 0; i < re.pivots.size(); ++i)
            if (re.reduced.at(i, f)) v.set(re.pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace tmap
