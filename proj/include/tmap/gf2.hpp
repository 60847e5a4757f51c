// gf2.hpp — dense bit-packed linear algebra over GF(2)
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmap {

// Fixed-length bit vector packed into 64-bit words.  Unused bits of the last
// word are kept zero so that whole-word operations (xor, popcount, compare)
// need no masking.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t bits) : size_(bits), words_((bits + 63) / 64, 0) {}

    // Low 'bits' positions taken from 'mask' (bit i of mask -> position i).
    static BitVec from_mask(std::uint64_t mask, std::size_t bits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    std::size_t popcount() const;
    bool any() const;
    bool none() const { return !any(); }

    // Lowest set position as a mask value (first 64 positions), for small vectors.
    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    BitVec& operator^=(const BitVec& other);  // throws std::invalid_argument on length mismatch
    BitVec& operator&=(const BitVec& other);
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
    friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }

    bool operator==(const BitVec& other) const = default;

    // True iff 'a' comes before 'b' reading positions 0, 1, 2, ... and
    // treating a clear bit as smaller than a set one at the first difference.
    static bool lex_less(const BitVec& a, const BitVec& b);

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    std::string to_string() const;  // positions 0..n-1 as '0'/'1'

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Row-major dense matrix over GF(2).
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool at(std::size_t r, std::size_t c) const { return rows_store_[r].test(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_store_[r].set(c, v); }

    const BitVec& row(std::size_t r) const { return rows_store_[r]; }
    BitVec& row(std::size_t r) { return rows_store_[r]; }

    void append_row(const BitVec& r);  // throws on width mismatch

    // y = A * x over GF(2); throws on dimension mismatch.
    BitVec mul(const BitVec& x) const;

    bool operator==(const BitMatrix& other) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVec> rows_store_;
};

// parity(a & b); vectors must have equal length.
bool dot(const BitVec& a, const BitVec& b);

struct RowEchelon {
    BitMatrix reduced;               // reduced row-echelon form
    std::vector<std::size_t> pivots; // pivot column per pivot row, ascending
    std::size_t rank() const { return pivots.size(); }
};

RowEchelon row_reduce(const BitMatrix& m);

// One solution of A x = b with all free variables set to zero, or nullopt if
// the system is inconsistent.  Deterministic.
std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b);

// Basis of the null space of A, one vector per free column, ordered by free
// column index.  Size is cols - rank.
std::vector<BitVec> null_space_basis(const BitMatrix& a);

} // namespace tmap
