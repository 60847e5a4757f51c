// phasepoly.hpp — multilinear phase polynomials with coefficients mod 8 and
// their parity-class reduction over GF(2)
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tmap/gf2.hpp"

namespace tmap {

// Hard cap on wires handled by the phase machinery (monomial masks fit easily
// and every search stays desk-sized well below this).
inline constexpr int kMaxWires = 12;

// Nonempty wire subset whose XOR is rotated by a T-class gate.
struct Parity {
    std::uint32_t support = 0;  // bit i = wire i, must be nonzero
    explicit Parity(std::uint32_t mask);
};

// Enumerates the monomials of degree 1..3 over a wire set, ordered by degree
// and then lexicographically by the sorted element list.  This ordering is the
// row convention of every phase vector and matrix below.
class MonomialIndex {
public:
    static const MonomialIndex& get(int wires);  // cached per wire count

    int wires() const { return wires_; }
    std::size_t count() const { return masks_.size(); }
    std::uint32_t mask_at(std::size_t idx) const { return masks_[idx]; }
    int index_of(std::uint32_t mask) const { return index_of_mask_[mask]; }  // -1 if absent

private:
    explicit MonomialIndex(int wires);
    int wires_;
    std::vector<std::uint32_t> masks_;
    std::vector<int> index_of_mask_;
};

// Multilinear polynomial over boolean wire values with coefficients in Z8.
// Keys are monomial bitmasks (mask 0 = the constant term); zero coefficients
// are never stored.
class ZetaPoly {
public:
    ZetaPoly() = default;
    static ZetaPoly monomial(std::uint32_t mask, int coeff = 1);

    const std::map<std::uint32_t, int>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int coeff(std::uint32_t mask) const;

    void add_term(std::uint32_t mask, int delta);  // coefficient arithmetic mod 8
    ZetaPoly& operator+=(const ZetaPoly& other);
    ZetaPoly& operator-=(const ZetaPoly& other);
    friend ZetaPoly operator+(ZetaPoly a, const ZetaPoly& b) { a += b; return a; }
    friend ZetaPoly operator-(ZetaPoly a, const ZetaPoly& b) { a -= b; return a; }

    // Multilinear product: x_S * x_T = x_{S|T}.
    friend ZetaPoly operator*(const ZetaPoly& a, const ZetaPoly& b);
    ZetaPoly scaled(int factor) const;

    // Value mod 8 on the boolean assignment given by 'assignment' bits.
    int evaluate(std::uint32_t assignment) const;

    // Drop the constant term (a global phase in every use here).
    void strip_constant() { terms_.erase(0); }

    bool operator==(const ZetaPoly& other) const = default;

private:
    std::map<std::uint32_t, int> terms_;
};

// GF(2) class vector of a phase polynomial: one bit per monomial of degree
// <= 3 in MonomialIndex order.
struct PhaseVecF2 {
    int wires = 0;
    BitVec bits;

    static PhaseVecF2 zero(int wires);
    bool test_monomial(std::uint32_t mask) const;
    void flip_monomial(std::uint32_t mask);
    PhaseVecF2& operator^=(const PhaseVecF2& other);
    bool operator==(const PhaseVecF2& other) const = default;
};

// Integer-lift of an XOR of monomials: substitutes a XOR b = a + b - 2ab
// recursively and reduces multilinearly mod 8.  'anf' lists monomial masks
// (mask 0 allowed for a constant-1 term).
ZetaPoly xor_lift(const std::vector<std::uint32_t>& anf);

// Phase contributed by one T gate on a parity: coefficient (-2)^(|T|-1) on
// every nonempty subset T of the support (degree >= 4 vanishes mod 8).
ZetaPoly parity_phase_z8(Parity p);

// GF(2) class of a realizable phase polynomial.  Degree-1 coefficients reduce
// mod 2, degree-2 mod 4 after halving, degree-3 mod 8 after quartering.
// Throws std::invalid_argument if a coefficient violates the realizability
// preconditions (odd degree-2, degree-3 not divisible by 4, nonzero degree-4+).
PhaseVecF2 reduce_f2(const ZetaPoly& z, int wires);

// Class of a single T on a parity: bits at every subset of the support with
// size <= 3.  Equals reduce_f2(parity_phase_z8(p), wires).
PhaseVecF2 parity_phase_f2(Parity p, int wires);

// M x K matrix whose column k is parity_phase_f2 of the parity with support
// mask k+1; M = #monomials of degree <= 3, K = 2^wires - 1.
const BitMatrix& candidate_phase_matrix(int wires);  // cached per wire count

} // namespace tmap
