// phasepoly.cpp
#include "tmap/phasepoly.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <stdexcept>

namespace tmap {

Parity::Parity(std::uint32_t mask) : support(mask) {
    if (mask == 0) throw std::invalid_argument("Parity: empty support");
}

namespace {

// Subsets of {0..wires-1} of one size, as masks, ordered lexicographically by
// the sorted element list ({0,1} before {0,2} before {1,2}, ...).
void append_combinations(int wires, int size, std::uint32_t mask, int next,
                         std::vector<std::uint32_t>& out) {
    if (size == 0) {
        out.push_back(mask);
        return;
    }
    for (int v = next; v <= wires - size; ++v)
        append_combinations(wires, size - 1, mask | (1u << v), v + 1, out);
}

} // namespace

MonomialIndex::MonomialIndex(int wires) : wires_(wires) {
    for (int d = 1; d <= 3 && d <= wires; ++d)
        append_combinations(wires, d, 0, 0, masks_);
    index_of_mask_.assign(std::size_t(1) << wires, -1);
    for (std::size_t i = 0; i < masks_.size(); ++i)
        index_of_mask_[masks_[i]] = int(i);
}

const MonomialIndex& MonomialIndex::get(int wires) {
    if (wires < 1 || wires > kMaxWires)
        throw std::invalid_argument("MonomialIndex: wire count out of range");
    static std::array<const MonomialIndex*, kMaxWires + 1> cache{};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[wires]) cache[wires] = new MonomialIndex(wires);
    return *cache[wires];
}

ZetaPoly ZetaPoly::monomial(std::uint32_t mask, int coeff) {
    ZetaPoly p;
    p.add_term(mask, coeff);
    return p;
}

int ZetaPoly::coeff(std::uint32_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? 0 : it->second;
}

void ZetaPoly::add_term(std::uint32_t mask, int delta) {
    auto [it, inserted] = terms_.try_emplace(mask, 0);
    it->second = ((it->second + delta) % 8 + 8) % 8;
    if (it->second == 0) terms_.erase(it);
}

ZetaPoly& ZetaPoly::operator+=(const ZetaPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

ZetaPoly& ZetaPoly::operator-=(const ZetaPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

ZetaPoly operator*(const ZetaPoly& a, const ZetaPoly& b) {
    ZetaPoly out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma | mb, ca * cb);
    return out;
}

ZetaPoly ZetaPoly::scaled(int factor) const {
    ZetaPoly out;
    for (const auto& [m, c] : terms_) out.add_term(m, c * factor);
    return out;
}

int ZetaPoly::evaluate(std::uint32_t assignment) const {
    int v = 0;
    for (const auto& [m, c] : terms_)
        if ((m & assignment) == m) v += c;
    return ((v % 8) + 8) % 8;
}

PhaseVecF2 PhaseVecF2::zero(int wires) {
    return PhaseVecF2{wires, BitVec(MonomialIndex::get(wires).count())};
}

bool PhaseVecF2::test_monomial(std::uint32_t mask) const {
    const int idx = MonomialIndex::get(wires).index_of(mask);
    if (idx < 0) throw std::invalid_argument("PhaseVecF2: monomial out of range");
    return bits.test(std::size_t(idx));
}

void PhaseVecF2::flip_monomial(std::uint32_t mask) {
    const int idx = MonomialIndex::get(wires).index_of(mask);
    if (idx < 0) throw std::invalid_argument("PhaseVecF2: monomial out of range");
    bits.flip(std::size_t(idx));
}

PhaseVecF2& PhaseVecF2::operator^=(const PhaseVecF2& other) {
    if (wires != other.wires)
        throw std::invalid_argument("PhaseVecF2 xor: wire count mismatch");
    bits ^= other.bits;
    return *this;
}

ZetaPoly xor_lift(const std::vector<std::uint32_t>& anf) {
    // Fold lift(acc XOR m) = acc + m - 2*acc*m over the monomial list; the
    // result is order-independent, sorting just makes iteration predictable.
    std::vector<std::uint32_t> sorted(anf);
    std::sort(sorted.begin(), sorted.end());
    ZetaPoly acc;
    for (std::uint32_t m : sorted) {
        const ZetaPoly term = ZetaPoly::monomial(m);
        ZetaPoly cross = (acc * term).scaled(-2);
        acc += term;
        acc += cross;
    }
    return acc;
}

ZetaPoly parity_phase_z8(Parity p) {
    // Direct closed form: coefficient (-2)^(|T|-1) on subsets T, zero mod 8
    // from degree 4 on.  (Cross-checked against xor_lift in tests.)
    static constexpr int kCoeffByDegree[4] = {0, 1, -2, 4};
    ZetaPoly out;
    const int n = std::popcount(p.support);
    std::vector<int> wires_in;
    for (int w = 0; w < 32; ++w)
        if (p.support & (1u << w)) wires_in.push_back(w);
    const std::uint32_t subsets = 1u << n;
    for (std::uint32_t s = 1; s < subsets; ++s) {
        const int d = std::popcount(s);
        if (d > 3) continue;
        std::uint32_t mask = 0;
        for (int i = 0; i < n; ++i)
            if (s & (1u << i)) mask |= 1u << wires_in[i];
        out.add_term(mask, kCoeffByDegree[d]);
    }
    return out;
}

PhaseVecF2 reduce_f2(const ZetaPoly& z, int wires) {
    PhaseVecF2 out = PhaseVecF2::zero(wires);
    const MonomialIndex& idx = MonomialIndex::get(wires);
    for (const auto& [mask, c] : z.terms()) {
        if (mask == 0) continue;  // constant = global phase
        if (mask >> wires)
            throw std::invalid_argument("reduce_f2: monomial outside wire range");
        const int d = std::popcount(mask);
        bool bit = false;
        switch (d) {
            case 1: bit = c & 1; break;
            case 2:
                if (c & 1) throw std::invalid_argument("reduce_f2: odd degree-2 coefficient");
                bit = (c >> 1) & 1;
                break;
            case 3:
                if (c & 3) throw std::invalid_argument("reduce_f2: degree-3 coefficient not divisible by 4");
                bit = (c >> 2) & 1;
                break;
            default:
                throw std::invalid_argument("reduce_f2: nonzero coefficient at degree >= 4");
        }
        if (bit) out.bits.set(std::size_t(idx.index_of(mask)));
    }
    return out;
}

PhaseVecF2 parity_phase_f2(Parity p, int wires) {
    if (p.support >> wires)
        throw std::invalid_argument("parity_phase_f2: support outside wire range");
    PhaseVecF2 out = PhaseVecF2::zero(wires);
    const MonomialIndex& idx = MonomialIndex::get(wires);
    for (std::size_t i = 0; i < idx.count(); ++i) {
        const std::uint32_t m = idx.mask_at(i);
        if ((m & p.support) == m) out.bits.set(i);
    }
    return out;
}

const BitMatrix& candidate_phase_matrix(int wires) {
    if (wires < 1 || wires > kMaxWires)
        throw std::invalid_argument("candidate_phase_matrix: wire count out of range");
    static std::array<const BitMatrix*, kMaxWires + 1> cache{};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[wires]) {
        const MonomialIndex& idx = MonomialIndex::get(wires);
        const std::size_t k = (std::size_t(1) << wires) - 1;
        auto* m = new BitMatrix(idx.count(), k);
        for (std::size_t col = 0; col < k; ++col) {
            const std::uint32_t support = std::uint32_t(col + 1);
            for (std::size_t row = 0; row < idx.count(); ++row) {
                const std::uint32_t mono = idx.mask_at(row);
                if ((mono & support) == mono) m->set(row, col);
            }
        }
        cache[wires] = m;
    }
    return *cache[wires];
}

} // namespace tmap
