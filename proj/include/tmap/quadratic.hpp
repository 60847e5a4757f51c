// quadratic.hpp — multi-output boolean functions with ANF degree <= 2
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tmap/phasepoly.hpp"

namespace tmap {

// ANF of one output over the spec's inputs, split by degree.  Quadratic
// monomials are two-bit masks over input wires, sorted and unique.
struct OutputAnf {
    std::vector<std::uint32_t> quad;  // each mask has popcount 2
    std::uint32_t linear = 0;         // bit i = monomial x_i present
    bool constant = false;

    bool operator==(const OutputAnf&) const = default;
};

struct QuadraticSpec {
    int inputs = 0;
    std::vector<OutputAnf> outputs;

    int output_count() const { return int(outputs.size()); }
    int wires() const { return inputs + output_count(); }

    // Throws std::invalid_argument on malformed monomials, duplicate entries,
    // an empty output list, or a wire count outside the supported range.
    void validate() const {
        if (inputs < 0) throw std::invalid_argument("QuadraticSpec: negative input count");
        if (outputs.empty()) throw std::invalid_argument("QuadraticSpec: no outputs");
        if (wires() < 1 || wires() > kMaxWires)
            throw std::invalid_argument("QuadraticSpec: wire count out of range");
        const std::uint32_t in_mask = inputs >= 32 ? ~0u : (1u << inputs) - 1;
        for (const OutputAnf& o : outputs) {
            if (o.linear & ~in_mask)
                throw std::invalid_argument("QuadraticSpec: linear term outside inputs");
            if (!std::is_sorted(o.quad.begin(), o.quad.end()) ||
                std::adjacent_find(o.quad.begin(), o.quad.end()) != o.quad.end())
                throw std::invalid_argument("QuadraticSpec: quadratic monomials not sorted/unique");
            for (std::uint32_t q : o.quad)
                if (std::popcount(q) != 2 || (q & ~in_mask))
                    throw std::invalid_argument("QuadraticSpec: malformed quadratic monomial");
        }
    }

    // Full ANF of output j as monomial masks (0 for the constant term).
    std::vector<std::uint32_t> anf_masks(int j) const {
        const OutputAnf& o = outputs[std::size_t(j)];
        std::vector<std::uint32_t> masks;
        if (o.constant) masks.push_back(0);
        for (int i = 0; i < inputs; ++i)
            if (o.linear & (1u << i)) masks.push_back(1u << i);
        masks.insert(masks.end(), o.quad.begin(), o.quad.end());
        std::sort(masks.begin(), masks.end());
        return masks;
    }

    bool operator==(const QuadraticSpec&) const = default;
};

} // namespace tmap
