// solver.hpp — minimum-T synthesis of quadratic functions as a GF(2)
// phase-vector system with clean-ancilla don't-cares
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tmap/gf2.hpp"
#include "tmap/phasepoly.hpp"
#include "tmap/quadratic.hpp"

namespace tmap {

// A Clifford gate on the computed outputs whose phase, under the promise that
// output wire j holds f_j(x), shifts the achievable class vector at zero T
// cost.
enum class FreeGenKind : std::uint8_t {
    SOnOutput,       // S on output j: phase 2 * lift(f_j)
    ZOnOutput,       // Z on output j: phase 4 * lift(f_j)
    CzOutputInput,   // CZ(output j, input i): phase 4 * x_i * lift(f_j)
    CzOutputOutput,  // CZ(output j, output l): phase 4 * lift(f_j) * lift(f_l)
};

struct FreeGenerator {
    FreeGenKind kind;
    int output = 0;  // output index j
    int other = 0;   // input i for CzOutputInput, output l for CzOutputOutput
    ZetaPoly z8_image;    // exact phase over input variables, constant stripped
    PhaseVecF2 f2_image;  // class of the degree <= 3 part of z8_image
};

struct SolverConfig {
    std::size_t exact_nullity_limit = 26;  // exhaustive coset search up to this dimension
    std::uint64_t heuristic_budget = 50000;  // flip evaluations for the randomized search
    std::uint64_t seed = 1;
    double time_limit_s = 0;  // 0 = disabled; nonzero trades determinism for a wall cap
    int workers = 1;          // parallel chunks for the exhaustive search
};

struct SynthesisInstance {
    int inputs = 0;
    int outputs = 0;
    ZetaPoly target_z8;    // 4 * x_a * x_b * z_j per quadratic monomial
    PhaseVecF2 target_f2;  // its class vector
    std::vector<FreeGenerator> free_gens;
    SolverConfig config;

    int wires() const { return inputs + outputs; }
};

// One Clifford gate of the completion layer: a power of S on a single wire or
// a CZ on a pair, given as polynomial wires of the block.
struct CompletionGate {
    enum class Kind : std::uint8_t { SPower, Cz } kind;
    int wire0 = 0;
    int wire1 = 0;  // Cz only
    int power = 1;  // SPower: 1 = S, 2 = Z, 3 = Sdg

    bool operator==(const CompletionGate&) const = default;
};

struct Solution {
    BitVec selection;                        // K bits, bit k = parity mask k+1 selected
    std::map<std::uint32_t, int> parity_coeffs;  // support mask -> odd Z8 coefficient
    std::vector<std::size_t> chosen_free_gens;   // indices into instance free_gens
    std::vector<CompletionGate> clifford_completion;
    std::size_t t_count = 0;
    bool exact = false;
};

// Target and don't-care generators for a quadratic spec.  Throws on specs
// whose wire count exceeds kMaxWires.
SynthesisInstance build_instance(const QuadraticSpec& spec, SolverConfig config = {});

// The four generator families for every output (and output pair), in a fixed
// derivation order: per output j ascending: S, Z, CZ(j, input i) for i
// ascending; then CZ(j, l) for j < l ascending.
std::vector<FreeGenerator> derive_dont_cares(const QuadraticSpec& spec);

// Minimum-weight selection with the free generators as cost-0 columns.
// Exhaustive (exact = true) when the solution-coset dimension fits the
// configured limit, otherwise best-of randomized descent plus structural
// candidates (exact = false).  Ties break toward the lexicographically
// smallest selection.  Throws std::logic_error if the system is infeasible,
// which signals an internal error for well-formed instances.
Solution solve(const SynthesisInstance& inst);

// Assemble a full Solution from a known selection and generator subset:
// validates the class equation, picks odd coefficients that keep the
// completion small, and computes the completion.  Used by the library replay
// path.  Throws std::logic_error if the selection does not satisfy the
// instance.
Solution resolve_selection(const SynthesisInstance& inst, const BitVec& selection,
                           const std::vector<std::size_t>& gens, bool exact);

// Recompute the completion layer for a solution and check the Z8 accounting:
// residual degree-1 coefficients even, degree-2 divisible by 4, degree-3 and
// higher zero mod 8.  Throws std::logic_error on violation (solver bug).
std::vector<CompletionGate> clifford_completion(const SynthesisInstance& inst,
                                                const Solution& sol);

} // namespace tmap
