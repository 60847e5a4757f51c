// library.hpp — reusable store of solved quadratic functions keyed by their
// canonical quadratic tensor
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmap/quadratic.hpp"
#include "tmap/solver.hpp"

namespace tmap {

// Serialized canonical form of a spec's quadratic monomial tensor, minimized
// over input and output permutations.  Linear terms and constants are
// excluded: they cost no T gates and negations only perturb them.
struct CanonicalKey {
    std::vector<std::uint8_t> bytes;

    auto operator<=>(const CanonicalKey&) const = default;
    std::string hex() const;
    static CanonicalKey from_hex(const std::string& s);
};

// Permutations mapping a spec onto its canonical representative:
// canonical input index = input_perm[original index], same for outputs.
struct Canonicalized {
    CanonicalKey key;
    std::vector<int> input_perm;
    std::vector<int> output_perm;
};

Canonicalized canonicalize(const QuadraticSpec& spec);

// Linear-free spec encoded by a key (the function each entry is solved for).
QuadraticSpec canonical_representative(const CanonicalKey& key);

// Free generator reference in canonical wire numbering.
struct GenRef {
    FreeGenKind kind;
    int output = 0;
    int other = 0;
    bool operator==(const GenRef&) const = default;
};

struct LibraryEntry {
    CanonicalKey key;
    int inputs = 0;
    int outputs = 0;
    std::size_t t_count = 0;
    bool exact = false;
    std::map<std::uint32_t, int> parity_coeffs;  // canonical parity mask -> odd coefficient
    std::vector<GenRef> gens;
    std::vector<CompletionGate> completion;  // canonical wire order
};

struct Library {
    int version = 1;
    int wires = 0;  // advertised wire ceiling for entries
    SolverConfig config;
    std::map<CanonicalKey, LibraryEntry> entries;
};

// Solves the canonical representative of every distinct key among the specs.
// Deterministic: same spec set, config and seed give identical libraries.
Library synthesize_library(int wires, const std::vector<QuadraticSpec>& specs,
                           SolverConfig config = {});

// Entry lookup by canonical key, with the permutations needed to map the
// query spec onto the stored representative.
std::optional<std::pair<const LibraryEntry*, Canonicalized>> lookup(
    const Library& lib, const QuadraticSpec& spec);

// Lookup that solves and inserts the canonical representative on a miss,
// using the library's own solver config.  'solved' reports whether a solver
// call happened.
std::pair<const LibraryEntry*, Canonicalized> lookup_or_solve(Library& lib,
                                                              const QuadraticSpec& spec,
                                                              bool* solved = nullptr);

// Rebuild a full Solution of 'spec' from a stored entry: permutes wires back,
// retargets chosen generators for the spec's linear terms (an S or output-CZ
// generator on an output with linear debris is equivalent to the same
// generator plus input-CZ generators on the debris wires), and recomputes the
// completion for the actual instance.
Solution instantiate(const LibraryEntry& entry, const QuadraticSpec& spec,
                     const Canonicalized& canon, const SynthesisInstance& inst);

// Versioned line-oriented text format; save is byte-deterministic.
void save_library(const Library& lib, const std::string& path);
Library load_library(const std::string& path);
std::string write_library_text(const Library& lib);
Library parse_library_text(const std::string& text);

} // namespace tmap
