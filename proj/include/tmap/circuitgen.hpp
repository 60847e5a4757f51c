// circuitgen.hpp
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tmap/circuit.hpp"
#include "tmap/library.hpp"
#include "tmap/mapper.hpp"
#include "tmap/solver.hpp"
#include "tmap/xag.hpp"

namespace tmap {

// Appends one Hadamard-conjugated phase block realizing the solved spec.
// wire_of maps instance wires (inputs first, then outputs) to circuit qubits.
void emit_block(QCircuit& c, const QuadraticSpec& spec, const SynthesisInstance& inst,
                const Solution& sol, const std::vector<int>& wire_of);

struct Layout {
    int qubits = 0;
    std::vector<std::pair<std::string, int>> inputs;   // PI name -> qubit
    std::vector<std::pair<std::string, int>> outputs;  // PO name -> qubit
    std::vector<std::pair<std::uint32_t, int>> nodes;  // covered node -> qubit
};

QCircuit emit_cover(const XagNetwork& net, const Cover& cover, Library& lib,
                    Layout* layout = nullptr);

std::string write_layout_json(const Layout& layout);
Layout parse_layout_json(const std::string& text);

} // namespace tmap
