// circuit.hpp
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tmap {

enum class GateKind : std::uint8_t { H, X, Cx, T, Tdg, S, Sdg, Z, Cz };

bool is_two_qubit(GateKind k);
const char* gate_name(GateKind k);

struct Gate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;  // second operand for Cx (target) and Cz, else -1
    friend bool operator==(const Gate&, const Gate&) = default;
};

struct QCircuit {
    int qubits = 0;
    std::vector<std::string> qubit_names;  // optional labels, informational only
    std::vector<Gate> gates;

    void add(GateKind k, int q0, int q1 = -1);
    std::size_t t_count() const;
    std::size_t clifford_count() const;
    friend bool operator==(const QCircuit&, const QCircuit&) = default;
};

std::string write_qasm(const QCircuit& c);
QCircuit parse_qasm(const std::string& text);

} // namespace tmap
