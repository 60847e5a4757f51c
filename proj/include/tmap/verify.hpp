// verify.hpp
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "tmap/circuit.hpp"
#include "tmap/circuitgen.hpp"
#include "tmap/phasepoly.hpp"
#include "tmap/xag.hpp"

namespace tmap {

inline constexpr int kMaxSimQubits = 14;
inline constexpr double kAmpTolerance = 1e-9;

struct StateVector {
    int qubits = 0;
    std::vector<std::complex<double>> amps;
};

// Exact gate-by-gate simulation from one computational basis state, with a
// unitarity check after every gate.
StateVector simulate(const QCircuit& c, std::uint64_t basis_input);

struct Verdict {
    bool ok = true;
    std::string message;
    std::uint64_t failing_assignment = 0;
    std::vector<bool> expected;
    std::vector<bool> actual;
};

// Checks that the circuit computes the network classically: every input
// assignment must land on a single basis state whose output-qubit bits match
// the network, with one common global phase.
Verdict check_classical(const QCircuit& c, const XagNetwork& net, const Layout& layout);

struct PhaseBlock {
    ZetaPoly poly;                          // phase over initial wire values
    std::vector<std::uint32_t> linear_map;  // final parity mask per wire
};

// Symbolic phase-polynomial extraction for CX + diagonal blocks (no H or X).
PhaseBlock extract_phase_poly(const QCircuit& c);

} // namespace tmap
