// verify.cpp
#include "tmap/verify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tmap {

namespace {

using cd = std::complex<double>;

void check_norm(const std::vector<cd>& amps) {
    double n2 = 0.0;
    for (const cd& a : amps) n2 += std::norm(a);
    if (std::abs(std::sqrt(n2) - 1.0) > kAmpTolerance)
        throw std::logic_error("simulator lost unitarity");
}

} // namespace

StateVector simulate(const QCircuit& c, std::uint64_t basis_input) {
    if (c.qubits > kMaxSimQubits)
        throw std::invalid_argument("simulate: too many qubits");
    const std::uint64_t dim = std::uint64_t(1) << c.qubits;
    if (basis_input >= dim) throw std::invalid_argument("simulate: basis index out of range");

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cd omega(inv_sqrt2, inv_sqrt2);  // exp(i pi / 4)

    StateVector sv;
    sv.qubits = c.qubits;
    sv.amps.assign(dim, cd(0.0, 0.0));
    sv.amps[basis_input] = cd(1.0, 0.0);

    for (const Gate& g : c.gates) {
        const std::uint64_t b0 = std::uint64_t(1) << g.q0;
        const std::uint64_t b1 = g.q1 >= 0 ? std::uint64_t(1) << g.q1 : 0;
        switch (g.kind) {
            case GateKind::H:
                for (std::uint64_t i = 0; i < dim; ++i) {
                    if (i & b0) continue;
                    const cd a = sv.amps[i], b = sv.amps[i | b0];
                    sv.amps[i] = (a + b) * inv_sqrt2;
                    sv.amps[i | b0] = (a - b) * inv_sqrt2;
                }
                break;
            case GateKind::X:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (!(i & b0)) std::swap(sv.amps[i], sv.amps[i | b0]);
                break;
            case GateKind::Cx:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if ((i & b0) && !(i & b1)) std::swap(sv.amps[i], sv.amps[i | b1]);
                break;
            case GateKind::T:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (i & b0) sv.amps[i] *= omega;
                break;
            case GateKind::Tdg:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (i & b0) sv.amps[i] *= std::conj(omega);
                break;
            case GateKind::S:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (i & b0) sv.amps[i] *= cd(0.0, 1.0);
                break;
            case GateKind::Sdg:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (i & b0) sv.amps[i] *= cd(0.0, -1.0);
                break;
            case GateKind::Z:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if (i & b0) sv.amps[i] = -sv.amps[i];
                break;
            case GateKind::Cz:
                for (std::uint64_t i = 0; i < dim; ++i)
                    if ((i & b0) && (i & b1)) sv.amps[i] = -sv.amps[i];
                break;
        }
        check_norm(sv.amps);
    }
    return sv;
}

Verdict check_classical(const QCircuit& c, const XagNetwork& net, const Layout& layout) {
    if (c.qubits > kMaxSimQubits)
        throw std::invalid_argument("check_classical: too many qubits");
    if (layout.inputs.size() != net.pi_count() || layout.outputs.size() != net.po_count())
        throw std::invalid_argument("check_classical: layout does not match the network");
    for (const auto& [name, q] : layout.inputs)
        if (q < 0 || q >= c.qubits)
            throw std::invalid_argument("check_classical: layout input qubit out of range");
    for (const auto& [name, q] : layout.outputs)
        if (q < 0 || q >= c.qubits)
            throw std::invalid_argument("check_classical: layout output qubit out of range");

    const std::size_t n_in = net.pi_count();
    cd ref(0.0, 0.0);
    bool have_ref = false;

    for (std::uint64_t assignment = 0; assignment < (std::uint64_t(1) << n_in); ++assignment) {
        std::uint64_t start = 0;
        std::vector<bool> in_bits(n_in);
        for (std::size_t i = 0; i < n_in; ++i) {
            const bool bit = (assignment >> i) & 1;
            in_bits[i] = bit;
            if (bit) start |= std::uint64_t(1) << layout.inputs[i].second;
        }
        const StateVector sv = simulate(c, start);

        std::uint64_t best = 0;
        double best_mag = -1.0;
        for (std::uint64_t i = 0; i < sv.amps.size(); ++i) {
            const double mag = std::abs(sv.amps[i]);
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }

        Verdict v;
        v.failing_assignment = assignment;
        if (std::abs(best_mag - 1.0) > kAmpTolerance) {
            v.ok = false;
            v.message = "state is not a single basis state (superposed output)";
            return v;
        }
        bool stray = false;
        for (std::uint64_t i = 0; i < sv.amps.size(); ++i)
            if (i != best && std::abs(sv.amps[i]) > kAmpTolerance) stray = true;
        if (stray) {
            v.ok = false;
            v.message = "stray amplitude outside the dominant basis state";
            return v;
        }

        const std::vector<bool> expected = net.evaluate(in_bits);
        std::vector<bool> actual;
        actual.reserve(expected.size());
        for (const auto& [name, q] : layout.outputs) actual.push_back((best >> q) & 1);
        if (actual != expected) {
            v.ok = false;
            std::ostringstream os;
            os << "output bits differ on assignment " << assignment << ": expected";
            for (bool b : expected) os << ' ' << int(b);
            os << ", actual";
            for (bool b : actual) os << ' ' << int(b);
            v.message = os.str();
            v.expected = expected;
            v.actual = actual;
            return v;
        }

        const cd amp = sv.amps[best];
        if (!have_ref) {
            ref = amp;
            have_ref = true;
        } else if (std::abs(amp - ref) > kAmpTolerance) {
            v.ok = false;
            v.message = "relative phase between input assignments";
            return v;
        }
    }
    return Verdict{};
}

namespace {

ZetaPoly lift_parity(std::uint32_t mask) {
    std::vector<std::uint32_t> vars;
    for (int b = 0; b < 32; ++b)
        if (mask & (1u << b)) vars.push_back(1u << b);
    return xor_lift(vars);
}

} // namespace

PhaseBlock extract_phase_poly(const QCircuit& c) {
    if (c.qubits > 24) throw std::invalid_argument("extract_phase_poly: too many wires");
    PhaseBlock block;
    block.linear_map.resize(std::size_t(c.qubits));
    for (int w = 0; w < c.qubits; ++w) block.linear_map[std::size_t(w)] = 1u << w;

    for (const Gate& g : c.gates) {
        int coeff = 0;
        switch (g.kind) {
            case GateKind::Cx:
                block.linear_map[std::size_t(g.q1)] ^= block.linear_map[std::size_t(g.q0)];
                continue;
            case GateKind::T: coeff = 1; break;
            case GateKind::Tdg: coeff = 7; break;
            case GateKind::S: coeff = 2; break;
            case GateKind::Sdg: coeff = 6; break;
            case GateKind::Z: coeff = 4; break;
            case GateKind::Cz: {
                const ZetaPoly prod = lift_parity(block.linear_map[std::size_t(g.q0)]) *
                                      lift_parity(block.linear_map[std::size_t(g.q1)]);
                block.poly += prod.scaled(4);
                continue;
            }
            case GateKind::H:
            case GateKind::X:
                throw std::invalid_argument(std::string("extract_phase_poly: non-block gate '") +
                                            gate_name(g.kind) + "'");
        }
        block.poly += lift_parity(block.linear_map[std::size_t(g.q0)]).scaled(coeff);
    }
    return block;
}

} // namespace tmap
