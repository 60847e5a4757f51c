// circuit.cpp
#include "tmap/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tmap {

bool is_two_qubit(GateKind k) { return k == GateKind::Cx || k == GateKind::Cz; }

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Cx: return "cx";
        case GateKind::T: return "t";
        case GateKind::Tdg: return "tdg";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::Z: return "z";
        case GateKind::Cz: return "cz";
    }
    return "?";
}

void QCircuit::add(GateKind k, int q0, int q1) {
    const bool two = is_two_qubit(k);
    if (q0 < 0 || q0 >= qubits || (two && (q1 < 0 || q1 >= qubits || q1 == q0)) ||
        (!two && q1 != -1))
        throw std::invalid_argument("gate operands out of range");
    gates.push_back(Gate{k, q0, q1});
}

std::size_t QCircuit::t_count() const {
    return std::size_t(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind == GateKind::T || g.kind == GateKind::Tdg;
    }));
}

std::size_t QCircuit::clifford_count() const { return gates.size() - t_count(); }

std::string write_qasm(const QCircuit& c) {
    std::ostringstream os;
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << c.qubits << "];\n";
    for (const Gate& g : c.gates) {
        os << gate_name(g.kind) << " q[" << g.q0 << "]";
        if (is_two_qubit(g.kind)) os << ",q[" << g.q1 << "]";
        os << ";\n";
    }
    return os.str();
}

namespace {

[[noreturn]] void qasm_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("qasm line " + std::to_string(line) + ": " + what);
}

// Parses "q[<idx>]" and returns idx.
int parse_ref(const std::string& tok, std::size_t line) {
    if (tok.size() < 4 || tok.compare(0, 2, "q[") != 0 || tok.back() != ']')
        qasm_fail(line, "expected qubit reference, got '" + tok + "'");
    const std::string num = tok.substr(2, tok.size() - 3);
    try {
        std::size_t pos = 0;
        const int idx = std::stoi(num, &pos);
        if (pos != num.size() || idx < 0) throw std::invalid_argument("");
        return idx;
    } catch (...) {
        qasm_fail(line, "bad qubit index '" + num + "'");
    }
}

} // namespace

QCircuit parse_qasm(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    QCircuit c;
    bool saw_version = false, saw_qreg = false;
    while (std::getline(is, raw)) {
        ++lineno;
        if (auto slash = raw.find("//"); slash != std::string::npos) raw.resize(slash);
        std::istringstream ls(raw);
        std::string stmt;
        std::vector<std::string> stmts;
        {
            std::string acc;
            char ch;
            while (ls.get(ch)) {
                if (ch == ';') {
                    stmts.push_back(acc);
                    acc.clear();
                } else {
                    acc.push_back(ch);
                }
            }
            if (acc.find_first_not_of(" \t\r") != std::string::npos)
                qasm_fail(lineno, "statement missing ';'");
        }
        for (std::string& s : stmts) {
            std::istringstream ss(s);
            std::string head;
            if (!(ss >> head)) continue;
            if (head == "OPENQASM") {
                std::string ver;
                ss >> ver;
                if (ver != "2.0") qasm_fail(lineno, "unsupported OPENQASM version");
                saw_version = true;
                continue;
            }
            if (head == "include") continue;
            if (head == "qreg") {
                if (saw_qreg) qasm_fail(lineno, "multiple qreg declarations");
                std::string decl;
                ss >> decl;
                c.qubits = parse_ref(decl, lineno) ;
                // qreg q[N]: the bracketed number is the register size
                saw_qreg = true;
                continue;
            }
            if (!saw_version) qasm_fail(lineno, "missing OPENQASM header");
            if (!saw_qreg) qasm_fail(lineno, "gate before qreg declaration");
            GateKind kind;
            if (head == "h") kind = GateKind::H;
            else if (head == "x") kind = GateKind::X;
            else if (head == "cx") kind = GateKind::Cx;
            else if (head == "t") kind = GateKind::T;
            else if (head == "tdg") kind = GateKind::Tdg;
            else if (head == "s") kind = GateKind::S;
            else if (head == "sdg") kind = GateKind::Sdg;
            else if (head == "z") kind = GateKind::Z;
            else if (head == "cz") kind = GateKind::Cz;
            else qasm_fail(lineno, "unsupported gate '" + head + "'");
            std::string operands;
            std::getline(ss, operands);
            operands.erase(std::remove_if(operands.begin(), operands.end(),
                                          [](unsigned char ch) { return ch == ' ' || ch == '\t'; }),
                           operands.end());
            std::vector<std::string> refs;
            {
                std::string acc;
                for (char ch : operands) {
                    if (ch == ',') {
                        refs.push_back(acc);
                        acc.clear();
                    } else {
                        acc.push_back(ch);
                    }
                }
                if (!acc.empty()) refs.push_back(acc);
            }
            const std::size_t want = is_two_qubit(kind) ? 2 : 1;
            if (refs.size() != want) qasm_fail(lineno, "wrong operand count for '" + head + "'");
            const int q0 = parse_ref(refs[0], lineno);
            const int q1 = want == 2 ? parse_ref(refs[1], lineno) : -1;
            try {
                c.add(kind, q0, q1);
            } catch (const std::invalid_argument& e) {
                qasm_fail(lineno, e.what());
            }
        }
    }
    if (!saw_version) throw std::runtime_error("qasm line 1: missing OPENQASM header");
    if (!saw_qreg) throw std::runtime_error("qasm line 1: missing qreg declaration");
    return c;
}

} // namespace tmap
