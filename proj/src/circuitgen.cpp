// circuitgen.cpp
#include "tmap/circuitgen.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace tmap {

namespace {

void emit_t_power(QCircuit& c, int qubit, int coeff) {
    switch (coeff & 7) {
        case 1: c.add(GateKind::T, qubit); break;
        case 3: c.add(GateKind::S, qubit); c.add(GateKind::T, qubit); break;
        case 5: c.add(GateKind::Z, qubit); c.add(GateKind::T, qubit); break;
        case 7: c.add(GateKind::Tdg, qubit); break;
        default: throw std::logic_error("parity coefficient must be odd");
    }
}

} // namespace

void emit_block(QCircuit& c, const QuadraticSpec& spec, const SynthesisInstance& inst,
                const Solution& sol, const std::vector<int>& wire_of) {
    const int n = spec.inputs;
    const int m = spec.output_count();
    if (int(wire_of.size()) != n + m)
        throw std::invalid_argument("emit_block: wire map has gaps");
    if (std::set<int>(wire_of.begin(), wire_of.end()).size() != wire_of.size())
        throw std::invalid_argument("emit_block: wire map repeats a qubit");

    for (int j = 0; j < m; ++j) c.add(GateKind::H, wire_of[std::size_t(n + j)]);

    for (const auto& [mask, coeff] : sol.parity_coeffs) {
        std::vector<int> support;
        for (int w = 0; w < n + m; ++w)
            if (mask & (1u << w)) support.push_back(wire_of[std::size_t(w)]);
        const int pivot = support.back();
        for (std::size_t i = 0; i + 1 < support.size(); ++i)
            c.add(GateKind::Cx, support[i], pivot);
        emit_t_power(c, pivot, coeff);
        for (std::size_t i = support.size() - 1; i-- > 0;)
            c.add(GateKind::Cx, support[i], pivot);
    }

    for (const CompletionGate& g : sol.clifford_completion) {
        if (g.kind == CompletionGate::Kind::Cz) {
            c.add(GateKind::Cz, wire_of[std::size_t(g.wire0)], wire_of[std::size_t(g.wire1)]);
        } else {
            switch (g.power) {
                case 1: c.add(GateKind::S, wire_of[std::size_t(g.wire0)]); break;
                case 2: c.add(GateKind::Z, wire_of[std::size_t(g.wire0)]); break;
                case 3: c.add(GateKind::Sdg, wire_of[std::size_t(g.wire0)]); break;
                default: throw std::logic_error("unexpected completion power");
            }
        }
    }

    for (int j = 0; j < m; ++j) {
        const OutputAnf& out = spec.outputs[std::size_t(j)];
        for (int i = 0; i < n; ++i)
            if (out.linear & (1u << i))
                c.add(GateKind::Cz, wire_of[std::size_t(i)], wire_of[std::size_t(n + j)]);
        if (out.constant) c.add(GateKind::Z, wire_of[std::size_t(n + j)]);
    }

    for (int j = 0; j < m; ++j) c.add(GateKind::H, wire_of[std::size_t(n + j)]);

    // Free-generator Cliffords act after the block, where the output qubits
    // already hold their function values.
    for (std::size_t idx : sol.chosen_free_gens) {
        const FreeGenerator& gen = inst.free_gens.at(idx);
        const int out_q = wire_of[std::size_t(n + gen.output)];
        switch (gen.kind) {
            case FreeGenKind::SOnOutput: c.add(GateKind::S, out_q); break;
            case FreeGenKind::ZOnOutput: c.add(GateKind::Z, out_q); break;
            case FreeGenKind::CzOutputInput:
                c.add(GateKind::Cz, out_q, wire_of[std::size_t(gen.other)]);
                break;
            case FreeGenKind::CzOutputOutput:
                c.add(GateKind::Cz, out_q, wire_of[std::size_t(n + gen.other)]);
                break;
        }
    }
}

QCircuit emit_cover(const XagNetwork& net, const Cover& cover, Library& lib, Layout* layout) {
    QCircuit c;
    Layout local;
    Layout& lay = layout ? *layout : local;
    lay = Layout{};

    std::vector<int> qubit_of(net.size(), -1);
    for (std::size_t i = 0; i < net.pi_count(); ++i) {
        const std::uint32_t id = net.pis()[i];
        qubit_of[id] = int(i);
        c.qubit_names.push_back(net.pi_name(i).empty() ? "x" + std::to_string(i)
                                                       : net.pi_name(i));
        lay.inputs.emplace_back(c.qubit_names.back(), int(i));
    }
    c.qubits = int(net.pi_count());
    for (std::uint32_t id : cover.order) {
        qubit_of[id] = c.qubits++;
        c.qubit_names.push_back("n" + std::to_string(id));
        lay.nodes.emplace_back(id, qubit_of[id]);
    }

    for (std::uint32_t id : cover.order) {
        const Cut& cut = cover.chosen.at(id);
        std::vector<int> wire_of;
        for (std::uint32_t leaf : cut.leaves) {
            if (qubit_of[leaf] < 0)
                throw std::logic_error("emit_cover: cut leaf is neither a PI nor covered");
            wire_of.push_back(qubit_of[leaf]);
        }
        wire_of.push_back(qubit_of[id]);

        const QuadraticSpec spec = cut_spec(cut);
        const auto [entry, canon] = lookup_or_solve(lib, spec);
        const SynthesisInstance inst = build_instance(spec, lib.config);
        const Solution sol = instantiate(*entry, spec, canon, inst);
        if (sol.t_count != entry->t_count)
            throw std::logic_error("emit_cover: replayed block changed its T count");
        emit_block(c, spec, inst, sol, wire_of);
    }

    for (std::size_t i = 0; i < net.po_count(); ++i) {
        const Signal po = net.po(i);
        if (qubit_of[po.node] < 0)
            throw std::logic_error("emit_cover: output node is not covered");
        int q = qubit_of[po.node];
        const std::string name =
            net.po_name(i).empty() ? "y" + std::to_string(i) : net.po_name(i);
        if (po.neg) {
            const int fixup = c.qubits++;
            c.qubit_names.push_back(name + "_inv");
            c.add(GateKind::Cx, q, fixup);
            c.add(GateKind::X, fixup);
            q = fixup;
        }
        lay.outputs.emplace_back(name, q);
    }
    lay.qubits = c.qubits;
    return c;
}

std::string write_layout_json(const Layout& layout) {
    nlohmann::json j;
    j["qubits"] = layout.qubits;
    j["inputs"] = nlohmann::json::array();
    for (const auto& [name, q] : layout.inputs)
        j["inputs"].push_back({{"name", name}, {"qubit", q}});
    j["outputs"] = nlohmann::json::array();
    for (const auto& [name, q] : layout.outputs)
        j["outputs"].push_back({{"name", name}, {"qubit", q}});
    j["nodes"] = nlohmann::json::array();
    for (const auto& [node, q] : layout.nodes)
        j["nodes"].push_back({{"node", node}, {"qubit", q}});
    return j.dump(2) + "\n";
}

Layout parse_layout_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        Layout lay;
        lay.qubits = j.at("qubits").get<int>();
        for (const auto& e : j.at("inputs"))
            lay.inputs.emplace_back(e.at("name").get<std::string>(), e.at("qubit").get<int>());
        for (const auto& e : j.at("outputs"))
            lay.outputs.emplace_back(e.at("name").get<std::string>(), e.at("qubit").get<int>());
        if (j.contains("nodes"))
            for (const auto& e : j.at("nodes"))
                lay.nodes.emplace_back(e.at("node").get<std::uint32_t>(),
                                       e.at("qubit").get<int>());
        return lay;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("layout json: ") + e.what());
    }
}

} // namespace tmap
