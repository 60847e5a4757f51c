// xag.cpp
#include "tmap/xag.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tmap {

// ---------------------------------------------------------------------------
// Network construction

Signal XagNetwork::add_pi(std::string name) {
    const std::uint32_t id = std::uint32_t(nodes_.size());
    nodes_.push_back(XagNode{NodeKind::Pi, {}, {}});
    pis_.push_back(id);
    pi_names_.push_back(std::move(name));
    return Signal(id, false);
}

Signal XagNetwork::hashed_node(NodeKind kind, Signal f0, Signal f1, bool out_neg) {
    const auto key = std::make_tuple(int(kind), f0.node, f0.neg, f1.node, f1.neg);
    if (auto it = strash_.find(key); it != strash_.end())
        return Signal(it->second, out_neg);
    const std::uint32_t id = std::uint32_t(nodes_.size());
    nodes_.push_back(XagNode{kind, f0, f1});
    strash_.emplace(key, id);
    return Signal(id, out_neg);
}

Signal XagNetwork::make_and(Signal a, Signal b) {
    if (a.node >= nodes_.size() || b.node >= nodes_.size())
        throw std::invalid_argument("make_and: fanin out of range");
    if (a.node == b.node) {
        if (a.neg == b.neg) return a;  // x & x = x
        throw std::invalid_argument("make_and: contradictory fanins yield a constant");
    }
    if (b.node < a.node) std::swap(a, b);
    return hashed_node(NodeKind::And, a, b, false);
}

Signal XagNetwork::make_xor(Signal a, Signal b) {
    if (a.node >= nodes_.size() || b.node >= nodes_.size())
        throw std::invalid_argument("make_xor: fanin out of range");
    if (a.node == b.node)
        throw std::invalid_argument("make_xor: identical fanins yield a constant");
    if (b.node < a.node) std::swap(a, b);
    // Complements commute with XOR, so edges into an XOR node stay plain and
    // the parity moves to the produced signal.
    const bool out_neg = a.neg ^ b.neg;
    return hashed_node(NodeKind::Xor, Signal(a.node, false), Signal(b.node, false), out_neg);
}

void XagNetwork::add_po(Signal s, std::string name) {
    if (s.node >= nodes_.size()) throw std::invalid_argument("add_po: signal out of range");
    pos_.push_back(s);
    po_names_.push_back(std::move(name));
}

std::size_t XagNetwork::and_count() const {
    return std::size_t(std::count_if(nodes_.begin(), nodes_.end(), [](const XagNode& n) {
        return n.kind == NodeKind::And;
    }));
}

std::size_t XagNetwork::xor_count() const {
    return std::size_t(std::count_if(nodes_.begin(), nodes_.end(), [](const XagNode& n) {
        return n.kind == NodeKind::Xor;
    }));
}

std::vector<bool> XagNetwork::node_values(const std::vector<bool>& pi_values) const {
    if (pi_values.size() != pis_.size())
        throw std::invalid_argument("node_values: wrong input count");
    std::vector<bool> val(nodes_.size(), false);
    std::size_t next_pi = 0;
    for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
        const XagNode& n = nodes_[id];
        switch (n.kind) {
            case NodeKind::Pi: val[id] = pi_values[next_pi++]; break;
            case NodeKind::And:
                val[id] = (val[n.fanin0.node] ^ n.fanin0.neg) &&
                          (val[n.fanin1.node] ^ n.fanin1.neg);
                break;
            case NodeKind::Xor:
                val[id] = (val[n.fanin0.node] ^ n.fanin0.neg) ^
                          (val[n.fanin1.node] ^ n.fanin1.neg);
                break;
        }
    }
    return val;
}

std::vector<bool> XagNetwork::evaluate(const std::vector<bool>& pi_values) const {
    const std::vector<bool> val = node_values(pi_values);
    std::vector<bool> out;
    out.reserve(pos_.size());
    for (const Signal& s : pos_) out.push_back(val[s.node] ^ s.neg);
    return out;
}

// ---------------------------------------------------------------------------
// Truth tables and ANF

namespace {

constexpr int kMaxTtVars = 16;

std::uint64_t keep_mask(int vars) {
    const std::size_t bits = std::size_t(1) << vars;
    return bits >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << bits) - 1;
}

constexpr std::uint64_t kVarPattern[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

TruthTable var_tt(int vars, int v) {
    TruthTable tt(vars);
    for (std::size_t w = 0; w < tt.words.size(); ++w) {
        if (v < 6)
            tt.words[w] = kVarPattern[v] & keep_mask(vars);
        else
            tt.words[w] = (w >> (v - 6)) & 1 ? ~std::uint64_t(0) : 0;
    }
    return tt;
}

} // namespace

TruthTable::TruthTable(int v) : vars(v) {
    if (v < 0 || v > kMaxTtVars) throw std::invalid_argument("truth table: variable count out of range");
    words.assign(std::max<std::size_t>(1, (std::size_t(1) << v) / 64), 0);
}

bool TruthTable::test(std::uint32_t idx) const {
    return (words[idx >> 6] >> (idx & 63)) & 1;
}

void TruthTable::set(std::uint32_t idx, bool v) {
    if (v)
        words[idx >> 6] |= std::uint64_t(1) << (idx & 63);
    else
        words[idx >> 6] &= ~(std::uint64_t(1) << (idx & 63));
}

TruthTable simulate_cut(const XagNetwork& net, std::uint32_t root,
                        const std::vector<std::uint32_t>& leaves) {
    if (root >= net.size()) throw std::invalid_argument("simulate_cut: root out of range");
    if (leaves.empty() || leaves.size() > kMaxTtVars)
        throw std::invalid_argument("simulate_cut: leaf count out of range");
    const int vars = int(leaves.size());

    std::map<std::uint32_t, TruthTable> memo;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i] >= net.size()) throw std::invalid_argument("simulate_cut: leaf out of range");
        if (!memo.emplace(leaves[i], var_tt(vars, int(i))).second)
            throw std::invalid_argument("simulate_cut: duplicate leaf");
    }

    const std::uint64_t keep = keep_mask(vars);
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
        const std::uint32_t id = stack.back();
        if (memo.count(id)) {
            stack.pop_back();
            continue;
        }
        const XagNode& n = net.node(id);
        if (n.kind == NodeKind::Pi)
            throw std::invalid_argument("simulate_cut: leaves do not form a cut of the root");
        const bool have0 = memo.count(n.fanin0.node) != 0;
        const bool have1 = memo.count(n.fanin1.node) != 0;
        if (!have0) stack.push_back(n.fanin0.node);
        if (!have1) stack.push_back(n.fanin1.node);
        if (!have0 || !have1) continue;
        stack.pop_back();

        const TruthTable& t0 = memo.at(n.fanin0.node);
        const TruthTable& t1 = memo.at(n.fanin1.node);
        TruthTable out(vars);
        for (std::size_t w = 0; w < out.words.size(); ++w) {
            const std::uint64_t a = t0.words[w] ^ (n.fanin0.neg ? keep : 0);
            const std::uint64_t b = t1.words[w] ^ (n.fanin1.neg ? keep : 0);
            out.words[w] = n.kind == NodeKind::And ? (a & b) : (a ^ b);
        }
        memo.emplace(id, std::move(out));
    }
    return memo.at(root);
}

Anf anf_from_tt(const TruthTable& tt) {
    TruthTable work = tt;
    const std::uint64_t keep = keep_mask(work.vars);
    for (int v = 0; v < work.vars; ++v) {
        if (v < 6) {
            for (std::uint64_t& w : work.words)
                w = (w ^ ((w & ~kVarPattern[v]) << (1 << v))) & keep;
        } else {
            const std::size_t step = std::size_t(1) << (v - 6);
            for (std::size_t w = 0; w < work.words.size(); ++w)
                if ((w >> (v - 6)) & 1) work.words[w] ^= work.words[w ^ step];
        }
    }
    Anf anf;
    anf.vars = work.vars;
    for (std::uint32_t idx = 0; idx < work.bit_count(); ++idx)
        if (work.test(idx)) anf.monomials.push_back(idx);
    return anf;
}

Anf anf_of_cut(const XagNetwork& net, std::uint32_t root,
               const std::vector<std::uint32_t>& leaves) {
    return anf_from_tt(simulate_cut(net, root, leaves));
}

int Anf::degree() const {
    int deg = 0;
    for (std::uint32_t m : monomials) deg = std::max(deg, std::popcount(m));
    return deg;
}

bool Anf::evaluate(std::uint32_t assignment) const {
    bool acc = false;
    for (std::uint32_t m : monomials) acc ^= (assignment & m) == m;
    return acc;
}

std::size_t mc_anf(const Anf& anf) {
    std::size_t total = 0;
    for (std::uint32_t m : anf.monomials)
        if (m) total += std::size_t(std::popcount(m)) - 1;
    return total;
}

// ---------------------------------------------------------------------------
// BLIF subset

namespace {

[[noreturn]] void blif_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("blif line " + std::to_string(line) + ": " + what);
}

struct NamesBlock {
    std::vector<std::string> inputs;
    std::string output;
    std::vector<std::string> rows;  // "<pattern> <value>" rows, pattern may be empty
    std::size_t line = 0;
};

struct BlifDoc {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<NamesBlock> blocks;
    std::size_t inputs_line = 0;
    std::size_t outputs_line = 0;
};

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> tokens;
    std::string t;
    while (is >> t) tokens.push_back(t);
    return tokens;
}

BlifDoc read_blif(const std::string& text) {
    std::istringstream is(text);
    BlifDoc doc;
    NamesBlock* open = nullptr;
    bool ended = false;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::size_t logical_line = lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        while (!raw.empty() && raw.back() == '\\') {  // continuation
            raw.pop_back();
            std::string more;
            if (!std::getline(is, more)) blif_fail(lineno, "dangling line continuation");
            ++lineno;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            raw += " " + more;
        }
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        const auto tokens = tokenize(raw);
        if (tokens.empty()) continue;
        if (ended) blif_fail(logical_line, "content after .end");

        if (tokens[0][0] == '.') {
            open = nullptr;
            if (tokens[0] == ".model") {
                // model name ignored
            } else if (tokens[0] == ".inputs") {
                doc.inputs.insert(doc.inputs.end(), tokens.begin() + 1, tokens.end());
                if (!doc.inputs_line) doc.inputs_line = logical_line;
            } else if (tokens[0] == ".outputs") {
                doc.outputs.insert(doc.outputs.end(), tokens.begin() + 1, tokens.end());
                if (!doc.outputs_line) doc.outputs_line = logical_line;
            } else if (tokens[0] == ".names") {
                if (tokens.size() < 2) blif_fail(logical_line, ".names needs at least an output");
                NamesBlock block;
                block.inputs.assign(tokens.begin() + 1, tokens.end() - 1);
                block.output = tokens.back();
                block.line = logical_line;
                doc.blocks.push_back(std::move(block));
                open = &doc.blocks.back();
            } else if (tokens[0] == ".end") {
                ended = true;
            } else {
                blif_fail(logical_line, "unsupported directive '" + tokens[0] + "'");
            }
            continue;
        }

        if (!open) blif_fail(logical_line, "cover row outside a .names block");
        if (open->inputs.empty()) {
            if (tokens.size() != 1) blif_fail(logical_line, "malformed constant cover row");
            open->rows.push_back(" " + tokens[0]);
        } else {
            if (tokens.size() != 2) blif_fail(logical_line, "malformed cover row");
            if (tokens[0].size() != open->inputs.size())
                blif_fail(logical_line, "cover row width does not match the input list");
            open->rows.push_back(tokens[0] + " " + tokens[1]);
        }
    }
    if (doc.inputs.empty()) blif_fail(lineno ? lineno : 1, "missing .inputs");
    if (doc.outputs.empty()) blif_fail(lineno ? lineno : 1, "missing .outputs");
    return doc;
}

// On-set truth table of a 1- or 2-input cover, as a bitmask over input
// valuations (bit index = first input + 2 * second input).
std::uint32_t cover_tt(const NamesBlock& block) {
    const std::size_t k = block.inputs.size();
    if (k < 1 || k > 2) blif_fail(block.line, "unsupported cover: only 1- and 2-input functions");
    std::uint32_t tt = 0;
    for (const std::string& row : block.rows) {
        const auto space = row.find(' ');
        const std::string pattern = row.substr(0, space);
        const std::string value = row.substr(space + 1);
        if (value != "1")
            blif_fail(block.line, "unsupported cover: off-set rows are not accepted");
        std::vector<std::uint32_t> idxs{0};
        for (std::size_t i = 0; i < k; ++i) {
            const char c = pattern[i];
            if (c == '0' || c == '1') {
                for (std::uint32_t& idx : idxs) idx |= std::uint32_t(c - '0') << i;
            } else if (c == '-') {
                const std::size_t count = idxs.size();
                for (std::size_t j = 0; j < count; ++j) idxs.push_back(idxs[j] | (1u << i));
            } else {
                blif_fail(block.line, "bad cover pattern character");
            }
        }
        for (std::uint32_t idx : idxs) tt |= 1u << idx;
    }
    return tt;
}

struct Elaborator {
    const BlifDoc& doc;
    XagNetwork net;
    std::map<std::string, Signal> signals;
    std::map<std::string, const NamesBlock*> block_of;
    std::map<std::string, int> state;  // 1 = in progress, 2 = done

    explicit Elaborator(const BlifDoc& d) : doc(d) {
        for (const std::string& name : doc.inputs) {
            if (signals.count(name))
                blif_fail(doc.inputs_line, "duplicate input '" + name + "'");
            signals.emplace(name, net.add_pi(name));
        }
        for (const NamesBlock& block : doc.blocks) {
            if (signals.count(block.output))
                blif_fail(block.line, "'" + block.output + "' redefines an input");
            if (!block_of.emplace(block.output, &block).second)
                blif_fail(block.line, "duplicate definition of '" + block.output + "'");
        }
    }

    Signal resolve(const std::string& name, std::size_t from_line) {
        if (auto it = signals.find(name); it != signals.end()) return it->second;
        auto bit = block_of.find(name);
        if (bit == block_of.end())
            blif_fail(from_line, "undefined signal '" + name + "'");
        const NamesBlock& block = *bit->second;
        if (state[name] == 1) blif_fail(block.line, "cyclic definition of '" + name + "'");
        state[name] = 1;
        std::vector<Signal> ins;
        for (const std::string& in : block.inputs) ins.push_back(resolve(in, block.line));
        const Signal s = build(block, ins);
        state[name] = 2;
        signals.emplace(name, s);
        return s;
    }

    Signal build(const NamesBlock& block, const std::vector<Signal>& ins) {
        const std::uint32_t tt = cover_tt(block);
        if (block.inputs.size() == 1) {
            switch (tt & 3u) {
                case 0b10: return ins[0];   // buffer
                case 0b01: return !ins[0];  // inverter
                default: blif_fail(block.line, "unsupported cover: constant function");
            }
        }
        const Signal a = ins[0], b = ins[1];
        switch (tt & 15u) {
            case 0b0110: return net.make_xor(a, b);
            case 0b1001: return !net.make_xor(a, b);
            case 0b1010: return a;
            case 0b0101: return !a;
            case 0b1100: return b;
            case 0b0011: return !b;
            default: break;
        }
        const int ones = std::popcount(tt & 15u);
        if (ones == 1) {
            const int idx = std::countr_zero(tt);
            return net.make_and(idx & 1 ? a : !a, idx & 2 ? b : !b);
        }
        if (ones == 3) {
            // Exactly one zero row: the complement is that minterm.
            const int idx = std::countr_zero(~tt & 15u);
            return !net.make_and(idx & 1 ? a : !a, idx & 2 ? b : !b);
        }
        blif_fail(block.line, "unsupported cover: constant function");
    }
};

} // namespace

XagNetwork parse_blif(const std::string& text) {
    const BlifDoc doc = read_blif(text);
    Elaborator el(doc);
    for (const std::string& name : doc.outputs)
        el.net.add_po(el.resolve(name, doc.outputs_line), name);
    return std::move(el.net);
}

// ---------------------------------------------------------------------------
// JSON netlist

std::string write_json(const XagNetwork& net) {
    nlohmann::json j;
    j["format"] = "xag";
    j["version"] = 1;
    j["inputs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < net.pi_count(); ++i) j["inputs"].push_back(net.pi_name(i));
    j["nodes"] = nlohmann::json::array();
    for (std::uint32_t id = 0; id < net.size(); ++id) {
        const XagNode& n = net.node(id);
        if (n.kind == NodeKind::Pi) continue;
        j["nodes"].push_back({{"id", id},
                              {"op", n.kind == NodeKind::And ? "and" : "xor"},
                              {"f0", {n.fanin0.node, n.fanin0.neg}},
                              {"f1", {n.fanin1.node, n.fanin1.neg}}});
    }
    j["outputs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < net.po_count(); ++i)
        j["outputs"].push_back(
            {{"node", net.po(i).node}, {"neg", net.po(i).neg}, {"name", net.po_name(i)}});
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void json_fail(const std::string& what) {
    throw std::runtime_error("json netlist: " + what);
}

XagNetwork network_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "xag") json_fail("missing xag format marker");
    if (j.value("version", 0) != 1) json_fail("unsupported version");
    if (!j.contains("inputs") || !j["inputs"].is_array()) json_fail("missing inputs array");
    if (!j.contains("nodes") || !j["nodes"].is_array()) json_fail("missing nodes array");
    if (!j.contains("outputs") || !j["outputs"].is_array()) json_fail("missing outputs array");

    XagNetwork net;
    std::map<std::uint32_t, Signal> by_id;
    std::uint32_t next_id = 0;
    for (const auto& name : j["inputs"]) {
        if (!name.is_string()) json_fail("input name must be a string");
        by_id.emplace(next_id++, net.add_pi(name.get<std::string>()));
    }
    auto fanin = [&](const nlohmann::json& f) -> Signal {
        if (!f.is_array() || f.size() != 2 || !f[0].is_number_unsigned() || !f[1].is_boolean())
            json_fail("fanin must be [node, neg]");
        auto it = by_id.find(f[0].get<std::uint32_t>());
        if (it == by_id.end()) json_fail("fanin references an unknown node");
        Signal s = it->second;
        s.neg ^= f[1].get<bool>();
        return s;
    };
    for (const auto& n : j["nodes"]) {
        if (!n.is_object() || !n.contains("id") || !n.contains("op")) json_fail("malformed node");
        const std::uint32_t id = n["id"].get<std::uint32_t>();
        if (by_id.count(id)) json_fail("duplicate node id");
        const std::string op = n["op"].get<std::string>();
        const Signal a = fanin(n.at("f0"));
        const Signal b = fanin(n.at("f1"));
        Signal s;
        if (op == "and")
            s = net.make_and(a, b);
        else if (op == "xor")
            s = net.make_xor(a, b);
        else
            json_fail("unknown op '" + op + "'");
        by_id.emplace(id, s);
    }
    for (const auto& o : j["outputs"]) {
        if (!o.is_object() || !o.contains("node")) json_fail("malformed output");
        auto it = by_id.find(o["node"].get<std::uint32_t>());
        if (it == by_id.end()) json_fail("output references an unknown node");
        Signal s = it->second;
        s.neg ^= o.value("neg", false);
        net.add_po(s, o.value("name", std::string()));
    }
    return net;
}

} // namespace

XagNetwork parse_json(const std::string& text) {
    try {
        return network_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("json netlist: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Random networks

XagNetwork random_xag(const RandomXagParams& params) {
    if (params.pis < 1 || params.nodes < 0 || params.outputs < 1)
        throw std::invalid_argument("random_xag: bad shape");
    std::mt19937_64 rng(params.seed);
    XagNetwork net;
    std::vector<Signal> pool;
    for (int i = 0; i < params.pis; ++i) pool.push_back(net.add_pi("x" + std::to_string(i)));

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int made = 0;
    for (int attempts = 0; made < params.nodes && attempts < params.nodes * 20; ++attempts) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        Signal a = pool[pick(rng)];
        Signal b = pool[pick(rng)];
        if (a.node == b.node) continue;
        if (params.complemented_edges) {
            a.neg ^= coin(rng) < 0.25;
            b.neg ^= coin(rng) < 0.25;
        }
        const std::size_t before = net.size();
        const Signal s =
            coin(rng) < params.and_fraction ? net.make_and(a, b) : net.make_xor(a, b);
        if (net.size() == before) continue;  // structural hash hit
        pool.push_back(s);
        ++made;
    }

    // Bias outputs toward late nodes so the cones are nontrivial.
    const std::size_t span =
        std::size_t(params.outputs) + std::min<std::size_t>(pool.size() / 4, 2);
    const std::size_t lo = pool.size() > span ? pool.size() - span : 0;
    std::uniform_int_distribution<std::size_t> pick(lo, pool.size() - 1);
    for (int i = 0; i < params.outputs; ++i) {
        Signal s = pool[pick(rng)];
        if (params.complemented_edges) s.neg ^= coin(rng) < 0.25;
        net.add_po(s, "y" + std::to_string(i));
    }
    return net;
}

} // namespace tmap
