// library.cpp
#include "tmap/library.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tmap {

namespace {

constexpr int kMaxCanonInputs = 8;  // permutation sweep stays cheap up to here

// Lexicographic slot numbering of input pairs (a < b).
int pair_slot(int n, int a, int b) {
    // slots before row 'a': (n-1) + (n-2) + ... + (n-a)
    return a * n - a * (a + 1) / 2 + (b - a - 1);
}

std::uint64_t output_slot_mask(const OutputAnf& o, const std::vector<int>& perm, int n) {
    std::uint64_t mask = 0;
    for (std::uint32_t q : o.quad) {
        const int a = std::countr_zero(q);
        const int b = 31 - std::countl_zero(q);
        int pa = perm[std::size_t(a)], pb = perm[std::size_t(b)];
        if (pa > pb) std::swap(pa, pb);
        mask |= std::uint64_t(1) << pair_slot(n, pa, pb);
    }
    return mask;
}

} // namespace

std::string CanonicalKey::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

CanonicalKey CanonicalKey::from_hex(const std::string& s) {
    if (s.size() % 2) throw std::runtime_error("canonical key: odd hex length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw std::runtime_error("canonical key: bad hex digit");
    };
    CanonicalKey key;
    key.bytes.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2)
        key.bytes.push_back(std::uint8_t(nibble(s[i]) * 16 + nibble(s[i + 1])));
    return key;
}

Canonicalized canonicalize(const QuadraticSpec& spec) {
    spec.validate();
    const int n = spec.inputs;
    const int m = spec.output_count();
    if (n > kMaxCanonInputs)
        throw std::invalid_argument("canonicalize: too many inputs for the permutation sweep");

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<std::uint64_t> best_masks;
    std::vector<int> best_in, best_out;
    std::vector<std::size_t> order(static_cast<std::size_t>(m));
    do {
        std::vector<std::uint64_t> masks(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            masks[std::size_t(j)] = output_slot_mask(spec.outputs[std::size_t(j)], perm, n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return masks[a] < masks[b]; });
        std::vector<std::uint64_t> sorted(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) sorted[std::size_t(j)] = masks[order[std::size_t(j)]];
        if (best_in.empty() || sorted < best_masks) {
            best_masks = sorted;
            best_in = perm;
            best_out.assign(std::size_t(m), 0);
            for (int j = 0; j < m; ++j) best_out[order[std::size_t(j)]] = j;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Canonicalized out;
    out.input_perm = best_in;
    out.output_perm = best_out;
    out.key.bytes.push_back(std::uint8_t(n));
    out.key.bytes.push_back(std::uint8_t(m));
    for (std::uint64_t mask : best_masks)
        for (int byte = 0; byte < 8; ++byte)
            out.key.bytes.push_back(std::uint8_t(mask >> (8 * byte)));
    return out;
}

QuadraticSpec canonical_representative(const CanonicalKey& key) {
    if (key.bytes.size() < 2) throw std::runtime_error("canonical key: truncated");
    const int n = key.bytes[0];
    const int m = key.bytes[1];
    if (key.bytes.size() != 2 + 8 * std::size_t(m))
        throw std::runtime_error("canonical key: length mismatch");

    QuadraticSpec spec;
    spec.inputs = n;
    for (int j = 0; j < m; ++j) {
        std::uint64_t mask = 0;
        for (int byte = 0; byte < 8; ++byte)
            mask |= std::uint64_t(key.bytes[2 + 8 * std::size_t(j) + std::size_t(byte)]) << (8 * byte);
        OutputAnf o;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (mask & (std::uint64_t(1) << pair_slot(n, a, b)))
                    o.quad.push_back((1u << a) | (1u << b));
        std::sort(o.quad.begin(), o.quad.end());
        spec.outputs.push_back(std::move(o));
    }
    spec.validate();
    return spec;
}

namespace {

LibraryEntry make_entry(const CanonicalKey& key, const QuadraticSpec& rep,
                        const SynthesisInstance& inst, const Solution& sol) {
    LibraryEntry e;
    e.key = key;
    e.inputs = rep.inputs;
    e.outputs = rep.output_count();
    e.t_count = sol.t_count;
    e.exact = sol.exact;
    e.parity_coeffs = sol.parity_coeffs;
    for (std::size_t g : sol.chosen_free_gens) {
        const FreeGenerator& gen = inst.free_gens[g];
        e.gens.push_back({gen.kind, gen.output, gen.other});
    }
    e.completion = sol.clifford_completion;
    return e;
}

const LibraryEntry& solve_into(Library& lib, const CanonicalKey& key) {
    const QuadraticSpec rep = canonical_representative(key);
    const SynthesisInstance inst = build_instance(rep, lib.config);
    const Solution sol = solve(inst);
    auto [it, inserted] = lib.entries.emplace(key, make_entry(key, rep, inst, sol));
    (void)inserted;
    return it->second;
}

} // namespace

Library synthesize_library(int wires, const std::vector<QuadraticSpec>& specs,
                           SolverConfig config) {
    Library lib;
    lib.wires = wires;
    lib.config = config;
    for (const QuadraticSpec& spec : specs) {
        spec.validate();
        if (spec.wires() > wires)
            throw std::invalid_argument("synthesize_library: spec exceeds the wire ceiling");
        const Canonicalized canon = canonicalize(spec);
        if (!lib.entries.count(canon.key)) solve_into(lib, canon.key);
    }
    return lib;
}

std::optional<std::pair<const LibraryEntry*, Canonicalized>> lookup(
    const Library& lib, const QuadraticSpec& spec) {
    Canonicalized canon = canonicalize(spec);
    auto it = lib.entries.find(canon.key);
    if (it == lib.entries.end()) return std::nullopt;
    return std::pair{&it->second, std::move(canon)};
}

std::pair<const LibraryEntry*, Canonicalized> lookup_or_solve(Library& lib,
                                                              const QuadraticSpec& spec,
                                                              bool* solved) {
    Canonicalized canon = canonicalize(spec);
    if (solved) *solved = false;
    auto it = lib.entries.find(canon.key);
    if (it == lib.entries.end()) {
        solve_into(lib, canon.key);
        it = lib.entries.find(canon.key);
        if (solved) *solved = true;
    }
    return {&it->second, std::move(canon)};
}

Solution instantiate(const LibraryEntry& entry, const QuadraticSpec& spec,
                     const Canonicalized& canon, const SynthesisInstance& inst) {
    const int n = spec.inputs;
    const int m = spec.output_count();
    if (entry.inputs != n || entry.outputs != m)
        throw std::invalid_argument("instantiate: entry shape does not match spec");

    std::vector<int> in_of_canon(static_cast<std::size_t>(n)), out_of_canon(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) in_of_canon[std::size_t(canon.input_perm[std::size_t(i)])] = i;
    for (int j = 0; j < m; ++j) out_of_canon[std::size_t(canon.output_perm[std::size_t(j)])] = j;

    auto remap_mask = [&](std::uint32_t canon_mask) {
        std::uint32_t out = 0;
        for (int wb = 0; wb < n + m; ++wb) {
            if (!(canon_mask & (1u << wb))) continue;
            const int orig = wb < n ? in_of_canon[std::size_t(wb)]
                                    : n + out_of_canon[std::size_t(wb - n)];
            out |= 1u << orig;
        }
        return out;
    };

    BitVec selection((std::size_t(1) << (n + m)) - 1);
    for (const auto& [canon_mask, coeff] : entry.parity_coeffs) {
        (void)coeff;
        selection.set(remap_mask(canon_mask) - 1);
    }

    auto gen_index = [&](FreeGenKind kind, int output, int other) -> std::size_t {
        for (std::size_t g = 0; g < inst.free_gens.size(); ++g) {
            const FreeGenerator& fg = inst.free_gens[g];
            if (fg.kind == kind && fg.output == output && fg.other == other) return g;
        }
        throw std::logic_error("instantiate: generator missing from instance");
    };

    std::set<std::size_t> chosen;
    auto toggle = [&](std::size_t idx) {
        if (!chosen.insert(idx).second) chosen.erase(idx);
    };
    auto toggle_debris = [&](int output_j, int debris_output) {
        // Adding input-CZ generators on the debris wires converts the stored
        // generator (derived for the linear-free representative) into the one
        // the real output value produces.
        const std::uint32_t lin = spec.outputs[std::size_t(debris_output)].linear;
        for (int i = 0; i < n; ++i)
            if (lin & (1u << i))
                toggle(gen_index(FreeGenKind::CzOutputInput, output_j, i));
    };

    for (const GenRef& ref : entry.gens) {
        const int j = out_of_canon[std::size_t(ref.output)];
        switch (ref.kind) {
            case FreeGenKind::SOnOutput:
                toggle(gen_index(ref.kind, j, 0));
                toggle_debris(j, j);
                break;
            case FreeGenKind::ZOnOutput:
                toggle(gen_index(ref.kind, j, 0));
                break;
            case FreeGenKind::CzOutputInput:
                toggle(gen_index(ref.kind, j, in_of_canon[std::size_t(ref.other)]));
                break;
            case FreeGenKind::CzOutputOutput: {
                int l = out_of_canon[std::size_t(ref.other)];
                int lo = j, hi = l;
                if (lo > hi) std::swap(lo, hi);
                toggle(gen_index(ref.kind, lo, hi));
                toggle_debris(lo, hi);
                toggle_debris(hi, lo);
                // A complemented output flips the sign of its lift, which shifts
                // this generator's class by the partner's Z-generator image.
                if (spec.outputs[std::size_t(lo)].constant)
                    toggle(gen_index(FreeGenKind::ZOnOutput, hi, 0));
                if (spec.outputs[std::size_t(hi)].constant)
                    toggle(gen_index(FreeGenKind::ZOnOutput, lo, 0));
                break;
            }
        }
    }

    return resolve_selection(inst, selection,
                             std::vector<std::size_t>(chosen.begin(), chosen.end()),
                             entry.exact);
}

namespace {

std::string format_entry(const LibraryEntry& e) {
    std::ostringstream os;
    os << e.key.hex() << " n=" << e.inputs << " m=" << e.outputs << " t=" << e.t_count
       << " exact=" << (e.exact ? 1 : 0);
    os << " P=";
    if (e.parity_coeffs.empty()) {
        os << "-";
    } else {
        bool first = true;
        for (const auto& [mask, c] : e.parity_coeffs) {
            if (!first) os << ",";
            os << mask << ":" << c;
            first = false;
        }
    }
    os << " G=";
    if (e.gens.empty()) {
        os << "-";
    } else {
        bool first = true;
        for (const GenRef& g : e.gens) {
            if (!first) os << ",";
            switch (g.kind) {
                case FreeGenKind::SOnOutput: os << "S" << g.output; break;
                case FreeGenKind::ZOnOutput: os << "Z" << g.output; break;
                case FreeGenKind::CzOutputInput: os << "I" << g.output << ":" << g.other; break;
                case FreeGenKind::CzOutputOutput: os << "O" << g.output << ":" << g.other; break;
            }
            first = false;
        }
    }
    os << " C=";
    if (e.completion.empty()) {
        os << "-";
    } else {
        bool first = true;
        for (const CompletionGate& g : e.completion) {
            if (!first) os << ";";
            if (g.kind == CompletionGate::Kind::SPower)
                os << "S" << g.wire0 << "^" << g.power;
            else
                os << "CZ" << g.wire0 << ":" << g.wire1;
            first = false;
        }
    }
    return os.str();
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("library file line " + std::to_string(line) + ": " + what);
}

long long parse_ll(const std::string& s, std::size_t line, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) parse_fail(line, "trailing characters in " + what);
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "expected a number in " + what);
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range in " + what);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string field_value(const std::string& token, const std::string& name,
                        std::size_t line) {
    if (token.size() < name.size() + 1 || token.compare(0, name.size(), name) != 0 ||
        token[name.size()] != '=')
        parse_fail(line, "expected field '" + name + "='");
    return token.substr(name.size() + 1);
}

} // namespace

std::string write_library_text(const Library& lib) {
    std::ostringstream os;
    os << "tmaplib v" << lib.version << " wires=" << lib.wires
       << " nullity_limit=" << lib.config.exact_nullity_limit
       << " budget=" << lib.config.heuristic_budget << " seed=" << lib.config.seed
       << " workers=" << lib.config.workers << "\n";
    for (const auto& [key, entry] : lib.entries) os << format_entry(entry) << "\n";
    return os.str();
}

Library parse_library_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;

    Library lib;
    if (!std::getline(is, line)) throw std::runtime_error("library file line 1: empty file");
    ++lineno;
    {
        const auto tokens = split(line, ' ');
        if (tokens.size() != 7 || tokens[0] != "tmaplib")
            parse_fail(lineno, "malformed header");
        if (tokens[1] != "v1")
            parse_fail(lineno, "unsupported library version '" + tokens[1] + "'");
        lib.version = 1;
        lib.wires = int(parse_ll(field_value(tokens[2], "wires", lineno), lineno, "wires"));
        lib.config.exact_nullity_limit = std::size_t(
            parse_ll(field_value(tokens[3], "nullity_limit", lineno), lineno, "nullity_limit"));
        lib.config.heuristic_budget = std::uint64_t(
            parse_ll(field_value(tokens[4], "budget", lineno), lineno, "budget"));
        lib.config.seed =
            std::uint64_t(parse_ll(field_value(tokens[5], "seed", lineno), lineno, "seed"));
        lib.config.workers =
            int(parse_ll(field_value(tokens[6], "workers", lineno), lineno, "workers"));
    }

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tokens = split(line, ' ');
        if (tokens.size() != 8) parse_fail(lineno, "expected 8 fields");
        LibraryEntry e;
        try {
            e.key = CanonicalKey::from_hex(tokens[0]);
        } catch (const std::runtime_error& err) {
            parse_fail(lineno, err.what());
        }
        e.inputs = int(parse_ll(field_value(tokens[1], "n", lineno), lineno, "n"));
        e.outputs = int(parse_ll(field_value(tokens[2], "m", lineno), lineno, "m"));
        e.t_count = std::size_t(parse_ll(field_value(tokens[3], "t", lineno), lineno, "t"));
        e.exact = parse_ll(field_value(tokens[4], "exact", lineno), lineno, "exact") != 0;
        if (e.key.bytes.size() < 2 || e.key.bytes[0] != e.inputs || e.key.bytes[1] != e.outputs)
            parse_fail(lineno, "key does not match the declared shape");
        const int w = e.inputs + e.outputs;
        if (w < 1 || w > kMaxWires) parse_fail(lineno, "wire count out of range");
        const std::uint32_t wire_limit = (1u << w) - 1;

        const std::string pf = field_value(tokens[5], "P", lineno);
        std::size_t t_check = 0;
        if (pf != "-") {
            for (const std::string& item : split(pf, ',')) {
                const auto kv = split(item, ':');
                if (kv.size() != 2) parse_fail(lineno, "malformed parity item '" + item + "'");
                const std::uint32_t mask =
                    std::uint32_t(parse_ll(kv[0], lineno, "parity mask"));
                const int c = int(parse_ll(kv[1], lineno, "parity coefficient"));
                if (mask == 0 || mask > wire_limit) parse_fail(lineno, "parity mask out of range");
                if (c < 1 || c > 7 || (c & 1) == 0) parse_fail(lineno, "parity coefficient not odd");
                if (!e.parity_coeffs.emplace(mask, c).second)
                    parse_fail(lineno, "duplicate parity mask");
                ++t_check;
            }
        }
        if (t_check != e.t_count) parse_fail(lineno, "t count does not match the parity list");

        const std::string gf = field_value(tokens[6], "G", lineno);
        if (gf != "-") {
            for (const std::string& item : split(gf, ',')) {
                if (item.empty()) parse_fail(lineno, "empty generator item");
                GenRef ref{};
                const char tag = item[0];
                const std::string rest = item.substr(1);
                if (tag == 'S' || tag == 'Z') {
                    ref.kind = tag == 'S' ? FreeGenKind::SOnOutput : FreeGenKind::ZOnOutput;
                    ref.output = int(parse_ll(rest, lineno, "generator output"));
                } else if (tag == 'I' || tag == 'O') {
                    ref.kind = tag == 'I' ? FreeGenKind::CzOutputInput : FreeGenKind::CzOutputOutput;
                    const auto parts = split(rest, ':');
                    if (parts.size() != 2) parse_fail(lineno, "malformed generator '" + item + "'");
                    ref.output = int(parse_ll(parts[0], lineno, "generator output"));
                    ref.other = int(parse_ll(parts[1], lineno, "generator other wire"));
                } else {
                    parse_fail(lineno, "unknown generator tag '" + item + "'");
                }
                if (ref.output < 0 || ref.output >= e.outputs)
                    parse_fail(lineno, "generator output out of range");
                e.gens.push_back(ref);
            }
        }

        const std::string cf = field_value(tokens[7], "C", lineno);
        if (cf != "-") {
            for (const std::string& item : split(cf, ';')) {
                CompletionGate g{};
                if (item.rfind("CZ", 0) == 0) {
                    const auto parts = split(item.substr(2), ':');
                    if (parts.size() != 2) parse_fail(lineno, "malformed completion '" + item + "'");
                    g.kind = CompletionGate::Kind::Cz;
                    g.wire0 = int(parse_ll(parts[0], lineno, "completion wire"));
                    g.wire1 = int(parse_ll(parts[1], lineno, "completion wire"));
                    g.power = 1;
                } else if (!item.empty() && item[0] == 'S') {
                    const auto parts = split(item.substr(1), '^');
                    if (parts.size() != 2) parse_fail(lineno, "malformed completion '" + item + "'");
                    g.kind = CompletionGate::Kind::SPower;
                    g.wire0 = int(parse_ll(parts[0], lineno, "completion wire"));
                    g.power = int(parse_ll(parts[1], lineno, "completion power"));
                    if (g.power < 1 || g.power > 3) parse_fail(lineno, "completion power out of range");
                } else {
                    parse_fail(lineno, "unknown completion item '" + item + "'");
                }
                if (g.wire0 < 0 || g.wire0 >= w || g.wire1 < 0 || g.wire1 >= w)
                    parse_fail(lineno, "completion wire out of range");
                e.completion.push_back(g);
            }
        }

        if (!lib.entries.emplace(e.key, std::move(e)).second)
            parse_fail(lineno, "duplicate canonical key");
    }
    return lib;
}

void save_library(const Library& lib, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open library file for writing: " + path);
    out << write_library_text(lib);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Library load_library(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open library file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_library_text(buf.str());
}

} // namespace tmap
