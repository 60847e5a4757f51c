// xag.hpp
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace tmap {

struct Signal {
    std::uint32_t node = 0;
    bool neg = false;

    Signal() = default;
    Signal(std::uint32_t n, bool c) : node(n), neg(c) {}
    Signal operator!() const { return Signal(node, !neg); }
    friend bool operator==(const Signal&, const Signal&) = default;
};

enum class NodeKind : std::uint8_t { Pi, And, Xor };

struct XagNode {
    NodeKind kind = NodeKind::Pi;
    Signal fanin0{};
    Signal fanin1{};
    friend bool operator==(const XagNode&, const XagNode&) = default;
};

// XOR-AND graph: 2-input AND/XOR nodes with complemented edges, structurally
// hashed on construction. Node order is a topological order.
class XagNetwork {
public:
    Signal add_pi(std::string name = "");
    Signal make_and(Signal a, Signal b);
    Signal make_xor(Signal a, Signal b);
    void add_po(Signal s, std::string name = "");

    std::size_t size() const { return nodes_.size(); }
    std::size_t pi_count() const { return pis_.size(); }
    std::size_t po_count() const { return pos_.size(); }
    std::size_t and_count() const;
    std::size_t xor_count() const;

    const XagNode& node(std::uint32_t id) const { return nodes_.at(id); }
    const std::vector<std::uint32_t>& pis() const { return pis_; }
    Signal po(std::size_t i) const { return pos_.at(i); }
    const std::vector<Signal>& pos() const { return pos_; }
    const std::string& pi_name(std::size_t i) const { return pi_names_.at(i); }
    const std::string& po_name(std::size_t i) const { return po_names_.at(i); }

    // Values of every node, then of every output, for one input assignment.
    std::vector<bool> node_values(const std::vector<bool>& pi_values) const;
    std::vector<bool> evaluate(const std::vector<bool>& pi_values) const;

    friend bool operator==(const XagNetwork& a, const XagNetwork& b) {
        return a.nodes_ == b.nodes_ && a.pis_ == b.pis_ && a.pos_ == b.pos_ &&
               a.pi_names_ == b.pi_names_ && a.po_names_ == b.po_names_;
    }

private:
    Signal hashed_node(NodeKind kind, Signal f0, Signal f1, bool out_neg);

    std::vector<XagNode> nodes_;
    std::vector<std::uint32_t> pis_;
    std::vector<Signal> pos_;
    std::vector<std::string> pi_names_;
    std::vector<std::string> po_names_;
    std::map<std::tuple<int, std::uint32_t, bool, std::uint32_t, bool>, std::uint32_t> strash_;
};

// Truth table over up to 16 variables, packed into 64-bit words.
struct TruthTable {
    int vars = 0;
    std::vector<std::uint64_t> words;

    explicit TruthTable(int v = 0);
    std::size_t bit_count() const { return std::size_t(1) << vars; }
    bool test(std::uint32_t idx) const;
    void set(std::uint32_t idx, bool v);
    friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

// Algebraic normal form: XOR of monomials; bit i of a monomial mask selects
// variable i. Mask 0 is the constant-1 term.
struct Anf {
    int vars = 0;
    std::vector<std::uint32_t> monomials;  // sorted, unique

    int degree() const;
    bool evaluate(std::uint32_t assignment) const;
    friend bool operator==(const Anf&, const Anf&) = default;
};

TruthTable simulate_cut(const XagNetwork& net, std::uint32_t root,
                        const std::vector<std::uint32_t>& leaves);
Anf anf_from_tt(const TruthTable& tt);
Anf anf_of_cut(const XagNetwork& net, std::uint32_t root,
               const std::vector<std::uint32_t>& leaves);

// ANF-derived upper bound on multiplicative complexity: sum of (|S|-1) over
// non-constant monomials S.
std::size_t mc_anf(const Anf& anf);

XagNetwork parse_blif(const std::string& text);
std::string write_json(const XagNetwork& net);
XagNetwork parse_json(const std::string& text);

struct RandomXagParams {
    int pis = 4;
    int nodes = 8;
    int outputs = 2;
    double and_fraction = 0.5;
    bool complemented_edges = true;
    std::uint64_t seed = 1;
};

XagNetwork random_xag(const RandomXagParams& params);

} // namespace tmap
