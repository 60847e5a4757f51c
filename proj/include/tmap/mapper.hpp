// mapper.hpp
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tmap/library.hpp"
#include "tmap/xag.hpp"

namespace tmap {

// A cut: root node plus a leaf set, with the root's function over the leaves
// in algebraic normal form (variable i of the ANF is leaves[i]).
struct Cut {
    std::uint32_t root = 0;
    std::vector<std::uint32_t> leaves;  // sorted node ids
    Anf anf;
    std::size_t t_cost = 0;
    bool exact = true;

    int degree() const { return anf.degree(); }
    bool is_trivial() const { return leaves.size() == 1 && leaves[0] == root; }
    friend bool operator==(const Cut&, const Cut&) = default;
};

struct MapConfig {
    int max_leaves = 6;   // L: cut leaf budget
    int cut_budget = 8;   // C: nontrivial cuts kept per node
    int flow_passes = 3;  // area-flow refinement passes

    void validate() const;
};

using CutLists = std::vector<std::vector<Cut>>;

// Quadratic block specification priced for a cut: n = |leaves|, one output.
QuadraticSpec cut_spec(const Cut& cut);

CutLists enumerate_cuts(const XagNetwork& net, Library& lib, const MapConfig& cfg);

struct Cover {
    std::map<std::uint32_t, Cut> chosen;  // covered node -> implementing cut
    std::vector<std::uint32_t> order;     // covered nodes in topological order
    std::vector<double> flow;             // final area-flow value per node
    std::size_t total_t = 0;
    bool all_exact = true;
};

Cover select_cover(const XagNetwork& net, const CutLists& cuts, const MapConfig& cfg);

// Yardstick cover: immediate-fanin cuts everywhere; every AND costs 7 T.
Cover naive_cover(const XagNetwork& net);

} // namespace tmap
