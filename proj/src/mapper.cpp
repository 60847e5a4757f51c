// mapper.cpp
#include "tmap/mapper.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace tmap {

void MapConfig::validate() const {
    if (max_leaves < 2 || max_leaves > 8)
        throw std::invalid_argument("map config: leaf budget must be in 2..8");
    if (cut_budget < 1) throw std::invalid_argument("map config: cut budget must be >= 1");
    if (flow_passes < 1) throw std::invalid_argument("map config: need at least one flow pass");
}

QuadraticSpec cut_spec(const Cut& cut) {
    QuadraticSpec spec;
    spec.inputs = int(cut.leaves.size());
    OutputAnf out;
    for (std::uint32_t m : cut.anf.monomials) {
        switch (std::popcount(m)) {
            case 0: out.constant = true; break;
            case 1: out.linear |= m; break;
            case 2: out.quad.push_back(m); break;
            default: throw std::invalid_argument("cut_spec: cut function exceeds degree 2");
        }
    }
    spec.outputs.push_back(std::move(out));
    spec.validate();
    return spec;
}

namespace {

void toggle_monomial(std::vector<std::uint32_t>& monomials, std::uint32_t m) {
    const auto it = std::lower_bound(monomials.begin(), monomials.end(), m);
    if (it != monomials.end() && *it == m)
        monomials.erase(it);
    else
        monomials.insert(it, m);
}

Cut trivial_cut(std::uint32_t id) {
    Cut cut;
    cut.root = id;
    cut.leaves = {id};
    cut.anf.vars = 1;
    cut.anf.monomials = {1};
    cut.t_cost = 0;
    cut.exact = true;
    return cut;
}

void price_cut(Cut& cut, Library& lib) {
    if (cut.degree() < 2) {  // Clifford-only: linear functions cost nothing
        cut.t_cost = 0;
        cut.exact = true;
        return;
    }
    const QuadraticSpec spec = cut_spec(cut);
    const auto [entry, canon] = lookup_or_solve(lib, spec);
    (void)canon;
    cut.t_cost = entry->t_count;
    cut.exact = entry->exact;
}

bool rank_less(const Cut& a, const Cut& b) {
    if (a.t_cost != b.t_cost) return a.t_cost < b.t_cost;
    if (a.leaves.size() != b.leaves.size()) return a.leaves.size() < b.leaves.size();
    return a.leaves < b.leaves;
}

} // namespace

CutLists enumerate_cuts(const XagNetwork& net, Library& lib, const MapConfig& cfg) {
    cfg.validate();
    CutLists lists(net.size());
    for (std::uint32_t id = 0; id < net.size(); ++id) {
        const XagNode& n = net.node(id);
        if (n.kind == NodeKind::Pi) {
            lists[id] = {trivial_cut(id)};
            continue;
        }
        std::map<std::vector<std::uint32_t>, Cut> merged;
        for (const Cut& ca : lists[n.fanin0.node]) {
            for (const Cut& cb : lists[n.fanin1.node]) {
                std::vector<std::uint32_t> leaves;
                std::set_union(ca.leaves.begin(), ca.leaves.end(), cb.leaves.begin(),
                               cb.leaves.end(), std::back_inserter(leaves));
                if (int(leaves.size()) > cfg.max_leaves) continue;
                if (merged.count(leaves)) continue;
                if (n.kind == NodeKind::And && (ca.degree() > 1 || cb.degree() > 1))
                    continue;  // product would exceed degree 2

                Cut cut;
                cut.root = id;
                cut.leaves = std::move(leaves);
                // Truth-table semantics, so the stored function is exactly what
                // re-evaluation over the leaf set yields (reconvergent cones
                // can make naive fanin-ANF composition disagree with it).
                cut.anf = anf_of_cut(net, id, cut.leaves);
                if (cut.degree() > 2) continue;
                merged.emplace(cut.leaves, cut);
            }
        }
        std::vector<Cut> ranked;
        ranked.reserve(merged.size());
        for (auto& [leaves, cut] : merged) {
            price_cut(cut, lib);
            ranked.push_back(std::move(cut));
        }
        std::sort(ranked.begin(), ranked.end(), rank_less);
        if (int(ranked.size()) > cfg.cut_budget) ranked.resize(std::size_t(cfg.cut_budget));
        ranked.push_back(trivial_cut(id));  // kept outside the budget; needed for merging
        lists[id] = std::move(ranked);
    }
    return lists;
}

namespace {

std::vector<std::uint32_t> fanout_counts(const XagNetwork& net) {
    std::vector<std::uint32_t> fanout(net.size(), 0);
    for (std::uint32_t id = 0; id < net.size(); ++id) {
        const XagNode& n = net.node(id);
        if (n.kind == NodeKind::Pi) continue;
        ++fanout[n.fanin0.node];
        ++fanout[n.fanin1.node];
    }
    for (const Signal& po : net.pos()) ++fanout[po.node];
    return fanout;
}

} // namespace

Cover select_cover(const XagNetwork& net, const CutLists& cuts, const MapConfig& cfg) {
    cfg.validate();
    if (cuts.size() != net.size()) throw std::invalid_argument("select_cover: cut lists mismatch");
    const std::vector<std::uint32_t> fanout = fanout_counts(net);
    std::vector<double> flow(net.size(), 0.0);

    auto area_flow = [&](const Cut& cut) {
        double s = double(cut.t_cost);
        for (std::uint32_t leaf : cut.leaves)
            s += flow[leaf] / double(std::max<std::uint32_t>(fanout[leaf], 1));
        return s;
    };
    auto best_cut = [&](std::uint32_t id) -> const Cut& {
        const Cut* best = nullptr;
        double best_af = 0.0;
        for (const Cut& cut : cuts[id]) {
            if (cut.is_trivial()) continue;
            const double af = area_flow(cut);
            if (!best || af < best_af ||
                (af == best_af && (cut.leaves.size() < best->leaves.size() ||
                                   (cut.leaves.size() == best->leaves.size() &&
                                    cut.leaves < best->leaves)))) {
                best = &cut;
                best_af = af;
            }
        }
        if (!best) throw std::logic_error("select_cover: node has no implementation cut");
        return *best;
    };

    for (int pass = 0; pass < cfg.flow_passes; ++pass)
        for (std::uint32_t id = 0; id < net.size(); ++id)
            if (net.node(id).kind != NodeKind::Pi) flow[id] = area_flow(best_cut(id));

    Cover cover;
    cover.flow = flow;
    std::vector<std::uint32_t> stack;
    for (const Signal& po : net.pos())
        if (net.node(po.node).kind != NodeKind::Pi) stack.push_back(po.node);
    while (!stack.empty()) {
        const std::uint32_t id = stack.back();
        stack.pop_back();
        if (cover.chosen.count(id)) continue;
        const Cut& cut = best_cut(id);
        cover.chosen.emplace(id, cut);
        for (std::uint32_t leaf : cut.leaves)
            if (net.node(leaf).kind != NodeKind::Pi && !cover.chosen.count(leaf))
                stack.push_back(leaf);
    }
    for (const auto& [id, cut] : cover.chosen) {
        cover.order.push_back(id);
        cover.total_t += cut.t_cost;
        cover.all_exact = cover.all_exact && cut.exact;
    }
    return cover;
}

Cover naive_cover(const XagNetwork& net) {
    Cover cover;
    std::vector<std::uint32_t> stack;
    for (const Signal& po : net.pos())
        if (net.node(po.node).kind != NodeKind::Pi) stack.push_back(po.node);
    while (!stack.empty()) {
        const std::uint32_t id = stack.back();
        stack.pop_back();
        if (cover.chosen.count(id)) continue;
        const XagNode& n = net.node(id);

        Cut cut;
        cut.root = id;
        cut.leaves = {n.fanin0.node, n.fanin1.node};
        std::sort(cut.leaves.begin(), cut.leaves.end());
        const std::uint32_t m0 = n.fanin0.node == cut.leaves[0] ? 1u : 2u;
        const std::uint32_t m1 = 3u ^ m0;
        cut.anf.vars = 2;
        if (n.kind == NodeKind::And) {
            // (x0 ^ n0)(x1 ^ n1) expanded over GF(2)
            cut.anf.monomials.push_back(3);
            if (n.fanin1.neg) toggle_monomial(cut.anf.monomials, m0);
            if (n.fanin0.neg) toggle_monomial(cut.anf.monomials, m1);
            if (n.fanin0.neg && n.fanin1.neg) toggle_monomial(cut.anf.monomials, 0);
            cut.t_cost = 7;
        } else {
            cut.anf.monomials = {1, 2};
            if (n.fanin0.neg != n.fanin1.neg) toggle_monomial(cut.anf.monomials, 0);
            cut.t_cost = 0;
        }
        cover.chosen.emplace(id, std::move(cut));

        for (std::uint32_t leaf : {n.fanin0.node, n.fanin1.node})
            if (net.node(leaf).kind != NodeKind::Pi && !cover.chosen.count(leaf))
                stack.push_back(leaf);
    }
    for (const auto& [id, cut] : cover.chosen) {
        cover.order.push_back(id);
        cover.total_t += cut.t_cost;
    }
    return cover;
}

} // namespace tmap
