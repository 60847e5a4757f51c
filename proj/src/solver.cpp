// solver.cpp
#include "tmap/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <random>
#include <stdexcept>
#include <thread>

namespace tmap {

namespace {

// Class vector of the degree <= 3 part of a phase polynomial.  Degree >= 4
// coefficients must be multiples of 4; their classes are tracked separately as
// cancellation constraints rather than folded in here.
PhaseVecF2 class_truncated(const ZetaPoly& z, int wires) {
    PhaseVecF2 out = PhaseVecF2::zero(wires);
    for (const auto& [mask, c] : z.terms()) {
        if (mask == 0) continue;
        bool bit = false;
        switch (std::popcount(mask)) {
            case 1: bit = c & 1; break;
            case 2:
                if (c & 1) throw std::logic_error("phase class: odd degree-2 coefficient");
                bit = (c >> 1) & 1;
                break;
            case 3:
                if (c & 3) throw std::logic_error("phase class: degree-3 coefficient not divisible by 4");
                bit = (c >> 2) & 1;
                break;
            default:
                if (c & 3) throw std::logic_error("phase class: degree>=4 coefficient not divisible by 4");
                continue;
        }
        if (bit) out.flip_monomial(mask);
    }
    return out;
}

// Degree >= 4 monomials carrying a class-1 residue (coefficient 4 mod 8).
// Such terms appear only in free-generator images; a valid solution must pick
// generators whose residues cancel, since no Clifford inside the block can
// absorb them.
std::vector<std::uint32_t> high_degree_class(const ZetaPoly& z) {
    std::vector<std::uint32_t> masks;
    for (const auto& [mask, c] : z.terms()) {
        if (std::popcount(mask) < 4) continue;
        if (c & 3) throw std::logic_error("phase class: degree>=4 coefficient not divisible by 4");
        if ((c >> 2) & 1) masks.push_back(mask);
    }
    return masks;
}

using Words = std::vector<std::uint64_t>;

std::size_t masked_popcount(const Words& x, const Words& mask) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) n += std::popcount(x[i] & mask[i]);
    return n;
}

std::size_t masked_popcount_xor(const Words& x, const Words& v, const Words& mask) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) n += std::popcount((x[i] ^ v[i]) & mask[i]);
    return n;
}

void xor_into(Words& x, const Words& v) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= v[i];
}

// Lexicographic order matching BitVec::lex_less on raw words.
bool words_lex_less(const Words& a, const Words& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint64_t diff = a[i] ^ b[i];
        if (diff) {
            const std::uint64_t low = diff & (~diff + 1);
            return (a[i] & low) == 0;
        }
    }
    return false;
}

struct BestTracker {
    bool valid = false;
    std::size_t cost = 0;
    Words x;

    void offer(const Words& cand, std::size_t cand_cost) {
        if (!valid || cand_cost < cost || (cand_cost == cost && words_lex_less(cand, x))) {
            valid = true;
            cost = cand_cost;
            x = cand;
        }
    }
    void merge(const BestTracker& other) {
        if (other.valid) offer(other.x, other.cost);
    }
};

// Exhaustive minimum over x0 + span(basis) by Gray-code enumeration, cost =
// popcount under cost_mask.  Chunked across workers; the reduction is
// deterministic for any worker count.
BestTracker gray_search(const Words& x0, const std::vector<Words>& basis,
                        const Words& cost_mask, int workers) {
    const std::size_t dim = basis.size();
    const std::uint64_t total = std::uint64_t(1) << dim;

    auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi, BestTracker& out) {
        Words x = x0;
        const std::uint64_t g = lo ^ (lo >> 1);
        for (std::size_t b = 0; b < dim; ++b)
            if (g & (std::uint64_t(1) << b)) xor_into(x, basis[b]);
        out.offer(x, masked_popcount(x, cost_mask));
        for (std::uint64_t i = lo + 1; i < hi; ++i) {
            xor_into(x, basis[std::size_t(std::countr_zero(i))]);
            out.offer(x, masked_popcount(x, cost_mask));
        }
    };

    const int nthreads = std::max(1, std::min<int>(workers, int(std::min<std::uint64_t>(total, 64))));
    if (nthreads == 1 || total < 4096) {
        BestTracker best;
        run_chunk(0, total, best);
        return best;
    }
    std::vector<BestTracker> parts(static_cast<std::size_t>(nthreads));
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const std::uint64_t lo = chunk * std::uint64_t(t);
        const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back(run_chunk, lo, hi, std::ref(parts[std::size_t(t)]));
    }
    for (auto& th : threads) th.join();
    BestTracker best;
    for (const auto& p : parts) best.merge(p);
    return best;
}

struct ExtendedSystem {
    BitMatrix mat;  // (M + H) rows x (K + G) cols
    BitVec rhs;
    std::size_t parity_cols = 0;            // K
    std::vector<std::size_t> gen_of_col;    // original generator index per extra column
    Words cost_mask;                        // first K bits of the full width
    std::size_t width_words = 0;
};

ExtendedSystem build_system(const SynthesisInstance& inst) {
    const int w = inst.wires();
    const BitMatrix& phi = candidate_phase_matrix(w);
    const std::size_t m_rows = phi.rows();
    const std::size_t k = phi.cols();

    std::vector<std::size_t> usable;
    std::vector<std::vector<std::uint32_t>> high_of_gen(inst.free_gens.size());
    std::vector<std::uint32_t> high_masks;
    for (std::size_t g = 0; g < inst.free_gens.size(); ++g) {
        high_of_gen[g] = high_degree_class(inst.free_gens[g].z8_image);
        if (inst.free_gens[g].f2_image.bits.any() || !high_of_gen[g].empty())
            usable.push_back(g);
        for (std::uint32_t hm : high_of_gen[g]) high_masks.push_back(hm);
    }
    std::sort(high_masks.begin(), high_masks.end());
    high_masks.erase(std::unique(high_masks.begin(), high_masks.end()), high_masks.end());

    ExtendedSystem sys;
    sys.parity_cols = k;
    sys.gen_of_col = usable;
    const std::size_t rows = m_rows + high_masks.size();
    const std::size_t cols = k + usable.size();
    sys.mat = BitMatrix(rows, cols);
    sys.rhs = BitVec(rows);

    for (std::size_t r = 0; r < m_rows; ++r) {
        BitVec& row = sys.mat.row(r);
        const auto& src = phi.row(r).words();
        for (std::size_t i = 0; i < src.size(); ++i) row.words()[i] |= src[i];
        if (inst.target_f2.bits.test(r)) sys.rhs.set(r);
    }
    for (std::size_t c = 0; c < usable.size(); ++c) {
        const FreeGenerator& gen = inst.free_gens[usable[c]];
        for (std::size_t r = 0; r < m_rows; ++r)
            if (gen.f2_image.bits.test(r)) sys.mat.set(r, k + c);
        for (std::uint32_t hm : high_of_gen[usable[c]]) {
            const auto it = std::lower_bound(high_masks.begin(), high_masks.end(), hm);
            sys.mat.set(m_rows + std::size_t(it - high_masks.begin()), k + c);
        }
    }

    sys.width_words = (cols + 63) / 64;
    sys.cost_mask.assign(sys.width_words, 0);
    for (std::size_t b = 0; b < k; ++b) sys.cost_mask[b >> 6] |= std::uint64_t(1) << (b & 63);
    return sys;
}

Words pad_words(const BitVec& v, std::size_t width_words) {
    Words w(v.words());
    w.resize(width_words, 0);
    return w;
}

// Exhaustive search over the solution set restricted to a column subset (all
// other columns forced to zero).  Returns nothing if the restricted system is
// infeasible or its coset dimension exceeds the limit.
std::optional<BestTracker> restricted_exhaustive(const ExtendedSystem& sys,
                                                 const std::vector<std::size_t>& cols,
                                                 std::size_t limit, int workers) {
    BitMatrix sub(sys.mat.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t r = 0; r < sys.mat.rows(); ++r)
            if (sys.mat.at(r, cols[j])) sub.set(r, j);
    const auto x0 = solve(sub, sys.rhs);
    if (!x0) return std::nullopt;
    const auto basis = null_space_basis(sub);
    if (basis.size() > limit) return std::nullopt;

    auto embed = [&](const BitVec& v) {
        Words out(sys.width_words, 0);
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (v.test(j)) out[cols[j] >> 6] |= std::uint64_t(1) << (cols[j] & 63);
        return out;
    };
    Words start = embed(*x0);
    std::vector<Words> basis_w;
    basis_w.reserve(basis.size());
    for (const auto& b : basis) basis_w.push_back(embed(b));
    return gray_search(start, basis_w, sys.cost_mask, workers);
}

// Support wires reachable by the target: quadratic inputs plus every output.
// Used to seed the budgeted search with an exact solve on the smaller system.
std::vector<std::size_t> support_columns(const SynthesisInstance& inst,
                                         const ExtendedSystem& sys, bool& sound) {
    std::uint32_t support = 0;
    for (const auto& [mask, c] : inst.target_z8.terms()) {
        (void)c;
        support |= mask;
    }
    for (int j = 0; j < inst.outputs; ++j) support |= 1u << (inst.inputs + j);

    sound = true;
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < sys.parity_cols; ++k)
        if ((std::uint32_t(k + 1) & ~support) == 0) cols.push_back(k);
    for (std::size_t c = 0; c < sys.gen_of_col.size(); ++c) {
        const FreeGenerator& gen = inst.free_gens[sys.gen_of_col[c]];
        if (gen.kind == FreeGenKind::CzOutputInput && !(support & (1u << gen.other)))
            continue;  // dropping a generator is always sound
        bool inside = true;
        for (const auto& [mask, coeff] : gen.z8_image.terms()) {
            (void)coeff;
            if (mask & ~support) { inside = false; break; }
        }
        if (!inside) {
            sound = false;  // image escapes the support; restriction would be wrong
            break;
        }
        cols.push_back(sys.parity_cols + c);
    }
    return cols;
}

std::size_t completion_gate_count(const ZetaPoly& residual) {
    std::size_t n = 0;
    for (const auto& [mask, c] : residual.terms()) {
        (void)c;
        const int d = std::popcount(mask);
        if (d == 1 || d == 2) ++n;
    }
    return n;
}

Solution finish_solution(const SynthesisInstance& inst, const BitVec& selection,
                         const std::vector<std::size_t>& gens, bool exact) {
    const int w = inst.wires();
    const std::size_t k = (std::size_t(1) << w) - 1;
    if (selection.size() != k)
        throw std::logic_error("solver: selection width mismatch");

    // The class equation must hold exactly.
    PhaseVecF2 acc = PhaseVecF2::zero(w);
    for (std::size_t i = 0; i < k; ++i)
        if (selection.test(i)) acc ^= parity_phase_f2(Parity(std::uint32_t(i + 1)), w);
    for (std::size_t g : gens) {
        if (g >= inst.free_gens.size())
            throw std::logic_error("solver: free generator index out of range");
        acc ^= inst.free_gens[g].f2_image;
    }
    if (!(acc == inst.target_f2))
        throw std::logic_error("solver: selection does not satisfy the phase system");

    Solution sol;
    sol.selection = selection;
    sol.chosen_free_gens = gens;
    sol.exact = exact;
    sol.t_count = selection.popcount();

    // Base residual with every coefficient at 1.
    std::vector<std::uint32_t> parities;
    ZetaPoly residual = inst.target_z8;
    for (std::size_t i = 0; i < k; ++i) {
        if (!selection.test(i)) continue;
        const std::uint32_t mask = std::uint32_t(i + 1);
        parities.push_back(mask);
        sol.parity_coeffs[mask] = 1;
        residual -= parity_phase_z8(Parity(mask));
    }
    for (std::size_t g : gens) residual -= inst.free_gens[g].z8_image;
    residual.strip_constant();

    // The F2 system pins only oddness; sweep each coefficient over {1,3,5,7}
    // and keep the choice that shrinks the completion layer.
    bool changed = true;
    for (int pass = 0; pass < 4 && changed; ++pass) {
        changed = false;
        for (std::uint32_t mask : parities) {
            const ZetaPoly step = parity_phase_z8(Parity(mask)).scaled(2);
            const int cur = (sol.parity_coeffs[mask] - 1) / 2;
            int best_e = cur;
            std::size_t best_n = completion_gate_count(residual);
            for (int e = 0; e < 4; ++e) {
                if (e == cur) continue;
                ZetaPoly trial = residual;
                trial -= step.scaled(e - cur);
                const std::size_t n = completion_gate_count(trial);
                if (n < best_n) {
                    best_n = n;
                    best_e = e;
                }
            }
            if (best_e != cur) {
                residual -= step.scaled(best_e - cur);
                sol.parity_coeffs[mask] = 1 + 2 * best_e;
                changed = true;
            }
        }
    }

    // Realizability of the residual by S powers and CZs.
    std::vector<CompletionGate> singles, pairs;
    for (const auto& [mask, c] : residual.terms()) {
        if (mask == 0) continue;
        switch (std::popcount(mask)) {
            case 1:
                if (c & 1) throw std::logic_error("solver: odd degree-1 residual");
                singles.push_back({CompletionGate::Kind::SPower,
                                   std::countr_zero(mask), 0, c / 2});
                break;
            case 2: {
                if (c != 4) throw std::logic_error("solver: degree-2 residual not divisible by 4");
                const int w0 = std::countr_zero(mask);
                const int w1 = 31 - std::countl_zero(mask);
                pairs.push_back({CompletionGate::Kind::Cz, w0, w1, 1});
                break;
            }
            case 3:
                throw std::logic_error("solver: nonzero degree-3 residual");
            default:
                throw std::logic_error("solver: nonzero degree>=4 residual");
        }
    }
    sol.clifford_completion = std::move(singles);
    sol.clifford_completion.insert(sol.clifford_completion.end(), pairs.begin(), pairs.end());
    return sol;
}

} // namespace

std::vector<FreeGenerator> derive_dont_cares(const QuadraticSpec& spec) {
    spec.validate();
    const int n = spec.inputs;
    const int m = spec.output_count();
    const int w = spec.wires();

    std::vector<ZetaPoly> lifts;
    lifts.reserve(std::size_t(m));
    for (int j = 0; j < m; ++j) lifts.push_back(xor_lift(spec.anf_masks(j)));

    std::vector<FreeGenerator> gens;
    auto push = [&](FreeGenKind kind, int j, int other, ZetaPoly z) {
        z.strip_constant();
        PhaseVecF2 cls = class_truncated(z, w);
        gens.push_back({kind, j, other, std::move(z), std::move(cls)});
    };
    for (int j = 0; j < m; ++j) {
        push(FreeGenKind::SOnOutput, j, 0, lifts[std::size_t(j)].scaled(2));
        push(FreeGenKind::ZOnOutput, j, 0, lifts[std::size_t(j)].scaled(4));
        for (int i = 0; i < n; ++i)
            push(FreeGenKind::CzOutputInput, j, i,
                 (lifts[std::size_t(j)] * ZetaPoly::monomial(1u << i)).scaled(4));
    }
    for (int j = 0; j < m; ++j)
        for (int l = j + 1; l < m; ++l)
            push(FreeGenKind::CzOutputOutput, j, l,
                 (lifts[std::size_t(j)] * lifts[std::size_t(l)]).scaled(4));
    return gens;
}

SynthesisInstance build_instance(const QuadraticSpec& spec, SolverConfig config) {
    spec.validate();
    SynthesisInstance inst;
    inst.inputs = spec.inputs;
    inst.outputs = spec.output_count();
    inst.config = config;
    for (int j = 0; j < inst.outputs; ++j)
        for (std::uint32_t q : spec.outputs[std::size_t(j)].quad)
            inst.target_z8.add_term(q | (1u << (inst.inputs + j)), 4);
    inst.target_f2 = reduce_f2(inst.target_z8, inst.wires());
    inst.free_gens = derive_dont_cares(spec);
    return inst;
}

Solution solve(const SynthesisInstance& inst) {
    if (inst.wires() < 1 || inst.wires() > kMaxWires)
        throw std::invalid_argument("solve: wire count out of range");
    const SolverConfig& cfg = inst.config;
    const ExtendedSystem sys = build_system(inst);
    const std::size_t k = sys.parity_cols;
    const std::size_t g = sys.gen_of_col.size();

    const auto x0 = solve(sys.mat, sys.rhs);
    if (!x0) throw std::logic_error("solver: infeasible phase system (internal error)");
    const auto basis = null_space_basis(sys.mat);

    // Exhaustive search is capped well below Gray-code index overflow.
    const std::size_t limit = std::min<std::size_t>(cfg.exact_nullity_limit, 48);

    auto unpack = [&](const BestTracker& best) {
        BitVec selection(k);
        std::vector<std::size_t> chosen;
        for (std::size_t c = 0; c < k + g; ++c) {
            if (!((best.x[c >> 6] >> (c & 63)) & 1)) continue;
            if (c < k)
                selection.set(c);
            else
                chosen.push_back(sys.gen_of_col[c - k]);
        }
        return std::pair{selection, chosen};
    };

    if (basis.size() <= limit) {
        Words start = pad_words(*x0, sys.width_words);
        std::vector<Words> basis_w;
        basis_w.reserve(basis.size());
        for (const auto& b : basis) basis_w.push_back(pad_words(b, sys.width_words));
        const BestTracker best = gray_search(start, basis_w, sys.cost_mask, cfg.workers);
        auto [selection, chosen] = unpack(best);
        return finish_solution(inst, selection, chosen, true);
    }

    // Budgeted path: structural exact candidates on restricted column sets,
    // then randomized greedy descent over the full null basis.
    BestTracker best;
    {
        Words start = pad_words(*x0, sys.width_words);
        best.offer(start, masked_popcount(start, sys.cost_mask));
    }
    {
        // Generators off: the parity-only coset is often small enough to
        // enumerate, and seeding with its optimum keeps the don't-care search
        // from ever doing worse than no don't-cares at all.
        std::vector<std::size_t> parity_cols(k);
        for (std::size_t i = 0; i < k; ++i) parity_cols[i] = i;
        if (auto r = restricted_exhaustive(sys, parity_cols, limit, cfg.workers)) best.merge(*r);
    }
    {
        bool sound = false;
        const std::vector<std::size_t> cols = support_columns(inst, sys, sound);
        if (sound && cols.size() < k + g)
            if (auto r = restricted_exhaustive(sys, cols, limit, cfg.workers)) best.merge(*r);
    }

    std::vector<Words> basis_w;
    basis_w.reserve(basis.size());
    for (const auto& b : basis) basis_w.push_back(pad_words(b, sys.width_words));

    std::mt19937_64 rng(cfg.seed);
    std::uint64_t budget = cfg.heuristic_budget;
    const auto deadline = cfg.time_limit_s > 0
                              ? std::chrono::steady_clock::now() +
                                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double>(cfg.time_limit_s))
                              : std::chrono::steady_clock::time_point::max();

    auto descend = [&](Words x) {
        std::size_t cur = masked_popcount(x, sys.cost_mask);
        bool improved = true;
        while (improved && budget > 0) {
            improved = false;
            std::size_t flip = basis_w.size();
            std::size_t flip_cost = cur;
            for (std::size_t b = 0; b < basis_w.size() && budget > 0; ++b) {
                --budget;
                const std::size_t c = masked_popcount_xor(x, basis_w[b], sys.cost_mask);
                if (c < flip_cost) {
                    flip_cost = c;
                    flip = b;
                }
            }
            if (flip < basis_w.size()) {
                xor_into(x, basis_w[flip]);
                cur = flip_cost;
                improved = true;
            }
            if (std::chrono::steady_clock::now() >= deadline) break;
        }
        best.offer(x, cur);
    };

    descend(pad_words(*x0, sys.width_words));
    if (best.valid) descend(best.x);
    while (budget > 0 && std::chrono::steady_clock::now() < deadline) {
        Words x = pad_words(*x0, sys.width_words);
        for (const auto& b : basis_w)
            if (rng() & 1) xor_into(x, b);
        descend(x);
    }

    auto [selection, chosen] = unpack(best);
    return finish_solution(inst, selection, chosen, false);
}

Solution resolve_selection(const SynthesisInstance& inst, const BitVec& selection,
                           const std::vector<std::size_t>& gens, bool exact) {
    return finish_solution(inst, selection, gens, exact);
}

std::vector<CompletionGate> clifford_completion(const SynthesisInstance& inst,
                                                const Solution& sol) {
    // Rebuild from the recorded selection and coefficients; validates the
    // whole Z8 accounting on the way.
    Solution rebuilt = finish_solution(inst, sol.selection, sol.chosen_free_gens, sol.exact);
    for (const auto& [mask, c] : sol.parity_coeffs) {
        auto it = rebuilt.parity_coeffs.find(mask);
        if (it == rebuilt.parity_coeffs.end())
            throw std::logic_error("clifford_completion: coefficient on unselected parity");
        it->second = c;
    }
    if (rebuilt.parity_coeffs.size() != sol.parity_coeffs.size())
        throw std::logic_error("clifford_completion: selection/coefficient mismatch");

    // Recompute the residual for the recorded coefficients.
    ZetaPoly residual = inst.target_z8;
    for (const auto& [mask, c] : sol.parity_coeffs) {
        if ((c & 1) == 0 || c < 1 || c > 7)
            throw std::logic_error("clifford_completion: parity coefficient not odd in 1..7");
        residual -= parity_phase_z8(Parity(mask)).scaled(c);
    }
    for (std::size_t g : sol.chosen_free_gens) residual -= inst.free_gens[g].z8_image;
    residual.strip_constant();

    std::vector<CompletionGate> singles, pairs;
    for (const auto& [mask, c] : residual.terms()) {
        switch (std::popcount(mask)) {
            case 1:
                if (c & 1) throw std::logic_error("clifford_completion: odd degree-1 residual");
                singles.push_back({CompletionGate::Kind::SPower,
                                   std::countr_zero(mask), 0, c / 2});
                break;
            case 2: {
                if (c != 4) throw std::logic_error("clifford_completion: bad degree-2 residual");
                pairs.push_back({CompletionGate::Kind::Cz, std::countr_zero(mask),
                                 31 - std::countl_zero(mask), 1});
                break;
            }
            default:
                throw std::logic_error("clifford_completion: nonzero degree>=3 residual");
        }
    }
    singles.insert(singles.end(), pairs.begin(), pairs.end());
    return singles;
}

} // namespace tmap
