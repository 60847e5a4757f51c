// acceptance.cpp — end-to-end acceptance checks, one pass/fail line each.
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "tmap/circuit.hpp"
#include "tmap/circuitgen.hpp"
#include "tmap/gf2.hpp"
#include "tmap/library.hpp"
#include "tmap/mapper.hpp"
#include "tmap/phasepoly.hpp"
#include "tmap/quadratic.hpp"
#include "tmap/solver.hpp"
#include "tmap/verify.hpp"
#include "tmap/xag.hpp"

using namespace tmap;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

// Appends "what" to the running failure detail when cond is false.
bool expect(bool cond, std::string& detail, const std::string& what) {
    if (!cond) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
    return cond;
}

void report(int id, const std::string& label, bool ok, double secs, double limit_s,
            const std::string& detail) {
    std::ostringstream os;
    os << (ok ? "[PASS] " : "[FAIL] ") << std::setfill('0') << std::setw(2) << id << ' '
       << label << " (" << std::fixed << std::setprecision(2) << secs << " s";
    if (limit_s > 0) os << ", limit " << std::setprecision(0) << limit_s << " s";
    os << ')';
    if (!ok && !detail.empty()) os << " -- " << detail;
    std::cout << os.str() << std::endl;
    if (!ok) ++g_failures;
}

// Runs one criterion body, enforcing its wall-clock limit (0 = unlimited).
void criterion(int id, const std::string& label, double limit_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        expect(false, detail, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s)
        expect(false, detail, "exceeded the time limit");
    report(id, label, ok && detail.empty(), secs, limit_s, detail);
}

cd zeta8(int power) {
    const double angle = std::numbers::pi / 4.0 * double(((power % 8) + 8) % 8);
    return {std::cos(angle), std::sin(angle)};
}

QuadraticSpec single_output_spec(int inputs, const std::vector<std::uint32_t>& quad,
                                 std::uint32_t linear = 0, bool constant = false) {
    QuadraticSpec spec;
    spec.inputs = inputs;
    OutputAnf out;
    out.quad = quad;
    out.linear = linear;
    out.constant = constant;
    spec.outputs.push_back(std::move(out));
    spec.validate();
    return spec;
}

// Exhaustive minimum T count over every parity subset and generator subset.
// Odd coefficients of one parity share a GF(2) class and even multiples of any
// parity lift are absorbed by the S/Z/CZ completion layer, so the weight
// search may fix every selected coefficient at 1.  Residual feasibility is the
// completion condition: degree-1 coefficients even, degree-2 divisible by 4,
// degree-3 and higher zero mod 8.
std::size_t exhaustive_min_t(const ZetaPoly& target, const std::vector<FreeGenerator>& gens,
                             int wires) {
    const std::uint32_t masks = 1u << wires;
    auto dense = [&](const ZetaPoly& p) {
        std::array<int, 64> d{};
        for (const auto& [m, c] : p.terms())
            if (m) d[m] = c;
        return d;
    };

    std::vector<std::array<int, 64>> lift(masks);
    for (std::uint32_t p = 1; p < masks; ++p) lift[p] = dense(parity_phase_z8(Parity(p)));
    std::vector<std::array<int, 64>> gen_img;
    gen_img.reserve(gens.size());
    for (const FreeGenerator& g : gens) gen_img.push_back(dense(g.z8_image));
    const std::array<int, 64> base = dense(target);

    auto feasible = [&](const std::array<int, 64>& r) {
        for (std::uint32_t m = 1; m < masks; ++m) {
            const int v = r[m] & 7;
            switch (std::popcount(m)) {
                case 1: if (v & 1) return false; break;
                case 2: if (v & 3) return false; break;
                default: if (v) return false; break;
            }
        }
        return true;
    };

    std::size_t best = SIZE_MAX;
    for (std::uint64_t gs = 0; gs < (std::uint64_t(1) << gens.size()); ++gs) {
        std::array<int, 64> cur = base;
        for (std::size_t gi = 0; gi < gens.size(); ++gi)
            if ((gs >> gi) & 1)
                for (std::uint32_t m = 1; m < masks; ++m)
                    cur[m] = (cur[m] - gen_img[gi][m]) & 7;

        std::size_t size = 0;
        if (feasible(cur)) best = std::min(best, size);
        // Gray walk over parity subsets: step g toggles parity countr_zero(g)+1.
        for (std::uint64_t g = 1; g < (std::uint64_t(1) << (masks - 1)); ++g) {
            const int bit = std::countr_zero(g);
            const std::uint32_t p = std::uint32_t(bit) + 1;
            const bool now_on = ((g ^ (g >> 1)) >> bit) & 1;
            if (now_on) {
                for (std::uint32_t m = 1; m < masks; ++m) cur[m] = (cur[m] - lift[p][m]) & 7;
                ++size;
            } else {
                for (std::uint32_t m = 1; m < masks; ++m) cur[m] = (cur[m] + lift[p][m]) & 7;
                --size;
            }
            if (size < best && feasible(cur)) best = size;
        }
    }
    return best;
}

std::vector<QuadraticSpec> library_seed_specs(int max_inputs) {
    std::vector<QuadraticSpec> specs;
    for (int n = 2; n <= max_inputs; ++n) {
        std::vector<std::uint32_t> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) pairs.push_back((1u << a) | (1u << b));
        std::sort(pairs.begin(), pairs.end());
        for (std::uint32_t subset = 1; subset < (1u << pairs.size()); ++subset) {
            std::vector<std::uint32_t> quad;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (subset & (1u << i)) quad.push_back(pairs[i]);
            specs.push_back(single_output_spec(n, quad));
        }
    }
    return specs;
}

double geomean(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += std::log(v);
    return std::exp(acc / double(values.size()));
}

} // namespace

int main() {
    std::cout << "acceptance checks\n";

    criterion(1, "minimum-weight solve of the 3-wire syndrome instance", 1.0,
              [](std::string& detail) {
        SynthesisInstance inst;
        inst.inputs = 3;
        inst.outputs = 0;
        inst.target_z8.add_term(0b100u, 1);
        inst.target_z8.add_term(0b101u, 6);
        inst.target_z8.add_term(0b110u, 6);
        inst.target_z8.add_term(0b111u, 4);
        inst.target_f2 = reduce_f2(inst.target_z8, 3);

        const Solution sol = solve(inst);
        expect(sol.t_count == 2, detail, "t_count != 2");
        expect(sol.exact, detail, "solve was not exhaustive");
        std::vector<std::uint32_t> parities;
        for (const auto& [mask, c] : sol.parity_coeffs) parities.push_back(mask);
        expect(parities == std::vector<std::uint32_t>{0b011u, 0b111u}, detail,
               "parities are not {x0^x1, x0^x1^x2}");
        return true;
    });

    criterion(2, "AND block without ancilla don't-cares costs 7 T gates", 1.0,
              [](std::string& detail) {
        SynthesisInstance inst = build_instance(single_output_spec(2, {0b11u}));
        inst.free_gens.clear();
        const Solution sol = solve(inst);
        expect(sol.t_count == 7, detail, "t_count != 7");
        expect(sol.exact, detail, "solve was not exhaustive");
        expect(sol.parity_coeffs.size() == 7, detail, "selection is not all 7 parities");
        return true;
    });

    criterion(3, "solver matches an independent exhaustive minimum on all 64 "
                 "three-input single-output specs", 60.0,
              [](std::string& detail) {
        const std::vector<std::uint32_t> pairs = {0b011u, 0b101u, 0b110u};
        int checked = 0;
        for (std::uint32_t qs = 0; qs < 8; ++qs) {
            std::vector<std::uint32_t> quad;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (qs & (1u << i)) quad.push_back(pairs[i]);
            for (std::uint32_t linear = 0; linear < 8; ++linear) {
                const QuadraticSpec spec = single_output_spec(3, quad, linear);
                const SynthesisInstance inst = build_instance(spec);
                const Solution sol = solve(inst);
                const std::size_t want =
                    exhaustive_min_t(inst.target_z8, inst.free_gens, inst.wires());
                ++checked;
                if (!expect(sol.t_count == want, detail,
                            "spec quad=" + std::to_string(qs) + " linear=" +
                                std::to_string(linear) + ": solver " +
                                std::to_string(sol.t_count) + " vs exhaustive " +
                                std::to_string(want)))
                    return false;
            }
        }
        return expect(checked == 64, detail, "expected 64 specs");
    });

    criterion(4, "ancilla don't-cares never raise and at least once lower the T count "
                 "over 200 random specs", 300.0,
              [](std::string& detail) {
        std::mt19937_64 rng(4);
        int strict = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const int n = 2 + int(rng() % 3);
            const int m = 1 + int(rng() % 2);
            const QuadraticSpec spec = testutil::random_spec(rng, n, m);
            const SynthesisInstance with_gens = build_instance(spec);
            SynthesisInstance without_gens = with_gens;
            without_gens.free_gens.clear();
            const std::size_t t_on = solve(with_gens).t_count;
            const std::size_t t_off = solve(without_gens).t_count;
            if (!expect(t_on <= t_off, detail,
                        "rep " + std::to_string(rep) + ": with gens " + std::to_string(t_on) +
                            " > without " + std::to_string(t_off)))
                return false;
            if (t_on < t_off) ++strict;
        }
        return expect(strict > 0, detail, "no spec improved strictly");
    });

    // Criteria 5-6 share one batch of mapped networks.
    struct MappedNet {
        std::size_t total_t = 0;
        std::size_t naive_t = 0;
        bool all_exact = true;
    };
    std::vector<MappedNet> batch;
    Library shared_lib;
    shared_lib.wires = 7;

    criterion(5, "50 random networks map, emit, and verify classically at 1e-9", 600.0,
              [&](std::string& detail) {
        const MapConfig cfg;
        for (int i = 0; i < 50; ++i) {
            RandomXagParams params;
            switch (i % 3) {
                case 0: params.pis = 5; params.nodes = 4; break;
                case 1: params.pis = 4; params.nodes = 5; break;
                default: params.pis = 3; params.nodes = 6; break;
            }
            params.outputs = 1 + (i & 1);
            params.seed = 1000 + std::uint64_t(i);
            const XagNetwork net = random_xag(params);

            const Cover cover = select_cover(net, enumerate_cuts(net, shared_lib, cfg), cfg);
            Layout layout;
            const QCircuit c = emit_cover(net, cover, shared_lib, &layout);
            if (!expect(c.qubits <= 11, detail,
                        "net " + std::to_string(i) + " needs " + std::to_string(c.qubits) +
                            " qubits"))
                return false;
            const Verdict v = check_classical(c, net, layout);
            if (!expect(v.ok, detail, "net " + std::to_string(i) + ": " + v.message))
                return false;
            if (!expect(c.t_count() == cover.total_t, detail,
                        "net " + std::to_string(i) + ": circuit T count drifted from the cover"))
                return false;
            batch.push_back({cover.total_t, naive_cover(net).total_t, cover.all_exact});
        }
        return true;
    });

    criterion(6, "library-priced covers never exceed the naive per-AND covers", 0.0,
              [&](std::string& detail) {
        if (!expect(batch.size() == 50, detail, "mapping batch incomplete")) return false;
        std::vector<double> ratios;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (!expect(batch[i].total_t <= batch[i].naive_t, detail,
                        "net " + std::to_string(i) + ": " + std::to_string(batch[i].total_t) +
                            " > naive " + std::to_string(batch[i].naive_t)))
                return false;
            ratios.push_back(double(std::max<std::size_t>(batch[i].total_t, 1)) /
                             double(std::max<std::size_t>(batch[i].naive_t, 1)));
        }
        std::ostringstream os;
        os << "geomean T ratio vs naive: " << std::fixed << std::setprecision(3)
           << geomean(ratios);
        std::cout << "       " << os.str() << '\n';
        return true;
    });

    criterion(7, "geomean mapped T count is non-increasing in the cut budget", 0.0,
              [&](std::string& detail) {
        std::vector<XagNetwork> nets;
        for (int i = 0; i < 12; ++i) {
            RandomXagParams params;
            params.pis = 6;
            params.nodes = 14;
            params.outputs = 2;
            params.seed = 500 + std::uint64_t(i);
            nets.push_back(random_xag(params));
        }
        const std::vector<int> budgets = {1, 2, 4, 8, 16};
        std::vector<double> means;
        bool exact_everywhere = true;
        for (int b : budgets) {
            MapConfig cfg;
            cfg.cut_budget = b;
            std::vector<double> totals;
            for (const XagNetwork& net : nets) {
                const Cover cover = select_cover(net, enumerate_cuts(net, shared_lib, cfg), cfg);
                totals.push_back(double(std::max<std::size_t>(cover.total_t, 1)));
                exact_everywhere = exact_everywhere && cover.all_exact;
            }
            means.push_back(geomean(totals));
        }
        std::ostringstream os;
        os << "geomean T by budget:";
        for (std::size_t i = 0; i < budgets.size(); ++i)
            os << ' ' << budgets[i] << "->" << std::fixed << std::setprecision(2) << means[i];
        os << (exact_everywhere ? " (all blocks exact)" : " (inexact blocks present)");
        std::cout << "       " << os.str() << '\n';
        for (std::size_t i = 0; i + 1 < means.size(); ++i)
            if (!expect(means[i + 1] <= means[i] + 1e-9, detail,
                        "budget " + std::to_string(budgets[i + 1]) + " raised the geomean"))
                return false;
        return true;
    });

    criterion(8, "phase extraction matches statevector simulation on 100 random "
                 "diagonal blocks", 0.0,
              [](std::string& detail) {
        std::mt19937_64 rng(8);
        const GateKind pool[] = {GateKind::Cx, GateKind::T,   GateKind::Tdg, GateKind::S,
                                 GateKind::Sdg, GateKind::Z,  GateKind::Cz};
        for (int rep = 0; rep < 100; ++rep) {
            const int wires = 2 + int(rng() % 5);
            QCircuit c;
            c.qubits = wires;
            const int len = 1 + int(rng() % 40);
            for (int i = 0; i < len; ++i) {
                const GateKind k = pool[rng() % 7];
                const int q0 = int(rng() % wires);
                if (is_two_qubit(k)) {
                    int q1 = int(rng() % (wires - 1));
                    if (q1 >= q0) ++q1;
                    c.add(k, q0, q1);
                } else {
                    c.add(k, q0);
                }
            }
            const PhaseBlock pb = extract_phase_poly(c);
            for (std::uint32_t x = 0; x < (1u << wires); ++x) {
                const StateVector sv = simulate(c, x);
                std::uint64_t y = 0;
                for (int w = 0; w < wires; ++w)
                    if (std::popcount(x & pb.linear_map[std::size_t(w)]) & 1)
                        y |= std::uint64_t(1) << w;
                const cd want = zeta8(pb.poly.evaluate(x));
                for (std::uint64_t idx = 0; idx < sv.amps.size(); ++idx) {
                    const cd expected = (idx == y) ? want : cd(0, 0);
                    if (!expect(std::abs(sv.amps[idx] - expected) < 1e-9, detail,
                                "rep " + std::to_string(rep) + ": amplitude mismatch"))
                        return false;
                }
            }
        }
        return true;
    });

    criterion(9, "library round-trips, rebuilds byte-identically, and replays all "
                 "entries exactly", 0.0,
              [](std::string& detail) {
        const std::vector<QuadraticSpec> specs = library_seed_specs(4);
        const Library lib1 = synthesize_library(5, specs);
        const Library lib2 = synthesize_library(5, specs);
        const std::string text1 = write_library_text(lib1);
        if (!expect(text1 == write_library_text(lib2), detail, "rebuild is not byte-identical"))
            return false;

        const std::string path = "acceptance_lib.txt";
        save_library(lib1, path);
        const Library back = load_library(path);
        std::remove(path.c_str());
        if (!expect(write_library_text(back) == text1, detail, "save/load changed the text"))
            return false;

        for (const auto& [key, entry] : lib1.entries) {
            const QuadraticSpec canon_spec = canonical_representative(key);
            const auto hit = lookup(lib1, canon_spec);
            if (!expect(hit.has_value(), detail, "canonical form missed its own entry"))
                return false;
            const SynthesisInstance inst = build_instance(canon_spec, lib1.config);
            const Solution sol = instantiate(*hit->first, canon_spec, hit->second, inst);
            if (!expect(sol.t_count == entry.t_count, detail, "replayed T count drifted"))
                return false;
            // Completion re-derivation validates the GF(2) class equation.
            if (!expect(clifford_completion(inst, sol) == sol.clifford_completion, detail,
                        "completion does not re-derive"))
                return false;
            if (!expect(testutil::equal_up_to_constant(testutil::realized_phase(inst, sol),
                                                       inst.target_z8),
                        detail, "realized phase differs from the target"))
                return false;
        }
        return expect(lib1.entries.size() == 14, detail, "expected 14 canonical entries");
    });

    criterion(10, "GF(2) rank, solutions, and null bases verify on 200 random systems",
              10.0, [](std::string& detail) {
        std::mt19937_64 rng(10);
        int unsolvable_seen = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t rows = 1 + rng() % 64;
            const std::size_t cols = (rep % 2) ? (1 + rng() % 128) : (1 + rng() % rows);
            BitMatrix a(rows, cols);
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    if (rng() & 1) a.set(r, c);

            const RowEchelon re = row_reduce(a);
            const std::vector<BitVec> null = null_space_basis(a);
            if (!expect(re.rank() + null.size() == cols, detail, "rank + nullity != cols"))
                return false;
            for (const BitVec& v : null)
                if (!expect(a.mul(v).none(), detail, "null vector not in the kernel"))
                    return false;

            BitVec planted(cols);
            for (std::size_t c = 0; c < cols; ++c) planted.set(c, rng() & 1);
            const BitVec b = a.mul(planted);
            const auto x = solve(a, b);
            if (!expect(x.has_value() && a.mul(*x) == b, detail, "planted system unsolved"))
                return false;

            BitVec random_b(rows);
            for (std::size_t r = 0; r < rows; ++r) random_b.set(r, rng() & 1);
            const auto y = solve(a, random_b);
            if (y.has_value()) {
                if (!expect(a.mul(*y) == random_b, detail, "returned solution is wrong"))
                    return false;
            } else {
                ++unsolvable_seen;
                // Verify inconsistency: b must lie outside the column space.
                BitMatrix wide(rows, cols + 1);
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t c = 0; c < cols; ++c) wide.set(r, c, a.at(r, c));
                    wide.set(r, cols, random_b.test(r));
                }
                if (!expect(row_reduce(wide).rank() == re.rank() + 1, detail,
                            "reported unsolvable but b is in the column space"))
                    return false;
            }
        }
        return expect(unsolvable_seen > 0, detail, "no unsolvable systems exercised");
    });

    std::cout << "acceptance: " << (10 - g_failures) << "/10 criteria passed" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
