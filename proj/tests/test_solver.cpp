// test_solver.cpp
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "test_util.hpp"
#include "tmap/solver.hpp"

using namespace tmap;
using testutil::equal_up_to_constant;
using testutil::random_spec;
using testutil::realized_phase;

namespace {

QuadraticSpec and_spec() {
    QuadraticSpec spec;
    spec.inputs = 2;
    spec.outputs.push_back({{0b11}, 0, false});
    return spec;
}

// Instance with a raw class target and no generators: bits at {x2}, {x0,x2},
// {x1,x2}, {x0,x1,x2} on three wires.
SynthesisInstance syndrome_instance() {
    SynthesisInstance inst;
    inst.inputs = 3;
    inst.outputs = 0;
    inst.target_z8.add_term(0b100, 1);
    inst.target_z8.add_term(0b101, 6);
    inst.target_z8.add_term(0b110, 6);
    inst.target_z8.add_term(0b111, 4);
    inst.target_f2 = reduce_f2(inst.target_z8, 3);
    return inst;
}

void check_solution_valid(const SynthesisInstance& inst, const Solution& sol) {
    CHECK(sol.t_count == sol.selection.popcount());
    CHECK(sol.parity_coeffs.size() == sol.t_count);
    for (const auto& [mask, c] : sol.parity_coeffs) {
        CHECK(sol.selection.test(mask - 1));
        CHECK((c % 2) == 1);
        CHECK(c >= 1);
        CHECK(c <= 7);
    }
    // Completion recomputation re-asserts the whole Z8 accounting.
    CHECK(clifford_completion(inst, sol) == sol.clifford_completion);
    CHECK(equal_up_to_constant(realized_phase(inst, sol), inst.target_z8));
}

} // namespace

TEST_CASE("two-parity instance: weight-2 optimum on the weight-1-infeasible target") {
    const SynthesisInstance inst = syndrome_instance();
    REQUIRE(inst.target_f2.test_monomial(0b100));
    REQUIRE(inst.target_f2.test_monomial(0b101));
    REQUIRE(inst.target_f2.test_monomial(0b110));
    REQUIRE(inst.target_f2.test_monomial(0b111));

    const Solution sol = solve(inst);
    CHECK(sol.t_count == 2);
    CHECK(sol.exact);
    REQUIRE(sol.parity_coeffs.size() == 2);
    CHECK(sol.parity_coeffs.count(0b011) == 1);  // x0 ^ x1
    CHECK(sol.parity_coeffs.count(0b111) == 1);  // x0 ^ x1 ^ x2
    check_solution_valid(inst, sol);

    // The T powers land on the exact phase with no completion at all:
    // 7 * lift(x0^x1) + 1 * lift(x0^x1^x2) is the target on the nose.
    CHECK(sol.parity_coeffs.at(0b011) == 7);
    CHECK(sol.parity_coeffs.at(0b111) == 1);
    CHECK(sol.clifford_completion.empty());
}

TEST_CASE("single AND without generators: the unique weight-7 solution") {
    SynthesisInstance inst = build_instance(and_spec());
    inst.free_gens.clear();
    const Solution sol = solve(inst);
    CHECK(sol.t_count == 7);
    CHECK(sol.exact);
    for (std::uint32_t mask = 1; mask < 8; ++mask) CHECK(sol.selection.test(mask - 1));
    check_solution_valid(inst, sol);
}

TEST_CASE("single AND with clean-ancilla generators: four T") {
    const SynthesisInstance inst = build_instance(and_spec());
    REQUIRE(inst.free_gens.size() == 4);  // S, Z, CZ(out,in0), CZ(out,in1)
    CHECK(inst.free_gens[0].kind == FreeGenKind::SOnOutput);

    const Solution sol = solve(inst);
    CHECK(sol.t_count == 4);
    CHECK(sol.exact);
    REQUIRE(sol.parity_coeffs.size() == 4);
    // Parities z, x0^z, x1^z, x0^x1^z.
    CHECK(sol.parity_coeffs.count(0b100) == 1);
    CHECK(sol.parity_coeffs.count(0b101) == 1);
    CHECK(sol.parity_coeffs.count(0b110) == 1);
    CHECK(sol.parity_coeffs.count(0b111) == 1);
    REQUIRE(sol.chosen_free_gens == std::vector<std::size_t>{0});
    check_solution_valid(inst, sol);
}

TEST_CASE("build_instance: target is the quadratic tensor only") {
    SUBCASE("single AND") {
        const SynthesisInstance inst = build_instance(and_spec());
        CHECK(inst.wires() == 3);
        CHECK(inst.target_z8.terms() == std::map<std::uint32_t, int>{{0b111, 4}});
        std::size_t set_bits = 0;
        for (std::size_t i = 0; i < MonomialIndex::get(3).count(); ++i)
            set_bits += inst.target_f2.bits.test(i);
        CHECK(set_bits == 1);
        CHECK(inst.target_f2.test_monomial(0b111));
    }
    SUBCASE("purely linear output gives a zero target") {
        QuadraticSpec spec;
        spec.inputs = 1;
        spec.outputs.push_back({{}, 0b1, false});
        const SynthesisInstance inst = build_instance(spec);
        CHECK(inst.target_z8.empty());
        CHECK(inst.target_f2 == PhaseVecF2::zero(2));
        const Solution sol = solve(inst);
        CHECK(sol.t_count == 0);
        CHECK(sol.exact);
    }
    SUBCASE("two outputs over four inputs: one degree-3 bit per tensor triplet") {
        // f = 1 ^ a ^ ab, g = ab ^ bc ^ cd on inputs a..d = wires 0..3,
        // outputs f,g = wires 4,5.
        QuadraticSpec spec;
        spec.inputs = 4;
        spec.outputs.push_back({{0b0011}, 0b0001, true});
        spec.outputs.push_back({{0b0011, 0b0110, 0b1100}, 0, false});
        const SynthesisInstance inst = build_instance(spec);
        const std::map<std::uint32_t, int> expect = {
            {0b010011, 4}, {0b100011, 4}, {0b100110, 4}, {0b101100, 4}};
        CHECK(inst.target_z8.terms() == expect);
        for (const auto& [mask, c] : expect) {
            (void)c;
            CHECK(inst.target_f2.test_monomial(mask));
        }
    }
    SUBCASE("wire count over the limit is rejected") {
        QuadraticSpec spec;
        spec.inputs = 12;
        spec.outputs.push_back({{0b11}, 0, false});
        CHECK_THROWS_AS(build_instance(spec), std::invalid_argument);
    }
}

TEST_CASE("derive_dont_cares: family order and images") {
    SUBCASE("order for two outputs") {
        QuadraticSpec spec;
        spec.inputs = 2;
        spec.outputs.push_back({{0b11}, 0, false});
        spec.outputs.push_back({{}, 0b01, false});
        const auto gens = derive_dont_cares(spec);
        REQUIRE(gens.size() == 9);
        const std::vector<FreeGenKind> kinds = {
            FreeGenKind::SOnOutput,      FreeGenKind::ZOnOutput,
            FreeGenKind::CzOutputInput,  FreeGenKind::CzOutputInput,
            FreeGenKind::SOnOutput,      FreeGenKind::ZOnOutput,
            FreeGenKind::CzOutputInput,  FreeGenKind::CzOutputInput,
            FreeGenKind::CzOutputOutput};
        for (std::size_t i = 0; i < gens.size(); ++i) CHECK(gens[i].kind == kinds[i]);
        CHECK(gens[0].output == 0);
        CHECK(gens[3].other == 1);
        CHECK(gens[4].output == 1);
        CHECK(gens[8].output == 0);
        CHECK(gens[8].other == 1);
        for (const auto& g : gens)
            for (const auto& [mask, c] : g.z8_image.terms()) {
                (void)mask;
                CHECK((c % 2) == 0);
            }
    }
    SUBCASE("S image of a two-pair output keeps its degree-4 tail out of the class") {
        QuadraticSpec spec;
        spec.inputs = 4;
        spec.outputs.push_back({{0b0011, 0b1100}, 0, false});
        const auto gens = derive_dont_cares(spec);
        const FreeGenerator& s = gens[0];
        REQUIRE(s.kind == FreeGenKind::SOnOutput);
        CHECK(s.z8_image.terms() ==
              std::map<std::uint32_t, int>{{0b0011, 2}, {0b1100, 2}, {0b1111, 4}});
        CHECK(s.f2_image.test_monomial(0b0011));
        CHECK(s.f2_image.test_monomial(0b1100));
        std::size_t set_bits = 0;
        for (std::size_t i = 0; i < MonomialIndex::get(5).count(); ++i)
            set_bits += s.f2_image.bits.test(i);
        CHECK(set_bits == 2);
    }
    SUBCASE("S image with a linear term present") {
        QuadraticSpec spec;
        spec.inputs = 3;
        spec.outputs.push_back({{0b011}, 0b100, false});  // y = x0x1 ^ x2
        const auto gens = derive_dont_cares(spec);
        CHECK(gens[0].z8_image.terms() ==
              std::map<std::uint32_t, int>{{0b011, 2}, {0b100, 2}, {0b111, 4}});
    }
}

TEST_CASE("generator shifts preserve feasibility") {
    // Adding any null-space vector of the candidate matrix to a feasible
    // selection yields another feasible selection.
    SynthesisInstance inst = build_instance(and_spec());
    inst.free_gens.clear();
    const Solution sol = solve(inst);
    const auto basis = null_space_basis(candidate_phase_matrix(3));
    CHECK(basis.empty());  // the 3-wire candidate matrix is square invertible

    std::mt19937_64 rng(5);
    const QuadraticSpec spec4 = random_spec(rng, 3, 1);
    SynthesisInstance inst4 = build_instance(spec4);
    inst4.free_gens.clear();
    const Solution sol4 = solve(inst4);
    for (const BitVec& v : null_space_basis(candidate_phase_matrix(4))) {
        const BitVec shifted = sol4.selection ^ v;
        const Solution replay = resolve_selection(inst4, shifted, {}, false);
        CHECK(replay.t_count == shifted.popcount());
    }
}

TEST_CASE("random instances: solutions validate and generators never hurt") {
    std::mt19937_64 rng(31);
    std::size_t strict = 0;
    for (int it = 0; it < 40; ++it) {
        const int n = 2 + int(rng() % 2);
        const int m = 1 + int(rng() % 2);
        const QuadraticSpec spec = random_spec(rng, n, m);
        const SynthesisInstance inst = build_instance(spec);
        const Solution with = solve(inst);
        CHECK(with.exact);
        check_solution_valid(inst, with);

        SynthesisInstance bare = inst;
        bare.free_gens.clear();
        const Solution without = solve(bare);
        check_solution_valid(bare, without);
        CHECK(with.t_count <= without.t_count);
        strict += with.t_count < without.t_count;
    }
    CHECK(strict > 0);
}

TEST_CASE("determinism: repeated and multi-worker solves agree") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 6; ++it) {
        const QuadraticSpec spec = random_spec(rng, 4, 1);
        const SynthesisInstance inst = build_instance(spec);
        const Solution a = solve(inst);
        const Solution b = solve(inst);
        CHECK(a.selection == b.selection);
        CHECK(a.parity_coeffs == b.parity_coeffs);
        CHECK(a.chosen_free_gens == b.chosen_free_gens);

        SolverConfig cfg;
        cfg.workers = 4;
        const SynthesisInstance wide = build_instance(spec, cfg);
        const Solution c = solve(wide);
        CHECK(c.selection == a.selection);
        CHECK(c.chosen_free_gens == a.chosen_free_gens);
        CHECK(c.t_count == a.t_count);
    }
}

TEST_CASE("resolve_selection round trip and rejection") {
    const SynthesisInstance inst = build_instance(and_spec());
    const Solution sol = solve(inst);
    const Solution replay =
        resolve_selection(inst, sol.selection, sol.chosen_free_gens, sol.exact);
    CHECK(replay.t_count == sol.t_count);
    CHECK(replay.parity_coeffs == sol.parity_coeffs);
    CHECK(replay.clifford_completion == sol.clifford_completion);

    BitVec wrong = sol.selection;
    wrong.flip(0);
    CHECK_THROWS_AS(resolve_selection(inst, wrong, sol.chosen_free_gens, false),
                    std::logic_error);
}

TEST_CASE("budgeted path: valid suboptimal solutions flagged inexact") {
    SolverConfig cfg;
    cfg.exact_nullity_limit = 0;
    cfg.heuristic_budget = 2000;
    const SynthesisInstance inst = build_instance(and_spec(), cfg);
    const Solution sol = solve(inst);
    CHECK_FALSE(sol.exact);
    CHECK(sol.t_count >= 4);
    CHECK(sol.t_count <= 7);
    CHECK(equal_up_to_constant(realized_phase(inst, sol), inst.target_z8));
}
