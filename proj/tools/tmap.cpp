// tmap.cpp
// Command-line front end: library building, mapping, verification, stats, benchmarks.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tmap/circuitgen.hpp"
#include "tmap/library.hpp"
#include "tmap/mapper.hpp"
#include "tmap/verify.hpp"
#include "tmap/xag.hpp"

namespace {

using namespace tmap;

constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kUsageError = 2;
constexpr int kIoError = 3;
constexpr int kParseError = 4;
constexpr int kVerifyError = 5;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

XagNetwork load_network(const std::string& path) {
    const std::string text = read_file(path);
    if (path.ends_with(".json")) return parse_json(text);
    return parse_blif(text);
}

// Wall-clock per stage; printed to stderr so reports stay byte-stable unless
// timings are explicitly requested in the report.
struct StageClock {
    using clock = std::chrono::steady_clock;
    std::vector<std::pair<std::string, double>> stages;
    clock::time_point t0;
    std::string current;

    void begin(std::string name) {
        current = std::move(name);
        t0 = clock::now();
    }
    void end() {
        stages.emplace_back(current,
                            std::chrono::duration<double>(clock::now() - t0).count());
    }
    void print() const {
        for (const auto& [name, s] : stages)
            std::cerr << "  " << name << ": " << std::fixed << std::setprecision(3) << s
                      << " s\n";
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        for (const auto& [name, s] : stages) j[name] = s;
        return j;
    }
};

struct SolverArgs {
    std::size_t nullity_limit = 26;
    std::uint64_t budget = 50000;
    std::uint64_t seed = 1;
    int workers = 1;

    SolverConfig to_config() const {
        SolverConfig cfg;
        cfg.exact_nullity_limit = nullity_limit;
        cfg.heuristic_budget = budget;
        cfg.seed = seed;
        cfg.workers = workers;
        return cfg;
    }
    void add_options(CLI::App* cmd) {
        cmd->add_option("--nullity-limit", nullity_limit,
                        "largest null-space dimension searched exhaustively");
        cmd->add_option("--budget", budget, "heuristic flip-evaluation budget");
        cmd->add_option("--seed", seed, "random seed (recorded in reports)");
        cmd->add_option("--workers", workers, "worker threads for exhaustive search");
    }
};

// All single-output quadratic functions on n inputs, as library seeds.
std::vector<QuadraticSpec> seed_specs(int max_inputs) {
    std::vector<QuadraticSpec> specs;
    for (int n = 2; n <= max_inputs; ++n) {
        std::vector<std::uint32_t> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) pairs.push_back((1u << a) | (1u << b));
        std::sort(pairs.begin(), pairs.end());
        for (std::uint32_t mask = 1; mask < (1u << pairs.size()); ++mask) {
            QuadraticSpec spec;
            spec.inputs = n;
            OutputAnf out;
            for (std::size_t s = 0; s < pairs.size(); ++s)
                if (mask & (1u << s)) out.quad.push_back(pairs[s]);
            spec.outputs.push_back(std::move(out));
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

int cmd_lib_build(const std::string& out, int wires, int max_inputs, const SolverArgs& sa) {
    if (max_inputs > wires - 1)
        throw std::invalid_argument("lib build: max inputs must leave room for the output wire");
    StageClock clock;
    clock.begin("library synthesis");
    const Library lib = synthesize_library(wires, seed_specs(max_inputs), sa.to_config());
    clock.end();
    save_library(lib, out);
    std::cout << "library: " << lib.entries.size() << " entries, wires=" << lib.wires
              << ", seed=" << lib.config.seed << " -> " << out << "\n";
    clock.print();
    return kOk;
}

int cmd_lib_show(const std::string& path) {
    const Library lib = load_library(path);
    std::cout << "library " << path << ": wires=" << lib.wires
              << " nullity_limit=" << lib.config.exact_nullity_limit
              << " budget=" << lib.config.heuristic_budget << " seed=" << lib.config.seed
              << "\n";
    for (const auto& [key, e] : lib.entries)
        std::cout << "  " << key.hex() << "  n=" << e.inputs << " m=" << e.outputs
                  << " t=" << e.t_count << (e.exact ? "" : " (inexact)") << "\n";
    std::cout << lib.entries.size() << " entries\n";
    return kOk;
}

nlohmann::json cover_report(const XagNetwork& net, const Cover& cover, const Cover& naive,
                            const QCircuit& circuit, const Library& lib,
                            const MapConfig& mc) {
    nlohmann::json j;
    j["seed"] = lib.config.seed;
    j["solver"] = {{"nullity_limit", lib.config.exact_nullity_limit},
                   {"budget", lib.config.heuristic_budget},
                   {"workers", lib.config.workers}};
    j["mapper"] = {{"leaves", mc.max_leaves}, {"cuts", mc.cut_budget}, {"passes", mc.flow_passes}};
    j["network"] = {{"pis", net.pi_count()},
                    {"pos", net.po_count()},
                    {"ands", net.and_count()},
                    {"xors", net.xor_count()}};
    j["total_t"] = cover.total_t;
    j["naive_t"] = naive.total_t;
    j["t_count"] = circuit.t_count();
    j["clifford_count"] = circuit.clifford_count();
    j["qubits"] = circuit.qubits;
    j["all_exact"] = cover.all_exact;
    j["nodes"] = nlohmann::json::array();
    for (const auto& [id, cut] : cover.chosen)
        j["nodes"].push_back({{"node", id},
                              {"leaves", cut.leaves},
                              {"t", cut.t_cost},
                              {"exact", cut.exact}});
    return j;
}

int cmd_map(const std::string& in, const std::string& out_qasm, const std::string& report_path,
            const std::string& layout_path, const std::string& lib_in,
            const std::string& lib_out, MapConfig mc, const SolverArgs& sa, bool timings) {
    StageClock clock;
    clock.begin("read");
    const XagNetwork net = load_network(in);
    Library lib;
    if (!lib_in.empty()) {
        lib = load_library(lib_in);
    } else {
        lib.wires = mc.max_leaves + 1;
        lib.config = sa.to_config();
    }
    clock.end();

    clock.begin("cut enumeration");
    const CutLists cuts = enumerate_cuts(net, lib, mc);
    clock.end();
    clock.begin("area flow");
    const Cover cover = select_cover(net, cuts, mc);
    clock.end();
    clock.begin("emission");
    Layout layout;
    const QCircuit circuit = emit_cover(net, cover, lib, &layout);
    clock.end();
    const Cover naive = naive_cover(net);

    clock.begin("write");
    nlohmann::json report = cover_report(net, cover, naive, circuit, lib, mc);
    report["input"] = in;
    if (timings) report["timings"] = clock.to_json();
    if (!out_qasm.empty()) write_file(out_qasm, write_qasm(circuit));
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
    if (!layout_path.empty()) write_file(layout_path, write_layout_json(layout));
    if (!lib_out.empty()) save_library(lib, lib_out);
    clock.end();

    std::cout << "mapped " << in << ": T=" << cover.total_t << " (naive " << naive.total_t
              << "), clifford=" << circuit.clifford_count() << ", qubits=" << circuit.qubits
              << (cover.all_exact ? "" : ", inexact entries used") << "\n";
    clock.print();
    return kOk;
}

int cmd_verify(const std::string& circuit_path, const std::string& net_path,
               const std::string& layout_path) {
    const QCircuit circuit = parse_qasm(read_file(circuit_path));
    const XagNetwork net = load_network(net_path);
    const Layout layout = parse_layout_json(read_file(layout_path));
    const Verdict v = check_classical(circuit, net, layout);
    if (v.ok) {
        std::cout << "verification passed: " << net.pi_count() << "-input network, "
                  << circuit.qubits << " qubits\n";
        return kOk;
    }
    std::cout << "verification failed: " << v.message << "\n";
    return kVerifyError;
}

int cmd_stats(const std::string& in) {
    const XagNetwork net = load_network(in);
    std::cout << in << ": " << net.size() << " nodes, " << net.pi_count() << " inputs, "
              << net.po_count() << " outputs, " << net.and_count() << " AND, "
              << net.xor_count() << " XOR\n";
    if (net.pi_count() <= 16) {
        std::size_t total = 0;
        for (std::size_t i = 0; i < net.po_count(); ++i) {
            const Anf anf = anf_of_cut(net, net.po(i).node, net.pis());
            const std::size_t mc = mc_anf(anf);
            total += mc;
            std::cout << "  MC_ANF(" << net.po_name(i) << ") = " << mc << "\n";
        }
        std::cout << "  MC_ANF total = " << total << "\n";
    } else {
        std::cout << "  MC_ANF skipped (more than 16 inputs)\n";
    }
    return kOk;
}

int cmd_bench(const std::string& out_csv, int pis, int nodes, int outputs, int count,
              const std::string& sweep, int leaves, int passes, double and_fraction,
              const SolverArgs& sa) {
    std::vector<int> budgets;
    {
        std::istringstream ss(sweep);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                budgets.push_back(std::stoi(item));
            } catch (...) {
                throw std::invalid_argument("bench: bad --sweep-cuts entry '" + item + "'");
            }
        }
        if (budgets.empty()) throw std::invalid_argument("bench: empty sweep list");
    }

    std::vector<XagNetwork> nets;
    for (int i = 0; i < count; ++i) {
        RandomXagParams p;
        p.pis = pis;
        p.nodes = nodes;
        p.outputs = outputs;
        p.and_fraction = and_fraction;
        p.seed = sa.seed + std::uint64_t(i);
        nets.push_back(random_xag(p));
    }

    Library lib;
    lib.wires = leaves + 1;
    lib.config = sa.to_config();

    std::ostringstream csv;
    csv << "cuts,seed,geomean_t,geomean_naive_t,ratio,all_exact\n";
    std::cout << "cuts  geomean_T  geomean_naive  ratio   exact\n";
    for (int budget : budgets) {
        MapConfig mc;
        mc.max_leaves = leaves;
        mc.cut_budget = budget;
        mc.flow_passes = passes;
        double log_t = 0.0, log_naive = 0.0;
        bool all_exact = true;
        for (const XagNetwork& net : nets) {
            const CutLists cuts = enumerate_cuts(net, lib, mc);
            const Cover cover = select_cover(net, cuts, mc);
            const Cover naive = naive_cover(net);
            log_t += std::log(double(std::max<std::size_t>(cover.total_t, 1)));
            log_naive += std::log(double(std::max<std::size_t>(naive.total_t, 1)));
            all_exact = all_exact && cover.all_exact;
        }
        const double gt = std::exp(log_t / count);
        const double gn = std::exp(log_naive / count);
        csv << budget << "," << sa.seed << "," << std::fixed << std::setprecision(4) << gt
            << "," << gn << "," << (gt / gn) << "," << (all_exact ? 1 : 0) << "\n";
        std::cout << std::setw(4) << budget << "  " << std::setw(9) << std::fixed
                  << std::setprecision(3) << gt << "  " << std::setw(13) << gn << "  "
                  << std::setw(6) << std::setprecision(4) << (gt / gn) << "  "
                  << (all_exact ? "yes" : "no") << "\n";
    }
    if (!out_csv.empty()) write_file(out_csv, csv.str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"XAG to Clifford+T technology mapper with exact T-count pricing"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (CLI flags override)");

    // lib build / lib show
    auto* lib_cmd = app.add_subcommand("lib", "phase-block library maintenance");
    lib_cmd->require_subcommand(1);
    auto* lib_build = lib_cmd->add_subcommand("build", "solve and save a block library");
    std::string lb_out = "lib.txt";
    int lb_wires = 7, lb_max_inputs = 4;
    SolverArgs lb_solver;
    lib_build->add_option("--out", lb_out, "library file to write");
    lib_build->add_option("--wires", lb_wires, "wire ceiling recorded in the library");
    lib_build->add_option("--max-inputs", lb_max_inputs,
                          "seed all quadratic functions up to this many inputs");
    lb_solver.add_options(lib_build);

    auto* lib_show = lib_cmd->add_subcommand("show", "print library entries");
    std::string ls_path;
    lib_show->add_option("--lib", ls_path, "library file")->required();

    // map
    auto* map_cmd = app.add_subcommand("map", "map a network to a Clifford+T circuit");
    std::string m_in, m_out, m_report, m_layout, m_lib_in, m_lib_out;
    MapConfig m_cfg;
    SolverArgs m_solver;
    bool m_timings = false;
    map_cmd->add_option("--in", m_in, "input network (.blif or .json)")->required();
    map_cmd->add_option("--out", m_out, "output circuit (.qasm)");
    map_cmd->add_option("--report", m_report, "JSON report path");
    map_cmd->add_option("--layout", m_layout, "qubit layout JSON path");
    map_cmd->add_option("--lib", m_lib_in, "block library to use (its solver config wins)");
    map_cmd->add_option("--lib-out", m_lib_out, "save the (possibly extended) library here");
    map_cmd->add_option("--leaves", m_cfg.max_leaves, "cut leaf budget L");
    map_cmd->add_option("--cuts", m_cfg.cut_budget, "cuts kept per node C");
    map_cmd->add_option("--passes", m_cfg.flow_passes, "area-flow passes");
    map_cmd->add_flag("--timings", m_timings, "include stage timings in the JSON report");
    m_solver.add_options(map_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check a circuit against its network");
    std::string v_circuit, v_net, v_layout;
    verify_cmd->add_option("--circuit", v_circuit, "circuit (.qasm)")->required();
    verify_cmd->add_option("--net", v_net, "network (.blif or .json)")->required();
    verify_cmd->add_option("--layout", v_layout, "layout JSON")->required();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "network statistics");
    std::string s_in;
    stats_cmd->add_option("--in", s_in, "input network (.blif or .json)")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "random-network budget sweep");
    std::string b_csv, b_sweep = "1,2,4,8,16";
    int b_pis = 5, b_nodes = 10, b_outputs = 2, b_count = 20, b_leaves = 6, b_passes = 3;
    double b_and_fraction = 0.5;
    SolverArgs b_solver;
    bench_cmd->add_option("--out", b_csv, "CSV output path");
    bench_cmd->add_option("--sweep-cuts", b_sweep, "comma-separated cut budgets");
    bench_cmd->add_option("--pis", b_pis, "inputs per random network");
    bench_cmd->add_option("--nodes", b_nodes, "gates per random network");
    bench_cmd->add_option("--outputs", b_outputs, "outputs per random network");
    bench_cmd->add_option("--count", b_count, "number of networks");
    bench_cmd->add_option("--leaves", b_leaves, "cut leaf budget L");
    bench_cmd->add_option("--passes", b_passes, "area-flow passes");
    bench_cmd->add_option("--and-fraction", b_and_fraction, "fraction of AND gates");
    b_solver.add_options(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (lib_build->parsed()) return cmd_lib_build(lb_out, lb_wires, lb_max_inputs, lb_solver);
        if (lib_show->parsed()) return cmd_lib_show(ls_path);
        if (map_cmd->parsed())
            return cmd_map(m_in, m_out, m_report, m_layout, m_lib_in, m_lib_out, m_cfg,
                           m_solver, m_timings);
        if (verify_cmd->parsed()) return cmd_verify(v_circuit, v_net, v_layout);
        if (stats_cmd->parsed()) return cmd_stats(s_in);
        if (bench_cmd->parsed())
            return cmd_bench(b_csv, b_pis, b_nodes, b_outputs, b_count, b_sweep, b_leaves,
                             b_passes, b_and_fraction, b_solver);
        std::cerr << "no subcommand\n";
        return kUsageError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::runtime_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}
