// Command-line runner: generate, shuffle, encode, optimize, simulate, plot.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "blockperm/encoding.h"
#include "blockperm/fitness.h"
#include "blockperm/graph.h"
#include "blockperm/optimizer.h"
#include "blockperm/perm.h"
#include "blockperm/plot.h"
#include "blockperm/simulator.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace blockperm;

namespace {

constexpr int kExitError = 1;
constexpr int kExitOracleMismatch = 2;
constexpr double kOracleTolerance = 1e-12;

struct Preset {
    size_t clique_size;
    size_t path_length;
    std::string group;
    std::string expected;
};

std::optional<Preset> find_preset(const std::string &name) {
    if (name.empty()) {
        return std::nullopt;
    }
    if (name == "barbell-paper") {
        return Preset{15, 2, "0,5", "0.5,0,0,0.5"};
    }
    throw std::invalid_argument(fmt::format("unknown preset '{}' (available: barbell-paper)", name));
}

uint64_t default_seed() {
    const char *env = std::getenv("BLOCKPERM_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        size_t used = 0;
        unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw std::invalid_argument(fmt::format("BLOCKPERM_SEED='{}' is not a nonnegative integer", env));
}

std::string json_probs(const std::vector<double> &v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); i++) {
        out += (i ? "," : "") + format_fitness(v[i]);
    }
    return out + "]";
}

std::string json_raw(const std::vector<double> &v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); i++) {
        out += (i ? "," : "") + format_exact(v[i]);
    }
    return out + "]";
}

struct Common {
    std::string out_dir = ".";
    uint64_t seed = 0;
    std::string preset;
    std::string input;
    std::string group;
    std::string expected;
};

fs::path out_path(const Common &c, const std::string &name) {
    fs::create_directories(c.out_dir);
    return fs::path(c.out_dir) / name;
}

AdjacencyMatrix resolve_input(const Common &c) {
    if (!c.input.empty()) {
        return load_any(c.input);
    }
    if (auto preset = find_preset(c.preset)) {
        return generate_barbell(preset->clique_size, preset->path_length);
    }
    throw std::invalid_argument("no input: pass --in FILE or --preset NAME");
}

QubitGroup resolve_group(const Common &c, const AdjacencyMatrix &m) {
    std::string text = c.group;
    if (text.empty()) {
        if (auto preset = find_preset(c.preset)) {
            text = preset->group;
        } else {
            // Row MSB and column MSB: the two-block split.
            text = fmt::format("0,{}", m.n_qubits());
        }
    }
    QubitGroup g = QubitGroup::parse(m.n_qubits(), text);
    if (g.matrix_size() != m.size()) {
        throw std::invalid_argument("qubit group does not match the matrix size");
    }
    return g;
}

ExpectedDistribution resolve_expected(const Common &c, const QubitGroup &g) {
    std::string text = c.expected;
    if (text.empty()) {
        if (auto preset = find_preset(c.preset)) {
            text = preset->expected;
        }
    }
    ExpectedDistribution e = text.empty() ? default_expected(g.k(), 2) : ExpectedDistribution::parse(text);
    if (e.size() != g.outcome_count()) {
        throw std::invalid_argument(
            fmt::format("--expected has {} weights but group {} has {} outcomes", e.size(), g.str(), g.outcome_count()));
    }
    return e;
}

void add_common(CLI::App *cmd, Common &c, bool with_input, bool with_group) {
    cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed (default: $BLOCKPERM_SEED or 0)");
    cmd->add_option("--preset", c.preset, "Named experiment preset (barbell-paper)");
    if (with_input) {
        cmd->add_option("--in", c.input, "Input matrix CSV or edge list");
    }
    if (with_group) {
        cmd->add_option("--group", c.group, "Qubit group, comma list (default: 0,n)");
        cmd->add_option("--expected", c.expected, "Expected outcome distribution, comma list summing to 1");
    }
}

int cmd_generate(const Common &c, const std::vector<size_t> &barbell, const std::vector<size_t> &planted, double p_in,
                 double p_out) {
    AdjacencyMatrix m;
    std::string what;
    if (!barbell.empty()) {
        if (barbell.size() != 2) {
            throw std::invalid_argument("--barbell takes CLIQUE_SIZE PATH_LENGTH");
        }
        m = generate_barbell(barbell[0], barbell[1]);
        what = fmt::format("barbell({}, {})", barbell[0], barbell[1]);
    } else if (!planted.empty()) {
        m = generate_planted_blocks(planted, p_in, p_out, c.seed);
        what = fmt::format("planted blocks, seed {}", c.seed);
    } else if (auto preset = find_preset(c.preset)) {
        m = generate_barbell(preset->clique_size, preset->path_length);
        what = fmt::format("barbell({}, {})", preset->clique_size, preset->path_length);
    } else {
        throw std::invalid_argument("generate needs --barbell, --planted or --preset");
    }
    save_matrix(m, out_path(c, "matrix.csv"));
    save_edge_list(m, out_path(c, "graph.edges"));
    fmt::print("generated {}: {} nodes, N={}, total_sum={}\n", what, m.n_nodes(), m.size(), format_exact(m.total_sum()));
    fmt::print("wrote {} and {}\n", out_path(c, "matrix.csv").string(), out_path(c, "graph.edges").string());
    return 0;
}

int cmd_shuffle(const Common &c) {
    AdjacencyMatrix m = resolve_input(c);
    auto [shuffled, p] = shuffle(m, c.seed);
    save_matrix(shuffled, out_path(c, "shuffled.csv"));
    write_file_atomic(out_path(c, "permutation.txt"), p.str() + "\n");
    fmt::print("shuffle seed {}\npermutation {}\n", c.seed, cycle_decomposition(p).str());
    fmt::print("wrote {} and {}\n", out_path(c, "shuffled.csv").string(), out_path(c, "permutation.txt").string());
    return 0;
}

int cmd_encode(const Common &c, bool masks) {
    AdjacencyMatrix m = resolve_input(c);
    QubitGroup g = resolve_group(c, m);
    ExpectedDistribution e = resolve_expected(c, g);
    FitnessState s = evaluate(m, g, e);
    fmt::print("group {}\n", g.str());
    fmt::print("raw {}\n", json_raw(s.raw.raw));
    fmt::print("total {}\n", format_exact(s.raw.total));
    fmt::print("normalized {}\n", json_probs(s.raw.normalized()));
    fmt::print("expected {}\n", json_probs(e.weights()));
    fmt::print("fitness {}{}\n", format_fitness(s.fitness), s.degenerate ? " (degenerate: zero matrix)" : "");
    if (masks) {
        for (size_t o = 0; o < g.outcome_count(); o++) {
            fs::path p = out_path(c, fmt::format("mask_{}.pgm", o));
            write_file_atomic(p, mask_to_pgm(pattern_mask(g, o), g.matrix_size()));
        }
        fmt::print("wrote {} masks to {}\n", g.outcome_count(), c.out_dir);
    }
    return 0;
}

int cmd_optimize(const Common &c, OptimizerConfig config) {
    AdjacencyMatrix m = resolve_input(c);
    QubitGroup g = resolve_group(c, m);
    ExpectedDistribution e = resolve_expected(c, g);
    config.seed = c.seed;
    FitnessTrace trace = run(m, g, e, config);

    nlohmann::json summary = nlohmann::json::parse(format_summary_json(trace));
    summary["group"] = g.qubits();
    summary["expected"] = e.weights();
    summary["max_iters"] = config.max_iters;
    summary["stall_window"] = config.effective_stall_window(m.size());
    if (config.mode == SearchMode::BatchSelect) {
        summary["batch_size"] = config.batch_size;
    }
    if (config.stop_fitness) {
        summary["stop_fitness"] = *config.stop_fitness;
    }
    summary["input"] = c.input.empty() ? "preset:" + c.preset : c.input;

    write_file_atomic(out_path(c, "trace.csv"), format_trace_csv(trace));
    write_file_atomic(out_path(c, "summary.json"), summary.dump(2) + "\n");
    save_matrix(trace.final_matrix, out_path(c, "final_matrix.csv"));

    fmt::print("mode {} seed {}: {} iterations ({}), fitness {} -> {}\n", to_string(trace.mode), trace.seed,
               trace.iters_run, to_string(trace.stop_reason), format_fitness(trace.initial_fitness),
               format_fitness(trace.best_fitness));
    fmt::print("final raw {}\n", json_raw(trace.final_raw.raw));
    fmt::print("wrote trace.csv, summary.json, final_matrix.csv to {}\n", c.out_dir);
    return 0;
}

int cmd_simulate(const Common &c, const std::string &perm_file) {
    AdjacencyMatrix m = resolve_input(c);
    QubitGroup g = resolve_group(c, m);
    Permutation p = Permutation::identity(m.size());
    if (!perm_file.empty()) {
        p = Permutation::parse(read_file(perm_file));
        if (p.size() != m.size()) {
            throw std::invalid_argument(
                fmt::format("permutation has {} entries but the matrix is {}x{}", p.size(), m.size(), m.size()));
        }
    }
    Statevector state = apply_symmetric_permutation(prepare(m), p);
    std::vector<double> probs = measure_group(state, g);

    // Classical path: block sums of the conjugated matrix. Measurement
    // probabilities follow squared entries, which equal the entries only on
    // 0/1 data.
    AdjacencyMatrix conj = conjugate(m, p);
    bool binary = m.is_binary();
    if (!binary) {
        std::cerr << "warning: weighted matrix; measurement probabilities use squared entries and differ from the "
                     "block-sum fitness path. Cross-checking against squared-entry block sums.\n";
        for (size_t r = 0; r < conj.size(); r++) {
            for (size_t col = 0; col < conj.size(); col++) {
                conj.at(r, col) = conj(r, col) * conj(r, col);
            }
        }
    }
    std::vector<double> classical = block_distribution(conj, g).normalized();
    double max_err = 0.0;
    for (size_t o = 0; o < probs.size(); o++) {
        max_err = std::max(max_err, std::abs(probs[o] - classical[o]));
    }
    fmt::print("group {}\nprobabilities {}\nblock_sums_normalized {}\nmax_abs_error {:.3e}\n", g.str(),
               json_probs(probs), json_probs(classical), max_err);
    if (!(max_err <= kOracleTolerance)) {
        std::cerr << fmt::format("error: statevector and block-sum paths disagree (max error {:.3e} > {:.0e})\n",
                                 max_err, kOracleTolerance);
        return kExitOracleMismatch;
    }
    fmt::print("cross-check ok\n");
    return 0;
}

int cmd_plot(const Common &c, const std::string &trace_file, const std::string &matrix_file) {
    if (trace_file.empty() && matrix_file.empty()) {
        throw std::invalid_argument("plot needs --trace and/or --matrix");
    }
    if (!trace_file.empty()) {
        auto records = parse_trace_csv(read_file(trace_file));
        write_file_atomic(out_path(c, "fitness.svg"), render_fitness_svg(records));
        fmt::print("wrote {}\n", out_path(c, "fitness.svg").string());
    }
    if (!matrix_file.empty()) {
        write_file_atomic(out_path(c, "heatmap.svg"), render_heatmap_svg(load_any(matrix_file)));
        fmt::print("wrote {}\n", out_path(c, "heatmap.svg").string());
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Blockmodeling by qubit-group fitness over row/column permutations"};
    app.require_subcommand(1);

    Common common;
    try {
        common.seed = default_seed();
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }

    auto *gen = app.add_subcommand("generate", "Write a problem instance (matrix.csv + graph.edges)");
    add_common(gen, common, false, false);
    std::vector<size_t> barbell, planted;
    double p_in = 0.9, p_out = 0.05;
    gen->add_option("--barbell", barbell, "CLIQUE_SIZE PATH_LENGTH")->expected(2);
    gen->add_option("--planted", planted, "Planted block sizes, comma list")->delimiter(',');
    gen->add_option("--p-in", p_in, "Within-block edge probability")->capture_default_str();
    gen->add_option("--p-out", p_out, "Cross-block edge probability")->capture_default_str();

    auto *shuf = app.add_subcommand("shuffle", "Conjugate by a seeded random permutation");
    add_common(shuf, common, true, false);

    auto *enc = app.add_subcommand("encode", "Print block distribution and fitness for a qubit group");
    add_common(enc, common, true, true);
    bool masks = false;
    enc->add_flag("--masks", masks, "Write one PGM pattern mask per outcome");

    auto *opt = app.add_subcommand("optimize", "Run the permutation search");
    add_common(opt, common, true, true);
    OptimizerConfig config;
    std::string mode = "random_pab";
    std::optional<double> stop_fitness;
    std::optional<size_t> stall_window;
    opt->add_option("--mode", mode, "random_pab | restricted_mcx | batch_select")->capture_default_str();
    opt->add_option("--max-iters", config.max_iters, "Iteration budget")->capture_default_str();
    opt->add_option("--batch-size", config.batch_size, "Candidates per iteration (batch_select)")
        ->capture_default_str();
    opt->add_option("--stop-fitness", stop_fitness, "Stop once best fitness reaches this value");
    opt->add_option("--stall-window", stall_window, "Non-improving iterations before stopping (0 disables)");
    opt->add_option("--target-qubit", config.restricted_target_qubit, "Target qubit of restricted moves")
        ->capture_default_str();

    auto *sim = app.add_subcommand("simulate", "Statevector oracle: group probabilities with cross-check");
    add_common(sim, common, true, true);
    std::string perm_file;
    sim->add_option("--perm", perm_file, "Permutation file to apply (one line of images)");

    auto *plot = app.add_subcommand("plot", "Render trace CSV and/or matrix CSV as SVG");
    add_common(plot, common, false, false);
    std::string trace_file, matrix_file;
    plot->add_option("--trace", trace_file, "Trace CSV from optimize");
    plot->add_option("--matrix", matrix_file, "Matrix CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(common, barbell, planted, p_in, p_out);
        }
        if (shuf->parsed()) {
            return cmd_shuffle(common);
        }
        if (enc->parsed()) {
            return cmd_encode(common, masks);
        }
        if (opt->parsed()) {
            config.mode = parse_search_mode(mode);
            config.stop_fitness = stop_fitness;
            config.stall_window = stall_window;
            return cmd_optimize(common, config);
        }
        if (sim->parsed()) {
            return cmd_simulate(common, perm_file);
        }
        if (plot->parsed()) {
            return cmd_plot(common, trace_file, matrix_file);
        }
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
