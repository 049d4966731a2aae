#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "blockperm/graph.h"
#include "blockperm/optimizer.h"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace blockperm;

namespace {

struct Result {
    int code;
    std::string out;
};

fs::path scratch(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / "blockperm_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Runs the CLI with stdout and stderr captured to a file inside `dir`.
Result run(const fs::path &dir, const std::string &args, const std::string &env = "") {
    fs::path log = dir / "cli.log";
    std::string cmd = fmt::format("{} \"{}\" {} > \"{}\" 2>&1", env.empty() ? "env -u BLOCKPERM_SEED" : "env " + env,
                                  BLOCKPERM_CLI, args, log.string());
    int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), read_file(log)};
}

}  // namespace

TEST_CASE("generate then encode the barbell") {
    fs::path dir = scratch("encode");
    Result gen = run(dir, fmt::format("generate --barbell 15 2 --out {}", dir.string()));
    REQUIRE(gen.code == 0);
    CHECK(fs::exists(dir / "matrix.csv"));
    CHECK(fs::exists(dir / "graph.edges"));
    CHECK(load_matrix(dir / "matrix.csv") == generate_barbell(15, 2));
    CHECK(load_edge_list(dir / "graph.edges") == generate_barbell(15, 2));

    Result enc = run(dir, fmt::format("encode --in {} --group 0,5 --masks --out {}", (dir / "matrix.csv").string(),
                                      dir.string()));
    REQUIRE(enc.code == 0);
    CHECK(enc.out.find("raw [212,1,1,212]\n") != std::string::npos);
    CHECK(enc.out.find("total 426\n") != std::string::npos);
    CHECK(enc.out.find("fitness 0.49765258216\n") != std::string::npos);
    for (int o = 0; o < 4; o++) {
        CHECK(fs::exists(dir / fmt::format("mask_{}.pgm", o)));
    }

    Result preset = run(dir, "encode --preset barbell-paper");
    CHECK(preset.code == 0);
    CHECK(preset.out.find("raw [212,1,1,212]\n") != std::string::npos);
}

TEST_CASE("shuffle, optimize, plot pipeline") {
    fs::path dir = scratch("pipeline");
    REQUIRE(run(dir, fmt::format("generate --preset barbell-paper --out {}", dir.string())).code == 0);
    REQUIRE(run(dir, fmt::format("shuffle --in {} --seed 42 --out {}", (dir / "matrix.csv").string(), dir.string()))
                .code == 0);
    AdjacencyMatrix shuffled = load_matrix(dir / "shuffled.csv");
    CHECK(shuffled.total_sum() == 426.0);
    Permutation p = Permutation::parse(read_file(dir / "permutation.txt"));
    CHECK(conjugate(generate_barbell(15, 2), p) == shuffled);

    Result opt = run(dir, fmt::format("optimize --in {} --preset barbell-paper --mode random_pab --seed 1 "
                                      "--max-iters 100000 --out {}",
                                      (dir / "shuffled.csv").string(), dir.string()));
    REQUIRE(opt.code == 0);
    auto records = parse_trace_csv(read_file(dir / "trace.csv"));
    REQUIRE_FALSE(records.empty());
    for (size_t i = 1; i < records.size(); i++) {
        CHECK(records[i].best_fitness >= records[i - 1].best_fitness);
    }
    auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(summary["seed"] == 1);
    CHECK(summary["mode"] == "random_pab");
    CHECK(summary["final_raw"].get<std::vector<double>>() == std::vector<double>{212, 1, 1, 212});
    Permutation found(summary["permutation"].get<std::vector<size_t>>());
    CHECK(load_matrix(dir / "final_matrix.csv") == conjugate(shuffled, found));

    Result plot = run(dir, fmt::format("plot --trace {} --matrix {} --out {}", (dir / "trace.csv").string(),
                                       (dir / "final_matrix.csv").string(), dir.string()));
    REQUIRE(plot.code == 0);
    CHECK(read_file(dir / "fitness.svg").rfind("<svg", 0) == 0);
    CHECK(read_file(dir / "heatmap.svg").rfind("<svg", 0) == 0);

    Result sim = run(dir, fmt::format("simulate --in {} --perm {} --group 0,5", (dir / "matrix.csv").string(),
                                      (dir / "permutation.txt").string()));
    CHECK(sim.code == 0);
    CHECK(sim.out.find("cross-check ok") != std::string::npos);
}

TEST_CASE("simulate agrees with encode") {
    fs::path dir = scratch("simulate");
    REQUIRE(run(dir, fmt::format("generate --planted 4,4 --p-in 0.8 --p-out 0.1 --seed 3 --out {}", dir.string()))
                .code == 0);
    std::string in = (dir / "matrix.csv").string();
    Result enc = run(dir, fmt::format("encode --in {} --group 0,3", in));
    Result sim = run(dir, fmt::format("simulate --in {} --group 0,3", in));
    REQUIRE(enc.code == 0);
    REQUIRE(sim.code == 0);
    auto line = [](const std::string &text, const std::string &key) {
        std::istringstream s(text);
        for (std::string l; std::getline(s, l);) {
            if (l.rfind(key + " ", 0) == 0) {
                return l.substr(key.size() + 1);
            }
        }
        return std::string();
    };
    CHECK_FALSE(line(enc.out, "normalized").empty());
    CHECK(line(sim.out, "probabilities") == line(enc.out, "normalized"));
}

TEST_CASE("seed comes from the environment by default") {
    fs::path dir = scratch("env");
    REQUIRE(run(dir, fmt::format("generate --preset barbell-paper --out {}", dir.string())).code == 0);
    std::string in = (dir / "matrix.csv").string();
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    REQUIRE(run(dir, fmt::format("shuffle --in {} --out {}", in, (dir / "a").string()), "BLOCKPERM_SEED=42").code == 0);
    REQUIRE(run(dir, fmt::format("shuffle --in {} --seed 42 --out {}", in, (dir / "b").string())).code == 0);
    CHECK(read_file(dir / "a" / "permutation.txt") == read_file(dir / "b" / "permutation.txt"));

    Result bad = run(dir, fmt::format("shuffle --in {}", in), "BLOCKPERM_SEED=abc");
    CHECK(bad.code == 1);
}

TEST_CASE("errors exit nonzero with a message") {
    fs::path dir = scratch("errors");
    Result missing = run(dir, fmt::format("encode --in {}", (dir / "nope.csv").string()));
    CHECK(missing.code == 1);
    CHECK(missing.out.find("error:") != std::string::npos);

    std::ofstream(dir / "bad.edges") << "nodes 3\n0 1\n0 7\n";
    Result bad_edges = run(dir, fmt::format("encode --in {}", (dir / "bad.edges").string()));
    CHECK(bad_edges.code == 1);
    CHECK(bad_edges.out.find("line 3") != std::string::npos);

    REQUIRE(run(dir, fmt::format("generate --barbell 3 0 --out {}", dir.string())).code == 0);
    std::string in = (dir / "matrix.csv").string();
    CHECK(run(dir, fmt::format("encode --in {} --group 0,9", in)).code == 1);
    CHECK(run(dir, fmt::format("encode --in {} --expected 0.5,0.6,0,0", in)).code == 1);
    CHECK(run(dir, fmt::format("encode --in {} --expected 0.5,0.5", in)).code == 1);
    CHECK(run(dir, fmt::format("optimize --in {} --mode annealing", in)).code == 1);
    CHECK(run(dir, fmt::format("optimize --in {} --max-iters 0", in)).code == 1);
    CHECK(run(dir, "encode --preset nope").code == 1);
    CHECK(run(dir, "frobnicate").code != 0);
}
