#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "blockperm/optimizer.h"
#include "doctest.h"
#include "json.hpp"
#include "oracles.h"

using namespace blockperm;

namespace {

const ExpectedDistribution kTwoBlocks({0.5, 0.0, 0.0, 0.5});

std::vector<double> sorted_row_sums(const AdjacencyMatrix &m) {
    auto s = m.row_sums();
    std::sort(s.begin(), s.end());
    return s;
}

/// Checks every trace invariant that holds in all modes.
void check_trace(const AdjacencyMatrix &initial, const QubitGroup &g, const ExpectedDistribution &e,
                 const FitnessTrace &t) {
    double best = t.initial_fitness;
    size_t iter = 0;
    std::vector<const TraceRecord *> iteration;
    auto close_iteration = [&] {
        if (iteration.empty()) {
            return;
        }
        double prev = best;
        size_t accepted = 0;
        double top = -1.0;
        for (auto *r : iteration) {
            top = std::max(top, r->candidate_fitness);
        }
        for (auto *r : iteration) {
            if (r->accepted) {
                accepted++;
                CHECK(r->candidate_fitness > prev);
                CHECK(r->candidate_fitness == top);
                best = r->candidate_fitness;
            }
        }
        CHECK(accepted == (top > prev ? 1u : 0u));
        for (auto *r : iteration) {
            CHECK(r->best_fitness == best);
        }
        iteration.clear();
    };
    for (const auto &rec : t.records) {
        if (rec.iter != iter) {
            close_iteration();
            CHECK(rec.iter == iter + 1);
            iter = rec.iter;
        }
        iteration.push_back(&rec);
    }
    close_iteration();
    CHECK(best == t.best_fitness);

    CHECK(replay(initial, t) == t.final_matrix);
    CHECK(replay_permutation(t, initial.size()) == t.final_permutation);
    CHECK(conjugate(initial, t.final_permutation).entries() == t.final_matrix.entries());
    CHECK(conjugate(t.final_matrix, inverse(t.final_permutation)).entries() == initial.entries());
    CHECK(sorted_row_sums(t.final_matrix) == sorted_row_sums(initial));
    FitnessState fresh = evaluate(t.final_matrix, g, e);
    CHECK(std::abs(fresh.fitness - t.best_fitness) <= 1e-12);
    CHECK(fresh.raw.raw == t.final_raw.raw);
}

AdjacencyMatrix shuffled_barbell(uint64_t seed = 42) {
    return shuffle(generate_barbell(15, 2), seed).first;
}

}  // namespace

TEST_CASE("config validation") {
    OptimizerConfig c;
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.max_iters = 10;
    c.batch_size = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.batch_size = 1;
    c.stop_fitness = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.stop_fitness = 0.5;
    CHECK_NOTHROW(c.validate());
    CHECK(c.effective_stall_window(32) == 10240);
    c.stall_window = 0;
    CHECK(c.effective_stall_window(32) == 0);

    CHECK(parse_search_mode("batch_select") == SearchMode::BatchSelect);
    CHECK(to_string(parse_search_mode("restricted_mcx")) == "restricted_mcx");
    CHECK_THROWS_AS(parse_search_mode("annealing"), std::invalid_argument);
}

TEST_CASE("already optimal input accepts nothing") {
    AdjacencyMatrix m = generate_barbell(15, 2);
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.max_iters = 3000;
    c.seed = 9;
    FitnessTrace t = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(t.best_fitness == 212.0 / 426.0);
    CHECK(std::none_of(t.records.begin(), t.records.end(), [](const TraceRecord &r) { return r.accepted; }));
    CHECK(t.final_permutation.is_identity());
    CHECK(t.iters_run == 3000);
    check_trace(m, g, kTwoBlocks, t);
}

TEST_CASE("random transpositions recover the shuffled barbell") {
    AdjacencyMatrix m = shuffled_barbell();
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.max_iters = 200000;
    c.seed = 1;
    FitnessTrace t = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(t.final_raw.raw == std::vector<double>{212, 1, 1, 212});
    CHECK(t.stop_reason == StopReason::Stalled);
    check_trace(m, g, kTwoBlocks, t);

    FitnessTrace again = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(format_trace_csv(again) == format_trace_csv(t));
}

TEST_CASE("identity candidates are recorded as rejected") {
    AdjacencyMatrix m = shuffled_barbell();
    OptimizerConfig c;
    c.max_iters = 5000;
    c.seed = 3;
    FitnessTrace t = run_random_pab(m, QubitGroup(5, {0, 5}), kTwoBlocks, c);
    size_t identities = 0;
    for (const auto &r : t.records) {
        if (r.a == r.b) {
            identities++;
            CHECK_FALSE(r.accepted);
        }
    }
    CHECK(identities > 0);
}

TEST_CASE("stop conditions") {
    AdjacencyMatrix m = shuffled_barbell();
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.seed = 4;
    c.max_iters = 200000;
    c.stop_fitness = 0.4;
    FitnessTrace t = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(t.stop_reason == StopReason::StopFitness);
    CHECK(t.best_fitness >= 0.4);
    CHECK(t.records.back().accepted);

    c.stop_fitness.reset();
    c.stall_window = 0;
    c.max_iters = 30000;
    FitnessTrace full = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(full.stop_reason == StopReason::MaxIters);
    CHECK(full.iters_run == 30000);

    c.stall_window = 50;
    FitnessTrace short_run = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(short_run.stop_reason == StopReason::Stalled);
    size_t since = 0;
    for (const auto &r : short_run.records) {
        since = r.accepted ? 0 : since + 1;
    }
    CHECK(since == 50);

    // Initial state already meets the stop fitness.
    c.stop_fitness = 0.0;
    FitnessTrace none = run_random_pab(m, g, kTwoBlocks, c);
    CHECK(none.iters_run == 0);
    CHECK(none.records.empty());
    CHECK(none.final_matrix == m);
}

TEST_CASE("exhaustive N=4 optimum is reached from every start") {
    // Two planted K2 blocks; brute force over all 4! relabelings.
    AdjacencyMatrix base = generate_planted_blocks({2, 2}, 1.0, 0.0, 1);
    std::vector<size_t> qubits{0, 2};
    QubitGroup g(2, qubits);
    std::vector<size_t> map{0, 1, 2, 3};
    double optimum = 0.0;
    std::vector<AdjacencyMatrix> starts;
    do {
        AdjacencyMatrix start = oracle::conjugate(base, Permutation(map));
        optimum = std::max(optimum, oracle::fitness(start, qubits, kTwoBlocks.weights()));
        starts.push_back(start);
    } while (std::next_permutation(map.begin(), map.end()));
    CHECK(optimum == 0.5);

    for (size_t i = 0; i < starts.size(); i++) {
        OptimizerConfig c;
        c.max_iters = 2000;
        c.seed = i;
        FitnessTrace t = run_random_pab(starts[i], g, kTwoBlocks, c);
        CHECK(t.best_fitness == optimum);
        check_trace(starts[i], g, kTwoBlocks, t);
    }
}

TEST_CASE("batch of one reproduces random transpositions") {
    AdjacencyMatrix m = shuffled_barbell(7);
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.max_iters = 20000;
    c.seed = 11;
    FitnessTrace single = run_random_pab(m, g, kTwoBlocks, c);
    c.mode = SearchMode::BatchSelect;
    c.batch_size = 1;
    FitnessTrace batch = run_batch_select(m, g, kTwoBlocks, c);
    CHECK(format_trace_csv(batch) == format_trace_csv(single));
    CHECK(batch.final_permutation == single.final_permutation);
}

TEST_CASE("batch select commits the lowest-index argmax") {
    AdjacencyMatrix m = shuffled_barbell(8);
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.mode = SearchMode::BatchSelect;
    c.batch_size = 16;
    c.max_iters = 2000;
    c.seed = 5;
    FitnessTrace t = run_batch_select(m, g, kTwoBlocks, c);
    CHECK(t.records.size() == 16 * t.iters_run);
    check_trace(m, g, kTwoBlocks, t);
    for (size_t it = 0; it < t.iters_run; it++) {
        auto first = t.records.begin() + static_cast<long>(16 * it);
        auto last = first + 16;
        auto win = std::find_if(first, last, [](const TraceRecord &r) { return r.accepted; });
        if (win == last) {
            continue;
        }
        for (auto r = first; r != last; ++r) {
            CHECK(win->candidate_fitness >= r->candidate_fitness);
            if (r < win) {
                CHECK(r->candidate_fitness < win->candidate_fitness);
            }
        }
    }
    CHECK(t.final_raw.raw == std::vector<double>{212, 1, 1, 212});
}

TEST_CASE("restricted moves") {
    CHECK(restricted_move_swaps(3, 3, 0, 32) == std::vector<Transposition>{{3, 19}});
    CHECK(restricted_move_swaps(3, 5, 0, 32) == std::vector<Transposition>{{3, 19}, {5, 21}});

    // N/2 distinct pairs per register.
    std::set<Transposition> pairs;
    for (size_t p = 0; p < 16; p++) {
        pairs.insert(restricted_mcx_pair(p, 0, 32));
    }
    CHECK(pairs.size() == 16);

    AdjacencyMatrix m = shuffled_barbell();
    QubitGroup g(5, {0, 5});
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; trial++) {
        AdjacencyMatrix work = m;
        auto swaps = restricted_move_swaps(rng() % 16, rng() % 16, 0, 32);
        for (int twice = 0; twice < 2; twice++) {
            for (auto [a, b] : swaps) {
                work.swap_indices(a, b);
            }
            CHECK(work.is_symmetric());
        }
        CHECK(work == m);
    }

    OptimizerConfig c;
    c.mode = SearchMode::RestrictedMcx;
    c.max_iters = 200000;
    c.seed = 2;
    FitnessTrace t = run_restricted_mcx(m, g, kTwoBlocks, c);
    CHECK(t.stop_reason == StopReason::Stalled);
    CHECK(t.iters_run < c.max_iters);
    CHECK(t.best_fitness < 212.0 / 426.0);
    check_trace(m, g, kTwoBlocks, t);
    for (const auto &r : t.records) {
        CHECK(r.a < 16);
        CHECK(r.b < 16);
    }

    c.restricted_target_qubit = 5;
    CHECK_THROWS_AS(run_restricted_mcx(m, g, kTwoBlocks, c), std::out_of_range);
}

TEST_CASE("restricted moves on the last qubit cannot change a two-block fitness") {
    // Flipping the least significant bit keeps every index in its half.
    AdjacencyMatrix m = shuffled_barbell();
    QubitGroup g(5, {0, 5});
    OptimizerConfig c;
    c.mode = SearchMode::RestrictedMcx;
    c.restricted_target_qubit = 4;
    c.max_iters = 5000;
    c.stall_window = 1000;
    FitnessTrace t = run_restricted_mcx(m, g, kTwoBlocks, c);
    CHECK(t.best_fitness == t.initial_fitness);
    CHECK(t.stop_reason == StopReason::Stalled);
}

TEST_CASE("replay rejects mismatched input") {
    AdjacencyMatrix m = shuffled_barbell();
    OptimizerConfig c;
    c.max_iters = 100;
    FitnessTrace t = run_random_pab(m, QubitGroup(5, {0, 5}), kTwoBlocks, c);
    CHECK_THROWS_AS(replay(generate_barbell(3, 0), t), std::invalid_argument);
    CHECK_THROWS_AS(replay(generate_barbell(14, 3), t), std::invalid_argument);

    FitnessTrace empty;
    empty.final_matrix = m;
    CHECK(replay(m, empty) == m);
}

TEST_CASE("trace CSV and summary JSON") {
    AdjacencyMatrix m = shuffled_barbell();
    OptimizerConfig c;
    c.max_iters = 500;
    c.seed = 12;
    FitnessTrace t = run_random_pab(m, QubitGroup(5, {0, 5}), kTwoBlocks, c);
    std::string csv = format_trace_csv(t);
    CHECK(csv.rfind("iter,a,b,candidate_fitness,best_fitness,accepted\n", 0) == 0);
    auto parsed = parse_trace_csv(csv);
    REQUIRE(parsed.size() == t.records.size());
    for (size_t i = 0; i < parsed.size(); i++) {
        CHECK(parsed[i].a == t.records[i].a);
        CHECK(parsed[i].accepted == t.records[i].accepted);
        CHECK(parsed[i].best_fitness == doctest::Approx(t.records[i].best_fitness).epsilon(1e-11));
    }
    CHECK(format_fitness(212.0 / 426.0) == "0.49765258216");
    CHECK_THROWS_AS(parse_trace_csv("bad header\n"), FormatError);
    CHECK_THROWS_AS(parse_trace_csv("iter,a,b,candidate_fitness,best_fitness,accepted\n1,2,3\n"), FormatError);

    auto j = nlohmann::json::parse(format_summary_json(t));
    CHECK(j["mode"] == "random_pab");
    CHECK(j["seed"] == 12);
    CHECK(j["iters_run"] == t.iters_run);
    CHECK(j["best_fitness"].get<double>() == t.best_fitness);
    CHECK(j["final_raw"].get<std::vector<double>>() == t.final_raw.raw);
    CHECK(j["permutation"].get<std::vector<size_t>>() == t.final_permutation.map());
}

TEST_CASE("batch of 32 versus single candidates (report only)") {
    AdjacencyMatrix m = shuffled_barbell();
    QubitGroup g(5, {0, 5});
    const double threshold = 212.0 / 426.0;
    auto iterations_to = [&](const FitnessTrace &t) {
        for (const auto &r : t.records) {
            if (r.best_fitness >= threshold) {
                return static_cast<double>(r.iter);
            }
        }
        return static_cast<double>(t.iters_run + 1);
    };
    double single_sum = 0.0, batch_sum = 0.0;
    size_t batch_not_worse = 0;
    for (uint64_t seed = 1; seed <= 20; seed++) {
        OptimizerConfig c;
        c.mode = SearchMode::BatchSelect;
        c.seed = seed;
        c.max_iters = 200000;
        c.stop_fitness = threshold;
        c.batch_size = 1;
        double single = iterations_to(run_batch_select(m, g, kTwoBlocks, c));
        c.batch_size = 32;
        double batch = iterations_to(run_batch_select(m, g, kTwoBlocks, c));
        single_sum += single;
        batch_sum += batch;
        batch_not_worse += batch <= single;
    }
    MESSAGE(fmt::format("mean iterations to reach 212/426 over 20 seeds: batch 1 = {:.1f}, batch 32 = {:.1f}; "
                        "batch 32 not slower on {} seeds",
                        single_sum / 20, batch_sum / 20, batch_not_worse));
}
