#include "blockperm/optimizer.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "blockperm/rng.h"
#include "json.hpp"

namespace blockperm {

std::string to_string(SearchMode mode) {
    switch (mode) {
        case SearchMode::RandomPab:
            return "random_pab";
        case SearchMode::RestrictedMcx:
            return "restricted_mcx";
        case SearchMode::BatchSelect:
            return "batch_select";
    }
    throw std::logic_error("unknown search mode");
}

SearchMode parse_search_mode(const std::string &text) {
    if (text == "random_pab") {
        return SearchMode::RandomPab;
    }
    if (text == "restricted_mcx") {
        return SearchMode::RestrictedMcx;
    }
    if (text == "batch_select") {
        return SearchMode::BatchSelect;
    }
    throw std::invalid_argument(
        fmt::format("unknown mode '{}' (expected random_pab, restricted_mcx or batch_select)", text));
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::MaxIters:
            return "max_iters";
        case StopReason::StopFitness:
            return "stop_fitness";
        case StopReason::Stalled:
            return "stalled";
    }
    throw std::logic_error("unknown stop reason");
}

void OptimizerConfig::validate() const {
    if (max_iters < 1) {
        throw std::invalid_argument("max_iters must be >= 1");
    }
    if (batch_size < 1) {
        throw std::invalid_argument("batch_size must be >= 1");
    }
    if (stop_fitness && !(*stop_fitness >= 0.0 && *stop_fitness <= 1.0)) {
        throw std::invalid_argument(fmt::format("stop_fitness must lie in [0, 1], got {}", *stop_fitness));
    }
}

size_t OptimizerConfig::effective_stall_window(size_t n) const {
    return stall_window ? *stall_window : 10 * n * n;
}

std::vector<Transposition> restricted_move_swaps(size_t row_pattern, size_t col_pattern, size_t target_qubit,
                                                 size_t n) {
    std::vector<Transposition> swaps{restricted_mcx_pair(row_pattern, target_qubit, n)};
    if (col_pattern != row_pattern) {
        swaps.push_back(restricted_mcx_pair(col_pattern, target_qubit, n));
    }
    return swaps;
}

std::vector<Transposition> record_swaps(const TraceRecord &record, SearchMode mode, size_t target_qubit, size_t n) {
    if (mode == SearchMode::RestrictedMcx) {
        return restricted_move_swaps(record.a, record.b, target_qubit, n);
    }
    if (record.a >= n || record.b >= n) {
        throw std::out_of_range(fmt::format("trace swap ({}, {}) out of range for N={}", record.a, record.b, n));
    }
    return {{record.a, record.b}};
}

namespace {

struct Candidate {
    size_t a;
    size_t b;
    std::vector<Transposition> swaps;
};

/// Shared search loop. `draw` fills the candidate list for one iteration.
template <typename Draw>
FitnessTrace search(const AdjacencyMatrix &input, const QubitGroup &group, const ExpectedDistribution &expected,
                    const OptimizerConfig &config, SearchMode mode, Draw draw) {
    config.validate();
    size_t n = input.size();
    AdjacencyMatrix matrix = input;
    FitnessState state = evaluate(matrix, group, expected);

    FitnessTrace trace;
    trace.mode = mode;
    trace.seed = config.seed;
    trace.restricted_target_qubit = config.restricted_target_qubit;
    trace.initial_fitness = state.fitness;
    trace.final_permutation = Permutation::identity(n);

    Rng rng(config.seed);
    size_t stall_window = config.effective_stall_window(n);
    size_t since_improvement = 0;
    std::vector<Candidate> candidates;
    std::vector<SwapDelta> deltas;

    auto reached_stop = [&] { return config.stop_fitness && state.fitness >= *config.stop_fitness; };
    trace.stop_reason = StopReason::MaxIters;
    if (reached_stop()) {
        trace.stop_reason = StopReason::StopFitness;
    }

    for (size_t iter = 0; iter < config.max_iters && trace.stop_reason == StopReason::MaxIters; iter++) {
        candidates.clear();
        draw(rng, candidates);
        deltas.clear();
        for (const Candidate &cand : candidates) {
            deltas.push_back(delta_for_move(state, matrix, cand.swaps));
        }

        // Lowest index wins ties, independent of evaluation order.
        size_t best_idx = 0;
        for (size_t j = 1; j < deltas.size(); j++) {
            if (deltas[j].fitness > deltas[best_idx].fitness) {
                best_idx = j;
            }
        }
        bool improved = deltas[best_idx].fitness > state.fitness;
        if (improved) {
            const Candidate &win = candidates[best_idx];
            for (auto [a, b] : win.swaps) {
                matrix.swap_indices(a, b);
                trace.final_permutation = compose(transposition(a, b, n), trace.final_permutation);
            }
            state.raw.raw = std::move(deltas[best_idx].raw);
            state.fitness = deltas[best_idx].fitness;
            since_improvement = 0;
        } else {
            since_improvement++;
        }

        for (size_t j = 0; j < candidates.size(); j++) {
            trace.records.push_back(
                {iter, candidates[j].a, candidates[j].b, deltas[j].fitness, state.fitness, improved && j == best_idx});
        }
        trace.iters_run = iter + 1;

        if (reached_stop()) {
            trace.stop_reason = StopReason::StopFitness;
        } else if (stall_window > 0 && since_improvement >= stall_window) {
            trace.stop_reason = StopReason::Stalled;
        }
    }

    trace.final_raw = state.raw;
    trace.best_fitness = state.fitness;
    trace.final_matrix = std::move(matrix);
    return trace;
}

}  // namespace

FitnessTrace run_random_pab(const AdjacencyMatrix &matrix, const QubitGroup &group,
                            const ExpectedDistribution &expected, const OptimizerConfig &config) {
    size_t n = matrix.size();
    return search(matrix, group, expected, config, SearchMode::RandomPab, [n](Rng &rng, std::vector<Candidate> &out) {
        size_t a = rng.below(n);
        size_t b = rng.below(n);
        out.push_back({a, b, {{a, b}}});
    });
}

FitnessTrace run_batch_select(const AdjacencyMatrix &matrix, const QubitGroup &group,
                              const ExpectedDistribution &expected, const OptimizerConfig &config) {
    size_t n = matrix.size();
    size_t batch = config.batch_size;
    return search(matrix, group, expected, config, SearchMode::BatchSelect,
                  [n, batch](Rng &rng, std::vector<Candidate> &out) {
                      for (size_t j = 0; j < batch; j++) {
                          size_t a = rng.below(n);
                          size_t b = rng.below(n);
                          out.push_back({a, b, {{a, b}}});
                      }
                  });
}

FitnessTrace run_restricted_mcx(const AdjacencyMatrix &matrix, const QubitGroup &group,
                                const ExpectedDistribution &expected, const OptimizerConfig &config) {
    size_t n = matrix.size();
    size_t target = config.restricted_target_qubit;
    if (n < 2) {
        throw std::invalid_argument("restricted moves need N >= 2");
    }
    // Validates the target qubit up front.
    restricted_mcx_pair(0, target, n);
    size_t patterns = n / 2;
    return search(matrix, group, expected, config, SearchMode::RestrictedMcx,
                  [n, target, patterns](Rng &rng, std::vector<Candidate> &out) {
                      size_t row_pattern = rng.below(patterns);
                      size_t col_pattern = rng.below(patterns);
                      out.push_back(
                          {row_pattern, col_pattern, restricted_move_swaps(row_pattern, col_pattern, target, n)});
                  });
}

FitnessTrace run(const AdjacencyMatrix &matrix, const QubitGroup &group, const ExpectedDistribution &expected,
                 const OptimizerConfig &config) {
    switch (config.mode) {
        case SearchMode::RandomPab:
            return run_random_pab(matrix, group, expected, config);
        case SearchMode::RestrictedMcx:
            return run_restricted_mcx(matrix, group, expected, config);
        case SearchMode::BatchSelect:
            return run_batch_select(matrix, group, expected, config);
    }
    throw std::logic_error("unknown search mode");
}

AdjacencyMatrix replay(const AdjacencyMatrix &initial, const FitnessTrace &trace) {
    if (trace.final_matrix.size() != 0 && trace.final_matrix.size() != initial.size()) {
        throw std::invalid_argument(fmt::format("trace was produced on a {}x{} matrix, got {}x{}",
                                                trace.final_matrix.size(), trace.final_matrix.size(), initial.size(),
                                                initial.size()));
    }
    double total = initial.total_sum();
    if (trace.final_matrix.size() != 0 &&
        std::abs(trace.final_matrix.total_sum() - total) > 1e-9 * std::max(1.0, std::abs(total))) {
        throw std::invalid_argument("trace total sum does not match the initial matrix");
    }
    AdjacencyMatrix m = initial;
    for (const TraceRecord &rec : trace.records) {
        if (!rec.accepted) {
            continue;
        }
        for (auto [a, b] : record_swaps(rec, trace.mode, trace.restricted_target_qubit, m.size())) {
            m.swap_indices(a, b);
        }
    }
    return m;
}

Permutation replay_permutation(const FitnessTrace &trace, size_t n) {
    Permutation p = Permutation::identity(n);
    for (const TraceRecord &rec : trace.records) {
        if (!rec.accepted) {
            continue;
        }
        for (auto [a, b] : record_swaps(rec, trace.mode, trace.restricted_target_qubit, n)) {
            p = compose(transposition(a, b, n), p);
        }
    }
    return p;
}

std::string format_fitness(double value) {
    return fmt::format("{:.12g}", value);
}

std::string format_trace_csv(const FitnessTrace &trace) {
    std::string out = "iter,a,b,candidate_fitness,best_fitness,accepted\n";
    for (const TraceRecord &rec : trace.records) {
        out += fmt::format("{},{},{},{},{},{}\n", rec.iter, rec.a, rec.b, format_fitness(rec.candidate_fitness),
                           format_fitness(rec.best_fitness), rec.accepted ? 1 : 0);
    }
    return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("iter,a,b,candidate_fitness,best_fitness,accepted", 0) != 0) {
        throw FormatError("missing trace CSV header", 1);
    }
    std::vector<TraceRecord> out;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream cells(line);
        std::vector<std::string> f;
        for (std::string cell; std::getline(cells, cell, ',');) {
            f.push_back(cell);
        }
        if (f.size() != 6) {
            throw FormatError(fmt::format("expected 6 fields, got {}", f.size()), line_no);
        }
        try {
            TraceRecord rec;
            rec.iter = std::stoull(f[0]);
            rec.a = std::stoull(f[1]);
            rec.b = std::stoull(f[2]);
            rec.candidate_fitness = std::stod(f[3]);
            rec.best_fitness = std::stod(f[4]);
            if (f[5] != "0" && f[5] != "1") {
                throw std::invalid_argument("accepted");
            }
            rec.accepted = f[5] == "1";
            out.push_back(rec);
        } catch (const std::exception &) {
            throw FormatError(fmt::format("malformed trace row '{}'", line), line_no);
        }
    }
    return out;
}

std::string format_summary_json(const FitnessTrace &trace) {
    nlohmann::json j;
    j["mode"] = to_string(trace.mode);
    j["seed"] = trace.seed;
    j["iters_run"] = trace.iters_run;
    j["best_fitness"] = trace.best_fitness;
    j["initial_fitness"] = trace.initial_fitness;
    j["final_raw"] = trace.final_raw.raw;
    j["permutation"] = trace.final_permutation.map();
    j["stop_reason"] = to_string(trace.stop_reason);
    size_t accepted = 0;
    for (const auto &rec : trace.records) {
        accepted += rec.accepted ? 1 : 0;
    }
    j["accepted_moves"] = accepted;
    if (trace.mode == SearchMode::RestrictedMcx) {
        j["restricted_target_qubit"] = trace.restricted_target_qubit;
    }
    return j.dump(2) + "\n";
}

}  // namespace blockperm
