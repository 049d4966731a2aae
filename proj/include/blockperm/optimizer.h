#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockperm/fitness.h"
#include "blockperm/graph.h"
#include "blockperm/perm.h"

namespace blockperm {

enum class SearchMode {
    /// Uniform random (a, b) transposition per iteration.
    RandomPab,
    /// Block-crossing transpositions generated by a multi-controlled X on the
    /// target qubit; one pattern for the row register, one for the column
    /// register, applied together as a simultaneous conjugation.
    RestrictedMcx,
    /// batch_size random transpositions per iteration, best one committed.
    BatchSelect,
};

std::string to_string(SearchMode mode);
/// Accepts "random_pab", "restricted_mcx", "batch_select".
SearchMode parse_search_mode(const std::string &text);

struct OptimizerConfig {
    SearchMode mode = SearchMode::RandomPab;
    size_t max_iters = 100000;
    uint64_t seed = 0;
    size_t batch_size = 1;
    std::optional<double> stop_fitness;
    /// Non-improving iterations before the run is declared stalled. Unset
    /// means 10 * N^2; 0 disables stall detection.
    std::optional<size_t> stall_window;
    /// Register qubit flipped by restricted moves. Qubit 0 (the row/column
    /// MSB) decides block membership under the default qubit groups.
    size_t restricted_target_qubit = 0;

    /// Throws std::invalid_argument on an invalid combination.
    void validate() const;
    size_t effective_stall_window(size_t n) const;
};

/// One evaluated candidate. For RandomPab and BatchSelect (a, b) is the
/// transposition. For RestrictedMcx a is the row control pattern and b the
/// column control pattern; see restricted_move_swaps().
struct TraceRecord {
    size_t iter = 0;
    size_t a = 0;
    size_t b = 0;
    double candidate_fitness = 0.0;
    /// Best fitness after this iteration's decision.
    double best_fitness = 0.0;
    bool accepted = false;
};

enum class StopReason { MaxIters, StopFitness, Stalled };
std::string to_string(StopReason reason);

struct FitnessTrace {
    SearchMode mode = SearchMode::RandomPab;
    uint64_t seed = 0;
    size_t restricted_target_qubit = 0;
    double initial_fitness = 0.0;
    std::vector<TraceRecord> records;
    size_t iters_run = 0;
    StopReason stop_reason = StopReason::MaxIters;
    /// Product of the accepted moves, latest move leftmost.
    Permutation final_permutation;
    AdjacencyMatrix final_matrix;
    BlockDistribution final_raw;
    double best_fitness = 0.0;
};

/// Disjoint transpositions encoded by a restricted record: the pair picked by
/// the row pattern and, if different, the pair picked by the column pattern.
std::vector<Transposition> restricted_move_swaps(size_t row_pattern, size_t col_pattern, size_t target_qubit,
                                                 size_t n);

/// Swaps a trace record stands for under the given mode.
std::vector<Transposition> record_swaps(const TraceRecord &record, SearchMode mode, size_t target_qubit, size_t n);

FitnessTrace run_random_pab(const AdjacencyMatrix &matrix, const QubitGroup &group,
                            const ExpectedDistribution &expected, const OptimizerConfig &config);
FitnessTrace run_restricted_mcx(const AdjacencyMatrix &matrix, const QubitGroup &group,
                                const ExpectedDistribution &expected, const OptimizerConfig &config);
FitnessTrace run_batch_select(const AdjacencyMatrix &matrix, const QubitGroup &group,
                              const ExpectedDistribution &expected, const OptimizerConfig &config);
/// Dispatches on config.mode.
FitnessTrace run(const AdjacencyMatrix &matrix, const QubitGroup &group, const ExpectedDistribution &expected,
                 const OptimizerConfig &config);

/// Reapplies the accepted moves of `trace` to `initial`. Throws
/// std::invalid_argument when the trace cannot belong to the matrix.
AdjacencyMatrix replay(const AdjacencyMatrix &initial, const FitnessTrace &trace);
/// Product of the accepted moves, latest move leftmost.
Permutation replay_permutation(const FitnessTrace &trace, size_t n);

/// "iter,a,b,candidate_fitness,best_fitness,accepted" plus one row per record;
/// fitness values use 12 significant digits.
std::string format_trace_csv(const FitnessTrace &trace);
/// Inverse of format_trace_csv (fitness values keep 12 digits).
std::vector<TraceRecord> parse_trace_csv(const std::string &text);

/// {mode, seed, iters_run, best_fitness, final_raw, permutation, ...}
std::string format_summary_json(const FitnessTrace &trace);

/// "%.12g"
std::string format_fitness(double value);

}  // namespace blockperm
