#pragma once

#include <span>
#include <string>
#include <vector>

#include "blockperm/encoding.h"
#include "blockperm/graph.h"
#include "blockperm/perm.h"

namespace blockperm {

/// Target outcome distribution of a qubit group.
class ExpectedDistribution {
   public:
    /// Weights must be nonnegative, sum to 1 within `tolerance`, and have a
    /// power-of-two length.
    explicit ExpectedDistribution(std::vector<double> weights, double tolerance = 1e-9);

    const std::vector<double> &weights() const {
        return weights_;
    }
    size_t size() const {
        return weights_.size();
    }
    double operator[](size_t o) const {
        return weights_[o];
    }
    double max_weight() const;

    /// Parses "0.5,0,0,0.5".
    static ExpectedDistribution parse(const std::string &text);

   private:
    std::vector<double> weights_;
};

/// Uniform mass on the first `n_blocks` diagonal outcomes of a group whose
/// first k/2 qubits are row qubits and last k/2 column qubits. An outcome is
/// diagonal when its row half equals its column half.
ExpectedDistribution default_expected(size_t k, size_t n_blocks);

enum class FitnessKind {
    /// sum_o expected[o] * raw[o] / total
    Probability,
    /// sum_o sqrt(expected[o]) * sqrt(raw[o] / total), the overlap of the
    /// corresponding amplitude vectors.
    Amplitude,
};

struct FitnessState {
    QubitGroup group;
    ExpectedDistribution expected;
    BlockDistribution raw;
    double fitness = 0.0;
    /// True when the matrix has no mass; fitness is then defined as 0.
    bool degenerate = false;
    FitnessKind kind = FitnessKind::Probability;
};

double fitness_from_raw(const BlockDistribution &raw, const ExpectedDistribution &expected,
                        FitnessKind kind = FitnessKind::Probability);

/// Full O(N^2) evaluation.
FitnessState evaluate(const AdjacencyMatrix &matrix, const QubitGroup &group, const ExpectedDistribution &expected,
                      FitnessKind kind = FitnessKind::Probability);

struct SwapDelta {
    std::vector<double> raw;
    double fitness = 0.0;
};

/// Distribution and fitness after simultaneously swapping rows a, b and
/// columns a, b. O(N); the matrix is not touched.
SwapDelta delta_for_swap(const FitnessState &state, const AdjacencyMatrix &matrix, size_t a, size_t b);

/// Same as delta_for_swap for a product of pairwise disjoint transpositions.
/// Cost is O(N) per transposition.
SwapDelta delta_for_move(const FitnessState &state, const AdjacencyMatrix &matrix,
                         std::span<const Transposition> swaps);

/// Commits the swap to both the matrix and the cached state.
void apply_swap(AdjacencyMatrix &matrix, FitnessState &state, size_t a, size_t b);
void apply_move(AdjacencyMatrix &matrix, FitnessState &state, std::span<const Transposition> swaps);

}  // namespace blockperm
