#include "blockperm/fitness.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace blockperm {

ExpectedDistribution::ExpectedDistribution(std::vector<double> weights, double tolerance)
    : weights_(std::move(weights)) {
    if (weights_.size() < 2 || (weights_.size() & (weights_.size() - 1)) != 0) {
        throw std::invalid_argument(
            fmt::format("expected distribution needs a power-of-two length >= 2, got {}", weights_.size()));
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument(fmt::format("expected weights must be finite and nonnegative, got {}", w));
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw std::invalid_argument(fmt::format("expected weights must sum to 1, got {}", sum));
    }
}

double ExpectedDistribution::max_weight() const {
    return *std::max_element(weights_.begin(), weights_.end());
}

ExpectedDistribution ExpectedDistribution::parse(const std::string &text) {
    std::vector<double> weights;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw std::invalid_argument(fmt::format("bad weight '{}' in expected distribution '{}'", item, text));
        }
        weights.push_back(v);
    }
    return ExpectedDistribution(std::move(weights));
}

ExpectedDistribution default_expected(size_t k, size_t n_blocks) {
    if (k == 0 || k % 2 != 0 || k >= 32) {
        throw std::invalid_argument(fmt::format("default expected distribution needs an even k, got {}", k));
    }
    size_t half = k / 2;
    size_t diagonal = size_t{1} << half;
    if (n_blocks == 0 || n_blocks > diagonal) {
        throw std::invalid_argument(
            fmt::format("{} blocks do not fit the {} diagonal outcomes of a {}-qubit group", n_blocks, diagonal, k));
    }
    std::vector<double> weights(size_t{1} << k, 0.0);
    for (size_t j = 0; j < n_blocks; j++) {
        weights[(j << half) | j] = 1.0 / static_cast<double>(n_blocks);
    }
    return ExpectedDistribution(std::move(weights));
}

double fitness_from_raw(const BlockDistribution &raw, const ExpectedDistribution &expected, FitnessKind kind) {
    if (raw.raw.size() != expected.size()) {
        throw std::invalid_argument(fmt::format("distribution has {} outcomes but expected has {}", raw.raw.size(),
                                                expected.size()));
    }
    if (!(raw.total > 0.0)) {
        return 0.0;
    }
    double f = 0.0;
    for (size_t o = 0; o < expected.size(); o++) {
        if (kind == FitnessKind::Probability) {
            f += expected[o] * raw.raw[o];
        } else {
            f += std::sqrt(expected[o] * std::max(raw.raw[o], 0.0));
        }
    }
    return kind == FitnessKind::Probability ? f / raw.total : f / std::sqrt(raw.total);
}

FitnessState evaluate(const AdjacencyMatrix &matrix, const QubitGroup &group, const ExpectedDistribution &expected,
                      FitnessKind kind) {
    if (expected.size() != group.outcome_count()) {
        throw std::invalid_argument(fmt::format("expected distribution has {} outcomes, group {} has {}",
                                                expected.size(), group.str(), group.outcome_count()));
    }
    FitnessState state{group, expected, block_distribution(matrix, group)};
    state.kind = kind;
    state.degenerate = !(state.raw.total > 0.0);
    state.fitness = fitness_from_raw(state.raw, expected, kind);
    return state;
}

namespace {

void check_swaps(std::span<const Transposition> swaps, size_t n) {
    std::vector<bool> used(n, false);
    for (auto [a, b] : swaps) {
        if (a >= n || b >= n) {
            throw std::out_of_range(fmt::format("swap ({}, {}) out of range for N={}", a, b, n));
        }
        if (a == b) {
            continue;
        }
        if (used[a] || used[b]) {
            throw std::invalid_argument(fmt::format("swap ({}, {}) overlaps another swap in the move", a, b));
        }
        used[a] = used[b] = true;
    }
}

}  // namespace

SwapDelta delta_for_move(const FitnessState &state, const AdjacencyMatrix &matrix,
                         std::span<const Transposition> swaps) {
    size_t n = matrix.size();
    if (n != state.group.matrix_size()) {
        throw std::invalid_argument("matrix size does not match the fitness state");
    }
    check_swaps(swaps, n);

    // image[i] for moved indices only; everything else is fixed.
    std::vector<size_t> moved;
    std::vector<size_t> image(n);
    for (size_t i = 0; i < n; i++) {
        image[i] = i;
    }
    for (auto [a, b] : swaps) {
        if (a != b) {
            image[a] = b;
            image[b] = a;
            moved.push_back(a);
            moved.push_back(b);
        }
    }

    SwapDelta out{state.raw.raw, state.fitness};
    if (moved.empty()) {
        return out;
    }
    const auto &rp = state.group.row_parts();
    const auto &cp = state.group.col_parts();
    std::vector<double> change(out.raw.size(), 0.0);
    // Entry (r, c) moves to (image[r], image[c]). Visit every entry whose row
    // or column is moved exactly once.
    for (size_t r : moved) {
        auto row = matrix.row(r);
        size_t old_row = rp[r];
        size_t new_row = rp[image[r]];
        for (size_t c = 0; c < n; c++) {
            double v = row[c];
            if (v != 0.0) {
                change[old_row | cp[c]] -= v;
                change[new_row | cp[image[c]]] += v;
            }
        }
    }
    std::vector<bool> is_moved(n, false);
    for (size_t i : moved) {
        is_moved[i] = true;
    }
    for (size_t c : moved) {
        size_t old_col = cp[c];
        size_t new_col = cp[image[c]];
        for (size_t r = 0; r < n; r++) {
            if (is_moved[r]) {
                continue;
            }
            double v = matrix(r, c);
            if (v != 0.0) {
                change[rp[r] | old_col] -= v;
                change[rp[r] | new_col] += v;
            }
        }
    }
    for (size_t o = 0; o < out.raw.size(); o++) {
        out.raw[o] += change[o];
    }
    BlockDistribution next{out.raw, state.raw.total};
    out.fitness = fitness_from_raw(next, state.expected, state.kind);
    return out;
}

SwapDelta delta_for_swap(const FitnessState &state, const AdjacencyMatrix &matrix, size_t a, size_t b) {
    Transposition t{a, b};
    return delta_for_move(state, matrix, std::span<const Transposition>(&t, 1));
}

void apply_move(AdjacencyMatrix &matrix, FitnessState &state, std::span<const Transposition> swaps) {
    SwapDelta d = delta_for_move(state, matrix, swaps);
    for (auto [a, b] : swaps) {
        matrix.swap_indices(a, b);
    }
    state.raw.raw = std::move(d.raw);
    state.fitness = d.fitness;
}

void apply_swap(AdjacencyMatrix &matrix, FitnessState &state, size_t a, size_t b) {
    Transposition t{a, b};
    apply_move(matrix, state, std::span<const Transposition>(&t, 1));
}

}  // namespace blockperm
