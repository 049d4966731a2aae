#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blockperm/perm.h"

namespace blockperm {

/// Dense symmetric nonnegative N x N matrix with N a power of two.
///
/// Rows and columns at index >= n_nodes() are all-zero padding ("dummies")
/// added so the matrix fits a register of log2(N) qubits.
class AdjacencyMatrix {
   public:
    AdjacencyMatrix() = default;
    /// Zero matrix for `n_nodes` nodes, padded to the next power of two.
    explicit AdjacencyMatrix(size_t n_nodes);

    size_t n_nodes() const {
        return n_nodes_;
    }
    size_t size() const {
        return size_;
    }
    size_t n_qubits() const {
        return n_qubits_;
    }

    double operator()(size_t r, size_t c) const {
        return entries_[r * size_ + c];
    }
    double &at(size_t r, size_t c) {
        return entries_[r * size_ + c];
    }
    /// Sets both (r, c) and (c, r).
    void set_symmetric(size_t r, size_t c, double value);

    std::span<const double> row(size_t r) const {
        return {entries_.data() + r * size_, size_};
    }
    /// Row-major entries; index r*N + c.
    const std::vector<double> &entries() const {
        return entries_;
    }

    double total_sum() const;
    std::vector<double> row_sums() const;
    bool is_symmetric() const;
    bool is_binary() const;

    /// Simultaneous row and column swap of a and b.
    void swap_indices(size_t a, size_t b);

    bool operator==(const AdjacencyMatrix &other) const = default;

   private:
    size_t n_nodes_ = 0;
    size_t size_ = 0;
    size_t n_qubits_ = 0;
    std::vector<double> entries_;
};

/// Raised by the loaders; carries the 1-based line number when known.
class FormatError : public std::runtime_error {
   public:
    FormatError(const std::string &what, size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {
    }
    size_t line() const {
        return line_;
    }

   private:
    size_t line_;
};

/// Smallest power of two >= n (1 for n == 0).
size_t next_power_of_two(size_t n);

/// Two K_m cliques joined by a path of `path_length` nodes. Node order is
/// clique 1, path, clique 2.
AdjacencyMatrix generate_barbell(size_t clique_size, size_t path_length);

/// Planted partition: each pair inside a block is joined with probability
/// p_in, each pair across blocks with p_out. Pairs are visited in (r < c)
/// row-major order with one uniform draw per pair.
AdjacencyMatrix generate_planted_blocks(const std::vector<size_t> &block_sizes, double p_in, double p_out,
                                        uint64_t seed);

/// Y[p(r)][p(c)] = X[r][c].
AdjacencyMatrix conjugate(const AdjacencyMatrix &matrix, const Permutation &p);

/// Fisher-Yates permutation of all N indices (padding included).
Permutation random_permutation(size_t n, uint64_t seed);

/// Conjugates by a seeded random permutation and returns it alongside.
std::pair<AdjacencyMatrix, Permutation> shuffle(const AdjacencyMatrix &matrix, uint64_t seed);

/// Edge list: "nodes <count>" then one "u v [w]" per line, 0-indexed,
/// undirected, each edge listed once. Blank lines and '#' comments skipped.
AdjacencyMatrix parse_edge_list(const std::string &text);
AdjacencyMatrix load_edge_list(const std::filesystem::path &path);
std::string format_edge_list(const AdjacencyMatrix &matrix);
void save_edge_list(const AdjacencyMatrix &matrix, const std::filesystem::path &path);

/// CSV: N rows of N comma-separated numbers, no header. Integral values are
/// written without a decimal point; others round-trip exactly.
AdjacencyMatrix parse_matrix_csv(const std::string &text);
AdjacencyMatrix load_matrix(const std::filesystem::path &path);
std::string format_matrix_csv(const AdjacencyMatrix &matrix);
void save_matrix(const AdjacencyMatrix &matrix, const std::filesystem::path &path);

/// Loads either format, chosen by whether the first token is "nodes".
AdjacencyMatrix load_any(const std::filesystem::path &path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);
std::string read_file(const std::filesystem::path &path);

}  // namespace blockperm
