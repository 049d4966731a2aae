#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blockperm/graph.h"

namespace blockperm {

/// Ordered subset of the 2n qubits that index a vectorized N x N matrix.
///
/// Element (r, c) sits at vector index i = r*N + c, read as 2n bits MSB
/// first: qubit q is bit 2n-1-q of i. Qubits 0..n-1 are the row bits (qubit 0
/// is the row MSB) and qubits n..2n-1 the column bits (qubit n is the column
/// MSB). An outcome concatenates the selected bits in listed order, so the
/// first listed qubit is the outcome's most significant bit.
class QubitGroup {
   public:
    /// Throws std::invalid_argument on empty, repeated or out-of-range qubits.
    QubitGroup(size_t n_qubits_per_register, std::vector<size_t> qubits);

    size_t register_qubits() const {
        return n_;
    }
    size_t matrix_size() const {
        return size_t{1} << n_;
    }
    const std::vector<size_t> &qubits() const {
        return qubits_;
    }
    size_t k() const {
        return qubits_.size();
    }
    size_t outcome_count() const {
        return size_t{1} << qubits_.size();
    }

    /// Outcome of the full 2n-bit vector index.
    size_t outcome_of_index(uint64_t index) const;
    size_t outcome_of(size_t r, size_t c) const;

    /// Per-row and per-column parts of the outcome; the outcome of (r, c) is
    /// row_part(r) | col_part(c).
    const std::vector<size_t> &row_parts() const {
        return row_part_;
    }
    const std::vector<size_t> &col_parts() const {
        return col_part_;
    }

    /// "0,5"
    std::string str() const;
    /// Parses a comma list such as "0,5".
    static QubitGroup parse(size_t n_qubits_per_register, const std::string &text);

   private:
    size_t n_;
    std::vector<size_t> qubits_;
    std::vector<size_t> row_part_;
    std::vector<size_t> col_part_;
};

/// Matrix-entry sums over the regions of a qubit-group partition.
struct BlockDistribution {
    std::vector<double> raw;
    double total = 0.0;

    /// raw / total, or all zeros when total is 0.
    std::vector<double> normalized() const;
};

size_t outcome_of(size_t r, size_t c, const QubitGroup &group);

/// Throws std::invalid_argument when the matrix size does not match the group.
BlockDistribution block_distribution(const AdjacencyMatrix &matrix, const QubitGroup &group);

/// Row-major N x N mask of the cells whose outcome equals `outcome`.
std::vector<bool> pattern_mask(const QubitGroup &group, size_t outcome);

/// Plain-text PGM (P2): 0 where the mask is set, 255 elsewhere, so the cells
/// belonging to the outcome render dark.
std::string mask_to_pgm(const std::vector<bool> &mask, size_t n);

}  // namespace blockperm
