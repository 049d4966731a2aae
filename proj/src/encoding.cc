#include "blockperm/encoding.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace blockperm {

QubitGroup::QubitGroup(size_t n_qubits_per_register, std::vector<size_t> qubits)
    : n_(n_qubits_per_register), qubits_(std::move(qubits)) {
    if (qubits_.empty()) {
        throw std::invalid_argument("qubit group must contain at least one qubit");
    }
    if (n_ >= 32) {
        throw std::invalid_argument(fmt::format("register of {} qubits is too large", n_));
    }
    std::vector<size_t> sorted = qubits_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument(fmt::format("qubit group {} has repeated qubits", str()));
    }
    if (sorted.back() >= 2 * n_) {
        throw std::invalid_argument(
            fmt::format("qubit {} out of range for a {}x{} matrix ({} qubits)", sorted.back(), matrix_size(),
                        matrix_size(), 2 * n_));
    }
    size_t size = matrix_size();
    size_t k = qubits_.size();
    row_part_.assign(size, 0);
    col_part_.assign(size, 0);
    for (size_t j = 0; j < k; j++) {
        size_t q = qubits_[j];
        size_t out_bit = k - 1 - j;
        bool is_row = q < n_;
        size_t src_bit = is_row ? n_ - 1 - q : n_ - 1 - (q - n_);
        auto &part = is_row ? row_part_ : col_part_;
        for (size_t x = 0; x < size; x++) {
            part[x] |= ((x >> src_bit) & 1) << out_bit;
        }
    }
}

size_t QubitGroup::outcome_of_index(uint64_t index) const {
    size_t k = qubits_.size();
    size_t total_bits = 2 * n_;
    size_t out = 0;
    for (size_t j = 0; j < k; j++) {
        size_t bit = (index >> (total_bits - 1 - qubits_[j])) & 1;
        out |= bit << (k - 1 - j);
    }
    return out;
}

size_t QubitGroup::outcome_of(size_t r, size_t c) const {
    return row_part_[r] | col_part_[c];
}

std::string QubitGroup::str() const {
    std::string out;
    for (size_t j = 0; j < qubits_.size(); j++) {
        if (j) {
            out += ',';
        }
        out += std::to_string(qubits_[j]);
    }
    return out;
}

QubitGroup QubitGroup::parse(size_t n_qubits_per_register, const std::string &text) {
    std::vector<size_t> qubits;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || item[0] == '-') {
            throw std::invalid_argument(fmt::format("bad qubit index '{}' in group '{}'", item, text));
        }
        qubits.push_back(v);
    }
    return QubitGroup(n_qubits_per_register, std::move(qubits));
}

std::vector<double> BlockDistribution::normalized() const {
    std::vector<double> out(raw.size(), 0.0);
    if (total > 0.0) {
        for (size_t o = 0; o < raw.size(); o++) {
            out[o] = raw[o] / total;
        }
    }
    return out;
}

size_t outcome_of(size_t r, size_t c, const QubitGroup &group) {
    if (r >= group.matrix_size() || c >= group.matrix_size()) {
        throw std::out_of_range(fmt::format("cell ({}, {}) outside {}x{} matrix", r, c, group.matrix_size(),
                                            group.matrix_size()));
    }
    return group.outcome_of(r, c);
}

BlockDistribution block_distribution(const AdjacencyMatrix &matrix, const QubitGroup &group) {
    if (matrix.size() != group.matrix_size()) {
        throw std::invalid_argument(fmt::format("matrix is {}x{} but the qubit group expects {}x{}", matrix.size(),
                                                matrix.size(), group.matrix_size(), group.matrix_size()));
    }
    BlockDistribution dist;
    dist.raw.assign(group.outcome_count(), 0.0);
    const auto &rp = group.row_parts();
    const auto &cp = group.col_parts();
    for (size_t r = 0; r < matrix.size(); r++) {
        auto row = matrix.row(r);
        for (size_t c = 0; c < matrix.size(); c++) {
            dist.raw[rp[r] | cp[c]] += row[c];
        }
    }
    for (double v : dist.raw) {
        dist.total += v;
    }
    return dist;
}

std::vector<bool> pattern_mask(const QubitGroup &group, size_t outcome) {
    if (outcome >= group.outcome_count()) {
        throw std::out_of_range(fmt::format("outcome {} out of range for a {}-qubit group", outcome, group.k()));
    }
    size_t n = group.matrix_size();
    std::vector<bool> mask(n * n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            mask[r * n + c] = group.outcome_of(r, c) == outcome;
        }
    }
    return mask;
}

std::string mask_to_pgm(const std::vector<bool> &mask, size_t n) {
    if (mask.size() != n * n) {
        throw std::invalid_argument("mask size does not match dimension");
    }
    std::string out = fmt::format("P2\n{} {}\n255\n", n, n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            if (c) {
                out += ' ';
            }
            out += mask[r * n + c] ? "0" : "255";
        }
        out += '\n';
    }
    return out;
}

}  // namespace blockperm
