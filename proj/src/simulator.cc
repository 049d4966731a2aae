#include "blockperm/simulator.h"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace blockperm {

double Statevector::norm() const {
    double s = 0.0;
    for (double a : amplitudes) {
        s += a * a;
    }
    return std::sqrt(s);
}

Statevector prepare(const AdjacencyMatrix &matrix) {
    double sq = 0.0;
    for (double v : matrix.entries()) {
        sq += v * v;
    }
    if (!(sq > 0.0)) {
        throw std::invalid_argument("cannot prepare a state from a zero matrix");
    }
    double inv_norm = 1.0 / std::sqrt(sq);
    Statevector s{matrix.n_qubits(), matrix.entries()};
    for (double &a : s.amplitudes) {
        a *= inv_norm;
    }
    return s;
}

Statevector apply_symmetric_permutation(const Statevector &state, const Permutation &p) {
    size_t n = state.matrix_size();
    if (p.size() != n || state.amplitudes.size() != n * n) {
        throw std::invalid_argument(fmt::format("permutation of size {} cannot act on a {}-amplitude state", p.size(),
                                                state.amplitudes.size()));
    }
    Statevector out{state.register_qubits, std::vector<double>(n * n, 0.0)};
    for (size_t r = 0; r < n; r++) {
        size_t base = p(r) * n;
        for (size_t c = 0; c < n; c++) {
            out.amplitudes[base + p(c)] = state.amplitudes[r * n + c];
        }
    }
    return out;
}

std::vector<double> measure_group(const Statevector &state, const QubitGroup &group) {
    if (group.register_qubits() != state.register_qubits ||
        state.amplitudes.size() != group.matrix_size() * group.matrix_size()) {
        throw std::invalid_argument(fmt::format("group over {}-qubit registers cannot measure a {}-amplitude state",
                                                group.register_qubits(), state.amplitudes.size()));
    }
    std::vector<double> prob(group.outcome_count(), 0.0);
    for (uint64_t i = 0; i < state.amplitudes.size(); i++) {
        double a = state.amplitudes[i];
        prob[group.outcome_of_index(i)] += a * a;
    }
    return prob;
}

uint64_t McxGate::apply(uint64_t i, size_t n_qubits) const {
    uint64_t target_bit = uint64_t{1} << (n_qubits - 1 - target_qubit);
    if ((i & ~target_bit) == (controls & ~target_bit)) {
        return i ^ target_bit;
    }
    return i;
}

std::vector<McxGate> transposition_circuit(size_t a, size_t b, size_t n_qubits) {
    size_t n = size_t{1} << n_qubits;
    if (a >= n || b >= n) {
        throw std::out_of_range(fmt::format("transposition ({} {}) out of range for {} qubits", a, b, n_qubits));
    }
    // Walk a -> b one differing bit at a time (most significant first).
    std::vector<McxGate> chain;
    uint64_t cur = a;
    uint64_t diff = a ^ b;
    for (size_t q = 0; q < n_qubits; q++) {
        uint64_t bit = uint64_t{1} << (n_qubits - 1 - q);
        if (diff & bit) {
            chain.push_back({q, cur});
            cur ^= bit;
        }
    }
    if (chain.empty()) {
        return chain;
    }
    // Forward steps carry a to b's neighbour, the last step swaps with b, and
    // the reversed prefix restores the intermediate states.
    std::vector<McxGate> circuit = chain;
    for (size_t j = chain.size() - 1; j-- > 0;) {
        circuit.push_back(chain[j]);
    }
    return circuit;
}

GateCostReport gate_cost(const Permutation &p) {
    size_t n_qubits = log2_exact(p.size());
    GateCostReport report;
    for (const auto &cycle : cycle_decomposition(p).cycles) {
        for (auto [a, b] : cycle_to_transpositions(cycle)) {
            size_t hamming = static_cast<size_t>(std::popcount(static_cast<uint64_t>(a ^ b)));
            report.n_transpositions++;
            report.n_mcx += 2 * hamming - 1;
            report.max_controls = n_qubits - 1;
        }
    }
    report.ancilla_cx = 4 * report.n_transpositions;
    report.ancilla_toffoli = 4 * report.n_transpositions;
    return report;
}

}  // namespace blockperm
