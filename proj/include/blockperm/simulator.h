#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "blockperm/encoding.h"
#include "blockperm/graph.h"
#include "blockperm/perm.h"

namespace blockperm {

/// Real, nonnegative 2n-qubit state holding a vectorized N x N matrix.
/// Amplitude index r*N + c corresponds to matrix element (r, c).
struct Statevector {
    size_t register_qubits = 0;
    std::vector<double> amplitudes;

    size_t matrix_size() const {
        return size_t{1} << register_qubits;
    }
    double norm() const;
};

/// amplitudes[r*N + c] = entries[r][c] / ||X||_F. Throws on a zero matrix.
Statevector prepare(const AdjacencyMatrix &matrix);

/// The (P (x) P) action on the row and column registers: the amplitude at
/// p(r)*N + p(c) takes the input amplitude at r*N + c.
Statevector apply_symmetric_permutation(const Statevector &state, const Permutation &p);

/// Marginal probabilities of the group's qubits (sum of squared amplitudes
/// per outcome).
std::vector<double> measure_group(const Statevector &state, const QubitGroup &group);

/// One multi-controlled X on an n-qubit index register: when every qubit
/// other than `target_qubit` matches `controls` the target is flipped. Under
/// the MSB-first convention `controls` is the full index with the target bit
/// ignored.
struct McxGate {
    size_t target_qubit = 0;
    uint64_t controls = 0;

    /// Image of basis index i.
    uint64_t apply(uint64_t i, size_t n_qubits) const;
};

/// Gray-code chain realising the transposition (a b) with 2*H(a, b) - 1
/// multi-controlled X gates, each using n-1 controls. Empty when a == b.
std::vector<McxGate> transposition_circuit(size_t a, size_t b, size_t n_qubits);

struct GateCostReport {
    size_t n_transpositions = 0;
    size_t n_mcx = 0;
    size_t max_controls = 0;
    /// Alternative cost if each transposition used the ancilla-assisted swap
    /// (4 CX and 4 Toffoli-class gates per transposition).
    size_t ancilla_cx = 0;
    size_t ancilla_toffoli = 0;
};

/// Decomposes p into cycles, the cycles into transpositions, and prices each
/// transposition with its Gray-code MCX chain.
GateCostReport gate_cost(const Permutation &p);

}  // namespace blockperm
