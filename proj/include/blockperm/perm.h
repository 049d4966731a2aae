#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blockperm {

/// Bijection on {0, ..., N-1} stored as a dense image table.
///
/// Acting on a matrix, a permutation relabels node r as p(r): the conjugated
/// matrix Y satisfies Y[p(r)][p(c)] = X[r][c].
class Permutation {
   public:
    Permutation() = default;

    /// Validates that `map` is a bijection; throws std::invalid_argument otherwise.
    explicit Permutation(std::vector<size_t> map);

    static Permutation identity(size_t n);

    size_t size() const {
        return map_.size();
    }
    size_t operator()(size_t i) const {
        return map_[i];
    }
    const std::vector<size_t> &map() const {
        return map_;
    }
    bool is_identity() const;

    bool operator==(const Permutation &other) const = default;

    /// Space-separated images on one line.
    std::string str() const;
    /// Inverse of str(); throws std::invalid_argument on malformed or non-bijective input.
    static Permutation parse(std::string_view text);

   private:
    std::vector<size_t> map_;
};

using Transposition = std::pair<size_t, size_t>;

/// Disjoint cycles of length >= 2, each rotated so its smallest element is
/// first, sorted by first element.
struct CycleDecomposition {
    std::vector<std::vector<size_t>> cycles;

    /// Cycle notation, e.g. "(0 1)(2 3 4)"; "()" for the identity.
    std::string str() const;
    Permutation to_permutation(size_t n) const;
};

Permutation transposition(size_t a, size_t b, size_t n);

/// (p o q)(i) = p(q(i)), i.e. q acts first.
Permutation compose(const Permutation &p, const Permutation &q);
Permutation inverse(const Permutation &p);
/// p applied `exponent` times.
Permutation power(const Permutation &p, uint64_t exponent);

CycleDecomposition cycle_decomposition(const Permutation &p);
/// Order of p in the symmetric group: lcm of its cycle lengths.
uint64_t order(const Permutation &p);

/// Splits the cycle (a1 a2 ... ak) into (a1 ak)(a1 ak-1)...(a1 a2). The
/// returned list is in written order, so the last entry acts first.
std::vector<Transposition> cycle_to_transpositions(const std::vector<size_t> &cycle);
/// Product of transpositions in written order (last entry acts first).
Permutation product_of_transpositions(const std::vector<Transposition> &factors, size_t n);

/// i -> i XOR flip_mask. Qubit q of an n-qubit register corresponds to bit
/// n-1-q of the index, so flipping qubit q sets that bit of the mask.
Permutation bitflip_perm(uint64_t flip_mask, size_t n);
/// Mask that flips the listed qubits of an n-qubit register.
uint64_t qubit_flip_mask(const std::vector<size_t> &qubits, size_t n_qubits);

/// offset 0: (0 1)(2 3)...(N-2 N-1). offset 1: (1 2)(3 4)...(N-1 0).
Permutation neighbor_swap_family(int offset, size_t n);

/// Transposition produced by a multi-controlled X: all qubits except
/// `target_qubit` must match `control_pattern` (the remaining n-1 bits read in
/// qubit order), and the target qubit is flipped.
Transposition restricted_mcx_pair(uint64_t control_pattern, size_t target_qubit, size_t n);
Permutation restricted_mcx_move(uint64_t control_pattern, size_t target_qubit, size_t n);

/// log2(n) for a power of two; throws std::invalid_argument otherwise.
size_t log2_exact(size_t n);

}  // namespace blockperm
