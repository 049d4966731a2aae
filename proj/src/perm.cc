#include "blockperm/perm.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace blockperm {

Permutation::Permutation(std::vector<size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (size_t i = 0; i < map_.size(); i++) {
        size_t v = map_[i];
        if (v >= map_.size() || seen[v]) {
            throw std::invalid_argument(fmt::format("not a permutation: image {} at position {}", v, i));
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(size_t n) {
    std::vector<size_t> map(n);
    std::iota(map.begin(), map.end(), size_t{0});
    return Permutation(std::move(map));
}

bool Permutation::is_identity() const {
    for (size_t i = 0; i < map_.size(); i++) {
        if (map_[i] != i) {
            return false;
        }
    }
    return true;
}

std::string Permutation::str() const {
    std::string out;
    for (size_t i = 0; i < map_.size(); i++) {
        if (i) {
            out += ' ';
        }
        out += std::to_string(map_[i]);
    }
    return out;
}

Permutation Permutation::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<size_t> map;
    std::string token;
    while (in >> token) {
        size_t used = 0;
        unsigned long long v;
        try {
            v = std::stoull(token, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != token.size() || token[0] == '-') {
            throw std::invalid_argument(fmt::format("bad permutation entry '{}'", token));
        }
        map.push_back(static_cast<size_t>(v));
    }
    return Permutation(std::move(map));
}

std::string CycleDecomposition::str() const {
    if (cycles.empty()) {
        return "()";
    }
    std::string out;
    for (const auto &cycle : cycles) {
        out += '(';
        for (size_t k = 0; k < cycle.size(); k++) {
            if (k) {
                out += ' ';
            }
            out += std::to_string(cycle[k]);
        }
        out += ')';
    }
    return out;
}

Permutation CycleDecomposition::to_permutation(size_t n) const {
    std::vector<size_t> map(n);
    std::iota(map.begin(), map.end(), size_t{0});
    for (const auto &cycle : cycles) {
        for (size_t k = 0; k < cycle.size(); k++) {
            if (cycle[k] >= n) {
                throw std::invalid_argument("cycle element out of range");
            }
            map[cycle[k]] = cycle[(k + 1) % cycle.size()];
        }
    }
    return Permutation(std::move(map));
}

Permutation transposition(size_t a, size_t b, size_t n) {
    if (a >= n || b >= n) {
        throw std::out_of_range(fmt::format("transposition ({} {}) out of range for N={}", a, b, n));
    }
    Permutation id = Permutation::identity(n);
    std::vector<size_t> map = id.map();
    std::swap(map[a], map[b]);
    return Permutation(std::move(map));
}

Permutation compose(const Permutation &p, const Permutation &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument(fmt::format("compose: size mismatch {} vs {}", p.size(), q.size()));
    }
    std::vector<size_t> map(p.size());
    for (size_t i = 0; i < map.size(); i++) {
        map[i] = p(q(i));
    }
    return Permutation(std::move(map));
}

Permutation inverse(const Permutation &p) {
    std::vector<size_t> map(p.size());
    for (size_t i = 0; i < map.size(); i++) {
        map[p(i)] = i;
    }
    return Permutation(std::move(map));
}

Permutation power(const Permutation &p, uint64_t exponent) {
    Permutation result = Permutation::identity(p.size());
    Permutation base = p;
    while (exponent) {
        if (exponent & 1) {
            result = compose(base, result);
        }
        base = compose(base, base);
        exponent >>= 1;
    }
    return result;
}

CycleDecomposition cycle_decomposition(const Permutation &p) {
    CycleDecomposition out;
    std::vector<bool> visited(p.size(), false);
    // Scanning starts in increasing order, so each cycle begins at its
    // smallest element and cycles come out sorted.
    for (size_t start = 0; start < p.size(); start++) {
        if (visited[start] || p(start) == start) {
            continue;
        }
        std::vector<size_t> cycle;
        for (size_t i = start; !visited[i]; i = p(i)) {
            visited[i] = true;
            cycle.push_back(i);
        }
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

uint64_t order(const Permutation &p) {
    uint64_t result = 1;
    for (const auto &cycle : cycle_decomposition(p).cycles) {
        result = std::lcm(result, static_cast<uint64_t>(cycle.size()));
    }
    return result;
}

std::vector<Transposition> cycle_to_transpositions(const std::vector<size_t> &cycle) {
    if (cycle.size() < 2) {
        throw std::invalid_argument("cycle must have at least two elements");
    }
    std::vector<size_t> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("cycle has repeated elements");
    }
    std::vector<Transposition> out;
    for (size_t k = cycle.size() - 1; k >= 1; k--) {
        out.emplace_back(cycle[0], cycle[k]);
    }
    return out;
}

Permutation product_of_transpositions(const std::vector<Transposition> &factors, size_t n) {
    Permutation result = Permutation::identity(n);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        result = compose(transposition(it->first, it->second, n), result);
    }
    return result;
}

size_t log2_exact(size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument(fmt::format("{} is not a power of two", n));
    }
    size_t bits = 0;
    while ((size_t{1} << bits) < n) {
        bits++;
    }
    return bits;
}

Permutation bitflip_perm(uint64_t flip_mask, size_t n) {
    log2_exact(n);
    if (flip_mask >= n) {
        throw std::out_of_range(fmt::format("flip mask {} out of range for N={}", flip_mask, n));
    }
    std::vector<size_t> map(n);
    for (size_t i = 0; i < n; i++) {
        map[i] = i ^ flip_mask;
    }
    return Permutation(std::move(map));
}

uint64_t qubit_flip_mask(const std::vector<size_t> &qubits, size_t n_qubits) {
    uint64_t mask = 0;
    for (size_t q : qubits) {
        if (q >= n_qubits) {
            throw std::out_of_range(fmt::format("qubit {} out of range for {} qubits", q, n_qubits));
        }
        mask ^= uint64_t{1} << (n_qubits - 1 - q);
    }
    return mask;
}

Permutation neighbor_swap_family(int offset, size_t n) {
    if (offset != 0 && offset != 1) {
        throw std::invalid_argument("neighbor swap offset must be 0 or 1");
    }
    if (n == 0 || n % 2 != 0) {
        throw std::invalid_argument("neighbor swap family needs an even, nonzero N");
    }
    std::vector<size_t> map(n);
    for (size_t i = static_cast<size_t>(offset); i < n + static_cast<size_t>(offset); i += 2) {
        size_t a = i % n;
        size_t b = (i + 1) % n;
        map[a] = b;
        map[b] = a;
    }
    return Permutation(std::move(map));
}

Transposition restricted_mcx_pair(uint64_t control_pattern, size_t target_qubit, size_t n) {
    size_t n_qubits = log2_exact(n);
    if (n_qubits == 0) {
        throw std::invalid_argument("restricted move needs at least one qubit");
    }
    if (target_qubit >= n_qubits) {
        throw std::out_of_range(fmt::format("target qubit {} out of range for {} qubits", target_qubit, n_qubits));
    }
    if (control_pattern >= (uint64_t{1} << (n_qubits - 1))) {
        throw std::out_of_range(fmt::format("control pattern {} needs more than {} bits", control_pattern, n_qubits - 1));
    }
    size_t bit = n_qubits - 1 - target_qubit;
    uint64_t low = control_pattern & ((uint64_t{1} << bit) - 1);
    uint64_t high = control_pattern >> bit;
    uint64_t i = (high << (bit + 1)) | low;
    return {static_cast<size_t>(i), static_cast<size_t>(i | (uint64_t{1} << bit))};
}

Permutation restricted_mcx_move(uint64_t control_pattern, size_t target_qubit, size_t n) {
    auto [a, b] = restricted_mcx_pair(control_pattern, target_qubit, n);
    return transposition(a, b, n);
}

}  // namespace blockperm
