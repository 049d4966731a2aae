#pragma once

#include <cstdint>
#include <random>

namespace blockperm {

/// Seedable 64-bit generator used for every random choice in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not portable across library
/// implementations, so bounded integers and unit reals are derived here from
/// raw engine output. Traces are therefore identical on every platform.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }

    uint64_t next_u64() {
        return engine_();
    }

    /// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
    uint64_t below(uint64_t bound) {
        // Largest multiple of bound representable in 64 bits; draws at or
        // above it are rejected so every residue is equally likely.
        uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        uint64_t x;
        do {
            x = engine_();
        } while (x > limit);
        return x % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace blockperm
