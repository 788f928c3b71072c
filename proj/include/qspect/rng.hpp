#pragma once

#include <cstdint>
#include <random>

namespace qspect {

/// Deterministic random source. mt19937_64 output is fully specified by the
/// standard; the derived draws below avoid std::*_distribution, whose results
/// are implementation-defined, so the same seed gives the same stream on any
/// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 bits of entropy.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform angle in [0, 2*pi).
    double angle() { return uniform() * 6.283185307179586476925286766559; }

    /// Unbiased integer in [0, n) via mask rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1);
        for (;;) {
            std::uint64_t x = engine_() & mask;
            if (x < n) return x;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qspect
