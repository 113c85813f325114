#pragma once

#include <cstdint>

namespace platoonsim {

/// Deterministic, portable pseudo-random generator (splitmix64).
///
/// Used everywhere randomness is needed instead of <random> distributions,
/// whose output is implementation-defined: a given seed must reproduce the
/// same disturbances, scenarios and search trials bit-for-bit on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). Requires n > 0.
    int next_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

private:
    std::uint64_t state_;
};

/// Stable hash-combine of two 64-bit values, used to derive per-edge and
/// per-trial seeds from a scenario seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace platoonsim
