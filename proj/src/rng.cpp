#include "platoonsim/rng.hpp"

namespace platoonsim {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    // Boost-style combine feeding a full splitmix round, so nearby
    // (seed, index) pairs land far apart.
    SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
    return g.next_u64();
}

}  // namespace platoonsim
