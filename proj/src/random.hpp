#pragma once

#include <cstdint>
#include <random>

namespace tilecensus {

// Unbiased draw from [0, bound) by rejection. Unlike the standard
// distributions this is specified bit-for-bit, so seeds reproduce everywhere.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

}  // namespace tilecensus
