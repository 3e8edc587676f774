#pragma once

// Seeded deterministic RNG for initial-data generation.
//
// splitmix64 (Steele, Lea, Flood; the java.util.SplittableRandom finalizer).
// Chosen over std::mt19937_64 because the algorithm is fixed by these ten
// lines rather than by a library implementation, so streams are identical
// across standard libraries and platforms.

#include <cstdint>

namespace nlse {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) from the top 53 bits, exactly representable.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace nlse
