#pragma once

#include <cstdint>
#include <vector>

#include "drover/vec2.hpp"

namespace drover {

// splitmix64 (Steele, Lea, Flood 2014). Chosen for portability: the stream is
// a pure function of the 64-bit seed, so seeded runs reproduce across
// platforms and implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Uniform points in the closed disk, by rejection from the bounding square.
// Rejection avoids transcendentals, so the points are bit-exact wherever
// IEEE-754 double arithmetic is. Each attempt consumes two draws.
std::vector<Vec2> random_targets_in_disk(Vec2 center, double radius, int count,
                                         std::uint64_t seed);

}  // namespace drover
