#include "drover/rng.hpp"

#include "drover/errors.hpp"

namespace drover {

std::vector<Vec2> random_targets_in_disk(Vec2 center, double radius, int count,
                                         std::uint64_t seed) {
    if (count < 0) throw ValidationError("random target count must be nonnegative");
    if (!(radius > 0.0)) throw ValidationError("random target radius must be positive");
    SplitMix64 rng(seed);
    std::vector<Vec2> out;
    out.reserve(size_t(count));
    while (out.size() < size_t(count)) {
        double x = 2.0 * rng.next_unit() - 1.0;
        double y = 2.0 * rng.next_unit() - 1.0;
        if (x * x + y * y > 1.0) continue;
        out.push_back(center + Vec2{radius * x, radius * y});
    }
    return out;
}

}  // namespace drover
