#pragma once

#include <cmath>
#include <cstdint>

#include "multibump/common.hpp"
#include "multibump/curve.hpp"

namespace multibump {

struct VolumeEstimate {
    double volume = 0.0;
    double ci99 = 0.0;  // 99% confidence half-width
    long samples = 0;
};

/// Monte Carlo area of B_r(x2) \ B_1(x1), sampling the bounding square of the
/// outer ball. Deterministic for a fixed seed.
inline VolumeEstimate ball_difference_volume(Vec2 x1, Vec2 x2, double r, long samples,
                                             std::uint64_t seed) {
    const double d = dist(x1, x2);
    if (d >= 1.0) throw RangeViolation("ball volume: centers must be closer than the unit radius");
    if (r < 1.0 || r > 1.0 + d)
        throw RangeViolation("ball volume: outer radius must lie in [1, 1 + |x1-x2|]");
    if (samples <= 0) throw RangeViolation("ball volume: sample count must be positive");
    Rng rng(seed);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const Vec2 p{x2.x + r * (2.0 * rng.uniform() - 1.0),
                     x2.y + r * (2.0 * rng.uniform() - 1.0)};
        const double dx2 = sqr(p.x - x2.x) + sqr(p.y - x2.y);
        if (dx2 > r * r) continue;
        const double dx1 = sqr(p.x - x1.x) + sqr(p.y - x1.y);
        if (dx1 >= 1.0) ++hits;
    }
    const double box = 4.0 * r * r;
    const double phat = static_cast<double>(hits) / static_cast<double>(samples);
    VolumeEstimate e;
    e.volume = box * phat;
    e.ci99 = 2.5758293035489004 * box * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    e.samples = samples;
    return e;
}

}  // namespace multibump
