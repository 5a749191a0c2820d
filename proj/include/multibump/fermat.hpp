#pragma once

#include <array>
#include <cmath>

#include "multibump/common.hpp"
#include "multibump/curve.hpp"

namespace multibump {

struct FermatResult {
    Vec2 point;
    double total = 0.0;  // sum of distances to the three vertices
    int vertex = -1;     // index of the vertex attaining the minimum, -1 if interior
};

namespace detail {

inline double fermat_total(Vec2 p, const std::array<Vec2, 3>& v) {
    return dist(p, v[0]) + dist(p, v[1]) + dist(p, v[2]);
}

}  // namespace detail

/// Point minimizing the sum of distances to three given points. When some
/// vertex angle reaches 120 degrees the minimizer is that vertex; otherwise
/// Weiszfeld iteration from the centroid converges to the interior point, with
/// a coordinate-descent fallback if it stalls.
inline FermatResult fermat_point(Vec2 a, Vec2 b, Vec2 c) {
    const std::array<Vec2, 3> v{a, b, c};
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) scale = std::max(scale, dist(v[i], v[j]));
    if (scale == 0.0) return {a, 0.0, 0};

    // Vertex case: coincident points always land here, as do obtuse angles.
    for (int k = 0; k < 3; ++k) {
        const Vec2 u = v[(k + 1) % 3] - v[k];
        const Vec2 w = v[(k + 2) % 3] - v[k];
        const double nu = norm(u), nw = norm(w);
        if (nu < 1e-14 * scale || nw < 1e-14 * scale)
            return {v[k], detail::fermat_total(v[k], v), k};
        if (dot(u, w) / (nu * nw) <= -0.5 + 1e-14)
            return {v[k], detail::fermat_total(v[k], v), k};
    }

    Vec2 p = (1.0 / 3.0) * (a + b + c);
    bool converged = false;
    for (int it = 0; it < 1000; ++it) {
        double wsum = 0.0;
        Vec2 acc{0, 0};
        bool snapped = false;
        for (int k = 0; k < 3; ++k) {
            const double d = dist(p, v[k]);
            if (d < 1e-13 * scale) {
                // Interior minimizer cannot sit on a vertex here (all angles
                // are acute enough); nudge off and continue.
                p = p + Vec2{1e-9 * scale, 1e-9 * scale};
                snapped = true;
                break;
            }
            wsum += 1.0 / d;
            acc = acc + (1.0 / d) * v[k];
        }
        if (snapped) continue;
        const Vec2 q = (1.0 / wsum) * acc;
        if (dist(p, q) < 1e-15 * scale) {
            p = q;
            converged = true;
            break;
        }
        p = q;
    }
    if (!converged) {
        // Coordinate-wise golden section on the (convex) objective.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int sweep = 0; sweep < 6; ++sweep) {
            for (int axis = 0; axis < 2; ++axis) {
                double lo = (axis == 0 ? p.x : p.y) - 0.5 * scale;
                double hi = (axis == 0 ? p.x : p.y) + 0.5 * scale;
                auto val = [&](double z) {
                    Vec2 q = p;
                    (axis == 0 ? q.x : q.y) = z;
                    return detail::fermat_total(q, v);
                };
                double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                double f1 = val(x1), f2 = val(x2);
                for (int it = 0; it < 90; ++it) {
                    if (f1 < f2) {
                        hi = x2; x2 = x1; f2 = f1;
                        x1 = hi - gr * (hi - lo); f1 = val(x1);
                    } else {
                        lo = x1; x1 = x2; f1 = f2;
                        x2 = lo + gr * (hi - lo); f2 = val(x2);
                    }
                }
                (axis == 0 ? p.x : p.y) = 0.5 * (lo + hi);
            }
        }
    }
    return {p, detail::fermat_total(p, v), -1};
}

}  // namespace multibump
