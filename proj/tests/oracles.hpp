#pragma once

// Independent reference computations used only by tests. Each oracle avoids
// the algorithm used by the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "multibump/curve.hpp"
#include "multibump/nonlinearity.hpp"
#include "multibump/operators.hpp"

namespace oracles {

using multibump::Vec2;

/// Area of the intersection of two disks with radii r1, r2 at center
/// distance d (standard lens formula).
inline double lens_area(double d, double r1, double r2) {
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        const double rmin = std::min(r1, r2);
        return multibump::kPi * rmin * rmin;
    }
    const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
    const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
    const double tri = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) *
                                                      (d - r1 + r2) * (d + r1 + r2)));
    return r1 * r1 * a1 + r2 * r2 * a2 - tri;
}

/// Exact area of B_r(x2) \ B_1(x1).
inline double ball_difference_area(Vec2 x1, Vec2 x2, double r) {
    const double d = multibump::dist(x1, x2);
    return multibump::kPi * r * r - lens_area(d, 1.0, r);
}

/// Minimum of |p-a|+|p-b|+|p-c| by compass pattern search from the centroid.
/// No vertex-angle shortcut; purely derivative-free descent.
inline double fermat_total_pattern_search(Vec2 a, Vec2 b, Vec2 c) {
    const std::array<Vec2, 3> v{a, b, c};
    auto f = [&](Vec2 p) {
        return multibump::dist(p, v[0]) + multibump::dist(p, v[1]) + multibump::dist(p, v[2]);
    };
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) scale = std::max(scale, multibump::dist(v[i], v[j]));
    if (scale == 0.0) return 0.0;
    Vec2 p = (1.0 / 3.0) * (a + b + c);
    double fp = f(p);
    // Also try the vertices as starting candidates.
    for (const Vec2& q : v)
        if (f(q) < fp) {
            p = q;
            fp = f(q);
        }
    double step = 0.25 * scale;
    double phase = 0.0;
    const double golden_angle = multibump::kPi * (3.0 - std::sqrt(5.0));
    while (step > 1e-14 * scale) {
        bool moved = false;
        for (int k = 0; k < 16; ++k) {
            const double ang = phase + k * multibump::kPi / 8.0;
            const Vec2 q = p + step * Vec2{std::cos(ang), std::sin(ang)};
            const double fq = f(q);
            if (fq < fp) {
                p = q;
                fp = fq;
                moved = true;
            }
        }
        if (!moved) {
            step *= 0.5;
            phase += golden_angle;  // rotate the compass so kinks cannot stall it
        }
    }
    return fp;
}

/// Unsigned curvature from the circumcircle of three nearby curve points.
inline double circumcircle_curvature(const multibump::Curve& curve, double t, double dt) {
    const Vec2 p1 = curve.point(t - dt);
    const Vec2 p2 = curve.point(t);
    const Vec2 p3 = curve.point(t + dt);
    const double a = multibump::dist(p1, p2);
    const double b = multibump::dist(p2, p3);
    const double c = multibump::dist(p3, p1);
    const double cross = (p2.x - p1.x) * (p3.y - p1.y) - (p2.y - p1.y) * (p3.x - p1.x);
    const double area = 0.5 * std::abs(cross);
    if (a * b * c == 0.0) return 0.0;
    return 4.0 * area / (a * b * c);
}

/// Max unsigned curvature over a dense parameter sweep.
inline double max_curvature_dense(const multibump::Curve& curve, int n = 100000) {
    double best = 0.0;
    const double dt = 2e-4;
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        if (!curve.closed()) t = std::clamp(t, dt, 1.0 - dt);
        best = std::max(best, circumcircle_curvature(curve, t, dt));
    }
    return best;
}

/// Mountain pass level by constrained gradient descent: steepest a-descent
/// projected back onto the natural constraint set after every step. Shares no
/// logic with the Newton solver beyond the linear solve primitive.
inline double nehari_descent_energy(const multibump::DiscreteOperator& op,
                                    const multibump::Nonlinearity& f, int max_iters = 4000) {
    using multibump::Vec;
    const auto& g = op.grid();
    const double mu = multibump::decay_mu(op.lambda());
    Vec v(op.size());
    for (int k = 0; k < op.size(); ++k) {
        const auto [i, j] = g.interior_node(k);
        v[k] = std::cos(multibump::kPi * g.eta(j) / 2.0) *
               std::exp(-0.5 * mu * g.s(i) * g.s(i));
    }
    auto rescale = [&](Vec& w) {
        // Find t with a(tw, tw) = <f(tw), tw> by bisection.
        const double aww = op.a_inner(w, w);
        auto excess = [&](double t) { return op.m_inner(w, f.f(Vec(t * w))) / t - aww; };
        double lo = 1e-9, hi = 1.0;
        while (excess(hi) < 0.0 && hi < 1e9) hi *= 2.0;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) < 0.0 ? lo : hi) = mid;
        }
        w *= 0.5 * (lo + hi);
    };
    auto energy = [&](const Vec& w) {
        return 0.5 * op.a_inner(w, w) - op.Mdiag().dot(f.F(w));
    };
    rescale(v);
    double e = energy(v);
    int flat = 0;
    for (int it = 0; it < max_iters && flat < 5; ++it) {
        const Vec grad = v - op.solve_B(op.apply_M(f.f(v)));
        Vec w = v - 0.5 * grad;
        rescale(w);
        const double enew = energy(w);
        if (std::abs(enew - e) < 1e-14 * std::abs(e)) ++flat;
        else flat = 0;
        v = std::move(w);
        e = enew;
    }
    return e;
}

}  // namespace oracles
