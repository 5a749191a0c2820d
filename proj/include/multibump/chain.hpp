#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "multibump/common.hpp"
#include "multibump/curve.hpp"

namespace multibump {

/// Minimum separations required between bump centers. g1 is the natural
/// interaction scale log(R)/(2 mu); g2 = (1/2 + 1/(4 alpha')) g1 is the
/// tighter scale used when second order interaction control is needed, with
/// alpha' in (1/2, 1) so that g2 < g1.
struct SeparationScales {
    double g1 = 0.0;
    double g2 = 0.0;
    double alpha_prime = 0.75;
};

inline SeparationScales separation_scales(double R, double mu, double alpha_prime = 0.75) {
    if (R <= 1.0) throw RangeViolation("separation scales: expansion factor must exceed 1");
    if (mu <= 0.0) throw RangeViolation("separation scales: decay rate must be positive");
    if (alpha_prime <= 0.5 || alpha_prime >= 1.0)
        throw RangeViolation("separation scales: interaction exponent must lie in (1/2, 1)");
    SeparationScales s;
    s.alpha_prime = alpha_prime;
    s.g1 = std::log(R) / (2.0 * mu);
    s.g2 = (0.5 + 1.0 / (4.0 * alpha_prime)) * s.g1;
    return s;
}

/// Cyclic index distance on n slots.
inline int cyclic_index_distance(int i, int j, int n) {
    if (n <= 0) throw RangeViolation("cyclic distance: slot count must be positive");
    int d = std::abs(i - j) % n;
    return std::min(d, n - d);
}

/// An ordered set of prospective bump centers on the expanded curve R*gamma.
struct Chain {
    std::shared_ptr<const Curve> curve;
    double R = 0.0;
    std::vector<double> t;   // parameters, strictly increasing within [0,1)
    std::vector<Vec2> x;     // ambient positions R*gamma(t_i)
    std::vector<double> arc; // arc positions on the expanded curve
    bool closed = false;

    int size() const { return static_cast<int>(t.size()); }
};

inline Chain chain_from_params(std::shared_ptr<const Curve> curve, double R,
                               const std::vector<double>& params) {
    if (!curve) throw RangeViolation("chain: missing curve");
    if (R <= 1.0) throw RangeViolation("chain: expansion factor must exceed 1");
    if (params.empty()) throw RangeViolation("chain: needs at least one point");
    Chain c;
    c.curve = curve;
    c.R = R;
    c.closed = curve->closed();
    c.t = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double ti = params[i];
        if (c.closed) {
            if (ti < 0.0 || ti >= 1.0)
                throw RangeViolation("chain: closed-curve parameters must lie in [0,1)");
        } else {
            if (ti <= 0.0 || ti >= 1.0)
                throw RangeViolation("chain: open-curve parameters must lie strictly inside (0,1)");
        }
        if (i > 0 && ti <= params[i - 1])
            throw OrderViolation("chain: parameters must be strictly increasing");
        c.x.push_back(R * Vec2{0, 0} + Vec2{R * curve->point(ti).x, R * curve->point(ti).y});
        c.arc.push_back(R * curve->arc_from_t(ti));
    }
    return c;
}

struct ChainAdmissibility {
    bool admissible = false;
    double min_separation = 0.0;      // smallest pairwise Euclidean distance
    double min_boundary_clearance = 0.0;  // smallest 2*dist(x_i, endpoint); inf when closed
    double slack = 0.0;               // how far above the threshold the binding quantity sits
};

/// Checks the chain against a separation threshold g: every pairwise distance
/// must exceed g, and on open curves twice the distance from each point to
/// the nearer curve endpoint must exceed g as well.
inline ChainAdmissibility chain_admissible(const Chain& c, double g) {
    if (g <= 0.0) throw RangeViolation("admissibility: separation threshold must be positive");
    ChainAdmissibility r;
    r.min_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            r.min_separation = std::min(r.min_separation, dist(c.x[i], c.x[j]));
    r.min_boundary_clearance = std::numeric_limits<double>::infinity();
    if (!c.closed) {
        const Vec2 e0 = c.R * Vec2{c.curve->point(0.0).x, c.curve->point(0.0).y};
        const Vec2 e1 = c.R * Vec2{c.curve->point(1.0).x, c.curve->point(1.0).y};
        for (const Vec2& xi : c.x) {
            const double d = std::min(dist(xi, e0), dist(xi, e1));
            r.min_boundary_clearance = std::min(r.min_boundary_clearance, 2.0 * d);
        }
    }
    const double binding = std::min(r.min_separation, r.min_boundary_clearance);
    r.slack = binding - g;
    r.admissible = r.slack > 0.0;
    return r;
}

}  // namespace multibump
