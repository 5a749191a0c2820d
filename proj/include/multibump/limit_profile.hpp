#pragma once

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "multibump/common.hpp"
#include "multibump/eigensolver.hpp"
#include "multibump/nonlinearity.hpp"
#include "multibump/operators.hpp"

namespace multibump {

/// Ground state of the reference strip problem, with the quantities derived
/// from it that the tube constructions consume.
struct BumpProfile {
    Vec U;             // interior values, positive, even in both directions
    double lambda = 0.0;
    double mu = 0.0;       // theoretical decay rate sqrt(lambda + pi^2/4)
    double energy = 0.0;   // action value at the solution
    double anorm = 0.0;
    double amplitude = 0.0;
    int newton_iterations = 0;
};

struct GroundStateOptions {
    double tol = 1e-9;        // sup norm of the pointwise equation residual
    int max_iter = 60;
    bool symmetrize = true;
    double init_scale = 1.0;  // multiplies the fitted starting amplitude
};

/// Action functional J(u) = 1/2 a(u,u) - integral of F(u).
inline double action_value(const DiscreteOperator& op, const Nonlinearity& f, const Vec& u) {
    return 0.5 * op.a_inner(u, u) - op.Mdiag().dot(f.F(u));
}

/// a-gradient of the action: u - B^{-1} M f(u).
inline Vec action_gradient(const DiscreteOperator& op, const Nonlinearity& f, const Vec& u) {
    return u - op.solve_B(op.apply_M(f.f(u)));
}

/// Average of a field over its four axial reflections on the strip.
inline Vec symmetrize_strip(const DiscreteOperator& op, const Vec& u) {
    const Grid& g = op.grid();
    Vec full = op.extend_field(u);
    Vec out(full.size());
    for (int i = 0; i < g.ncol(); ++i)
        for (int j = 0; j < g.nrow(); ++j) {
            const int im = g.ncol() - 1 - i;
            const int jm = g.nrow() - 1 - j;
            // Pairwise grouping keeps mirrored nodes bitwise identical.
            out[g.node(i, j)] = 0.25 * ((full[g.node(i, j)] + full[g.node(im, j)]) +
                                        (full[g.node(i, jm)] + full[g.node(im, jm)]));
        }
    return op.restrict_field(out);
}

namespace detail {

inline double nehari_scale(const DiscreteOperator& op, const Nonlinearity& f, const Vec& g) {
    const double agg = op.a_inner(g, g);
    auto deficit = [&](double A) { return agg - op.m_inner(g, f.f(Vec(A * g))) / A; };
    // The right side grows superlinearly in A, so the root is unique.
    double lo = 1e-8, hi = 1.0;
    while (deficit(hi) > 0.0 && hi < 1e8) hi *= 2.0;
    if (hi >= 1e8) throw NewtonDivergence("ground state: no mountain pass scale found");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deficit(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double equation_residual(const DiscreteOperator& op, const Nonlinearity& f,
                                const Vec& u) {
    const Vec r = op.apply_B(u) - op.apply_M(f.f(u));
    return (r.cwiseQuotient(op.Mdiag())).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Solves B u = M f(u) for the positive even ground state by damped Newton
/// iteration from a cosine-Gaussian seed on the mountain pass level. A run
/// that collapses toward zero is restarted once from a higher amplitude.
inline BumpProfile solve_ground_state(const DiscreteOperator& op, const Nonlinearity& f,
                                      GroundStateOptions opt = {}) {
    if (op.grid().topology() != Grid::Topology::Strip)
        throw RangeViolation("ground state: operator does not live on a strip");
    const Grid& g = op.grid();
    const double mu = decay_mu(op.lambda());

    Vec seed(op.size());
    for (int k = 0; k < op.size(); ++k) {
        const auto [i, j] = g.interior_node(k);
        seed[k] = std::cos(kPi * g.eta(j) / 2.0) * std::exp(-0.5 * mu * sqr(g.s(i)));
    }

    bool restarted = false;
    double amp = detail::nehari_scale(op, f, seed) * opt.init_scale;
    int total_iters = 0;

    for (;;) {
        Vec u = amp * seed;
        const double init_inf = u.cwiseAbs().maxCoeff();
        double resid = detail::equation_residual(op, f, u);
        bool collapsed = false, diverged = false;

        int it = 0;
        for (; it < opt.max_iter; ++it) {
            if (resid <= opt.tol) break;
            const SpMat J =
                op.B() - SpMat(op.Mdiag().cwiseProduct(f.df(u)).asDiagonal());
            Eigen::SparseLU<SpMat> lu(J);
            if (lu.info() != Eigen::Success) {
                diverged = true;
                break;
            }
            const Vec rhs = op.apply_M(f.f(u)) - op.apply_B(u);
            const Vec delta = lu.solve(rhs);
            double step = 1.0;
            bool accepted = false;
            for (int bt = 0; bt < 7; ++bt) {
                Vec cand = u + step * delta;
                if (opt.symmetrize) cand = symmetrize_strip(op, cand);
                const double rnew = detail::equation_residual(op, f, cand);
                if (std::isfinite(rnew) && rnew < resid) {
                    u = std::move(cand);
                    resid = rnew;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                diverged = true;
                break;
            }
            if (u.cwiseAbs().maxCoeff() < 0.1 * init_inf) {
                collapsed = true;
                break;
            }
        }
        total_iters += it;
        if (resid <= opt.tol && !collapsed && !diverged) {
            if (u.maxCoeff() <= 0.0 || u.cwiseAbs().maxCoeff() < 0.1 * init_inf)
                collapsed = true;
            else {
                BumpProfile p;
                p.U = std::move(u);
                p.lambda = op.lambda();
                p.mu = mu;
                p.energy = action_value(op, f, p.U);
                p.anorm = op.a_norm(p.U);
                p.amplitude = p.U.maxCoeff();
                p.newton_iterations = total_iters;
                return p;
            }
        }
        if (it >= opt.max_iter && !collapsed) diverged = true;
        if (!restarted) {
            restarted = true;
            amp *= 1.5;
            continue;
        }
        if (collapsed)
            throw CollapseToZero("ground state: iteration collapsed toward zero twice");
        throw NewtonDivergence("ground state: Newton iteration failed to converge");
    }
}

/// Longitudinal decay rate fitted from the per-column peak on a window of
/// positive xi. For the true profile this approaches mu from below as the
/// grid refines.
inline double fit_decay_rate(const DiscreteOperator& op, const Vec& U, double xi_lo = 4.0,
                             double xi_hi = 8.0) {
    const Grid& g = op.grid();
    if (g.topology() != Grid::Topology::Strip)
        throw RangeViolation("decay fit: operator does not live on a strip");
    if (xi_lo >= xi_hi || xi_hi > -g.s(0))
        throw RangeViolation("decay fit: window must sit inside the strip");
    const Vec full = op.extend_field(U);
    std::vector<double> xs, ys;
    for (int i = 0; i < g.ncol(); ++i) {
        const double xi = g.s(i);
        if (xi < xi_lo || xi > xi_hi) continue;
        double peak = 0.0;
        for (int j = 0; j < g.nrow(); ++j) peak = std::max(peak, std::abs(full[g.node(i, j)]));
        if (peak <= 0.0) throw RangeViolation("decay fit: field vanishes inside the window");
        xs.push_back(xi);
        ys.push_back(std::log(peak));
    }
    if (xs.size() < 4) throw RangeViolation("decay fit: too few columns in the window");
    return -linear_fit(xs, ys).slope;
}

/// Central difference along the strip axis, the discrete translation mode.
inline Vec xi_derivative(const DiscreteOperator& op, const Vec& U) {
    const Grid& g = op.grid();
    const Vec full = op.extend_field(U);
    Vec out = Vec::Zero(op.size());
    for (int k = 0; k < op.size(); ++k) {
        const auto [i, j] = g.interior_node(k);
        const int il = g.periodic() ? (i + g.ncol() - 1) % g.ncol() : i - 1;
        const int ir = g.periodic() ? (i + 1) % g.ncol() : i + 1;
        out[k] = (full[g.node(ir, j)] - full[g.node(il, j)]) / (2.0 * g.hs());
    }
    return out;
}

struct NondegeneracyReport {
    double kernel_value = 0.0;   // eigenvalue of the linearization nearest zero
    double kernel_cosine = 0.0;  // alignment of its mode with the translation mode
    double next_value = 0.0;     // next eigenvalue by distance from zero
};

/// Checks that the linearized operator B - M f'(U) has exactly the expected
/// translation kernel: one eigenvalue inside the window, carried by the xi
/// derivative of U, with the rest of the spectrum bounded away from zero.
inline NondegeneracyReport check_nondegeneracy(const DiscreteOperator& op,
                                               const Nonlinearity& f, const Vec& U,
                                               double window = 1e-2,
                                               double gap_floor = 0.1,
                                               double cosine_floor = 0.999) {
    const SpMat Kmod = op.B() - SpMat(op.Mdiag().cwiseProduct(f.df(U)).asDiagonal());
    const Vec& M = op.Mdiag();

    // Inertia counting is exact, which matters here: above the bump the
    // linearization looks like the free operator and its spectrum clusters at
    // the continuum edge, where an iterative solver would crawl.
    auto count_in = [&](double w) {
        return count_eigenvalues_below(Kmod, M, w) - count_eigenvalues_below(Kmod, M, -w);
    };

    const int inside = count_in(window);
    if (inside != 1)
        throw DegeneracySuspected("nondegeneracy: expected exactly one near-zero eigenvalue, "
                                  "found " + std::to_string(inside));

    EigenOptions opt;
    opt.k = 1;
    opt.sort = EigenSort::NearestZero;
    const EigenResult r = solve_generalized(Kmod, M, opt);

    NondegeneracyReport rep;
    rep.kernel_value = r.values[0];
    const Vec dxi = xi_derivative(op, U);
    rep.kernel_cosine = std::abs(op.m_inner(r.vectors[0], dxi)) /
                        (op.m_norm(r.vectors[0]) * op.m_norm(dxi));
    if (rep.kernel_cosine < cosine_floor)
        throw DegeneracySuspected("nondegeneracy: near-zero mode is not the translation mode");
    if (count_in(gap_floor) != 1)
        throw DegeneracySuspected("nondegeneracy: spectral gap around zero collapsed");

    // Bracket the magnitude of the second-nearest eigenvalue by bisection.
    double lo = gap_floor, hi = gap_floor;
    while (count_in(hi) < 2 && hi < 1e8) {
        lo = hi;
        hi *= 2.0;
    }
    if (hi < 1e8) {
        for (int it = 0; it < 40 && hi - lo > 1e-4 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (count_in(mid) < 2 ? lo : hi) = mid;
        }
    }
    const double mag = 0.5 * (lo + hi);
    int below = count_eigenvalues_below(Kmod, M, 0.0) - count_eigenvalues_below(Kmod, M, -hi);
    if (rep.kernel_value < 0.0) below -= 1;
    rep.next_value = below > 0 ? -mag : mag;
    return rep;
}

/// Dirichlet projection of the profile onto the window (-a, b): solves
/// B v = M f(U) with zero conditions outside. Comparison with U itself gives
/// the exponential truncation error.
inline Vec truncated_projection(const DiscreteOperator& op, const Nonlinearity& f,
                                const Vec& U, double a, double b) {
    const Grid& g = op.grid();
    if (g.topology() != Grid::Topology::Strip)
        throw RangeViolation("truncated projection: operator does not live on a strip");
    if (a <= 0.0 || b <= 0.0) throw RangeViolation("truncated projection: window must straddle 0");
    if (-a <= g.s(0) || b >= g.s(g.ncol() - 1))
        throw WindowOverflow("truncated projection: window exceeds the computational domain");
    int lo = 0, hi = g.ncol() - 1;
    while (lo < g.ncol() && g.s(lo) <= -a + 1e-12) ++lo;
    while (hi >= 0 && g.s(hi) >= b - 1e-12) --hi;
    if (lo > hi) throw WindowOverflow("truncated projection: window holds no columns");
    return solve_windowed(op, op.apply_M(f.f(U)), lo, hi - lo + 1);
}

}  // namespace multibump
