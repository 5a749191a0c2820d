#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "multibump/ansatz.hpp"
#include "multibump/energy.hpp"

namespace multibump {

struct ReductionOptions {
    double half_width = 0.0;  // 0 picks the assembly default
    double fd_step = 1e-4;    // arc step for the translation directions
    double tol = 1e-8;        // stop when the projected gradient a-norm drops below this
    int max_outer = 200;
    int max_inner = 400;      // MINRES cap per outer step
    double inner_tol = 1e-10;
    double trust_factor = 0.5;  // trust radius as a fraction of the ansatz a-norm
    bool clip = false;
};

struct ReducedSolution {
    Vec u;
    double energy = 0.0;
    double tangent_residual = 0.0;  // projected gradient a-norm at exit
    double correction_norm = 0.0;   // a-distance from the assembled ansatz
    int outer_iterations = 0;
    int tangent_rank = 0;
    std::vector<double> step_norms;  // a-norm of each correction step

    /// Largest ratio of successive correction steps; below one means the
    /// iteration contracted monotonically. Steps whose predecessor is already
    /// at the floor are noise against noise and are skipped.
    double contraction_factor(double floor = 1e-13) const {
        double worst = 0.0;
        for (std::size_t i = 1; i < step_norms.size(); ++i)
            if (step_norms[i - 1] > floor)
                worst = std::max(worst, step_norms[i] / step_norms[i - 1]);
        return worst;
    }
};

namespace detail {

inline std::vector<Vec> a_orthonormalize(const DiscreteOperator& op, std::vector<Vec> dirs) {
    std::vector<Vec> basis;
    for (Vec& v : dirs) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis) v -= op.a_inner(q, v) * q;
        const double norm = op.a_norm(v);
        if (norm > 1e-10) basis.push_back(v / norm);
    }
    return basis;
}

}  // namespace detail

/// a-orthogonal projector onto the complement of the bump translation directions.
class TangentProjector {
  public:
    TangentProjector(const DiscreteOperator& op, std::vector<Vec> directions)
        : op_(&op), basis_(detail::a_orthonormalize(op, std::move(directions))) {}

    Vec operator()(Vec v) const {
        for (const Vec& q : basis_) v -= op_->a_inner(q, v) * q;
        return v;
    }

    int rank() const { return static_cast<int>(basis_.size()); }

  private:
    const DiscreteOperator* op_;
    std::vector<Vec> basis_;
};

/// Central differences of the windowed projection with respect to each bump's
/// arc position.  The window is held fixed at the unperturbed placement so the
/// difference sees only the moving source, not a moving Dirichlet wall.
inline std::vector<Vec> translation_tangents(const DiscreteOperator& op, const Nonlinearity& f,
                                             const ProfileSampler& prof,
                                             const std::vector<BumpPlacement>& placements,
                                             double half_width, double fd_step, bool clip = false) {
    const Grid& g = op.grid();
    if (!(fd_step > 0.0) || !(half_width > 0.0))
        throw RangeViolation("translation tangents: fd_step and half_width must be positive");
    const int w = static_cast<int>(std::lround(half_width / g.hs()));
    const double length = g.hs() * g.ncol();

    std::vector<Vec> out;
    out.reserve(placements.size());
    for (const BumpPlacement& p : placements) {
        const double arc = (p.column + p.frac) * g.hs();
        Vec diff;
        for (const int sgn : {+1, -1}) {
            double shifted = arc + sgn * fd_step;
            if (g.periodic()) shifted = std::fmod(shifted + length, length);
            const BumpPlacement q = placement_from_arc(g, shifted, p.sign);
            const Vec placed = place_bump(op, prof, q);
            const Vec sol =
                solve_windowed(op, op.apply_M(f.f(placed)), p.column - w, 2 * w + 1, clip);
            if (sgn > 0)
                diff = sol;
            else
                diff -= sol;
        }
        out.push_back(diff / (2.0 * fd_step));
    }
    return out;
}

namespace detail {

/// MINRES in the a-inner product for a self-adjoint (possibly indefinite)
/// operator given as a callable.  Returns the best iterate; the caller judges
/// the outer residual.
template <class ApplyL>
Vec minres_in_a(const DiscreteOperator& op, const ApplyL& L, const Vec& rhs, int max_iter,
                double rel_tol) {
    Vec x = Vec::Zero(rhs.size());
    const double beta1 = op.a_norm(rhs);
    if (beta1 == 0.0) return x;

    Vec v_prev = Vec::Zero(rhs.size());
    Vec v = rhs / beta1;
    Vec w = Vec::Zero(rhs.size());
    Vec w_old = Vec::Zero(rhs.size());
    double beta = 0.0;
    double eta = beta1;
    double gamma = 1.0, gamma_old = 1.0;
    double sigma = 0.0, sigma_old = 0.0;

    for (int k = 0; k < max_iter; ++k) {
        Vec u = L(v);
        if (beta != 0.0) u -= beta * v_prev;
        const double alpha = op.a_inner(u, v);
        u -= alpha * v;
        const double beta_next = op.a_norm(u);

        const double delta = gamma * alpha - gamma_old * sigma * beta;
        const double rho1 = std::sqrt(delta * delta + beta_next * beta_next);
        const double rho2 = sigma * alpha + gamma_old * gamma * beta;
        const double rho3 = sigma_old * beta;
        if (rho1 < 1e-300) break;
        const double c = delta / rho1;
        const double s = beta_next / rho1;

        Vec w_new = (v - rho3 * w_old - rho2 * w) / rho1;
        x += (c * eta) * w_new;
        eta = -s * eta;

        w_old = std::move(w);
        w = std::move(w_new);
        if (beta_next < 1e-14 * beta1) break;
        v_prev = std::move(v);
        v = u / beta_next;
        gamma_old = gamma;
        gamma = c;
        sigma_old = sigma;
        sigma = s;
        beta = beta_next;

        if (std::abs(eta) <= rel_tol * beta1) break;
    }
    return x;
}

}  // namespace detail

/// Newton correction of a multibump ansatz inside the slice a-orthogonal to
/// the bump translation directions.  The translation components of the
/// gradient are left alone; they belong to the placement optimization.
inline ReducedSolution reduce_multibump(const DiscreteOperator& op, const Nonlinearity& f,
                                        const ProfileSampler& prof,
                                        const std::vector<BumpPlacement>& placements,
                                        ReductionOptions opt = {}) {
    if (placements.empty()) throw RangeViolation("reduction: no bumps to correct");
    MultibumpAnsatz ansatz =
        assemble_multibump(op, f, prof, placements, opt.half_width, opt.clip);
    const TangentProjector project(
        op, translation_tangents(op, f, prof, placements, ansatz.half_width, opt.fd_step,
                                 opt.clip));

    const Vec& start = ansatz.projected;
    const double radius = opt.trust_factor * op.a_norm(start);
    Vec u = start;

    ReducedSolution result;
    result.tangent_rank = project.rank();
    double prev_step = std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const Vec grad = project(action_gradient(op, f, u));
        result.tangent_residual = op.a_norm(grad);
        result.outer_iterations = outer;
        if (result.tangent_residual <= opt.tol) {
            result.u = u;
            result.energy = action_value(op, f, u);
            result.correction_norm = op.a_norm(u - start);
            return result;
        }

        const Vec slope = f.df(u);
        const auto hess = [&](const Vec& v) {
            return Vec(v - op.solve_B(op.apply_M(slope.cwiseProduct(v))));
        };
        const auto constrained = [&](const Vec& v) { return project(hess(project(v))); };
        const Vec step =
            detail::minres_in_a(op, constrained, Vec(-grad), opt.max_inner, opt.inner_tol);
        const double step_norm = op.a_norm(step);

        if (outer > 0 && prev_step > 1e3 * opt.tol && step_norm > 0.9 * prev_step)
            throw ContractionFailure("reduction: correction steps stopped contracting");
        if (step_norm > 0.0) prev_step = step_norm;
        result.step_norms.push_back(step_norm);

        u += step;
        result.correction_norm = op.a_norm(u - start);
        if (result.correction_norm > radius)
            throw LeftTrustRegion("reduction: correction left the trust region");
    }
    throw ConvergenceFailure("reduction: outer iteration cap reached");
}

}  // namespace multibump
