#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "multibump/ansatz.hpp"

namespace multibump {

struct EnergyReport {
    double value = 0.0;          // action of the field
    double gradient_norm = 0.0;  // energy norm of the action gradient
    double max_abs = 0.0;
};

inline EnergyReport energy_report(const DiscreteOperator& op, const Nonlinearity& f,
                                  const Vec& u) {
    EnergyReport r;
    r.value = action_value(op, f, u);
    r.gradient_norm = op.a_norm(action_gradient(op, f, u));
    r.max_abs = u.cwiseAbs().maxCoeff();
    return r;
}

/// The coupling between two fields on the same grid: <f(a), b> against M.
inline double interaction_integral(const DiscreteOperator& op, const Nonlinearity& f,
                                   const Vec& a, const Vec& b) {
    return op.m_inner(f.f(a), b);
}

/// Overlap <f(u at -d/2), u at +d/2> of two axially shifted profile copies,
/// by direct quadrature on a virtual strip long enough to hold both tails.
/// No operator or linear solve is involved, so it works for any separation.
inline double pair_overlap(const ProfileSampler& prof, const Nonlinearity& f, double d,
                           double h) {
    if (d <= 0.0) throw RangeViolation("pair overlap: separation must be positive");
    if (h <= 0.0 || h > 0.25) throw ResolutionError("pair overlap: bad quadrature step");
    const double half = 0.5 * d + prof.switch_point() + 6.0;
    const int nx = 2 * static_cast<int>(std::lround(half / h));
    const double hx = 2.0 * half / nx;
    const int ny = 2 * static_cast<int>(std::lround(1.0 / h));
    const double hy = 2.0 / ny;
    double sum = 0.0;
    for (int i = 1; i < nx; ++i) {
        const double xi = -half + i * hx;
        double col = 0.0;
        for (int j = 1; j < ny; ++j) {
            const double eta = -1.0 + j * hy;
            col += f.f(prof(xi + 0.5 * d, eta)) * prof(xi - 0.5 * d, eta);
        }
        sum += col;
    }
    return sum * hx * hy;
}

/// Tabulated pair interaction as a function of axial separation, with
/// log-space interpolation inside the table and exponential continuation at
/// the fitted decay rate outside it. The continuation is exact in the limit:
/// a waveguide propagates a single cross mode, so the coupling is a clean
/// exponential with no algebraic factor.
class InteractionKernel {
  public:
    InteractionKernel(const ProfileSampler& prof, const Nonlinearity& f, double h,
                      double d_min = 2.0, double d_max = 14.0, double step = 0.25)
        : d0_(d_min), step_(step), mu_(prof.mu()) {
        if (d_min <= 0.0 || d_max <= d_min + 2.0 * step || step <= 0.0)
            throw RangeViolation("interaction kernel: bad table range");
        const int n = static_cast<int>(std::floor((d_max - d_min) / step)) + 1;
        logt_.resize(n);
        for (int i = 0; i < n; ++i) {
            const double v = pair_overlap(prof, f, d_min + i * step, h);
            if (v <= 0.0)
                throw SignViolation("interaction kernel: overlap must stay positive");
            logt_[i] = std::log(v);
        }
    }

    double operator()(double d) const {
        if (d <= 0.0) throw RangeViolation("interaction kernel: separation must be positive");
        const int n = static_cast<int>(logt_.size());
        const double dmax = d0_ + (n - 1) * step_;
        if (d <= d0_) return std::exp(logt_.front() + mu_ * (d0_ - d));
        if (d >= dmax) return std::exp(logt_.back() - mu_ * (d - dmax));
        const double g = (d - d0_) / step_;
        const int i = std::min(static_cast<int>(std::floor(g)), n - 2);
        const double u = g - i;
        const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
        const double v =
            0.5 * (2.0 * p1 +
                   u * ((p2 - p0) +
                        u * ((2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                             u * (3.0 * (p1 - p2) + (p3 - p0)))));
        return std::exp(v);
    }

    /// Interaction on a loop of circumference L: both arcs contribute.
    double on_loop(double d, double L) const {
        if (L <= 0.0 || d <= 0.0 || d >= L)
            throw RangeViolation("interaction kernel: loop separation out of range");
        return (*this)(d) + (*this)(L - d);
    }

    double mu() const { return mu_; }

  private:
    // Linear extension ghosts match the exponential continuation in log space.
    double at(int i) const {
        const int n = static_cast<int>(logt_.size());
        if (i < 0) return 2.0 * logt_[0] - logt_[1];
        if (i >= n) return 2.0 * logt_[n - 1] - logt_[n - 2];
        return logt_[i];
    }

    std::vector<double> logt_;
    double d0_, step_, mu_;
};

/// Energy cost of a Dirichlet wall at distance m ahead of a bump, tabulated
/// from rescaled window projections of the profile. Dirichlet domain
/// monotonicity makes the cost positive and decreasing in m, asymptotically
/// like the image-bump coupling exp(-2 mu m).
class EndPenalty {
  public:
    EndPenalty(const DiscreteOperator& strip_op, const Nonlinearity& f, const Vec& U,
               double m_max = 7.0, double step = 0.25)
        : step_(step) {
        const Grid& g = strip_op.grid();
        if (g.topology() != Grid::Topology::Strip)
            throw RangeViolation("end penalty: profile must live on a strip");
        const double xi_max = -g.s(0);
        m_max = std::min(m_max, xi_max - 1.0);
        const double b = xi_max - 2.0 * g.hs();
        m0_ = std::max(2.0 * step, 2.0 * g.hs());
        const int n = static_cast<int>(std::floor((m_max - m0_) / step)) + 1;
        if (n < 4) throw RangeViolation("end penalty: table too small");

        auto rescaled_action = [&](double a) {
            const Vec v = truncated_projection(strip_op, f, U, a, b);
            const double t = detail::nehari_scale(strip_op, f, v);
            return action_value(strip_op, f, Vec(t * v));
        };
        const double ref = rescaled_action(m_max + step);
        logt_.resize(n);
        for (int i = 0; i < n; ++i) {
            const double delta = rescaled_action(m0_ + i * step) - ref;
            if (delta <= 0.0)
                throw SignViolation("end penalty: wall cost must stay positive");
            logt_[i] = std::log(delta);
        }
        mu2_ = 2.0 * decay_mu(strip_op.lambda());
    }

    double operator()(double m) const {
        if (m <= 0.0) throw RangeViolation("end penalty: wall distance must be positive");
        const int n = static_cast<int>(logt_.size());
        const double mmax = m0_ + (n - 1) * step_;
        if (m <= m0_) {
            const double slope = (logt_[1] - logt_[0]) / step_;
            return std::exp(logt_.front() + slope * (m - m0_));
        }
        if (m >= mmax) return std::exp(logt_.back() - mu2_ * (m - mmax));
        const double g = (m - m0_) / step_;
        const int i = std::min(static_cast<int>(std::floor(g)), n - 2);
        const double u = g - i;
        const double lo = logt_[i], hi = logt_[i + 1];
        return std::exp(lo + u * (hi - lo));
    }

  private:
    std::vector<double> logt_;
    double m0_ = 0.0, step_ = 0.0, mu2_ = 0.0;
};

}  // namespace multibump
