#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "multibump/chain.hpp"
#include "multibump/limit_profile.hpp"
#include "multibump/operators.hpp"

namespace multibump {

/// Off-grid evaluator for a strip profile. Bicubic Catmull-Rom inside, with
/// odd-reflection ghosts so the interpolant passes through zero at the
/// Dirichlet boundary; beyond |xi| = switch_point() the profile continues as
/// the boundary row times a fitted exponential, which stays accurate past the
/// region where grid values sink toward the discretization noise floor.
class ProfileSampler {
  public:
    struct Options {
        double xi_switch = 8.0;   // |xi| where the exponential continuation takes over
        double mu_override = 0.0; // decay rate; 0 means fit it from the profile tail
    };

    ProfileSampler(const DiscreteOperator& op, const Vec& U)
        : ProfileSampler(op, U, Options{}) {}

    ProfileSampler(const DiscreteOperator& op, const Vec& U, Options opt) {
        const Grid& g = op.grid();
        if (g.topology() != Grid::Topology::Strip)
            throw RangeViolation("profile sampler: profile must live on a strip");
        nx_ = g.ncol();
        ny_ = g.nrow();
        hx_ = g.hs();
        hy_ = g.he();
        x0_ = g.s(0);
        xi_sw_ = std::min(opt.xi_switch, -x0_ - 1.0);
        if (xi_sw_ <= 1.0)
            throw RangeViolation("profile sampler: strip too short for a tail switch");

        const Vec full = op.extend_field(U);
        pad_.assign(static_cast<std::size_t>(nx_ + 2) * (ny_ + 2), 0.0);
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j) at(i, j) = full[g.node(i, j)];
        for (int j = 0; j < ny_; ++j) {
            at(-1, j) = -at(1, j);
            at(nx_, j) = -at(nx_ - 2, j);
        }
        for (int i = -1; i <= nx_; ++i) {
            at(i, -1) = -at(i, 1);
            at(i, ny_) = -at(i, ny_ - 2);
        }

        mu_ = opt.mu_override > 0.0 ? opt.mu_override
                                    : fit_decay_rate(op, U, 0.5 * xi_sw_, xi_sw_);
    }

    double operator()(double xi, double eta) const {
        if (!(std::abs(eta) < 1.0)) return 0.0;
        const double axi = std::abs(xi);
        if (axi >= xi_sw_)
            return bicubic(std::copysign(xi_sw_, xi), eta) * std::exp(-mu_ * (axi - xi_sw_));
        return bicubic(xi, eta);
    }

    double mu() const { return mu_; }
    double xi_max() const { return -x0_; }
    double switch_point() const { return xi_sw_; }

  private:
    double& at(int i, int j) {
        return pad_[static_cast<std::size_t>(i + 1) * (ny_ + 2) + (j + 1)];
    }
    double at(int i, int j) const {
        return pad_[static_cast<std::size_t>(i + 1) * (ny_ + 2) + (j + 1)];
    }

    static double catmull_rom(double p0, double p1, double p2, double p3, double u) {
        return 0.5 * (2.0 * p1 +
                      u * ((p2 - p0) +
                           u * ((2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                                u * (3.0 * (p1 - p2) + (p3 - p0)))));
    }

    double bicubic(double x, double y) const {
        const double gx = (x - x0_) / hx_;
        const double gy = (y + 1.0) / hy_;
        const int ix = std::clamp(static_cast<int>(std::floor(gx)), 0, nx_ - 2);
        const int iy = std::clamp(static_cast<int>(std::floor(gy)), 0, ny_ - 2);
        const double ux = gx - ix;
        const double uy = gy - iy;
        double col[4];
        for (int r = 0; r < 4; ++r) {
            const int i = ix - 1 + r;
            col[r] = catmull_rom(at(i, iy - 1), at(i, iy), at(i, iy + 1), at(i, iy + 2), uy);
        }
        return catmull_rom(col[0], col[1], col[2], col[3], ux);
    }

    int nx_ = 0, ny_ = 0;
    double hx_ = 0, hy_ = 0, x0_ = 0, xi_sw_ = 0, mu_ = 0;
    std::vector<double> pad_;
};

/// A bump center anchored to a grid column plus a fractional offset. Anchoring
/// to the index rather than a raw arc value makes placements on a closed tube
/// exactly equivariant: shifting the anchor by k columns rotates the placed
/// field by k columns bitwise.
struct BumpPlacement {
    int column = 0;
    double frac = 0.0;  // offset toward the next column, in [0, 1)
    double sign = 1.0;
};

inline BumpPlacement placement_from_arc(const Grid& g, double arc, double sign = 1.0) {
    const double x = arc / g.hs();
    int col = static_cast<int>(std::floor(x));
    const double frac = x - col;
    if (g.periodic()) {
        col %= g.ncol();
        if (col < 0) col += g.ncol();
    } else if (col < 0 || col >= g.ncol()) {
        throw RangeViolation("placement: center falls outside the tube");
    }
    return {col, frac, sign};
}

/// How sample coordinates relate to the tube when the tube is curved.
/// Ambient: coordinates are tangent/normal components in the center frame of
/// the plane, the faithful picture for the profile core (the limit object is
/// planar). Axial: pure translation along the tube axis, the right kernel for
/// far-field questions, since tails propagate through the waveguide.
enum class PlacementFrame { Ambient, Axial };

/// Places one copy of the profile on the grid, centered at the placement
/// anchor. On straight geometry the profile translates along the axis. On a
/// circular tube the ambient frame components come in closed form; general
/// curved tubes compute the frame projection from explicit positions.
inline Vec place_bump(const DiscreteOperator& op, const ProfileSampler& prof,
                      const BumpPlacement& p,
                      PlacementFrame frame = PlacementFrame::Ambient) {
    const Grid& g = op.grid();
    const int n = g.ncol();
    if (p.column < 0 || p.column >= n)
        throw RangeViolation("placement: anchor column out of range");

    enum class Mode { Axial, Circle, Ambient };
    Mode mode = Mode::Axial;
    const Curve* c = g.curve().get();
    double rho = 0.0;
    if (frame == PlacementFrame::Ambient && c && c->kind() == CurveKind::Circle) {
        mode = Mode::Circle;
        rho = g.R() / c->curvature_at_arc(0.0);
    } else if (frame == PlacementFrame::Ambient && c && c->kind() == CurveKind::Spline) {
        mode = Mode::Ambient;
    }

    // Longitudinal offsets come from integer column differences, so a shifted
    // anchor reproduces the same values at shifted columns.
    std::vector<double> ds(n), sn(n), cs(n);
    for (int i = 0; i < n; ++i) {
        int di = i - p.column;
        if (g.periodic()) {
            di %= n;
            if (di < 0) di += n;
            if (2 * di > n) di -= n;
        }
        ds[i] = (di - p.frac) * g.hs();
        if (mode == Mode::Circle) {
            const double dphi = ds[i] / rho;
            sn[i] = std::sin(dphi);
            cs[i] = std::cos(dphi);
        }
    }

    std::vector<Vec2> pos, nrm;
    Vec2 x0{}, t0{}, n0{};
    if (mode == Mode::Ambient) {
        const double t_center = c->t_from_arc((p.column + p.frac) * g.hs() / g.R());
        x0 = g.R() * c->point(t_center);
        t0 = c->tangent(t_center);
        n0 = perp(t0);
        pos.resize(n);
        nrm.resize(n);
        for (int i = 0; i < n; ++i) {
            const double ti = c->t_from_arc(g.s(i) / g.R());
            pos[i] = g.R() * c->point(ti);
            nrm[i] = c->normal(ti);
        }
    }

    Vec out(op.size());
    for (int k = 0; k < op.size(); ++k) {
        const auto [i, j] = g.interior_node(k);
        const double eta = g.eta(j);
        double xi_a = 0.0, eta_a = 0.0;
        switch (mode) {
            case Mode::Axial:
                xi_a = ds[i];
                eta_a = eta;
                break;
            case Mode::Circle: {
                // Node radius is rho - eta (the normal points inward), so the
                // frame components reduce to functions of the angle alone.
                const double re = rho - eta;
                xi_a = re * sn[i];
                eta_a = rho - re * cs[i];
                break;
            }
            case Mode::Ambient: {
                const Vec2 d = (pos[i] + eta * nrm[i]) - x0;
                xi_a = dot(d, t0);
                eta_a = dot(d, n0);
                break;
            }
        }
        out[k] = p.sign * prof(xi_a, eta_a);
    }
    return out;
}

/// Local nonlinear projection of a placed bump: solves B v = M f(placed) with
/// zero conditions outside a window of the given half-width around the anchor.
inline Vec project_bump(const DiscreteOperator& op, const Nonlinearity& f, const Vec& placed,
                        const BumpPlacement& p, double half_width, bool clip = false) {
    if (half_width <= 0.0) throw RangeViolation("projection: window half-width must be positive");
    const int w = static_cast<int>(std::lround(half_width / op.grid().hs()));
    return solve_windowed(op, op.apply_M(f.f(placed)), p.column - w, 2 * w + 1, clip);
}

struct MultibumpAnsatz {
    std::vector<BumpPlacement> placements;
    Vec superposed;  // plain signed sum of placed profiles
    Vec projected;   // sum of locally projected bumps, the working ansatz
    double half_width = 0.0;
};

/// Chain points become placements with alternating signs. A closed loop needs
/// an even count for the alternation to close up (a single bump is fine).
inline std::vector<BumpPlacement> placements_from_chain(const Grid& g, const Chain& chain) {
    if (chain.closed && chain.size() > 1 && chain.size() % 2 != 0)
        throw RangeViolation("placements: alternating signs need an even count on a closed loop");
    std::vector<BumpPlacement> out;
    out.reserve(chain.size());
    for (int i = 0; i < chain.size(); ++i)
        out.push_back(placement_from_arc(g, chain.arc[i], i % 2 == 0 ? 1.0 : -1.0));
    return out;
}

inline MultibumpAnsatz assemble_multibump(const DiscreteOperator& op, const Nonlinearity& f,
                                          const ProfileSampler& prof,
                                          const std::vector<BumpPlacement>& placements,
                                          double half_width = 0.0, bool clip = false) {
    if (placements.empty()) throw RangeViolation("assembly: no bumps to place");
    MultibumpAnsatz a;
    a.placements = placements;
    a.half_width =
        half_width > 0.0 ? half_width : std::min(prof.xi_max() - 1.0, 14.0 / prof.mu());
    a.superposed = Vec::Zero(op.size());
    a.projected = Vec::Zero(op.size());
    for (const BumpPlacement& p : placements) {
        const Vec raw = place_bump(op, prof, p);
        a.superposed += raw;
        a.projected += project_bump(op, f, raw, p, a.half_width, clip);
    }
    return a;
}

}  // namespace multibump
