#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "multibump/common.hpp"

namespace multibump {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
/// Counterclockwise quarter turn; maps a unit tangent to the left normal.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

enum class CurveKind { Circle, Segment, Spline };

struct CurveSpec {
    CurveKind kind = CurveKind::Circle;
    bool closed = true;
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    Vec2 p0{0.0, 0.0};
    Vec2 p1{1.0, 0.0};
    std::vector<Vec2> points;  // spline control points, traversed in order
};

namespace detail {

/// Cubic spline through the given values at the given strictly increasing
/// knots; natural end conditions when open, periodic closure when closed.
class CubicSpline1D {
  public:
    void build(const std::vector<double>& knots, const std::vector<double>& vals, bool periodic) {
        knots_ = knots;
        vals_ = vals;
        periodic_ = periodic;
        const int n = static_cast<int>(knots.size());
        m_.assign(n, 0.0);
        if (n < 3) return;
        if (!periodic) {
            // Natural conditions: second derivative zero at both ends.
            std::vector<double> a(n, 0), b(n, 1), c(n, 0), d(n, 0);
            for (int i = 1; i + 1 < n; ++i) {
                const double hl = knots[i] - knots[i - 1];
                const double hr = knots[i + 1] - knots[i];
                a[i] = hl / 6.0;
                b[i] = (hl + hr) / 3.0;
                c[i] = hr / 6.0;
                d[i] = (vals[i + 1] - vals[i]) / hr - (vals[i] - vals[i - 1]) / hl;
            }
            // Thomas solve.
            for (int i = 1; i < n; ++i) {
                const double w = a[i] / b[i - 1];
                b[i] -= w * c[i - 1];
                d[i] -= w * d[i - 1];
            }
            m_[n - 1] = d[n - 1] / b[n - 1];
            for (int i = n - 2; i >= 0; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
        } else {
            // Periodic closure via the Sherman-Morrison corner correction.
            const int m = n - 1;  // independent knots; vals[n-1] duplicates vals[0]
            std::vector<double> h(m);
            for (int i = 0; i < m; ++i) h[i] = knots[i + 1] - knots[i];
            auto vwrap = [&](int i) { return vals[(i % m + m) % m]; };
            auto hwrap = [&](int i) { return h[(i % m + m) % m]; };
            std::vector<double> diag(m), sub(m), sup(m), rhs(m);
            for (int i = 0; i < m; ++i) {
                sub[i] = hwrap(i - 1) / 6.0;
                diag[i] = (hwrap(i - 1) + h[i]) / 3.0;
                sup[i] = h[i] / 6.0;
                rhs[i] = (vwrap(i + 1) - vwrap(i)) / h[i] - (vwrap(i) - vwrap(i - 1)) / hwrap(i - 1);
            }
            std::vector<double> sol = solve_cyclic(sub, diag, sup, rhs);
            for (int i = 0; i < m; ++i) m_[i] = sol[i];
            m_[n - 1] = m_[0];
        }
    }

    double eval(double t) const { return eval_impl(t, 0); }
    double deriv(double t) const { return eval_impl(t, 1); }

  private:
    static std::vector<double> solve_cyclic(std::vector<double> a, std::vector<double> b,
                                            std::vector<double> c, std::vector<double> d) {
        const int n = static_cast<int>(b.size());
        if (n == 1) return {d[0] / (a[0] + b[0] + c[0])};
        const double alpha = a[0];   // corner (0, n-1)
        const double beta = c[n - 1];  // corner (n-1, 0)
        const double gamma = -b[0];
        std::vector<double> bb = b;
        bb[0] -= gamma;
        bb[n - 1] -= alpha * beta / gamma;
        auto thomas = [&](std::vector<double> rhs) {
            std::vector<double> bw = bb;
            for (int i = 1; i < n; ++i) {
                const double w = a[i] / bw[i - 1];
                bw[i] -= w * c[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            std::vector<double> x(n);
            x[n - 1] = rhs[n - 1] / bw[n - 1];
            for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - c[i] * x[i + 1]) / bw[i];
            return x;
        };
        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = beta;
        std::vector<double> y = thomas(d);
        std::vector<double> z = thomas(u);
        const double fact = (y[0] + alpha * y[n - 1] / gamma) /
                            (1.0 + z[0] + alpha * z[n - 1] / gamma);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = y[i] - fact * z[i];
        return x;
    }

    double eval_impl(double t, int order) const {
        const int n = static_cast<int>(knots_.size());
        if (n == 2) {
            const double s = (vals_[1] - vals_[0]) / (knots_[1] - knots_[0]);
            return order == 0 ? vals_[0] + s * (t - knots_[0]) : s;
        }
        int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        const double h = knots_[i + 1] - knots_[i];
        const double A = (knots_[i + 1] - t) / h;
        const double B = (t - knots_[i]) / h;
        if (order == 0) {
            return A * vals_[i] + B * vals_[i + 1] +
                   ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
        }
        return (vals_[i + 1] - vals_[i]) / h +
               ((3 * B * B - 1) * m_[i + 1] - (3 * A * A - 1) * m_[i]) * h / 6.0;
    }

    std::vector<double> knots_, vals_, m_;
    bool periodic_ = false;
};

}  // namespace detail

/// A planar curve parametrized over t in [0, 1], with an arc-length table for
/// t <-> s conversion. All geometry is at unit scale; tube builders multiply
/// by the expansion factor R.
class Curve {
  public:
    static constexpr int kArcSamples = 4096;

    static Curve make(const CurveSpec& spec) {
        Curve c;
        c.spec_ = spec;
        switch (spec.kind) {
            case CurveKind::Circle:
                if (spec.radius <= 0.0) throw RangeViolation("curve: circle radius must be positive");
                if (!spec.closed) throw ClosureMismatch("curve: a circle is closed; open flag rejected");
                c.closed_ = true;
                break;
            case CurveKind::Segment:
                if (dist(spec.p0, spec.p1) <= 0.0)
                    throw DegenerateTangent("curve: segment endpoints coincide");
                if (spec.closed) throw ClosureMismatch("curve: a segment cannot be closed");
                c.closed_ = false;
                break;
            case CurveKind::Spline: {
                if (spec.points.size() < 3)
                    throw RangeViolation("curve: spline needs at least three points");
                c.closed_ = spec.closed;
                std::vector<Vec2> pts = spec.points;
                if (spec.closed && dist(pts.front(), pts.back()) < 1e-12) pts.pop_back();
                if (spec.closed) pts.push_back(pts.front());
                // Chordal knots normalized to [0, 1].
                std::vector<double> knots(pts.size(), 0.0);
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    const double step = dist(pts[i - 1], pts[i]);
                    if (step <= 0.0) throw DegenerateTangent("curve: repeated spline point");
                    knots[i] = knots[i - 1] + step;
                }
                for (auto& k : knots) k /= knots.back();
                std::vector<double> xs(pts.size()), ys(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    xs[i] = pts[i].x;
                    ys[i] = pts[i].y;
                }
                c.sx_.build(knots, xs, spec.closed);
                c.sy_.build(knots, ys, spec.closed);
                break;
            }
        }
        c.build_arc_table();
        c.validate();
        return c;
    }

    bool closed() const { return closed_; }
    CurveKind kind() const { return spec_.kind; }

    /// Arc length of the unit-scale curve; analytic where possible so that
    /// grids over straight tubes come out bitwise identical to strips.
    double length() const {
        switch (spec_.kind) {
            case CurveKind::Circle: return 2.0 * kPi * spec_.radius;
            case CurveKind::Segment: return dist(spec_.p0, spec_.p1);
            case CurveKind::Spline: return arc_.back();
        }
        return arc_.back();
    }
    double max_curvature() const { return kappa_max_; }

    Vec2 point(double t) const {
        switch (spec_.kind) {
            case CurveKind::Circle: {
                const double a = 2.0 * kPi * t;
                return spec_.center + spec_.radius * Vec2{std::cos(a), std::sin(a)};
            }
            case CurveKind::Segment:
                return spec_.p0 + t * (spec_.p1 - spec_.p0);
            case CurveKind::Spline:
                return {sx_.eval(wrap(t)), sy_.eval(wrap(t))};
        }
        return {};
    }

    /// Velocity dgamma/dt (not normalized).
    Vec2 velocity(double t) const {
        switch (spec_.kind) {
            case CurveKind::Circle: {
                const double a = 2.0 * kPi * t;
                return 2.0 * kPi * spec_.radius * Vec2{-std::sin(a), std::cos(a)};
            }
            case CurveKind::Segment:
                return spec_.p1 - spec_.p0;
            case CurveKind::Spline:
                return {sx_.deriv(wrap(t)), sy_.deriv(wrap(t))};
        }
        return {};
    }

    Vec2 tangent(double t) const {
        Vec2 v = velocity(t);
        const double n = norm(v);
        if (n < 1e-14) throw DegenerateTangent("curve: vanishing velocity");
        return (1.0 / n) * v;
    }

    /// Left unit normal (tangent rotated a quarter turn counterclockwise).
    Vec2 normal(double t) const { return perp(tangent(t)); }

    /// Signed curvature in the left-normal convention: dT/ds = kappa * normal.
    /// Analytic for circles and segments; finite differences for splines.
    double curvature(double t) const {
        switch (spec_.kind) {
            case CurveKind::Circle:
                return 1.0 / spec_.radius;
            case CurveKind::Segment:
                return 0.0;
            case CurveKind::Spline: {
                const double dt = 1e-5;
                double tl = t - dt, tr = t + dt;
                if (!closed_) {
                    tl = std::max(tl, 0.0);
                    tr = std::min(tr, 1.0);
                }
                const Vec2 pl = point(tl), pc = point(0.5 * (tl + tr)), pr = point(tr);
                const double hh = 0.5 * (tr - tl);
                const Vec2 d1 = (0.5 / hh) * (pr - pl);
                const Vec2 d2 = (1.0 / (hh * hh)) * (pr - 2.0 * pc + pl);
                const double speed = norm(d1);
                if (speed < 1e-14) throw DegenerateTangent("curve: vanishing velocity");
                return (d1.x * d2.y - d1.y * d2.x) / (speed * speed * speed);
            }
        }
        return 0.0;
    }

    /// Arc length from t = 0 to the given parameter. Constant-speed curves
    /// convert exactly; splines interpolate the arc table.
    double arc_from_t(double t) const {
        if (closed_) t = wrap(t);
        t = std::clamp(t, 0.0, 1.0);
        if (spec_.kind != CurveKind::Spline) return t * length();
        const double pos = t * (kArcSamples - 1);
        const int i = std::min(static_cast<int>(pos), kArcSamples - 2);
        const double f = pos - i;
        return arc_[i] + f * (arc_[i + 1] - arc_[i]);
    }

    double t_from_arc(double s) const {
        if (closed_) {
            s = std::fmod(s, length());
            if (s < 0) s += length();
        }
        s = std::clamp(s, 0.0, length());
        if (spec_.kind != CurveKind::Spline) return s / length();
        auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
        int i = static_cast<int>(it - arc_.begin()) - 1;
        i = std::clamp(i, 0, kArcSamples - 2);
        const double den = arc_[i + 1] - arc_[i];
        const double f = den > 0 ? (s - arc_[i]) / den : 0.0;
        return (i + f) / (kArcSamples - 1);
    }

    /// Signed curvature at a given unit-scale arc position.
    double curvature_at_arc(double s) const { return curvature(t_from_arc(s)); }

  private:
    double wrap(double t) const {
        if (!closed_) return t;
        double w = std::fmod(t, 1.0);
        return w < 0 ? w + 1.0 : w;
    }

    void build_arc_table() {
        arc_.assign(kArcSamples, 0.0);
        double prev = norm(velocity(0.0));
        for (int i = 1; i < kArcSamples; ++i) {
            const double t = static_cast<double>(i) / (kArcSamples - 1);
            const double cur = norm(velocity(t));
            arc_[i] = arc_[i - 1] + 0.5 * (prev + cur) / (kArcSamples - 1);
            prev = cur;
        }
    }

    void validate() {
        const double scale = std::max(1.0, length());
        // Velocity must stay bounded away from zero.
        for (int i = 0; i < 512; ++i) {
            const double t = (i + 0.5) / 512.0;
            if (norm(velocity(t)) < 1e-10 * scale)
                throw DegenerateTangent("curve: velocity vanishes near t=" + std::to_string(t));
        }
        if (spec_.kind == CurveKind::Spline && closed_) {
            if (dist(point(0.0), point(1.0)) > 1e-9 * scale)
                throw ClosureMismatch("curve: closed spline does not return to its start");
        }
        // Self-intersection: test the dense polyline for transversal segment
        // crossings, plus a proximity check for tangential touches.
        if (spec_.kind == CurveKind::Spline) {
            const int n = 1024;
            const int segs = closed_ ? n : n - 1;
            std::vector<Vec2> pts(n + 1);
            for (int i = 0; i <= n; ++i) pts[i] = point(static_cast<double>(i) / n);
            auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
                return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            };
            auto crosses = [&](int i, int j) {
                const Vec2 &a = pts[i], &b = pts[i + 1], &c = pts[j], &d = pts[j + 1];
                const double o1 = orient(a, b, c), o2 = orient(a, b, d);
                const double o3 = orient(c, d, a), o4 = orient(c, d, b);
                return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
            };
            const double min_dt = 0.02;
            for (int i = 0; i < segs; ++i) {
                for (int j = i + 2; j < segs; ++j) {
                    double dt = static_cast<double>(j - i) / n;
                    if (closed_) dt = std::min(dt, 1.0 - dt);
                    if (dt < 2.0 / n) continue;
                    if (crosses(i, j))
                        throw SelfIntersection("curve: self-intersection near t=" +
                                               std::to_string(static_cast<double>(i) / n));
                    if (dt >= min_dt && dist(pts[i], pts[j]) < 1e-6 * scale)
                        throw SelfIntersection("curve: self-contact near t=" +
                                               std::to_string(static_cast<double>(i) / n));
                }
            }
        }
        // Curvature bound over a dense sample.
        kappa_max_ = 0.0;
        for (int i = 0; i <= 4096; ++i) {
            double t = static_cast<double>(i) / 4096;
            if (!closed_) t = std::min(t, 1.0);
            kappa_max_ = std::max(kappa_max_, std::abs(curvature(t)));
        }
    }

    CurveSpec spec_;
    bool closed_ = false;
    double kappa_max_ = 0.0;
    std::vector<double> arc_;
    detail::CubicSpline1D sx_, sy_;
};

inline std::shared_ptr<const Curve> make_circle(Vec2 center = {0, 0}, double radius = 1.0) {
    CurveSpec s;
    s.kind = CurveKind::Circle;
    s.closed = true;
    s.center = center;
    s.radius = radius;
    return std::make_shared<const Curve>(Curve::make(s));
}

inline std::shared_ptr<const Curve> make_segment(Vec2 p0 = {0, 0}, Vec2 p1 = {1, 0}) {
    CurveSpec s;
    s.kind = CurveKind::Segment;
    s.closed = false;
    s.p0 = p0;
    s.p1 = p1;
    return std::make_shared<const Curve>(Curve::make(s));
}

inline std::shared_ptr<const Curve> make_spline(std::vector<Vec2> pts, bool closed = false) {
    CurveSpec s;
    s.kind = CurveKind::Spline;
    s.closed = closed;
    s.points = std::move(pts);
    return std::make_shared<const Curve>(Curve::make(s));
}

}  // namespace multibump
