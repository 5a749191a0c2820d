#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "multibump/chain.hpp"
#include "multibump/energy.hpp"

namespace multibump {

struct SimplexOptions {
    double initial_step = 0.02;  // in curve parameter units
    double diameter_tol = 1e-5;
    int max_iter = 4000;
    // Observes the best vertex once per sweep; used to record traces.
    std::function<void(int iter, const std::vector<double>& best)> on_iterate;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead with the standard 1 / 2 / 0.5 / 0.5 coefficients.  The start
/// simplex and all tie breaks are deterministic, so a given objective and
/// start point always produce the same trajectory.
template <class F>
SimplexResult nelder_mead(const F& f, const std::vector<double>& x0, SimplexOptions opt = {}) {
    const int n = static_cast<int>(x0.size());
    if (n == 0) {
        if (opt.on_iterate) opt.on_iterate(0, x0);
        return {x0, f(x0), 0, true};
    }

    std::vector<std::vector<double>> verts(n + 1, x0);
    for (int i = 0; i < n; ++i) verts[i + 1][i] += opt.initial_step;
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) vals[i] = f(verts[i]);

    std::vector<int> order(n + 1);
    const auto rank = [&]() {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return vals[a] < vals[b]; });
    };

    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        rank();
        if (opt.on_iterate) opt.on_iterate(iter, verts[order[0]]);
        double diam = 0.0;
        for (int i = 1; i <= n; ++i)
            for (int k = 0; k < n; ++k)
                diam = std::max(diam, std::abs(verts[order[i]][k] - verts[order[0]][k]));
        if (diam <= opt.diameter_tol) return {verts[order[0]], vals[order[0]], iter, true};

        const int best = order[0];
        const int worst = order[n];
        const int second = order[n - 1];
        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < n; ++k) centroid[k] += verts[i][k] / n;
        }
        const auto along = [&](double coef) {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k)
                p[k] = centroid[k] + coef * (verts[worst][k] - centroid[k]);
            return p;
        };

        const auto reflected = along(-1.0);
        const double fr = f(reflected);
        if (fr < vals[best]) {
            const auto expanded = along(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                verts[worst] = expanded;
                vals[worst] = fe;
            } else {
                verts[worst] = reflected;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            verts[worst] = reflected;
            vals[worst] = fr;
        } else {
            const auto contracted = along(fr < vals[worst] ? -0.5 : 0.5);
            const double fc = f(contracted);
            if (fc < std::min(fr, vals[worst])) {
                verts[worst] = contracted;
                vals[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int k = 0; k < n; ++k)
                        verts[i][k] = verts[best][k] + 0.5 * (verts[i][k] - verts[best][k]);
                    vals[i] = f(verts[i]);
                }
            }
        }
    }
    rank();
    if (opt.on_iterate) opt.on_iterate(iter, verts[order[0]]);
    return {verts[order[0]], vals[order[0]], iter, false};
}

struct SurrogateBreakdown {
    double total = 0.0;        // reference plus the variable part
    double reference = 0.0;    // bump count times the single bump action
    double variable = 0.0;     // wall - interaction + barrier, kept unabsorbed
    double wall = 0.0;         // end penalties, open curves only
    double interaction = 0.0;  // signed pair sum; enters the total negated
    double barrier = 0.0;
    bool admissible = false;
    double min_separation = 0.0;
};

/// Reduced placement energy of an alternating sign chain: the constant
/// reference action, Dirichlet end costs, and the pairwise interaction taken
/// along the tube (both arcs on a loop).  A quadratic barrier activates when
/// the chain dips under the admissible separation scale.  The optimizer sees
/// only the variable part; the reference term would swamp the exponentially
/// small landscape in double precision.
class ChainObjective {
  public:
    ChainObjective(std::shared_ptr<const Curve> curve, double R, int count,
                   const InteractionKernel& kernel, const EndPenalty* wall,
                   double reference_action, double barrier_strength = 1e3)
        : curve_(std::move(curve)),
          R_(R),
          count_(count),
          kernel_(&kernel),
          wall_(wall),
          reference_action_(reference_action),
          barrier_strength_(barrier_strength) {
        if (!curve_) throw RangeViolation("chain objective: missing curve");
        if (count_ < 1) throw RangeViolation("chain objective: needs at least one bump");
        closed_ = curve_->closed();
        if (closed_ && count_ > 1 && count_ % 2 != 0)
            throw RangeViolation("chain objective: alternating signs need an even count on a loop");
        if (!closed_ && wall_ == nullptr)
            throw ConfigError("chain objective: open curves need an end penalty table");
        length_ = R_ * curve_->length();
        g1_ = separation_scales(R_, kernel_->mu()).g1;
    }

    SurrogateBreakdown evaluate(const std::vector<double>& params) const {
        SurrogateBreakdown out;
        out.reference = count_ * reference_action_;
        const double violation = ordering_violation(params);
        if (violation > 0.0) {
            out.barrier = 1e9 * (1.0 + violation);
            out.variable = out.barrier;
            out.total = out.reference + out.barrier;
            return out;
        }

        const Chain c = chain_from_params(curve_, R_, params);
        for (int i = 0; i < c.size(); ++i) {
            for (int j = i + 1; j < c.size(); ++j) {
                const double d = std::abs(c.arc[j] - c.arc[i]);
                const double sign = ((j - i) % 2 == 0) ? 1.0 : -1.0;
                out.interaction +=
                    sign * (closed_ ? kernel_->on_loop(d, length_) : (*kernel_)(d));
            }
            if (!closed_) out.wall += (*wall_)(c.arc[i]) + (*wall_)(length_ - c.arc[i]);
        }

        const auto adm = chain_admissible(c, g1_);
        out.admissible = adm.admissible;
        out.min_separation = adm.min_separation;
        const double binding = std::min(adm.min_separation, adm.min_boundary_clearance);
        out.barrier = barrier_strength_ * sqr(std::max(0.0, g1_ - binding));
        out.variable = out.wall - out.interaction + out.barrier;
        out.total = out.reference + out.variable;
        return out;
    }

    double variable_part(const std::vector<double>& params) const {
        return evaluate(params).variable;
    }

    int count() const { return count_; }
    bool closed() const { return closed_; }
    double R() const { return R_; }
    double length() const { return length_; }
    double g1() const { return g1_; }
    const std::shared_ptr<const Curve>& curve() const { return curve_; }

  private:
    double ordering_violation(const std::vector<double>& p) const {
        if (p.size() != static_cast<std::size_t>(count_))
            throw RangeViolation("chain objective: wrong parameter count");
        double v = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!std::isfinite(p[i])) return 1e6;
            const double lo = closed_ ? 0.0 : 1e-9;
            v += std::max(0.0, lo - p[i]) + std::max(0.0, p[i] - (1.0 - 1e-9));
            if (i > 0) v += std::max(0.0, p[i - 1] - p[i] + 1e-12);
        }
        return v;
    }

    std::shared_ptr<const Curve> curve_;
    double R_;
    int count_;
    const InteractionKernel* kernel_;
    const EndPenalty* wall_;
    double reference_action_;
    double barrier_strength_;
    bool closed_ = false;
    double length_ = 0.0;
    double g1_ = 0.0;
};

/// Equispaced start parameters: interior points on open curves, and a chain
/// anchored at zero on loops.
inline std::vector<double> equispaced_params(int count, bool closed) {
    if (count < 1) throw RangeViolation("equispaced chain: needs at least one point");
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = closed ? static_cast<double>(i) / count : (i + 1.0) / (count + 1.0);
    return t;
}

struct ChainMinimum {
    Chain chain;
    SurrogateBreakdown breakdown;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes the chain objective from the given start.  On loops the first
/// parameter is pinned to remove the rotation gauge; everything else moves.
inline ChainMinimum minimize_chain(const ChainObjective& obj, const std::vector<double>& start,
                                   SimplexOptions opt = {}) {
    if (static_cast<int>(start.size()) != obj.count())
        throw RangeViolation("minimize chain: start size does not match the bump count");
    for (std::size_t i = 1; i < start.size(); ++i)
        if (start[i] <= start[i - 1])
            throw OrderViolation("minimize chain: start parameters must be strictly increasing");

    SimplexResult res;
    if (obj.closed()) {
        const double head = start[0];
        const std::vector<double> tail(start.begin() + 1, start.end());
        const auto with_head = [&](const std::vector<double>& p) {
            std::vector<double> full;
            full.reserve(p.size() + 1);
            full.push_back(head);
            full.insert(full.end(), p.begin(), p.end());
            return full;
        };
        const auto f = [&](const std::vector<double>& p) { return obj.variable_part(with_head(p)); };
        SimplexOptions inner = opt;
        if (opt.on_iterate)
            inner.on_iterate = [&](int it, const std::vector<double>& p) {
                opt.on_iterate(it, with_head(p));
            };
        res = nelder_mead(f, tail, inner);
        res.x.insert(res.x.begin(), head);
    } else {
        const auto f = [&](const std::vector<double>& p) { return obj.variable_part(p); };
        res = nelder_mead(f, start, opt);
    }

    ChainMinimum out;
    out.iterations = res.iterations;
    out.converged = res.converged;
    out.breakdown = obj.evaluate(res.x);
    out.chain = chain_from_params(obj.curve(), obj.R(), res.x);
    return out;
}

}  // namespace multibump
