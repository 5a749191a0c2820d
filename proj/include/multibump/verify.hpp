#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "multibump/ansatz.hpp"
#include "multibump/ballvolume.hpp"
#include "multibump/chain.hpp"
#include "multibump/csvio.hpp"
#include "multibump/curve.hpp"
#include "multibump/eigensolver.hpp"
#include "multibump/energy.hpp"
#include "multibump/fermat.hpp"
#include "multibump/limit_profile.hpp"
#include "multibump/minimize.hpp"
#include "multibump/reduction.hpp"
#include "multibump/tolerances.hpp"

namespace multibump {

struct CheckRecord {
    std::string id;
    bool pass = false;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckRecord> records;

    bool all_pass() const {
        for (const CheckRecord& r : records)
            if (!r.pass) return false;
        return !records.empty();
    }
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    double lambda = 1.0;
    double eig_h = 0.02;  // resolution for the spectrum check; other checks pin their own
};

inline std::string report_csv(const VerificationReport& rep) {
    CsvWriter w({"id", "status", "measured", "target", "tolerance", "detail"});
    for (const CheckRecord& r : rep.records) {
        w.cell(r.id)
            .cell(r.pass ? "pass" : "fail")
            .cell(r.measured)
            .cell(r.target)
            .cell(r.tolerance)
            .cell(r.detail);
        w.end_row();
    }
    return w.str();
}

inline std::string report_summary(const VerificationReport& rep) {
    std::ostringstream out;
    for (const CheckRecord& r : rep.records) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  measured=" << format_value(r.measured)
            << " target=" << format_value(r.target) << " tol=" << format_value(r.tolerance);
        if (!r.detail.empty()) out << "  [" << r.detail << "]";
        out << "\n";
    }
    out << (rep.all_pass() ? "all checks passed" : "verification failed") << "\n";
    return out.str();
}

namespace detail {

/// Runs the acceptance checks in a fixed order, sharing the expensive
/// artifacts (ground states, interpolants, tube operators, reduced runs).
class VerifySuite {
  public:
    explicit VerifySuite(const VerifyOptions& opt)
        : opt_(opt),
          f_(Nonlinearity::pure_power(3.0)),
          circle_(make_circle()),
          segment_(make_segment()) {}

    VerificationReport run() {
        VerificationReport rep;
        rep.records.push_back(guarded("strip-spectrum", [&] { return strip_spectrum(); }));
        rep.records.push_back(guarded("decay-rate", [&] { return decay_rate(); }));
        rep.records.push_back(guarded("kernel-isolation", [&] { return kernel_isolation(); }));
        rep.records.push_back(guarded("geometric-oracles", [&] { return geometric_oracles(); }));
        rep.records.push_back(guarded("splitting-bounds", [&] { return splitting_bounds(); }));
        rep.records.push_back(guarded("truncation-rate", [&] { return truncation_rate(); }));
        rep.records.push_back(guarded("projection-gap", [&] { return projection_gap(); }));
        rep.records.push_back(guarded("interaction-decay", [&] { return interaction_decay(); }));
        rep.records.push_back(guarded("sign-mechanism", [&] { return sign_mechanism(); }));
        rep.records.push_back(guarded("reduction-gap", [&] { return reduction_gap(); }));
        rep.records.push_back(guarded("global-shape", [&] { return global_shape(); }));
        return rep;
    }

  private:
    static constexpr double kHalfWidth = 9.0;  // projection window for tube work
    static constexpr double kProfileH = 0.05;

    struct StripPack {
        std::unique_ptr<DiscreteOperator> op;
        BumpProfile profile;
    };

    struct PipelineRun {
        bool ok = false;
        std::string error;
        int R = 0;
        std::vector<double> t;
        bool nm_converged = false;
        bool admissible = false;
        double slack = 0.0;
        double barrier = 0.0;
        double j_phi = 0.0;
        double grad_phi = 0.0;
        double g_r = 0.0;
        double gap = 0.0;
        double tangent_residual = 0.0;
        double contraction = 0.0;
        double rel_dist = 0.0;
        bool signs_ok = false;
        double antipodal_dev = 0.0;  // circle pair only: |t-gap - oracle gap|
        double pair_gap = 0.0;       // circle pair only: minimized t-gap
    };

    struct ComboRuns {
        std::string name;
        bool closed = false;
        int count = 0;
        std::vector<PipelineRun> runs;  // R = 20, 40, 80 in order
    };

    template <class Fn>
    CheckRecord guarded(const char* id, Fn&& body) {
        try {
            CheckRecord rec = body();
            rec.id = id;
            return rec;
        } catch (const std::exception& e) {
            CheckRecord rec;
            rec.id = id;
            rec.pass = false;
            rec.detail = std::string("error: ") + e.what();
            return rec;
        }
    }

    std::uint64_t sub_seed(std::uint64_t tag) const {
        return opt_.seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    }

    const StripPack& strip(double h) {
        const long key = std::lround(1e4 * h);
        auto it = strips_.find(key);
        if (it == strips_.end()) {
            StripPack pack;
            pack.op = std::make_unique<DiscreteOperator>(Grid::strip(10.0, h), opt_.lambda);
            pack.profile = solve_ground_state(*pack.op, f_);
            it = strips_.emplace(key, std::move(pack)).first;
        }
        return it->second;
    }

    const ProfileSampler& sampler() {
        if (!sampler_) {
            const StripPack& s = strip(kProfileH);
            sampler_ = std::make_unique<ProfileSampler>(*s.op, s.profile.U);
        }
        return *sampler_;
    }

    const InteractionKernel& kernel() {
        if (!kernel_) kernel_ = std::make_unique<InteractionKernel>(sampler(), f_, kProfileH);
        return *kernel_;
    }

    const EndPenalty& wall() {
        if (!wall_) {
            const StripPack& s = strip(kProfileH);
            wall_ = std::make_unique<EndPenalty>(*s.op, f_, s.profile.U);
        }
        return *wall_;
    }

    const DiscreteOperator& tube(bool closed, int R) {
        const auto key = std::make_pair(closed ? 1 : 0, R);
        auto it = tubes_.find(key);
        if (it == tubes_.end()) {
            const auto& curve = closed ? circle_ : segment_;
            it = tubes_
                     .emplace(key, std::make_unique<DiscreteOperator>(
                                       Grid::tube(curve, static_cast<double>(R), kProfileH),
                                       opt_.lambda))
                     .first;
        }
        return *it->second;
    }

    // ------------------------------------------------------------------
    // 1. The transverse spectrum of the strip.
    // ------------------------------------------------------------------
    CheckRecord strip_spectrum() {
        CheckRecord rec;
        const double target = 0.25 * kPi * kPi;
        std::string note;
        double h = opt_.eig_h;
        if (h > 0.25) {
            note = "requested h=" + format_value(h) +
                   " leaves too few section rows, measured at h=0.25; ";
            h = 0.25;
        }
        std::vector<double> levels{4.0 * h, 2.0 * h, h};
        for (double& lvl : levels) lvl = std::min(lvl, 0.25);
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

        std::vector<double> vals, errs;
        std::ostringstream det;
        det << note;
        for (double lvl : levels) {
            const DiscreteOperator op(Grid::strip(10.0, lvl), opt_.lambda);
            vals.push_back(strip_principal_eigenvalue(op));
            errs.push_back(std::abs(vals.back() - target));
            det << "lambda1(h=" << format_value(lvl) << ")=" << format_value(vals.back()) << "; ";
        }
        bool monotone = true;
        for (std::size_t i = 1; i < errs.size(); ++i)
            if (errs[i] >= errs[i - 1]) monotone = false;
        det << "monotone=" << (monotone ? "yes" : "no");

        rec.measured = vals.back();
        rec.target = target;
        rec.tolerance = tol::strip_eig_rel;
        rec.pass = errs.back() <= tol::strip_eig_rel * target && monotone;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 2. Exponential decay rate of the ground state.
    // ------------------------------------------------------------------
    CheckRecord decay_rate() {
        CheckRecord rec;
        const double mu = decay_mu(opt_.lambda);
        const StripPack& coarse = strip(kProfileH);
        const StripPack& fine = strip(kProfileH / 2.0);
        const double fit_c =
            fit_decay_rate(*coarse.op, coarse.profile.U, tol::decay_fit_lo, tol::decay_fit_hi);
        const double fit_f =
            fit_decay_rate(*fine.op, fine.profile.U, tol::decay_fit_lo, tol::decay_fit_hi);
        const bool improves = std::abs(fit_f - mu) < std::abs(fit_c - mu);

        rec.measured = fit_c;
        rec.target = mu;
        rec.tolerance = tol::decay_rel;
        rec.pass = std::abs(fit_c - mu) <= tol::decay_rel * mu && improves;
        std::ostringstream det;
        det << "mu_fit(h=" << format_value(kProfileH) << ")=" << format_value(fit_c)
            << "; mu_fit(h=" << format_value(kProfileH / 2.0) << ")=" << format_value(fit_f)
            << "; refinement improves=" << (improves ? "yes" : "no");
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 3. The linearization at the ground state has only the translation
    //    mode near zero.
    // ------------------------------------------------------------------
    CheckRecord kernel_isolation() {
        CheckRecord rec;
        const StripPack& s = strip(kProfileH);
        const NondegeneracyReport nd =
            check_nondegeneracy(*s.op, f_, s.profile.U, tol::kernel_window,
                                tol::kernel_next_floor, tol::kernel_cosine);
        rec.measured = nd.kernel_cosine;
        rec.target = 1.0;
        rec.tolerance = tol::kernel_cosine;
        rec.pass = std::abs(nd.kernel_value) < tol::kernel_window &&
                   nd.kernel_cosine >= tol::kernel_cosine &&
                   std::abs(nd.next_value) >= tol::kernel_next_floor;
        std::ostringstream det;
        det << "kernel_eigenvalue=" << format_value(nd.kernel_value)
            << "; next_eigenvalue=" << format_value(nd.next_value);
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 4. Point-configuration oracles: vertex shortcut of the three-point
    //    network, Steiner semiperimeter bound, ball-difference area bound.
    // ------------------------------------------------------------------
    CheckRecord geometric_oracles() {
        CheckRecord rec;
        Rng ra(sub_seed(41));
        double max_dev = 0.0;
        for (int k = 0; k < tol::fermat_sample_count; ++k) {
            const double theta = ra.uniform(2.0 * kPi / 3.0 + 1e-6, kPi - 1e-2);
            const double v = ra.uniform(0.2, 5.0);
            const double w = ra.uniform(0.2, 5.0);
            const double phi = ra.uniform(0.0, 2.0 * kPi);
            const Vec2 a{ra.uniform(-3.0, 3.0), ra.uniform(-3.0, 3.0)};
            const Vec2 b{a.x + v * std::cos(phi), a.y + v * std::sin(phi)};
            const Vec2 c{a.x + w * std::cos(phi + theta), a.y + w * std::sin(phi + theta)};
            max_dev = std::max(max_dev, std::abs(fermat_point(a, b, c).total - (v + w)));
        }
        const bool vertex_ok = max_dev <= tol::fermat_vertex_tol;

        Rng rb(sub_seed(42));
        double min_slack = std::numeric_limits<double>::infinity();
        for (int k = 0; k < tol::fermat_sample_count; ++k) {
            const Vec2 a{rb.uniform(-5.0, 5.0), rb.uniform(-5.0, 5.0)};
            const Vec2 b{rb.uniform(-5.0, 5.0), rb.uniform(-5.0, 5.0)};
            const Vec2 c{rb.uniform(-5.0, 5.0), rb.uniform(-5.0, 5.0)};
            const double semi = 0.5 * (dist(a, b) + dist(b, c) + dist(c, a));
            min_slack = std::min(min_slack, fermat_point(a, b, c).total - semi);
        }
        const bool steiner_ok = min_slack >= -tol::fermat_semiperim_slack;

        const long mc_samples = 20000;
        Rng rc(sub_seed(43));
        const auto draw = [&](VolumeEstimate& est, double& scale) {
            const double d = rc.uniform(0.02, 0.9);
            const double r = 1.0 + d * rc.uniform(0.05, 1.0);
            const double phi = rc.uniform(0.0, 2.0 * kPi);
            const Vec2 x2{d * std::cos(phi), d * std::sin(phi)};
            est = ball_difference_volume({0.0, 0.0}, x2, r, mc_samples, rc.next_u64());
            scale = d + (r - 1.0);
        };
        double c_cal = 0.0;
        for (int k = 0; k < 100; ++k) {
            VolumeEstimate est;
            double scale = 0.0;
            draw(est, scale);
            c_cal = std::max(c_cal, (est.volume + est.ci99) / scale);
        }
        const double c_ball = 1.05 * c_cal;
        int ball_violations = 0;
        double worst_ratio = 0.0;
        for (int k = 0; k < tol::ball_config_count; ++k) {
            VolumeEstimate est;
            double scale = 0.0;
            draw(est, scale);
            const double ratio = (est.volume - est.ci99) / (c_ball * scale);
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > 1.0) ++ball_violations;
        }
        const bool ball_ok = ball_violations == 0;

        rec.measured = max_dev;
        rec.target = 0.0;
        rec.tolerance = tol::fermat_vertex_tol;
        rec.pass = vertex_ok && steiner_ok && ball_ok;
        std::ostringstream det;
        det << "vertex max_dev=" << format_value(max_dev)
            << "; steiner min_slack=" << format_value(min_slack)
            << "; ball C=" << format_value(c_ball)
            << " worst_ratio=" << format_value(worst_ratio) << " violations=" << ball_violations;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 5. Superposition splitting bounds for f and F with one fitted
    //    constant across random tuples.
    // ------------------------------------------------------------------
    CheckRecord splitting_bounds() {
        CheckRecord rec;
        const double alpha = std::min(1.0, 0.25 * (f_.p() + 1.0));
        const auto ratios = [&](Rng& rng, int count, double& r21, double& r22) {
            const int n = 2 + (count % 4);
            std::vector<double> u(n);
            double sum = 0.0;
            for (double& ui : u) {
                ui = rng.uniform(-1.0, 1.0);
                sum += ui;
            }
            double lhs21 = f_.f(sum);
            double lhs22 = f_.F(sum);
            double cross = 0.0;
            for (int i = 0; i < n; ++i) {
                lhs21 -= f_.f(u[i]);
                lhs22 -= f_.F(u[i]);
                for (int j = 0; j < n; ++j)
                    if (j != i) cross += f_.f(u[i]) * u[j];
            }
            lhs22 -= cross;
            double rhs21 = 0.0, rhs22 = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double pij = std::abs(u[i] * u[j]);
                    rhs21 += std::pow(pij, alpha);
                    rhs22 += std::pow(pij, 2.0 * alpha);
                    for (int k = j + 1; k < n; ++k)
                        rhs22 += std::pow(std::abs(u[i] * u[j] * u[k]), 2.0 / 3.0);
                }
            r21 = rhs21 > 1e-300 ? std::abs(lhs21) / rhs21 : 0.0;
            r22 = rhs22 > 1e-300 ? std::abs(lhs22) / rhs22 : 0.0;
        };

        Rng rcal(sub_seed(51));
        double c_max = 0.0;
        for (int k = 0; k < 20000; ++k) {
            double r21 = 0.0, r22 = 0.0;
            ratios(rcal, k, r21, r22);
            c_max = std::max(c_max, std::max(r21, r22));
        }
        const double c2 = tol::splitting_margin * c_max;

        Rng rt(sub_seed(52));
        int violations = 0;
        double worst = 0.0;
        for (int k = 0; k < tol::splitting_tuples; ++k) {
            double r21 = 0.0, r22 = 0.0;
            ratios(rt, k, r21, r22);
            const double ratio = std::max(r21, r22) / c2;
            worst = std::max(worst, ratio);
            if (ratio > 1.0) ++violations;
        }

        rec.measured = static_cast<double>(violations);
        rec.target = static_cast<double>(tol::splitting_violations);
        rec.tolerance = 0.0;
        rec.pass = violations == tol::splitting_violations;
        std::ostringstream det;
        det << "fitted C=" << format_value(c2) << "; worst ratio=" << format_value(worst)
            << "; alpha=" << format_value(alpha);
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 6. Window-truncation error of the profile decays at the profile rate.
    // ------------------------------------------------------------------
    CheckRecord truncation_rate() {
        CheckRecord rec;
        const StripPack& s = strip(kProfileH);
        const double mu = decay_mu(opt_.lambda);
        std::vector<double> xs, ys;
        std::ostringstream det;
        for (int a = 3; a <= 8; ++a) {
            const Vec v = truncated_projection(*s.op, f_, s.profile.U, a, a);
            const double err = s.op->h1_norm(s.profile.U - v);
            xs.push_back(static_cast<double>(a));
            ys.push_back(std::log(err));
        }
        const double slope = linear_fit(xs, ys).slope;
        det << "h1 error at a=3: " << format_value(std::exp(ys.front())) << ", at a=8: "
            << format_value(std::exp(ys.back()));
        rec.measured = slope;
        rec.target = -mu;
        rec.tolerance = tol::truncation_slope_rel;
        rec.pass = std::abs(slope + mu) <= tol::truncation_slope_rel * mu;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 7. The projected bump approaches the translated profile as the
    //    tube expands.
    // ------------------------------------------------------------------
    CheckRecord projection_gap() {
        CheckRecord rec;
        std::vector<double> lr, ld, defects;
        std::ostringstream det;
        for (int R : {20, 40, 80}) {
            const DiscreteOperator& op = tube(true, R);
            const Grid& g = op.grid();
            const BumpPlacement p = placement_from_arc(g, 0.5 * g.length());
            const Vec placed = place_bump(op, sampler(), p);
            const Vec v = project_bump(op, f_, placed, p, kHalfWidth);
            const double defect = op.h1_norm(v - placed);
            defects.push_back(defect);
            lr.push_back(std::log(static_cast<double>(R)));
            ld.push_back(std::log(defect));
            det << "defect(R=" << R << ")=" << format_value(defect) << "; ";
        }
        const bool decreasing = defects[0] > defects[1] && defects[1] > defects[2];
        const double slope = linear_fit(lr, ld).slope;
        det << "decreasing=" << (decreasing ? "yes" : "no");
        rec.measured = slope;
        rec.target = 0.5 * (tol::projection_slope_lo + tol::projection_slope_hi);
        rec.tolerance = 0.5 * (tol::projection_slope_hi - tol::projection_slope_lo);
        rec.pass = decreasing && slope >= tol::projection_slope_lo &&
                   slope <= tol::projection_slope_hi;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 8. Pairwise interaction on a straight tube decays at the profile rate.
    // ------------------------------------------------------------------
    CheckRecord interaction_decay() {
        CheckRecord rec;
        const double mu = decay_mu(opt_.lambda);
        const DiscreteOperator& op = tube(false, 44);
        const Grid& g = op.grid();
        // The window must reach past the partner core at the largest
        // separation, or the cut itself steepens the fitted rate.
        const double w = 12.0;
        std::vector<double> xs, ys;
        for (int d = 4; d <= 10; ++d) {
            const BumpPlacement p1 = placement_from_arc(g, 22.0 - 0.5 * d);
            const BumpPlacement p2 = placement_from_arc(g, 22.0 + 0.5 * d);
            const Vec v1 = project_bump(op, f_, place_bump(op, sampler(), p1), p1, w);
            const Vec v2 = project_bump(op, f_, place_bump(op, sampler(), p2), p2, w);
            const double cross = interaction_integral(op, f_, v1, v2);
            xs.push_back(static_cast<double>(d));
            ys.push_back(std::log(std::abs(cross)));
        }
        const double slope = linear_fit(xs, ys).slope;
        rec.measured = slope;
        rec.target = -mu;
        rec.tolerance = tol::interaction_slope_rel;
        rec.pass = std::abs(slope + mu) <= tol::interaction_slope_rel * mu;
        std::ostringstream det;
        det << "I(4)=" << format_value(std::exp(ys.front()))
            << "; I(10)=" << format_value(std::exp(ys.back()));
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 9. Opposite signs repel, equal signs attract, and chains pushed to
    //    the admissibility boundary cost more than interior chains.
    // ------------------------------------------------------------------
    CheckRecord sign_mechanism() {
        CheckRecord rec;
        const double mu = decay_mu(opt_.lambda);
        const DiscreteOperator& seg = tube(false, 44);
        const Grid& sg = seg.grid();

        std::vector<double> xs, y_pm, y_pp;
        bool signs_ok = true;
        for (int d = 4; d <= 10; ++d) {
            const BumpPlacement p1 = placement_from_arc(sg, 22.0 - 0.5 * d, +1.0);
            const BumpPlacement p2p = placement_from_arc(sg, 22.0 + 0.5 * d, +1.0);
            const BumpPlacement p2m = placement_from_arc(sg, 22.0 + 0.5 * d, -1.0);
            const double j1 =
                action_value(seg, f_,
                             project_bump(seg, f_, place_bump(seg, sampler(), p1), p1, kHalfWidth));
            const double j2 = action_value(
                seg, f_,
                project_bump(seg, f_, place_bump(seg, sampler(), p2p), p2p, kHalfWidth));
            const MultibumpAnsatz pm = assemble_multibump(seg, f_, sampler(), {p1, p2m}, kHalfWidth);
            const MultibumpAnsatz pp = assemble_multibump(seg, f_, sampler(), {p1, p2p}, kHalfWidth);
            const double x_pm = action_value(seg, f_, pm.projected) - j1 - j2;
            const double x_pp = action_value(seg, f_, pp.projected) - j1 - j2;
            if (!(x_pm > 0.0) || !(x_pp < 0.0)) signs_ok = false;
            xs.push_back(static_cast<double>(d));
            y_pm.push_back(std::log(std::abs(x_pm)));
            y_pp.push_back(std::log(std::abs(x_pp)));
        }
        const double slope_pm = linear_fit(xs, y_pm).slope;
        const double slope_pp = linear_fit(xs, y_pp).slope;
        const bool slopes_ok = std::abs(slope_pm + mu) <= tol::cross_slope_rel * mu &&
                               std::abs(slope_pp + mu) <= tol::cross_slope_rel * mu;

        // Boundary chains on the widest loop: one adjacent pair sits at the
        // minimum admissible separation, the rest is drawn at random.
        const int R = 80;
        const DiscreteOperator& op = tube(true, R);
        const Grid& g = op.grid();
        const double g1 = separation_scales(static_cast<double>(R), mu).g1;
        const double dt_min = std::asin(g1 / (2.0 * R)) / kPi;
        Rng r9(sub_seed(91));
        double min_margin = std::numeric_limits<double>::infinity();
        int ordering_violations = 0;

        for (int n : {2, 4}) {
            const MultibumpAnsatz interior = assemble_multibump(
                op, f_, sampler(),
                placements_from_chain(g, chain_from_params(circle_, R, equispaced_params(n, true))),
                kHalfWidth);
            const double j_int = action_value(op, f_, interior.projected);

            for (int trial = 0; trial < tol::boundary_chain_count; ++trial) {
                std::vector<double> t;
                for (int attempt = 0;; ++attempt) {
                    if (attempt > 1000)
                        throw ConvergenceFailure("boundary chains: sampler failed to place a chain");
                    std::vector<double> offs{0.0, dt_min};
                    if (n == 4) {
                        double v1 = r9.uniform(3.0 * dt_min, 1.0 - 2.0 * dt_min);
                        double v2 = r9.uniform(3.0 * dt_min, 1.0 - 2.0 * dt_min);
                        if (v1 > v2) std::swap(v1, v2);
                        if (v2 - v1 < 2.0 * dt_min) continue;
                        offs.push_back(v1);
                        offs.push_back(v2);
                    }
                    const double shift = r9.uniform(0.0, 1.0);
                    t.clear();
                    for (double o : offs) t.push_back(std::fmod(o + shift, 1.0));
                    std::sort(t.begin(), t.end());
                    bool distinct = true;
                    for (std::size_t i = 1; i < t.size(); ++i)
                        if (t[i] - t[i - 1] < 1e-12) distinct = false;
                    if (!distinct) continue;
                    const Chain chain = chain_from_params(circle_, R, t);
                    double minsep = std::numeric_limits<double>::infinity();
                    for (int i = 0; i < chain.size(); ++i)
                        for (int j = i + 1; j < chain.size(); ++j)
                            minsep = std::min(minsep, dist(chain.x[i], chain.x[j]));
                    // The constructed pair must be the binding one.
                    if (std::abs(minsep - g1) > 1e-6 * g1) continue;
                    break;
                }
                const Chain chain = chain_from_params(circle_, R, t);
                const MultibumpAnsatz boundary = assemble_multibump(
                    op, f_, sampler(), placements_from_chain(g, chain), kHalfWidth);
                const double margin = action_value(op, f_, boundary.projected) - j_int;
                min_margin = std::min(min_margin, margin);
                if (!(margin > 0.0)) ++ordering_violations;
            }
        }
        const bool ordering_ok = ordering_violations == 0;

        rec.measured = slope_pm;
        rec.target = -mu;
        rec.tolerance = tol::cross_slope_rel;
        rec.pass = signs_ok && slopes_ok && ordering_ok;
        std::ostringstream det;
        det << "opposite-pair slope=" << format_value(slope_pm)
            << "; equal-pair slope=" << format_value(slope_pp)
            << "; signs=" << (signs_ok ? "ok" : "broken")
            << "; boundary margin min=" << format_value(min_margin)
            << " violations=" << ordering_violations;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // Shared end-to-end runs: minimize the surrogate, assemble, refine.
    // ------------------------------------------------------------------
    void ensure_runs() {
        if (runs_ready_) return;
        const double mu = decay_mu(opt_.lambda);
        const double e_single = strip(kProfileH).profile.energy;

        const auto one_run = [&](bool closed, int n, int R) {
            PipelineRun run;
            run.R = R;
            try {
                const auto& curve = closed ? circle_ : segment_;
                const DiscreteOperator& op = tube(closed, R);
                const Grid& g = op.grid();
                ChainObjective obj(curve, static_cast<double>(R), n, kernel(),
                                   closed ? nullptr : &wall(), e_single);
                const ChainMinimum mn = minimize_chain(obj, equispaced_params(n, closed));
                run.t = mn.chain.t;
                run.nm_converged = mn.converged;
                run.barrier = mn.breakdown.barrier;
                const double g1 = separation_scales(static_cast<double>(R), mu).g1;
                const ChainAdmissibility adm = chain_admissible(mn.chain, g1);
                run.admissible = adm.admissible;
                run.slack = adm.slack;

                if (closed && n == 2) {
                    run.pair_gap = run.t[1] - run.t[0];
                    double best = std::numeric_limits<double>::infinity();
                    double best_tau = 0.0;
                    for (int k = 2; k <= 998; ++k) {
                        const double tau = 1e-3 * k;
                        const double val = obj.variable_part({run.t[0], run.t[0] + tau});
                        if (val < best) {
                            best = val;
                            best_tau = tau;
                        }
                    }
                    run.antipodal_dev = std::abs(run.pair_gap - best_tau);
                }

                const auto placements = placements_from_chain(g, mn.chain);
                const MultibumpAnsatz ansatz =
                    assemble_multibump(op, f_, sampler(), placements, kHalfWidth, !closed);
                run.j_phi = action_value(op, f_, ansatz.projected);
                run.grad_phi = op.a_norm(action_gradient(op, f_, ansatz.projected));

                ReductionOptions ropt;
                ropt.half_width = kHalfWidth;
                ropt.clip = !closed;
                const ReducedSolution red = reduce_multibump(op, f_, sampler(), placements, ropt);
                run.g_r = red.energy;
                run.gap = std::abs(run.j_phi - red.energy);
                run.tangent_residual = red.tangent_residual;
                run.contraction = red.contraction_factor(1e3 * tol::refine_tol);
                run.rel_dist = op.a_norm(red.u - ansatz.projected) / op.a_norm(ansatz.projected);

                run.signs_ok = true;
                const int mid_row = (g.nrow() - 1) / 2;
                for (const BumpPlacement& p : placements) {
                    int col = p.column + (p.frac >= 0.5 ? 1 : 0);
                    if (g.periodic()) col = (col % g.ncol() + g.ncol()) % g.ncol();
                    const int k = g.interior_index(col, mid_row);
                    if (k < 0 || red.u[k] * p.sign <= 1.0) run.signs_ok = false;
                }
                run.ok = true;
            } catch (const std::exception& e) {
                run.ok = false;
                run.error = e.what();
            }
            return run;
        };

        const auto combo = [&](const char* name, bool closed, int n) {
            ComboRuns c;
            c.name = name;
            c.closed = closed;
            c.count = n;
            for (int R : {20, 40, 80}) c.runs.push_back(one_run(closed, n, R));
            return c;
        };
        runs_.push_back(combo("loop-pair", true, 2));
        runs_.push_back(combo("loop-quad", true, 4));
        runs_.push_back(combo("segment-pair", false, 2));
        runs_.push_back(combo("segment-triple", false, 3));
        runs_ready_ = true;
    }

    // ------------------------------------------------------------------
    // 10. The normal-space refinement contracts and its energy gap is
    //     quadratic in the gradient with one constant across the sweep.
    // ------------------------------------------------------------------
    CheckRecord reduction_gap() {
        CheckRecord rec;
        ensure_runs();
        const ComboRuns& pair = runs_[0];
        for (const PipelineRun& r : pair.runs)
            if (!r.ok) {
                rec.pass = false;
                rec.detail = "run R=" + std::to_string(r.R) + " failed: " + r.error;
                return rec;
            }
        bool contracts = true, residuals = true;
        std::ostringstream det;
        for (const PipelineRun& r : pair.runs) {
            if (!(r.contraction < tol::contraction_bound)) contracts = false;
            if (!(r.tangent_residual <= tol::refine_tol)) residuals = false;
            det << "R=" << r.R << ": gap=" << format_value(r.gap)
                << " grad=" << format_value(r.grad_phi)
                << " factor=" << format_value(r.contraction) << "; ";
        }
        const double c_fit =
            pair.runs[0].gap / std::max(pair.runs[0].grad_phi * pair.runs[0].grad_phi, 1e-300);
        double worst = 0.0;
        for (std::size_t i = 1; i < pair.runs.size(); ++i) {
            const PipelineRun& r = pair.runs[i];
            worst = std::max(worst, r.gap / (c_fit * r.grad_phi * r.grad_phi));
        }
        det << "C=" << format_value(c_fit);
        rec.measured = worst;
        rec.target = 1.0;
        rec.tolerance = tol::quad_gap_factor;
        rec.pass = contracts && residuals && worst <= tol::quad_gap_factor;
        rec.detail = det.str();
        return rec;
    }

    // ------------------------------------------------------------------
    // 11. End-to-end shape: minimized chains are interior, refined fields
    //     keep the alternating anchor signs, the refinement distance
    //     shrinks with R, and the two-bump loop minimizer is antipodal.
    // ------------------------------------------------------------------
    CheckRecord global_shape() {
        CheckRecord rec;
        ensure_runs();
        bool all_ok = true, interior = true, signs = true, trends = true, converged = true;
        double antipodal = 0.0;
        std::ostringstream det;
        for (const ComboRuns& c : runs_) {
            for (const PipelineRun& r : c.runs) {
                if (!r.ok) {
                    all_ok = false;
                    det << c.name << " R=" << r.R << " failed: " << r.error << "; ";
                    continue;
                }
                if (!r.nm_converged) converged = false;
                if (!(r.admissible && r.slack > 0.0 && r.barrier == 0.0)) interior = false;
                if (!r.signs_ok) signs = false;
            }
            if (c.runs.size() == 3 && c.runs[0].ok && c.runs[1].ok && c.runs[2].ok) {
                for (int i = 1; i < 3; ++i) {
                    const double prev = c.runs[i - 1].rel_dist;
                    const double cur = c.runs[i].rel_dist;
                    if (!(cur < prev || cur <= tol::trend_floor)) trends = false;
                }
                det << c.name << " rel_dist=" << format_value(c.runs[0].rel_dist) << ","
                    << format_value(c.runs[1].rel_dist) << "," << format_value(c.runs[2].rel_dist)
                    << "; ";
            }
        }
        const ComboRuns& pair = runs_[0];
        for (const PipelineRun& r : pair.runs)
            if (r.ok)
                antipodal = std::max(
                    antipodal, std::max(r.antipodal_dev, std::abs(r.pair_gap - 0.5)));
        const bool antipodal_ok = all_ok && antipodal <= tol::antipodal_tol;
        det << "antipodal dev=" << format_value(antipodal);

        rec.measured = antipodal;
        rec.target = 0.0;
        rec.tolerance = tol::antipodal_tol;
        rec.pass = all_ok && converged && interior && signs && trends && antipodal_ok;
        rec.detail = det.str();
        return rec;
    }

    VerifyOptions opt_;
    Nonlinearity f_;
    std::shared_ptr<const Curve> circle_;
    std::shared_ptr<const Curve> segment_;
    std::map<long, StripPack> strips_;
    std::unique_ptr<ProfileSampler> sampler_;
    std::unique_ptr<InteractionKernel> kernel_;
    std::unique_ptr<EndPenalty> wall_;
    std::map<std::pair<int, int>, std::unique_ptr<DiscreteOperator>> tubes_;
    std::vector<ComboRuns> runs_;
    bool runs_ready_ = false;
};

}  // namespace detail

inline VerificationReport run_verification(const VerifyOptions& opt = {}) {
    detail::VerifySuite suite(opt);
    return suite.run();
}

}  // namespace multibump
