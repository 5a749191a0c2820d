#pragma once

// Run orchestration: parses a run configuration, executes the staged
// subcommands (limit-solve through sweep, plus verify) and writes every
// artifact atomically into the output directory.
//
// Stage nesting: limit-solve < project < assemble < reduce, each rewriting
// the previous stage's artifacts plus its own, all at the first sweep radius
// and the configured chain. minimize runs limit-solve + project and then
// emits trace/phi/v_u/energy at the minimized chain instead. sweep runs
// limit-solve and then one assemble+reduce row per radius.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "multibump/ansatz.hpp"
#include "multibump/chain.hpp"
#include "multibump/common.hpp"
#include "multibump/config.hpp"
#include "multibump/csvio.hpp"
#include "multibump/curve.hpp"
#include "multibump/energy.hpp"
#include "multibump/grid.hpp"
#include "multibump/limit_profile.hpp"
#include "multibump/minimize.hpp"
#include "multibump/nonlinearity.hpp"
#include "multibump/operators.hpp"
#include "multibump/reduction.hpp"
#include "multibump/verify.hpp"

namespace multibump {

/// Everything one run needs, parsed from a key=value config with sections.
/// Unknown keys are rejected with their file location so typos surface
/// instead of silently falling back to defaults.
struct RunConfig {
    std::string curve_kind = "circle";
    double radius = 1.0;           // base circle radius before expansion
    std::vector<Vec2> points;      // spline control points
    bool spline_closed = false;

    double lambda = 1.0;
    double p = 3.0;
    double q = 0.0;                // second exponent, used when b != 0
    double b = 0.0;

    double h = 0.05;
    double L_xi = 10.0;
    double window = 0.0;           // 0 picks min(L_xi - 1, 14/mu)

    int n = 2;
    std::vector<double> t0;        // empty means equispaced

    std::vector<double> R;

    double tol_reduce = 1e-8;
    double fit_lo = 4.0;
    double fit_hi = 8.0;

    static RunConfig from_config(const Config& cfg);
    static RunConfig from_file(const std::string& path) {
        return from_config(Config::parse_file(path));
    }

    bool closed_curve() const {
        if (curve_kind == "circle") return true;
        if (curve_kind == "segment") return false;
        return spline_closed;
    }

    std::shared_ptr<const Curve> build_curve() const {
        if (curve_kind == "circle") return make_circle({0.0, 0.0}, radius);
        if (curve_kind == "segment") return make_segment({0.0, 0.0}, {1.0, 0.0});
        return make_spline(points, spline_closed);
    }

    Nonlinearity build_nonlinearity() const {
        return b == 0.0 ? Nonlinearity::pure_power(p) : Nonlinearity::two_power(p, q, b);
    }

    double half_width() const {
        return window > 0.0 ? window : std::min(L_xi - 1.0, 14.0 / decay_mu(lambda));
    }
};

inline RunConfig RunConfig::from_config(const Config& cfg) {
    static const std::set<std::string> known = {
        "curve.kind",           "curve.radius",      "curve.points",
        "curve.closed",         "physics.lambda",    "physics.p",
        "physics.q",            "physics.b",         "discretization.h",
        "discretization.L_xi",  "discretization.window",
        "chain.n",              "chain.t",           "sweep.R",
        "tolerance.tol_reduce", "tolerance.fit_lo",  "tolerance.fit_hi",
    };
    for (const std::string& k : cfg.keys())
        if (!known.count(k)) throw ConfigError(cfg.where(k) + ": unknown key");

    // Location prefix for messages; falls back to the bare key when the
    // entry is absent and a default interacts badly with another one.
    auto at = [&cfg](const std::string& key) {
        return cfg.has(key) ? cfg.where(key) : "config: key '" + key + "'";
    };

    RunConfig rc;
    rc.curve_kind = cfg.get_string("curve.kind", "circle");
    if (rc.curve_kind != "circle" && rc.curve_kind != "segment" && rc.curve_kind != "spline")
        throw ConfigError(at("curve.kind") + ": expected circle, segment or spline");
    if (cfg.has("curve.radius")) {
        if (rc.curve_kind != "circle")
            throw ConfigError(at("curve.radius") + ": radius applies to circle curves");
        rc.radius = cfg.get_double("curve.radius");
        if (!(rc.radius > 0.0)) throw ConfigError(at("curve.radius") + ": must be positive");
    }
    if (cfg.has("curve.points")) {
        if (rc.curve_kind != "spline")
            throw ConfigError(at("curve.points") + ": control points apply to spline curves");
        const std::vector<double> flat = cfg.get_list("curve.points");
        if (flat.size() < 6 || flat.size() % 2 != 0)
            throw ConfigError(at("curve.points") +
                              ": need x,y pairs for at least three points");
        for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
            rc.points.push_back({flat[i], flat[i + 1]});
    } else if (rc.curve_kind == "spline") {
        throw ConfigError("config: spline curves need curve.points");
    }
    if (cfg.has("curve.closed")) {
        if (rc.curve_kind != "spline")
            throw ConfigError(at("curve.closed") + ": the closed flag applies to spline curves");
        rc.spline_closed = cfg.get_bool("curve.closed");
    }

    rc.lambda = cfg.get_double("physics.lambda", 1.0);
    if (!(rc.lambda > -kPi * kPi / 4.0))
        throw ConfigError(at("physics.lambda") +
                          ": must exceed -pi^2/4, the strip ground energy");
    rc.p = cfg.get_double("physics.p", 3.0);
    if (!(rc.p > 1.0)) throw ConfigError(at("physics.p") + ": exponent must exceed 1");
    rc.b = cfg.get_double("physics.b", 0.0);
    if (rc.b < 0.0) throw ConfigError(at("physics.b") + ": weight must be nonnegative");
    rc.q = cfg.get_double("physics.q", 0.0);
    if (rc.b != 0.0 && !(rc.q > rc.p))
        throw ConfigError(at("physics.q") + ": second exponent must exceed the first");

    rc.h = cfg.get_double("discretization.h", 0.05);
    if (!(rc.h > 0.0)) throw ConfigError(at("discretization.h") + ": must be positive");
    rc.L_xi = cfg.get_double("discretization.L_xi", 10.0);
    if (!(rc.L_xi > 2.0))
        throw ConfigError(at("discretization.L_xi") + ": strip must extend past xi = 2");
    rc.window = cfg.get_double("discretization.window", 0.0);
    if (cfg.has("discretization.window") && !(rc.window > 0.0))
        throw ConfigError(at("discretization.window") +
                          ": must be positive; omit the key for the automatic width");

    rc.n = cfg.get_int("chain.n", 2);
    if (rc.n < 1) throw ConfigError(at("chain.n") + ": need at least one bump");
    const bool closed = rc.closed_curve();
    if (closed && rc.n > 1 && rc.n % 2 != 0)
        throw ConfigError(at("chain.n") +
                          ": alternating signs on a closed curve need an even count");
    if (cfg.has("chain.t") && cfg.get_string("chain.t") != "auto") {
        rc.t0 = cfg.get_list("chain.t");
        if (static_cast<int>(rc.t0.size()) != rc.n)
            throw ConfigError(at("chain.t") + ": expected " + std::to_string(rc.n) +
                              " values to match chain.n");
        for (std::size_t i = 1; i < rc.t0.size(); ++i)
            if (!(rc.t0[i] > rc.t0[i - 1]))
                throw ConfigError(at("chain.t") + ": parameters must be strictly increasing");
        const bool in_range = closed ? (rc.t0.front() >= 0.0 && rc.t0.back() < 1.0)
                                     : (rc.t0.front() > 0.0 && rc.t0.back() < 1.0);
        if (!in_range)
            throw ConfigError(at("chain.t") + (closed ? ": parameters must lie in [0,1)"
                                                      : ": parameters must lie in (0,1)"));
    }

    if (!cfg.has("sweep.R")) throw ConfigError("config: missing required key sweep.R");
    rc.R = cfg.get_list("sweep.R");
    if (rc.R.empty()) throw ConfigError(at("sweep.R") + ": need at least one radius");
    for (std::size_t i = 0; i < rc.R.size(); ++i) {
        if (!(rc.R[i] > 1.0))
            throw ConfigError(at("sweep.R") + ": radii must exceed 1 so the tube embeds");
        if (i > 0 && !(rc.R[i] > rc.R[i - 1]))
            throw ConfigError(at("sweep.R") + ": radii must be strictly ascending");
    }

    rc.tol_reduce = cfg.get_double("tolerance.tol_reduce", 1e-8);
    if (!(rc.tol_reduce > 0.0))
        throw ConfigError(at("tolerance.tol_reduce") + ": must be positive");
    rc.fit_lo = cfg.get_double("tolerance.fit_lo", 4.0);
    rc.fit_hi = cfg.get_double("tolerance.fit_hi", 8.0);
    if (!(rc.fit_lo > 0.0) || !(rc.fit_hi > rc.fit_lo))
        throw ConfigError(at("tolerance.fit_lo") + ": need 0 < fit_lo < fit_hi");
    if (!(rc.fit_hi < rc.L_xi))
        throw ConfigError(at("tolerance.fit_hi") + ": fit window must stay inside the strip");

    return rc;
}

struct PipelineOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;
};

class Pipeline {
  public:
    Pipeline(RunConfig cfg, PipelineOptions opt)
        : cfg_(std::move(cfg)),
          opt_(std::move(opt)),
          f_(cfg_.build_nonlinearity()),
          curve_(cfg_.build_curve()) {}

    void limit_solve() {
        profile();
        write_text_atomic(out("profile.csv"), field_csv(*strip_op_, profile_.U));
        const double resid = detail::equation_residual(*strip_op_, f_, profile_.U);
        write_text_atomic(out("profile_meta.cfg"),
                          meta_text("profile", {
                                        {"lambda", format_value(cfg_.lambda)},
                                        {"p", format_value(cfg_.p)},
                                        {"h", format_value(cfg_.h)},
                                        {"L_xi", format_value(cfg_.L_xi)},
                                        {"mu", format_value(profile_.mu)},
                                        {"mu_fit", format_value(mu_fit_)},
                                        {"energy", format_value(profile_.energy)},
                                        {"residual", format_value(resid)},
                                    }));
    }

    void project() {
        limit_solve();
        const DiscreteOperator& op = tube(first_R());
        const Grid& g = op.grid();
        const double arc = 0.5 * g.length();
        const BumpPlacement pl = placement_from_arc(g, arc);
        const Vec placed = place_bump(op, *sampler_, pl);
        const Vec V = project_bump(op, f_, placed, pl, cfg_.half_width(), !cfg_.closed_curve());
        const double defect = op.h1_norm(Vec(V - placed));
        write_text_atomic(out("bump.csv"), field_csv(op, V));
        write_text_atomic(out("bump_meta.cfg"),
                          meta_text("bump", {
                                        {"R", format_value(first_R())},
                                        {"arc", format_value(arc)},
                                        {"half_width", format_value(cfg_.half_width())},
                                        {"defect", format_value(defect)},
                                    }));
    }

    void assemble() {
        project();
        const DiscreteOperator& op = tube(first_R());
        state_ = chain_state(op, start_params());
        write_text_atomic(out("phi.csv"), field_csv(op, state_->phi));
        write_text_atomic(out("energy.csv"),
                          energy_csv(first_R(), *state_,
                                     std::numeric_limits<double>::quiet_NaN()));
    }

    void reduce() {
        assemble();
        const DiscreteOperator& op = tube(first_R());
        const ReducedSolution red = reduce_chain(op, state_->placements);
        write_text_atomic(out("v_u.csv"), field_csv(op, red.u));
        write_text_atomic(out("energy.csv"), energy_csv(first_R(), *state_, red.energy));
        check_signs(op, state_->placements, red.u);
    }

    void minimize() {
        project();
        const double R = first_R();
        const DiscreteOperator& op = tube(R);
        ensure_surrogate();
        const ChainObjective obj(curve_, R, cfg_.n, *kernel_,
                                 cfg_.closed_curve() ? nullptr : wall_.get(),
                                 profile_.energy);

        std::vector<std::string> header = {"iter"};
        for (int i = 1; i <= cfg_.n; ++i) header.push_back("t" + std::to_string(i));
        header.insert(header.end(), {"J_phi", "min_sep", "boundary_dist"});
        CsvWriter trace(header);

        SimplexOptions sopt;
        sopt.on_iterate = [&](int iter, const std::vector<double>& t) {
            trace.cell(iter);
            for (double v : t) trace.cell(v);
            trace.cell(obj.evaluate(t).total);
            double min_sep = std::numeric_limits<double>::quiet_NaN();
            double boundary = std::numeric_limits<double>::quiet_NaN();
            try {
                const Chain c = chain_from_params(curve_, R, t);
                min_sep = std::numeric_limits<double>::infinity();
                for (int i = 0; i < c.size(); ++i)
                    for (int j = i + 1; j < c.size(); ++j)
                        min_sep = std::min(min_sep, dist(c.x[i], c.x[j]));
                boundary = std::numeric_limits<double>::infinity();
                if (!c.closed) {
                    const double len = op.grid().length();
                    for (double a : c.arc) boundary = std::min({boundary, a, len - a});
                }
            } catch (const Error&) {
            }
            trace.cell(min_sep).cell(boundary).end_row();
        };

        const ChainMinimum mn = minimize_chain(obj, start_params(), sopt);
        write_text_atomic(out("trace.csv"), trace.str());
        if (!mn.converged)
            throw ConvergenceFailure("minimize: simplex exceeded its iteration budget");

        const double g1 = separation_scales(R, sampler_->mu()).g1;
        const ChainAdmissibility adm = chain_admissible(mn.chain, g1);
        if (!adm.admissible || adm.slack / op.grid().length() < 1e-4)
            throw StuckOnBoundary("minimize: chain ended " + format_value(adm.slack) +
                                  " above the separation threshold " + format_value(g1) +
                                  "; the minimizer sits on the admissible boundary");

        state_ = chain_state(op, mn.chain.t);
        write_text_atomic(out("phi.csv"), field_csv(op, state_->phi));
        const ReducedSolution red = reduce_chain(op, state_->placements);
        write_text_atomic(out("v_u.csv"), field_csv(op, red.u));
        write_text_atomic(out("energy.csv"), energy_csv(R, *state_, red.energy));
        check_signs(op, state_->placements, red.u);
    }

    void sweep() {
        if (cfg_.R.size() < 3)
            throw ConfigError("sweep: need at least three radii for a trend");
        limit_solve();

        std::vector<SweepRow> rows(cfg_.R.size());
        std::atomic<std::size_t> next{0};
        auto drain = [&]() {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= cfg_.R.size()) return;
                rows[k] = sweep_row(cfg_.R[k]);
            }
        };
        const int nt = std::clamp(opt_.threads, 1, static_cast<int>(cfg_.R.size()));
        if (nt <= 1) {
            drain();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < nt; ++i) pool.emplace_back(drain);
            for (std::thread& th : pool) th.join();
        }

        CsvWriter w({"R", "n", "E_n", "J_phi", "G_R", "remainder", "grad_norm", "max_I",
                     "proj_defect", "status"});
        for (const SweepRow& r : rows) {
            w.cell(r.R).cell(r.n);
            for (double v : {r.e_n, r.j_phi, r.g_r, r.remainder, r.grad_norm, r.max_i,
                             r.proj_defect})
                w.cell(v);
            w.cell(r.status).end_row();
        }
        auto slope = [&rows](auto getter) {
            std::vector<double> xs, ys;
            for (const SweepRow& r : rows) {
                if (!r.ok) continue;
                const double v = getter(r);
                if (std::isfinite(v) && v != 0.0) {
                    xs.push_back(std::log(r.R));
                    ys.push_back(std::log(std::abs(v)));
                }
            }
            if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
            return linear_fit(xs, ys).slope;
        };
        w.cell("slope");
        w.cell(slope([](const SweepRow& r) { return static_cast<double>(r.n); }));
        w.cell(slope([](const SweepRow& r) { return r.e_n; }));
        w.cell(slope([](const SweepRow& r) { return r.j_phi; }));
        w.cell(slope([](const SweepRow& r) { return r.g_r; }));
        w.cell(slope([](const SweepRow& r) { return r.remainder; }));
        w.cell(slope([](const SweepRow& r) { return r.grad_norm; }));
        w.cell(slope([](const SweepRow& r) { return r.max_i; }));
        w.cell(slope([](const SweepRow& r) { return r.proj_defect; }));
        w.cell("ok").end_row();
        write_text_atomic(out("sweep.csv"), w.str());
    }

    VerificationReport verify() {
        VerifyOptions vo;
        vo.seed = opt_.seed;
        vo.lambda = cfg_.lambda;
        vo.eig_h = cfg_.h;
        const VerificationReport rep = run_verification(vo);
        write_text_atomic(out("report.csv"), report_csv(rep));
        return rep;
    }

  private:
    struct ChainState {
        Chain chain;
        std::vector<BumpPlacement> placements;
        Vec phi;
        double j_phi = 0.0;
        double grad_norm = 0.0;
        double e_n = 0.0;
        double i_sum = 0.0;   // sum of both orders over all pairs
        double i_max = 0.0;
        double remainder() const { return j_phi - (e_n - 0.5 * i_sum); }
    };

    struct SweepRow {
        double R = 0.0;
        int n = 0;
        double e_n, j_phi, g_r, remainder, grad_norm, max_i, proj_defect;
        bool ok = false;
        std::string status;
        SweepRow() {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            e_n = j_phi = g_r = remainder = grad_norm = max_i = proj_defect = nan;
        }
    };

    std::filesystem::path out(const std::string& name) const {
        return std::filesystem::path(opt_.out_dir) / name;
    }

    double first_R() const { return cfg_.R.front(); }

    std::vector<double> start_params() const {
        return cfg_.t0.empty() ? equispaced_params(cfg_.n, cfg_.closed_curve()) : cfg_.t0;
    }

    const BumpProfile& profile() {
        if (!strip_op_) {
            strip_op_ = std::make_unique<DiscreteOperator>(Grid::strip(cfg_.L_xi, cfg_.h),
                                                           cfg_.lambda);
            profile_ = solve_ground_state(*strip_op_, f_);
            mu_fit_ = fit_decay_rate(*strip_op_, profile_.U, cfg_.fit_lo, cfg_.fit_hi);
            sampler_ = std::make_unique<ProfileSampler>(*strip_op_, profile_.U);
        }
        return profile_;
    }

    void ensure_surrogate() {
        profile();
        if (!kernel_) kernel_ = std::make_unique<InteractionKernel>(*sampler_, f_, cfg_.h);
        if (!wall_ && !cfg_.closed_curve())
            wall_ = std::make_unique<EndPenalty>(*strip_op_, f_, profile_.U);
    }

    const DiscreteOperator& tube(double R) {
        const long key = std::lround(R * 1024.0);
        auto it = tubes_.find(key);
        if (it == tubes_.end())
            it = tubes_
                     .emplace(key, std::make_unique<DiscreteOperator>(
                                       Grid::tube(curve_, R, cfg_.h), cfg_.lambda))
                     .first;
        return *it->second;
    }

    ChainState chain_state(const DiscreteOperator& op, const std::vector<double>& params) {
        profile();
        ChainState st;
        st.chain = chain_from_params(curve_, op.grid().R(), params);
        st.placements = placements_from_chain(op.grid(), st.chain);
        st.phi = Vec::Zero(op.size());
        std::vector<Vec> bumps;
        bumps.reserve(st.placements.size());
        for (const BumpPlacement& pl : st.placements) {
            const Vec placed = place_bump(op, *sampler_, pl);
            bumps.push_back(project_bump(op, f_, placed, pl, cfg_.half_width(),
                                         !cfg_.closed_curve()));
            st.phi += bumps.back();
        }
        st.j_phi = action_value(op, f_, st.phi);
        st.grad_norm = op.a_norm(action_gradient(op, f_, st.phi));
        st.e_n = static_cast<double>(st.placements.size()) * profile_.energy;
        for (std::size_t i = 0; i < bumps.size(); ++i)
            for (std::size_t j = i + 1; j < bumps.size(); ++j) {
                const double ij = interaction_integral(op, f_, bumps[i], bumps[j]);
                const double ji = interaction_integral(op, f_, bumps[j], bumps[i]);
                st.i_sum += ij + ji;
                st.i_max = std::max({st.i_max, std::abs(ij), std::abs(ji)});
            }
        return st;
    }

    ReducedSolution reduce_chain(const DiscreteOperator& op,
                                 const std::vector<BumpPlacement>& placements) {
        ReductionOptions ropt;
        ropt.half_width = cfg_.half_width();
        ropt.tol = cfg_.tol_reduce;
        ropt.clip = !cfg_.closed_curve();
        return reduce_multibump(op, f_, *sampler_, placements, ropt);
    }

    // The refined solution must keep each bump's prescribed sign at its
    // anchor; losing one means the correction swallowed a bump.
    void check_signs(const DiscreteOperator& op, const std::vector<BumpPlacement>& pl,
                     const Vec& u) const {
        const Grid& g = op.grid();
        const int mid = (g.nrow() - 1) / 2;
        const double floor = 0.3 * profile_.amplitude;
        for (const BumpPlacement& b : pl) {
            int col = b.column + (b.frac >= 0.5 ? 1 : 0);
            if (g.periodic())
                col = (col % g.ncol() + g.ncol()) % g.ncol();
            else
                col = std::clamp(col, 0, g.ncol() - 1);
            const int k = g.interior_index(col, mid);
            const double v = k >= 0 ? u[k] * b.sign : 0.0;
            if (!(v > floor))
                throw SignPatternBroken("refined solution: anchor at arc " +
                                        format_value(g.s(col)) + " reads " +
                                        format_value(k >= 0 ? u[k] : 0.0) +
                                        " against prescribed sign " + format_value(b.sign));
        }
    }

    SweepRow sweep_row(double R) {
        SweepRow r;
        r.R = R;
        r.n = cfg_.n;
        try {
            const DiscreteOperator op(Grid::tube(curve_, R, cfg_.h), cfg_.lambda);
            const Grid& g = op.grid();
            const BumpPlacement pb = placement_from_arc(g, 0.5 * g.length());
            const Vec placed = place_bump(op, *sampler_, pb);
            const Vec V =
                project_bump(op, f_, placed, pb, cfg_.half_width(), !cfg_.closed_curve());
            r.proj_defect = op.h1_norm(Vec(V - placed));
            const ChainState st = chain_state(op, start_params());
            const ReducedSolution red = reduce_chain(op, st.placements);
            r.e_n = st.e_n;
            r.j_phi = st.j_phi;
            r.g_r = red.energy;
            r.remainder = st.remainder();
            r.grad_norm = st.grad_norm;
            r.max_i = st.i_max;
            r.ok = true;
            r.status = "ok";
        } catch (const std::exception& e) {
            r.status = e.what();
        }
        return r;
    }

    static std::string field_csv(const DiscreteOperator& op, const Vec& u) {
        const Grid& g = op.grid();
        const bool strip = g.topology() == Grid::Topology::Strip;
        CsvWriter w({strip ? "xi" : "s", "eta", "value"});
        const Vec full = op.extend_field(u);
        for (int i = 0; i < g.ncol(); ++i)
            for (int j = 0; j < g.nrow(); ++j)
                w.cell(g.s(i)).cell(g.eta(j)).cell(full[g.node(i, j)]).end_row();
        return w.str();
    }

    static std::string meta_text(
        const std::string& section,
        const std::vector<std::pair<std::string, std::string>>& kv) {
        std::string text = "[" + section + "]\n";
        for (const auto& [k, v] : kv) text += k + " = " + v + "\n";
        return text;
    }

    std::string energy_csv(double R, const ChainState& st, double g_r) const {
        CsvWriter w({"R", "n", "E_n", "J_phi", "G_R", "remainder", "grad_norm"});
        w.cell(R)
            .cell(static_cast<int>(st.placements.size()))
            .cell(st.e_n)
            .cell(st.j_phi)
            .cell(g_r)
            .cell(st.remainder())
            .cell(st.grad_norm)
            .end_row();
        return w.str();
    }

    RunConfig cfg_;
    PipelineOptions opt_;
    Nonlinearity f_;
    std::shared_ptr<const Curve> curve_;

    std::unique_ptr<DiscreteOperator> strip_op_;
    BumpProfile profile_;
    double mu_fit_ = 0.0;
    std::unique_ptr<ProfileSampler> sampler_;
    std::unique_ptr<InteractionKernel> kernel_;
    std::unique_ptr<EndPenalty> wall_;
    std::map<long, std::unique_ptr<DiscreteOperator>> tubes_;
    std::optional<ChainState> state_;
};

}  // namespace multibump
