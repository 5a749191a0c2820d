#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "multibump/common.hpp"
#include "multibump/curve.hpp"

namespace multibump {

/// Tensor grid in curvilinear coordinates (s, eta). Columns run along the
/// curve (or the xi axis of the reference strip), rows across the section
/// eta in [-1, 1]. Node values are stored row-major, eta fastest. The metric
/// factor J = 1 - kappa(s/R) * eta / R reduces to exactly 1.0 on strips and
/// straight tubes, so those assemble to bitwise identical matrices.
class Grid {
  public:
    enum class Topology { Strip, OpenTube, ClosedTube };

    static Grid strip(double xi_max, double h) {
        if (xi_max < 2.0) throw RangeViolation("grid: strip half-length must be at least 2");
        check_spacing(h);
        Grid g;
        g.topology_ = Topology::Strip;
        g.periodic_ = false;
        const int nxi = 2 * static_cast<int>(std::lround(xi_max / h));
        if (nxi < 16) throw ResolutionError("grid: too few columns along the strip");
        g.ncol_ = nxi + 1;
        g.hs_ = 2.0 * xi_max / nxi;
        g.s0_ = -xi_max;
        g.length_ = 2.0 * xi_max;
        g.init_eta(h);
        g.kappa_node_.assign(g.ncol_, 0.0);
        g.kappa_half_.assign(g.ncol_, 0.0);
        g.inv_R_ = 0.0;
        g.finish();
        return g;
    }

    static Grid tube(std::shared_ptr<const Curve> curve, double R, double h) {
        if (!curve) throw RangeViolation("grid: missing curve");
        if (R <= 1.0) throw RangeViolation("grid: expansion factor must exceed 1");
        check_spacing(h);
        if (R < 2.0 * curve->max_curvature())
            throw CurvatureTooLarge(
                "grid: tube folds onto itself; expansion factor must reach twice the peak "
                "curvature");
        Grid g;
        g.periodic_ = curve->closed();
        g.topology_ = g.periodic_ ? Topology::ClosedTube : Topology::OpenTube;
        g.curve_ = curve;
        g.R_ = R;
        g.inv_R_ = 1.0 / R;
        g.length_ = R * curve->length();
        const int ns = static_cast<int>(std::lround(g.length_ / h));
        if (ns < 16) throw ResolutionError("grid: too few columns along the tube");
        g.ncol_ = g.periodic_ ? ns : ns + 1;
        g.hs_ = g.length_ / ns;
        g.s0_ = 0.0;
        g.init_eta(h);
        g.kappa_node_.resize(g.ncol_);
        g.kappa_half_.resize(g.ncol_);
        for (int i = 0; i < g.ncol_; ++i) {
            g.kappa_node_[i] = curve->curvature_at_arc(g.s(i) / R);
            g.kappa_half_[i] = curve->curvature_at_arc((g.s(i) + 0.5 * g.hs_) / R);
        }
        g.finish();
        return g;
    }

    Topology topology() const { return topology_; }
    bool periodic() const { return periodic_; }
    double hs() const { return hs_; }
    double he() const { return he_; }
    int ncol() const { return ncol_; }
    int nrow() const { return nrow_; }
    int nnodes() const { return ncol_ * nrow_; }
    int ninterior() const { return ninterior_; }
    double length() const { return length_; }
    double R() const { return R_; }
    const std::shared_ptr<const Curve>& curve() const { return curve_; }

    int node(int i, int j) const { return i * nrow_ + j; }
    double s(int i) const { return s0_ + i * hs_; }
    double eta(int j) const { return -1.0 + j * he_; }

    /// Metric factor at a node.
    double metric(int i, int j) const { return 1.0 - kappa_node_[i] * eta(j) * inv_R_; }
    /// Metric at the midpoint of the s-edge leaving column i.
    double metric_half_s(int i, int j) const { return 1.0 - kappa_half_[i] * eta(j) * inv_R_; }
    /// Metric at the midpoint of the eta-edge above row j.
    double metric_half_e(int i, int j) const {
        return 1.0 - kappa_node_[i] * (eta(j) + 0.5 * he_) * inv_R_;
    }

    bool is_interior(int i, int j) const {
        if (j <= 0 || j >= nrow_ - 1) return false;
        if (!periodic_ && (i <= 0 || i >= ncol_ - 1)) return false;
        return true;
    }

    /// Interior (unknown) index of a node, -1 on the Dirichlet boundary.
    int interior_index(int i, int j) const { return idx_[node(i, j)]; }
    int interior_index_flat(int n) const { return idx_[n]; }

    /// Column index and eta row of an interior unknown.
    std::pair<int, int> interior_node(int k) const { return nodes_[k]; }

  private:
    static void check_spacing(double h) {
        if (h <= 0.0) throw ResolutionError("grid: spacing must be positive");
        if (h > 0.25) throw ResolutionError("grid: spacing must not exceed 0.25");
    }

    void init_eta(double h) {
        const int neta = 2 * static_cast<int>(std::lround(1.0 / h));
        if (neta < 8) throw ResolutionError("grid: too few rows across the section");
        nrow_ = neta + 1;
        he_ = 2.0 / neta;
    }

    void finish() {
        idx_.assign(nnodes(), -1);
        nodes_.clear();
        int k = 0;
        for (int i = 0; i < ncol_; ++i)
            for (int j = 0; j < nrow_; ++j)
                if (is_interior(i, j)) {
                    idx_[node(i, j)] = k++;
                    nodes_.emplace_back(i, j);
                }
        ninterior_ = k;
    }

    Topology topology_ = Topology::Strip;
    bool periodic_ = false;
    int ncol_ = 0, nrow_ = 0, ninterior_ = 0;
    double hs_ = 0, he_ = 0, s0_ = 0, length_ = 0;
    double R_ = 0.0, inv_R_ = 0.0;
    std::shared_ptr<const Curve> curve_;
    std::vector<double> kappa_node_, kappa_half_;
    std::vector<int> idx_;
    std::vector<std::pair<int, int>> nodes_;
};

}  // namespace multibump
