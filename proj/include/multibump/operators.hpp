#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <vector>

#include "multibump/common.hpp"
#include "multibump/grid.hpp"

namespace multibump {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Assembled {
    SpMat K;    // stiffness over interior unknowns
    Vec Mdiag;  // lumped mass over interior unknowns
};

/// Finite volume assembly of the metric-weighted Dirichlet form
///   a0(u,v) = sum over s-edges (he/hs)(1/J_mid)(u_b-u_a)(v_b-v_a)
///           + sum over eta-edges (hs/he) J_mid (u_b-u_a)(v_b-v_a),
/// the discrete version of the ambient integral of grad(u).grad(v) in tube
/// coordinates. Edges into Dirichlet nodes keep only their diagonal part.
inline Assembled assemble(const Grid& g) {
    const int n = g.ninterior();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 5);
    auto add_edge = [&trips](int a, int b, double c) {
        if (a >= 0) trips.emplace_back(a, a, c);
        if (b >= 0) trips.emplace_back(b, b, c);
        if (a >= 0 && b >= 0) {
            trips.emplace_back(a, b, -c);
            trips.emplace_back(b, a, -c);
        }
    };
    const double cs = g.he() / g.hs();
    const double ce = g.hs() / g.he();
    const int scount = g.periodic() ? g.ncol() : g.ncol() - 1;
    for (int i = 0; i < scount; ++i) {
        const int i2 = g.periodic() ? (i + 1) % g.ncol() : i + 1;
        for (int j = 1; j < g.nrow() - 1; ++j)
            add_edge(g.interior_index(i, j), g.interior_index(i2, j),
                     cs / g.metric_half_s(i, j));
    }
    for (int i = 0; i < g.ncol(); ++i)
        for (int j = 0; j < g.nrow() - 1; ++j) {
            const int a = g.interior_index(i, j);
            const int b = g.interior_index(i, j + 1);
            if (a < 0 && b < 0) continue;
            add_edge(a, b, ce * g.metric_half_e(i, j));
        }
    Assembled out;
    out.K.resize(n, n);
    out.K.setFromTriplets(trips.begin(), trips.end());
    out.K.makeCompressed();
    out.Mdiag.resize(n);
    const double cell = g.hs() * g.he();
    for (int k = 0; k < n; ++k) {
        const auto [i, j] = g.interior_node(k);
        out.Mdiag[k] = g.metric(i, j) * cell;
    }
    return out;
}

/// The discrete operator B = K + lambda M on a grid, with a cached Cholesky
/// factorization and the inner products derived from K and M.
class DiscreteOperator {
  public:
    DiscreteOperator(Grid grid, double lambda)
        : grid_(std::move(grid)), lambda_(lambda) {
        if (lambda <= -sqr(kPi) / 4.0)
            throw IndefiniteOperator(
                "operator: lambda must exceed -pi^2/4 (first cross-section eigenvalue)");
        Assembled a = assemble(grid_);
        K_ = std::move(a.K);
        Mdiag_ = std::move(a.Mdiag);
    }

    const Grid& grid() const { return grid_; }
    double lambda() const { return lambda_; }
    const SpMat& K() const { return K_; }
    const Vec& Mdiag() const { return Mdiag_; }
    int size() const { return static_cast<int>(Mdiag_.size()); }

    Vec apply_K(const Vec& u) const { return K_ * u; }
    Vec apply_B(const Vec& u) const { return K_ * u + lambda_ * Mdiag_.cwiseProduct(u); }
    Vec apply_M(const Vec& u) const { return Mdiag_.cwiseProduct(u); }

    /// Assembled B = K + lambda M as a matrix.
    const SpMat& B() const {
        if (B_.rows() == 0) {
            B_ = K_ + SpMat((lambda_ * Mdiag_).asDiagonal());
            B_.makeCompressed();
        }
        return B_;
    }

    /// Solves (K + lambda M) x = rhs.
    Vec solve_B(const Vec& rhs) const {
        factorize();
        return fact_.solve(rhs);
    }

    double m_inner(const Vec& u, const Vec& v) const { return u.dot(Mdiag_.cwiseProduct(v)); }
    double m_norm(const Vec& u) const { return std::sqrt(m_inner(u, u)); }
    double a_inner(const Vec& u, const Vec& v) const {
        return u.dot(K_ * v) + lambda_ * m_inner(u, v);
    }
    double a_norm(const Vec& u) const { return std::sqrt(std::max(0.0, a_inner(u, u))); }
    /// Plain H1 form (unit zeroth-order weight, independent of lambda).
    double h1_inner(const Vec& u, const Vec& v) const { return u.dot(K_ * v) + m_inner(u, v); }
    double h1_norm(const Vec& u) const { return std::sqrt(std::max(0.0, h1_inner(u, u))); }

    /// Interior unknowns of a full-node field.
    Vec restrict_field(const Vec& full) const {
        Vec u(size());
        for (int k = 0; k < size(); ++k) {
            const auto [i, j] = grid_.interior_node(k);
            u[k] = full[grid_.node(i, j)];
        }
        return u;
    }

    /// Full-node field with zero Dirichlet boundary values.
    Vec extend_field(const Vec& u) const {
        Vec full = Vec::Zero(grid_.nnodes());
        for (int k = 0; k < size(); ++k) {
            const auto [i, j] = grid_.interior_node(k);
            full[grid_.node(i, j)] = u[k];
        }
        return full;
    }

  private:
    void factorize() const {
        if (factored_) return;
        fact_.compute(K_ + SpMat((lambda_ * Mdiag_).asDiagonal()));
        if (fact_.info() != Eigen::Success || fact_.vectorD().minCoeff() <= 0.0)
            throw IndefiniteOperator("operator: K + lambda M is not positive definite");
        factored_ = true;
    }

    Grid grid_;
    double lambda_;
    SpMat K_;
    Vec Mdiag_;
    mutable SpMat B_;
    mutable Eigen::SimplicialLDLT<SpMat> fact_;
    mutable bool factored_ = false;
};

/// Solves B u = rhs with homogeneous Dirichlet conditions outside a window of
/// grid columns, returning a full-length interior vector that is zero outside
/// the window. The window starts at col_start and spans col_count columns,
/// wrapping around on periodic grids. On open grids a window leaving the
/// domain raises WindowOverflow unless clip is set, in which case it is
/// intersected with the domain.
inline Vec solve_windowed(const DiscreteOperator& op, const Vec& rhs, int col_start,
                          int col_count, bool clip = false) {
    const Grid& g = op.grid();
    if (col_count <= 0) throw RangeViolation("windowed solve: empty window");
    std::vector<int> cols;
    if (g.periodic()) {
        col_count = std::min(col_count, g.ncol());
        for (int c = 0; c < col_count; ++c)
            cols.push_back(((col_start + c) % g.ncol() + g.ncol()) % g.ncol());
    } else {
        int lo = col_start;
        int hi = col_start + col_count - 1;
        if (lo < 0 || hi > g.ncol() - 1) {
            if (!clip)
                throw WindowOverflow("windowed solve: window leaves the open domain");
            lo = std::max(lo, 0);
            hi = std::min(hi, g.ncol() - 1);
        }
        if (lo > hi) throw WindowOverflow("windowed solve: window entirely off the domain");
        for (int c = lo; c <= hi; ++c) cols.push_back(c);
    }

    std::vector<int> loc(op.size(), -1);
    std::vector<int> glob;
    for (int c : cols)
        for (int j = 1; j < g.nrow() - 1; ++j) {
            const int k = g.interior_index(c, j);
            if (k >= 0 && loc[k] < 0) {
                loc[k] = static_cast<int>(glob.size());
                glob.push_back(k);
            }
        }
    const int nsub = static_cast<int>(glob.size());
    if (nsub == 0) throw WindowOverflow("windowed solve: window holds no unknowns");

    const SpMat& B = op.B();
    std::vector<Eigen::Triplet<double>> trips;
    for (int jloc = 0; jloc < nsub; ++jloc) {
        const int jg = glob[jloc];
        for (SpMat::InnerIterator it(B, jg); it; ++it) {
            const int il = loc[it.row()];
            if (il >= 0) trips.emplace_back(il, jloc, it.value());
        }
    }
    SpMat Bsub(nsub, nsub);
    Bsub.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<SpMat> fact(Bsub);
    if (fact.info() != Eigen::Success)
        throw NumericalError("windowed solve: factorization failed");
    Vec rsub(nsub);
    for (int i = 0; i < nsub; ++i) rsub[i] = rhs[glob[i]];
    const Vec usub = fact.solve(rsub);
    Vec out = Vec::Zero(op.size());
    for (int i = 0; i < nsub; ++i) out[glob[i]] = usub[i];
    return out;
}

}  // namespace multibump
