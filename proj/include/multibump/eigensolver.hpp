#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "multibump/common.hpp"
#include "multibump/operators.hpp"

namespace multibump {

enum class EigenSort { Ascending, NearestZero };

struct EigenOptions {
    int k = 1;
    EigenSort sort = EigenSort::Ascending;
    double sigma = 0.0;      // shift for the shift-invert transform
    double tol = 1e-10;      // relative Ritz residual
    int max_dim = 400;       // Krylov dimension ceiling
};

struct EigenResult {
    std::vector<double> values;
    std::vector<Vec> vectors;  // M-normalized, deterministic sign
    int dim_used = 0;
};

namespace detail {

inline void fix_sign(Vec& x) {
    int imax = 0;
    for (int i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0) x = -x;
}

inline bool wanted_order(EigenSort sort, double a, double b, double sigma) {
    if (sort == EigenSort::Ascending) return a < b;
    return std::abs(a - sigma) < std::abs(b - sigma);
}

}  // namespace detail

/// Generalized symmetric eigenpairs of K x = theta M x with diagonal M,
/// via shift-invert Lanczos in the M-inner product with full
/// reorthogonalization. Small problems fall back to a dense solve.
inline EigenResult solve_generalized(const SpMat& K, const Vec& Mdiag, EigenOptions opt) {
    const int n = static_cast<int>(Mdiag.size());
    if (opt.k < 1 || opt.k > n) throw RangeViolation("eigensolver: bad pair count");
    EigenResult res;

    if (n <= 500) {
        // Dense: fold the mass matrix in symmetrically.
        const Vec mi = Mdiag.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd A = Eigen::MatrixXd(K);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) *= mi[i] * mi[j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return detail::wanted_order(opt.sort, es.eigenvalues()[a], es.eigenvalues()[b],
                                        opt.sigma);
        });
        for (int i = 0; i < opt.k; ++i) {
            res.values.push_back(es.eigenvalues()[order[i]]);
            Vec x = mi.cwiseProduct(es.eigenvectors().col(order[i]));
            detail::fix_sign(x);
            res.vectors.push_back(std::move(x));
        }
        res.dim_used = n;
        return res;
    }

    SpMat A = K;
    if (opt.sigma != 0.0) A -= SpMat((opt.sigma * Mdiag).asDiagonal());
    Eigen::SparseLU<SpMat> lu(A);
    if (lu.info() != Eigen::Success)
        throw ConvergenceFailure("eigensolver: singular shifted operator; move the shift");

    auto minner = [&](const Vec& u, const Vec& v) { return u.dot(Mdiag.cwiseProduct(v)); };

    Rng rng(0x5eed);
    Vec v0(n);
    for (int i = 0; i < n; ++i) v0[i] = 1.0 + 0.01 * rng.uniform();
    v0 /= std::sqrt(minner(v0, v0));

    std::vector<Vec> Q;
    std::vector<double> alpha, beta;  // beta[j] couples q_j and q_{j+1}
    Q.push_back(v0);
    int m = 0;
    bool breakdown = false;

    for (int target : {60, 120, 240, opt.max_dim}) {
        target = std::min(target, std::min(n, opt.max_dim));
        while (m < target && !breakdown) {
            Vec w = lu.solve(Mdiag.cwiseProduct(Q[m]));
            const double a = minner(w, Q[m]);
            alpha.push_back(a);
            w -= a * Q[m];
            if (m > 0) w -= beta[m - 1] * Q[m - 1];
            for (int pass = 0; pass < 2; ++pass)
                for (const Vec& q : Q) w -= minner(w, q) * q;
            const double b = std::sqrt(std::max(0.0, minner(w, w)));
            if (b < 1e-13) {
                breakdown = true;  // invariant subspace found
                break;
            }
            beta.push_back(b);
            Q.push_back(w / b);
            ++m;
        }

        // Ritz values of the tridiagonal section. After a breakdown the last
        // diagonal entry still belongs to the (now invariant) block.
        const int mm = breakdown ? static_cast<int>(alpha.size()) : m;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
        for (int i = 0; i < mm; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < mm) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Vec& nu = es.eigenvalues();
        double numax = 0.0;
        for (int i = 0; i < mm; ++i) numax = std::max(numax, std::abs(nu[i]));

        struct Ritz {
            double theta;
            int idx;
            bool converged;
        };
        std::vector<Ritz> ritz;
        for (int i = 0; i < mm; ++i) {
            if (std::abs(nu[i]) < 1e-12 * numax) continue;  // far end of the spectrum
            const double theta = opt.sigma + 1.0 / nu[i];
            const double resid = breakdown ? 0.0
                                           : std::abs(beta.back()) *
                                                 std::abs(es.eigenvectors()(mm - 1, i));
            ritz.push_back({theta, i, resid <= opt.tol * std::abs(nu[i])});
        }
        std::sort(ritz.begin(), ritz.end(), [&](const Ritz& a, const Ritz& b) {
            return detail::wanted_order(opt.sort, a.theta, b.theta, opt.sigma);
        });
        bool ok = static_cast<int>(ritz.size()) >= opt.k;
        for (int i = 0; ok && i < opt.k; ++i) ok = ritz[i].converged;
        if (ok || breakdown || m >= std::min(n, opt.max_dim)) {
            if (!ok && !breakdown)
                throw ConvergenceFailure("eigensolver: Krylov space hit its ceiling before "
                                         "the requested pairs converged");
            if (static_cast<int>(ritz.size()) < opt.k)
                throw ConvergenceFailure("eigensolver: requested more pairs than resolved");
            for (int i = 0; i < opt.k; ++i) {
                Vec x = Vec::Zero(n);
                for (int j = 0; j < mm; ++j) x += es.eigenvectors()(j, ritz[i].idx) * Q[j];
                // One inverse-iteration polish, then a Rayleigh quotient.
                const Vec rhs = Mdiag.cwiseProduct(x);
                x = lu.solve(rhs);
                x /= std::sqrt(minner(x, x));
                detail::fix_sign(x);
                res.values.push_back(x.dot(K * x) / minner(x, x));
                res.vectors.push_back(std::move(x));
            }
            res.dim_used = mm;
            return res;
        }
    }
    throw ConvergenceFailure("eigensolver: no convergence within the dimension budget");
}

/// Smallest Dirichlet eigenvalue of -d^2/dx^2 on an interval of length D,
/// discretized with the 3-point stencil at spacing h.
inline double interval_eigenvalue_1d(double D, double h) {
    return (4.0 / (h * h)) * sqr(std::sin(kPi * h / (2.0 * D)));
}

/// Number of generalized eigenvalues of A x = t M x strictly below w, read off
/// the inertia of the LDLT factorization of A - w M. Exact zero pivots are
/// dodged by nudging the shift.
inline int count_eigenvalues_below(const SpMat& A, const Vec& Mdiag, double w) {
    const double nudge = 1e-11 * (1.0 + std::abs(w));
    for (int attempt = 0; attempt < 4; ++attempt) {
        SpMat S = A - SpMat(Vec(w * Mdiag).asDiagonal());
        Eigen::SimplicialLDLT<SpMat> ldlt(S);
        if (ldlt.info() == Eigen::Success) {
            const Vec d = ldlt.vectorD();
            if (d.allFinite() && d.cwiseAbs().minCoeff() > 0.0)
                return static_cast<int>((d.array() < 0.0).count());
        }
        w += nudge * (attempt + 1);
    }
    throw NumericalError("inertia count: factorization kept hitting zero pivots");
}

/// Principal eigenvalue of the strip section operator. The finite box adds a
/// longitudinal confinement equal to the 1-D interval ground eigenvalue; on a
/// tensor grid the sum splits exactly, so subtracting it leaves the pure
/// cross-section value.
inline double strip_principal_eigenvalue(const DiscreteOperator& op) {
    if (op.grid().topology() != Grid::Topology::Strip)
        throw RangeViolation("strip eigenvalue: operator does not live on a strip");
    EigenOptions opt;
    opt.k = 1;
    opt.sort = EigenSort::Ascending;
    EigenResult r = solve_generalized(op.K(), op.Mdiag(), opt);
    return r.values[0] - interval_eigenvalue_1d(op.grid().length(), op.grid().hs());
}

}  // namespace multibump
