#pragma once

namespace multibump::tol {

// Every acceptance threshold lives here so the gate is pinned in one place.

// Strip spectrum: relative error of the cross-section eigenvalue estimate at
// h = 0.02, and the h-values of the monotonicity sweep.
inline constexpr double strip_eig_rel = 0.0055;

// Decay rate: relative error of the fitted rate over xi in [4, 8].
inline constexpr double decay_rel = 0.03;
inline constexpr double decay_fit_lo = 4.0;
inline constexpr double decay_fit_hi = 8.0;

// Kernel isolation: window for the near-zero eigenvalue, floor for the next
// one, and the alignment of the eigenfield with the axial translation mode.
inline constexpr double kernel_window = 1e-2;
inline constexpr double kernel_next_floor = 0.1;
inline constexpr double kernel_cosine = 0.999;

// Geometric oracles.
inline constexpr double fermat_vertex_tol = 1e-7;    // |s - (v+w)| on obtuse triangles
inline constexpr double fermat_semiperim_slack = 1e-9;
inline constexpr int    fermat_sample_count = 1000;
inline constexpr int    ball_config_count = 500;
inline constexpr double ball_ci_quantile = 2.5758;   // two-sided 99%

// Splitting bounds: tuples checked and admissible violations.
inline constexpr int splitting_tuples = 100000;
inline constexpr int splitting_violations = 0;
inline constexpr double splitting_margin = 1.25;     // safety factor on the fitted constant

// Truncation deficit: fitted slope of log ||U - trunc(U)|| over a in {3..8}
// must match -mu within this relative tolerance.
inline constexpr double truncation_slope_rel = 0.05;

// Projection gap ||V - U||_H1 over R in {20, 40, 80}: strict decrease and
// log-log slope window.
inline constexpr double projection_slope_lo = -0.8;
inline constexpr double projection_slope_hi = -0.3;

// Interaction integral decay over separations d in [4, 10].
inline constexpr double interaction_slope_rel = 0.05;

// Cross-energy decay and the boundary-vs-interior ordering sample size.
inline constexpr double cross_slope_rel = 0.05;
inline constexpr int    boundary_chain_count = 50;

// Reduction: refinement tolerance on the projected gradient, contraction
// bound, and the growth factor allowed for the fitted quadratic-gap constant.
inline constexpr double refine_tol = 1e-8;
inline constexpr int    refine_max_iter = 200;
inline constexpr double contraction_bound = 1.0;
inline constexpr double quad_gap_factor = 2.0;

// Global shape: antipodal placement tolerance (two bumps on the circle) and
// the symmetry tolerance for the open-curve minimizer.
inline constexpr double antipodal_tol = 5e-3;
inline constexpr double open_symmetry_tol = 1e-2;

// Energy expansion remainder against the leading interaction at R = 80.
inline constexpr double remainder_ratio = 0.3;

// Trend checks on flat tubes bottom out at the placement floor: off-node
// anchors interpolate the profile, an h^2-scale error with no R dependence.
// Below this floor a sequence is treated as converged rather than required
// to keep decreasing.
inline constexpr double trend_floor = 2e-5;

}  // namespace multibump::tol
