#include <gtest/gtest.h>

#include <cmath>

#include "multibump/ballvolume.hpp"
#include "multibump/chain.hpp"
#include "multibump/curve.hpp"
#include "multibump/fermat.hpp"
#include "oracles.hpp"

using namespace multibump;

TEST(Curve, CircleBasics) {
    auto c = make_circle({0, 0}, 1.0);
    EXPECT_TRUE(c->closed());
    EXPECT_NEAR(c->length(), 2.0 * kPi, 1e-8);
    EXPECT_NEAR(c->curvature(0.3), 1.0, 1e-12);
    EXPECT_NEAR(c->max_curvature(), 1.0, 1e-12);
    // Left normal points toward the center on a counterclockwise circle.
    const Vec2 n = c->normal(0.0);
    EXPECT_NEAR(n.x, -1.0, 1e-12);
    EXPECT_NEAR(n.y, 0.0, 1e-12);

    auto c2 = make_circle({2, -1}, 3.5);
    EXPECT_NEAR(c2->length(), 2.0 * kPi * 3.5, 1e-6);
    EXPECT_NEAR(c2->curvature(0.8), 1.0 / 3.5, 1e-12);
}

TEST(Curve, CircleArcRoundtrip) {
    auto c = make_circle({0, 0}, 2.0);
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.99}) {
        const double s = c->arc_from_t(t);
        EXPECT_NEAR(c->t_from_arc(s), t, 1e-9);
    }
    EXPECT_NEAR(c->arc_from_t(0.25), 0.25 * 2.0 * kPi * 2.0, 1e-7);
    // Periodic wrap.
    EXPECT_NEAR(c->t_from_arc(c->length() + 1.0), c->t_from_arc(1.0), 1e-12);
}

TEST(Curve, SegmentBasics) {
    auto s = make_segment({0, 0}, {3, 4});
    EXPECT_FALSE(s->closed());
    EXPECT_NEAR(s->length(), 5.0, 1e-12);
    EXPECT_EQ(s->curvature(0.5), 0.0);
    EXPECT_EQ(s->max_curvature(), 0.0);
    const Vec2 tan = s->tangent(0.2);
    EXPECT_NEAR(tan.x, 0.6, 1e-12);
    EXPECT_NEAR(tan.y, 0.8, 1e-12);
    const Vec2 mid = s->point(0.5);
    EXPECT_NEAR(mid.x, 1.5, 1e-12);
    EXPECT_NEAR(mid.y, 2.0, 1e-12);
}

TEST(Curve, ClosureFlagsChecked) {
    CurveSpec circ;
    circ.kind = CurveKind::Circle;
    circ.closed = false;
    EXPECT_THROW(Curve::make(circ), ClosureMismatch);

    CurveSpec seg;
    seg.kind = CurveKind::Segment;
    seg.closed = true;
    seg.p0 = {0, 0};
    seg.p1 = {1, 0};
    EXPECT_THROW(Curve::make(seg), ClosureMismatch);
}

TEST(Curve, DegenerateInputsRejected) {
    EXPECT_THROW(make_segment({1, 1}, {1, 1}), DegenerateTangent);
    EXPECT_THROW(make_circle({0, 0}, 0.0), RangeViolation);
    EXPECT_THROW(make_circle({0, 0}, -2.0), RangeViolation);
    EXPECT_THROW(make_spline({{0, 0}, {1, 1}}), RangeViolation);
    EXPECT_THROW(make_spline({{0, 0}, {1, 1}, {1, 1}, {2, 0}}), DegenerateTangent);
}

TEST(Curve, SplineInterpolatesPoints) {
    std::vector<Vec2> pts{{0, 0}, {1, 0.5}, {2, -0.3}, {3, 0.2}, {4, 0}};
    auto sp = make_spline(pts, false);
    EXPECT_FALSE(sp->closed());
    // Endpoints are hit exactly; interior points at their chordal parameters.
    const Vec2 a = sp->point(0.0);
    EXPECT_NEAR(a.x, 0.0, 1e-12);
    EXPECT_NEAR(a.y, 0.0, 1e-12);
    const Vec2 b = sp->point(1.0);
    EXPECT_NEAR(b.x, 4.0, 1e-12);
    EXPECT_NEAR(b.y, 0.0, 1e-12);
    // Interpolation is exact at the normalized chordal knots.
    std::vector<double> knots(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) knots[i] = knots[i - 1] + dist(pts[i - 1], pts[i]);
    for (auto& k : knots) k /= knots.back();
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LT(dist(sp->point(knots[i]), pts[i]), 1e-12);
}

TEST(Curve, ClosedSplineIsPeriodic) {
    std::vector<Vec2> pts{{1, 0}, {0.1, 1.1}, {-1.2, 0}, {0, -0.9}};
    auto sp = make_spline(pts, true);
    EXPECT_TRUE(sp->closed());
    EXPECT_LT(dist(sp->point(0.0), sp->point(1.0)), 1e-9);
    const Vec2 t0 = sp->tangent(0.0);
    const Vec2 t1 = sp->tangent(1.0 - 1e-12);
    EXPECT_NEAR(t0.x, t1.x, 1e-6);
    EXPECT_NEAR(t0.y, t1.y, 1e-6);
}

TEST(Curve, SplineCurvatureMatchesCircumcircleOracle) {
    std::vector<Vec2> pts{{0, 0}, {1, 0.8}, {2.2, 0.3}, {3.1, 1.2}, {4, 0.4}, {5, 0}};
    auto sp = make_spline(pts, false);
    const double dense = oracles::max_curvature_dense(*sp);
    EXPECT_NEAR(sp->max_curvature(), dense, 0.01 * dense);

    std::vector<Vec2> loop{{1.5, 0}, {0, 1.2}, {-1.4, 0.1}, {-0.2, -1.3}, {0.9, -0.8}};
    auto cl = make_spline(loop, true);
    const double dense2 = oracles::max_curvature_dense(*cl);
    EXPECT_NEAR(cl->max_curvature(), dense2, 0.01 * dense2);
}

TEST(Curve, CircleCurvatureSignViaTubeMetric) {
    // On the unit circle the inward offset by eta/R shrinks the metric:
    // J = 1 - kappa*eta/R with kappa = +1 in the left-normal convention.
    auto c = make_circle({0, 0}, 1.0);
    const double R = 20.0, eta = 0.5;
    const double J = 1.0 - c->curvature(0.0) * eta / R;
    EXPECT_NEAR(J, 0.975, 1e-12);
}

TEST(Curve, SelfIntersectingSplineRejected) {
    // A figure-eight: both diagonals pass through the middle.
    std::vector<Vec2> pts{{-1, 0}, {-0.3, 0.6}, {0.3, -0.6}, {1, 0}, {0.3, 0.6}, {-0.3, -0.6}};
    EXPECT_THROW(make_spline(pts, true), SelfIntersection);
}

TEST(Chain, SeparationScales) {
    const double mu = decay_mu(1.0);
    const auto s = separation_scales(20.0, mu);
    EXPECT_NEAR(s.g1, std::log(20.0) / (2.0 * mu), 1e-14);
    EXPECT_NEAR(s.g2, (0.5 + 1.0 / (4.0 * 0.75)) * s.g1, 1e-14);
    EXPECT_LT(s.g2, s.g1);
    EXPECT_GT(s.g2, 0.5 * s.g1);
    // Growth in R, sublinearity.
    const auto s2 = separation_scales(80.0, mu);
    EXPECT_GT(s2.g1, s.g1);
    EXPECT_LT(s2.g1 / 80.0, s.g1 / 20.0);
    EXPECT_THROW(separation_scales(0.9, mu), RangeViolation);
    EXPECT_THROW(separation_scales(20.0, mu, 0.5), RangeViolation);
    EXPECT_THROW(separation_scales(20.0, mu, 1.0), RangeViolation);
}

TEST(Chain, CyclicIndexDistance) {
    // Six slots: opposite corners are one step apart around the wrap.
    EXPECT_EQ(cyclic_index_distance(0, 5, 6), 1);
    EXPECT_EQ(cyclic_index_distance(0, 3, 6), 3);
    EXPECT_EQ(cyclic_index_distance(2, 2, 6), 0);
    EXPECT_EQ(cyclic_index_distance(1, 4, 4), 1);
}

TEST(Chain, FromParamsValidation) {
    auto circ = make_circle();
    EXPECT_THROW(chain_from_params(circ, 20.0, {0.1, 0.1}), OrderViolation);
    EXPECT_THROW(chain_from_params(circ, 20.0, {0.5, 0.2}), OrderViolation);
    EXPECT_THROW(chain_from_params(circ, 20.0, {0.5, 1.0}), RangeViolation);
    EXPECT_THROW(chain_from_params(circ, 0.5, {0.5}), RangeViolation);
    auto seg = make_segment({0, 0}, {1, 0});
    EXPECT_THROW(chain_from_params(seg, 20.0, {0.0, 0.5}), RangeViolation);

    const Chain c = chain_from_params(circ, 20.0, {0.0, 0.5});
    ASSERT_EQ(c.size(), 2);
    EXPECT_NEAR(c.x[0].x, 20.0, 1e-9);
    EXPECT_NEAR(c.x[1].x, -20.0, 1e-9);
    EXPECT_NEAR(c.arc[1] - c.arc[0], 20.0 * kPi, 1e-5);
}

TEST(Chain, AdmissibilityClosed) {
    auto circ = make_circle();
    const double mu = decay_mu(1.0);
    const auto s = separation_scales(20.0, mu);
    const Chain antipodal = chain_from_params(circ, 20.0, {0.0, 0.5});
    const auto adm = chain_admissible(antipodal, s.g1);
    EXPECT_TRUE(adm.admissible);
    EXPECT_NEAR(adm.min_separation, 40.0, 1e-9);
    EXPECT_TRUE(std::isinf(adm.min_boundary_clearance));

    // Two nearly coincident points violate any positive threshold of this size.
    const Chain tight = chain_from_params(circ, 20.0, {0.0, 0.001});
    EXPECT_FALSE(chain_admissible(tight, s.g1).admissible);
}

TEST(Chain, AdmissibilityOpenBoundary) {
    auto seg = make_segment({0, 0}, {1, 0});
    const double mu = decay_mu(1.0);
    const auto s = separation_scales(40.0, mu);
    // Centered pair: plenty of separation and clearance.
    const Chain good = chain_from_params(seg, 40.0, {0.4, 0.6});
    EXPECT_TRUE(chain_admissible(good, s.g1).admissible);
    // A point hugging the left end fails the boundary clearance.
    const Chain bad = chain_from_params(seg, 40.0, {0.002, 0.6});
    const auto adm = chain_admissible(bad, s.g1);
    EXPECT_FALSE(adm.admissible);
    EXPECT_NEAR(adm.min_boundary_clearance, 2.0 * 40.0 * 0.002, 1e-9);
}

TEST(Fermat, EquilateralClosedForm) {
    // Unit-side equilateral triangle: minimal total distance is sqrt(3).
    const double h = std::sqrt(3.0) / 2.0;
    const auto r = fermat_point({0, 0}, {1, 0}, {0.5, h});
    EXPECT_EQ(r.vertex, -1);
    EXPECT_NEAR(r.total, std::sqrt(3.0), 1e-10);
    EXPECT_NEAR(r.point.x, 0.5, 1e-8);
    EXPECT_NEAR(r.point.y, 1.0 / (2.0 * std::sqrt(3.0)), 1e-8);
}

TEST(Fermat, ObtuseVertexCase) {
    // Angle at the origin is 150 degrees: the vertex is the minimizer.
    const Vec2 a{0, 0};
    const Vec2 b{2, 0};
    const Vec2 c{3.0 * std::cos(5.0 * kPi / 6.0), 3.0 * std::sin(5.0 * kPi / 6.0)};
    const auto r = fermat_point(a, b, c);
    EXPECT_EQ(r.vertex, 0);
    EXPECT_NEAR(r.total, 5.0, 1e-12);
}

TEST(Fermat, CoincidentPoints) {
    const auto r = fermat_point({1, 1}, {1, 1}, {4, 5});
    EXPECT_GE(r.vertex, 0);
    EXPECT_NEAR(r.total, 5.0, 1e-12);
    const auto z = fermat_point({2, 3}, {2, 3}, {2, 3});
    EXPECT_EQ(z.total, 0.0);
}

TEST(Fermat, MatchesPatternSearchOracle) {
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Vec2 b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Vec2 c{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const auto r = fermat_point(a, b, c);
        const double ref = oracles::fermat_total_pattern_search(a, b, c);
        EXPECT_NEAR(r.total, ref, 1e-6) << "trial " << trial;
        EXPECT_LE(r.total, ref + 1e-9);
    }
}

TEST(BallVolume, MatchesLensOracle) {
    struct Case {
        Vec2 x1, x2;
        double r;
    };
    const Case cases[] = {
        {{0, 0}, {0.5, 0}, 1.2},
        {{0, 0}, {0.3, 0.4}, 1.0},
        {{1, 1}, {1.2, 1.6}, 1.5},
        {{0, 0}, {0.9, 0}, 1.9},
    };
    int idx = 0;
    for (const auto& cs : cases) {
        const auto est = ball_difference_volume(cs.x1, cs.x2, cs.r, 200000, 42 + idx);
        const double exact = oracles::ball_difference_area(cs.x1, cs.x2, cs.r);
        EXPECT_NEAR(est.volume, exact, 3.0 * est.ci99 + 1e-12) << "case " << idx;
        ++idx;
    }
}

TEST(BallVolume, DegenerateAndInvalid) {
    // Identical centers with r = 1: the difference is empty.
    const auto z = ball_difference_volume({0, 0}, {0, 0}, 1.0, 10000, 7);
    EXPECT_EQ(z.volume, 0.0);
    EXPECT_THROW(ball_difference_volume({0, 0}, {1.5, 0}, 1.2, 100, 7), RangeViolation);
    EXPECT_THROW(ball_difference_volume({0, 0}, {0.5, 0}, 0.9, 100, 7), RangeViolation);
    EXPECT_THROW(ball_difference_volume({0, 0}, {0.5, 0}, 1.6, 100, 7), RangeViolation);
    EXPECT_THROW(ball_difference_volume({0, 0}, {0.5, 0}, 1.2, 0, 7), RangeViolation);
}

TEST(BallVolume, DeterministicForSeed) {
    const auto a = ball_difference_volume({0, 0}, {0.5, 0}, 1.2, 50000, 99);
    const auto b = ball_difference_volume({0, 0}, {0.5, 0}, 1.2, 50000, 99);
    EXPECT_EQ(a.volume, b.volume);
    const auto c = ball_difference_volume({0, 0}, {0.5, 0}, 1.2, 50000, 100);
    EXPECT_NE(a.volume, c.volume);
}
