#include "splash/crapper.hpp"
#include "splash/geometry.hpp"
#include "splash/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace splash;
using geometry::CurveClass;

namespace {

constexpr double pi = std::numbers::pi;

double a_splash() { return crapper::critical_constants().a_splash; }

Curve fine_crapper(double A, Index points = 4096) { return geometry::resample_curve(crapper::curve(A, 1024), points); }

} // namespace

TEST(Curvature, FlatIsZero)
{
    EXPECT_EQ(geometry::curvature(Field(Eigen::VectorXd::Zero(32), Parity::odd)).max_abs(), 0.0);
}

TEST(Curvature, MatchesCoordinateFormula)
{
    const double A = 0.2;
    const Index n = 512;
    const Field K = geometry::curvature(crapper::theta(A, n));
    const Eigen::VectorXd Kc = geometry::coordinate_curvature(crapper::curve(A, n));
    EXPECT_LT((K.values() - Kc).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(K.parity(), Parity::even);
}

TEST(Curvature, TotalTurningVanishes)
{
    const double A = 0.35;
    const Index n = 256;
    const Field K = geometry::curvature(crapper::theta(A, n));
    const Eigen::VectorXd s = geometry::speed(crapper::curve(A, n));
    EXPECT_NEAR((K.values().array() * s.array()).mean(), 0.0, 1e-13);
}

TEST(Arclength, IdentityOnFlatCurve)
{
    const geometry::ArclengthMap m = geometry::arclength_map(crapper::curve(0.0, 64), 64);
    EXPECT_NEAR(m.length, 2 * pi, 1e-13);
    for (Index j = 0; j < 64; ++j)
        EXPECT_NEAR(m.curve.z[j].real() - m.curve.z[0].real(), 2 * pi * double(j) / 64, 1e-12);
}

TEST(Arclength, CircleIsEquallySpaced)
{
    Curve c;
    c.shift = 0;
    const Index n = 64;
    c.z.resize(n);
    const Eigen::VectorXd alpha = grid_nodes<double>(n);
    for (Index j = 0; j < n; ++j)
        c.z[j] = 2.0 * std::exp(std::complex<double>(0, alpha[j]));
    const geometry::ArclengthMap m = geometry::arclength_map(c, 128);
    EXPECT_NEAR(m.length, 4 * pi, 1e-12);
    const double chord = std::abs(m.curve.z[1] - m.curve.z[0]);
    for (Index j = 0; j < 128; ++j)
        EXPECT_NEAR(std::abs(m.curve.z[(j + 1) % 128] - m.curve.z[j]), chord, 1e-12);
}

TEST(Arclength, UnitSpeedAndLengthForCrapper)
{
    const double A = 0.4;
    const Curve c = crapper::curve(A, 512);
    const geometry::ArclengthMap m = geometry::arclength_map(c, 2048);
    // reference length by the trapezoid rule on the exact speed (spectrally accurate)
    const Curve ref = crapper::curve(A, 8192);
    const double length = geometry::speed(ref).mean() * 2 * pi;
    EXPECT_NEAR(m.length, length, 1e-10);
    // centered finite differences of the reparametrized samples
    const Interpolant zi(m.curve);
    double worst = 0;
    const double h = 1e-5;
    for (Index j = 0; j < m.curve.size(); j += 7) {
        const double s = m.curve.node(j);
        const double fd = std::abs(zi(s + h) - zi(s - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd - 1.0));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(ChordArc, FlatCurve)
{
    const geometry::SplashReport r = geometry::classify(crapper::curve(0.0, 256));
    EXPECT_NEAR(r.eta, 1.0, 1e-10);
    EXPECT_EQ(r.classification, CurveClass::graph);
    EXPECT_EQ(r.intersections, 0);
}

TEST(ChordArc, SplashAtCriticalAmplitude)
{
    const geometry::SplashReport r = geometry::classify(fine_crapper(a_splash()));
    EXPECT_LT(r.eta, 1e-4);
    EXPECT_GT(r.arc_separation, 1.0);
    EXPECT_EQ(r.classification, CurveClass::splash);
}

TEST(ChordArc, AgreesWithBruteForceOracle)
{
    for (double A : {0.35, 0.40, 0.44}) {
        const Curve c = crapper::curve(A, 1024);
        const double fast = geometry::chord_arc_eta(c).eta;
        const double oracle = reference::brute_force_eta(c, 4096);
        EXPECT_GT(fast, 0.0);
        EXPECT_NEAR(fast, oracle, 1e-7 + 1e-6 * oracle) << A;
    }
}

TEST(ChordArc, InvariantUnderTranslationAndReflection)
{
    const Curve c = crapper::curve(0.42, 1024);
    const double eta = geometry::chord_arc_eta(c).eta;
    Curve moved = c;
    moved.z.array() += std::complex<double>(1.234, 0);
    moved.tangent.resize(0);
    EXPECT_NEAR(geometry::chord_arc_eta(moved).eta, eta, 1e-10);
    // z(-alpha) reflected: x -> -x keeps the set, reversing orientation
    Curve mirrored = c;
    mirrored.tangent.resize(0);
    const Index n = c.size();
    for (Index j = 0; j < n; ++j) {
        const std::complex<double> p = c.z[(n - j) % n] + (j == 0 ? c.shift : 0.0);
        mirrored.z[j] = std::complex<double>(-p.real(), p.imag());
    }
    EXPECT_NEAR(geometry::chord_arc_eta(mirrored).eta, eta, 1e-10);
}

TEST(ChordArc, DecreasesTowardsSplash)
{
    const double a0 = a_splash();
    double prev = 2.0;
    for (int i = 0; i < 20; ++i) {
        const double A = 0.30 + (a0 - 0.30) * double(i) / 19.0;
        const double eta = geometry::chord_arc_eta(crapper::curve(A, 1024)).eta;
        EXPECT_LT(eta, prev) << A;
        prev = eta;
    }
    EXPECT_LT(prev, 1e-4);
}

TEST(SelfIntersections, SimpleCurvesHaveNone)
{
    EXPECT_TRUE(geometry::self_intersections(fine_crapper(0.40)).empty());
    EXPECT_TRUE(geometry::self_intersections(crapper::curve(0.0, 256)).empty());
}

TEST(SelfIntersections, TwoSymmetricCrossingsBeyondSplash)
{
    const auto xs = geometry::self_intersections(fine_crapper(0.46));
    ASSERT_EQ(xs.size(), 2u);
    for (const auto& x : xs) {
        EXPECT_TRUE(x.converged);
        EXPECT_LT(x.residual, 1e-12);
    }
    // each crossing is fixed by the reflection alpha -> -alpha: it lies on the
    // symmetry line through the trough and its parameters satisfy alpha + beta = 0 mod 2 pi
    for (const auto& x : xs) {
        EXPECT_LT(std::abs(std::sin(x.point.real())), 1e-9);
        EXPECT_LT(std::abs(std::sin(0.5 * (x.alpha + x.beta))), 1e-9);
    }
    EXPECT_GT(std::abs(xs[0].point.imag() - xs[1].point.imag()), 0.1);
}

TEST(SelfIntersections, CountAroundCriticalAmplitude)
{
    const double a0 = a_splash();
    for (double A : {0.40, 0.45, a0 - 1.5e-3})
        EXPECT_EQ(geometry::self_intersections(fine_crapper(A)).size(), 0u) << A;
    for (double A : {a0 + 1.5e-3, 0.465, 0.47, 0.48})
        EXPECT_EQ(geometry::self_intersections(fine_crapper(A)).size(), 2u) << A;
}

TEST(Classify, Trichotomy)
{
    EXPECT_EQ(geometry::classify(crapper::curve(0.2, 512)).classification, CurveClass::graph);
    const geometry::SplashReport mid = geometry::classify(crapper::curve(0.43, 512));
    EXPECT_EQ(mid.classification, CurveClass::simple);
    EXPECT_FALSE(mid.graph);
    const geometry::SplashReport cross = geometry::classify(crapper::curve(0.46, 512));
    EXPECT_EQ(cross.classification, CurveClass::crossing);
    EXPECT_EQ(cross.eta, 0.0);
    EXPECT_EQ(cross.intersections, 2);
}

TEST(Classify, StringRoundTrip)
{
    for (CurveClass c : {CurveClass::graph, CurveClass::simple, CurveClass::splash, CurveClass::crossing})
        EXPECT_EQ(geometry::curve_class_from_string(geometry::to_string(c)), c);
    EXPECT_THROW(geometry::curve_class_from_string("bent"), std::invalid_argument);
}

TEST(OpenMap, FlatCurve)
{
    const geometry::OpenedCurve o = geometry::open_map(crapper::curve(0.0, 256), 2.0);
    EXPECT_TRUE(o.simple);
    const Eigen::VectorXd alpha = grid_nodes<double>(256);
    for (Index j = 0; j < 256; ++j)
        EXPECT_LT(std::abs(o.image.z[j] - std::sqrt(2.0 - std::exp(std::complex<double>(0, -alpha[j])))), 1e-14);
}

TEST(OpenMap, SimpleCurveStaysInRightHalfPlane)
{
    const Curve c = crapper::curve(0.40, 1024);
    const geometry::OpenedCurve o = geometry::open_map(c, geometry::default_opening_constant(c));
    EXPECT_TRUE(o.simple);
    EXPECT_GT(o.min_real_part, 0.0);
    EXPECT_EQ(o.axis_touches, 0);
}

TEST(OpenMap, SplashCurveTouchesAxisTwice)
{
    const Curve c = fine_crapper(a_splash());
    const geometry::OpenedCurve o = geometry::open_map(c, geometry::default_opening_constant(c));
    EXPECT_TRUE(o.simple);
    EXPECT_EQ(o.axis_touches, 2);
    EXPECT_LT(o.min_real_part, 1e-6);
}

TEST(OpenMap, RejectsBranchCutCrossing)
{
    const Curve c = crapper::curve(0.46, 1024);
    EXPECT_THROW(geometry::open_map(c, geometry::default_opening_constant(c)), std::domain_error);
    EXPECT_THROW(geometry::open_map(c, -1.0), std::invalid_argument);
}

TEST(Graph, PredicateAndMinimumSpeed)
{
    EXPECT_TRUE(geometry::is_graph(crapper::curve(0.41, 1024)));
    EXPECT_FALSE(geometry::is_graph(crapper::curve(0.42, 1024)));
    EXPECT_GT(geometry::min_horizontal_speed(crapper::curve(0.2, 256)), 0.0);
}
