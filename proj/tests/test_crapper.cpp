#include "splash/crapper.hpp"
#include "splash/geometry.hpp"
#include "splash/reference.hpp"
#include "splash/system.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace splash;

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

TEST(QOfA, Values)
{
    EXPECT_DOUBLE_EQ(crapper::q_of_A(0.0), 1.0);
    const double a0 = 0.45467;
    EXPECT_DOUBLE_EQ(crapper::q_of_A(a0), (1 + a0 * a0) / (1 - a0 * a0));
    EXPECT_NEAR(crapper::q_of_A(0.3) - crapper::q_of_A(-0.3), 0.0, 1e-16);
    EXPECT_THROW(crapper::q_of_A(1.0), std::domain_error);
    EXPECT_THROW(crapper::q_of_A(-1.5), std::domain_error);
}

TEST(QOfA, InverseMap)
{
    for (double A : {0.0, 0.1, 0.3, 0.45, 0.9})
        EXPECT_NEAR(crapper::A_of_q(crapper::q_of_A(A)), A, 1e-14);
    EXPECT_THROW(crapper::A_of_q(0.5), std::domain_error);
}

TEST(ThetaTau, FlatAtZeroAmplitude)
{
    const auto [theta, tau] = crapper::theta_tau(0.0, 32);
    EXPECT_EQ(theta.max_abs(), 0.0);
    EXPECT_EQ(tau.max_abs(), 0.0);
    EXPECT_EQ(theta.parity(), Parity::odd);
    EXPECT_EQ(tau.parity(), Parity::even);
}

TEST(ThetaTau, PointValuesAgainstSeries)
{
    const double A = 0.3;
    const std::complex<double> u = A * std::exp(std::complex<double>(0, -pi / 2));
    const std::complex<double> f = std::complex<double>(0, 2) * std::log((1.0 + u) / (1.0 - u));
    EXPECT_NEAR(crapper::boundary_trace(A, pi / 2).real(), f.real(), 1e-15);
    EXPECT_NEAR(f.real(), reference::crapper_theta_series(A, pi / 2), 1e-14);
    EXPECT_NEAR(crapper::boundary_trace(A, 0.0).imag(), 2 * std::log((1 + A) / (1 - A)), 1e-14);
    EXPECT_NEAR(reference::crapper_tau_series(A, 0.0), 2 * std::log((1 + A) / (1 - A)), 1e-14);
}

TEST(ThetaTau, GridSamplesAgainstSeries)
{
    const double A = 0.4;
    const auto [theta, tau] = crapper::theta_tau(A, 128);
    const Eigen::VectorXd alpha = grid_nodes<double>(128);
    for (Index j = 0; j < 128; ++j) {
        EXPECT_NEAR(theta[j], reference::crapper_theta_series(A, alpha[j]), 1e-13);
        EXPECT_NEAR(tau[j], reference::crapper_tau_series(A, alpha[j]), 1e-13);
    }
}

TEST(ThetaTau, CoefficientsDecayGeometrically)
{
    const double A = 0.3;
    const Eigen::VectorXd b = sine_coefficients(crapper::theta(A, 256), 21);
    // b_k = 4 A^k / k for odd k and zero for even k
    for (Index k = 1; k <= 21; ++k) {
        const double expected = k % 2 == 1 ? 4 * std::pow(A, double(k)) / double(k) : 0.0;
        EXPECT_NEAR(b[k - 1], expected, 1e-15);
    }
}

TEST(Curve, FlatAtZeroAmplitude)
{
    const Curve c = crapper::curve(0.0, 64);
    const Eigen::VectorXd alpha = grid_nodes<double>(64);
    for (Index j = 0; j < 64; ++j)
        EXPECT_LT(std::abs(c.z[j] - std::complex<double>(alpha[j], 0)), 1e-15);
}

TEST(Curve, TangentMatchesTrace)
{
    const double A = 0.4;
    const Index n = 256;
    const Curve c = crapper::curve(A, n);
    const auto [theta, tau] = crapper::theta_tau(A, n);
    for (Index j = 0; j < n; ++j)
        EXPECT_LT(std::abs(c.tangent[j] - std::exp(std::complex<double>(-tau[j], theta[j]))), 1e-12);
    // and the spectral derivative of the samples
    CVectorX<double> d1, d2;
    Interpolant::grid_derivatives(c, d1, d2);
    EXPECT_LT((d1 - c.tangent).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Curve, GraphBelowThreshold)
{
    const Curve c = crapper::curve(0.2, 512);
    for (Index j = 0; j + 1 < c.size(); ++j)
        EXPECT_LT(c.z[j].real(), c.z[j + 1].real());
    EXPECT_TRUE(geometry::is_graph(c));
}

TEST(Curve, CrossesTwiceBeyondSplash)
{
    const auto crossings = geometry::self_intersections(geometry::resample_curve(crapper::curve(0.46, 512), 4096));
    EXPECT_EQ(crossings.size(), 2u);
}

TEST(Curve, EqualsReconstructionUpToImaginaryConstant)
{
    for (double A : {0.1, 0.3, 0.45}) {
        const Index n = 1024;
        const CVectorX<double> d = curve_from_theta(crapper::theta(A, n)).z - crapper::curve(A, n).z;
        const std::complex<double> m = d.mean();
        EXPECT_LT(std::abs(m.real()), 1e-9) << A;
        EXPECT_LT((d.array() - m).abs().maxCoeff(), 1e-9) << A;
    }
}

TEST(CriticalConstants, Values)
{
    const auto& c = crapper::critical_constants();
    EXPECT_NEAR(c.a_graph, 0.41421356237309503, 1e-15);
    EXPECT_GE(c.a_splash, 0.4541);
    EXPECT_LE(c.a_splash, 0.4552);
    EXPECT_LT(c.a_graph, c.a_splash);
}

TEST(CriticalConstants, GraphThresholdByBisection)
{
    EXPECT_NEAR(crapper::find_graph_threshold(1024), std::sqrt(2.0) - 1.0, 1e-6);
}

TEST(Invariants, HilbertOfThetaIsTau)
{
    for (double A = 0.0; A <= 0.9 + 1e-12; A += 0.1) {
        const auto [theta, tau] = crapper::theta_tau(A, 1024);
        EXPECT_LT((hilbert(theta).values() - tau.values()).cwiseAbs().maxCoeff(), 1e-9) << A;
    }
}

// With H sin = cos the Crapper waves satisfy q theta' = sinh(H theta).
TEST(Invariants, PureCapillaryEquation)
{
    auto residual = [](double A, Index n) {
        const Field theta = crapper::theta(A, n);
        const Eigen::ArrayXd r = crapper::q_of_A(A) * derivative(theta).values().array()
                                 - hilbert(theta).values().array().sinh();
        return r.abs().maxCoeff();
    };
    for (double A : {0.1, 0.2, 0.3, 0.4})
        EXPECT_LT(residual(A, 512), 1e-9) << A;
    EXPECT_LT(residual(0.45, 4096), 1e-6);
}

TEST(Invariants, OppositeCapillarySignIsNotSatisfied)
{
    const double A = 0.3;
    const Field theta = crapper::theta(A, 512);
    const Eigen::ArrayXd r = crapper::q_of_A(A) * derivative(theta).values().array()
                             + hilbert(theta).values().array().sinh();
    EXPECT_GT(r.abs().maxCoeff(), 1.0);
}

TEST(Resolution, PolicyAndEstimate)
{
    EXPECT_EQ(crapper::resolution_for(0.0), 64);
    const Index n = crapper::resolution_for(0.4);
    EXPECT_LT(crapper::truncation_estimate(0.4, n), 1e-14);
    EXPECT_GE(crapper::truncation_estimate(0.4, n / 2), 1e-14);
    EXPECT_EQ(crapper::resolution_for(0.999), 8192);
    EXPECT_NEAR(crapper::truncation_estimate(0.5, 8), 0.0625, 1e-16);
}

TEST(Crapper, RejectsInvalidAmplitude)
{
    EXPECT_THROW(crapper::theta_tau(1.0, 16), std::domain_error);
    EXPECT_THROW(crapper::curve(1.5, 16), std::domain_error);
    EXPECT_THROW(crapper::curve(0.3, 24), std::invalid_argument);
}
