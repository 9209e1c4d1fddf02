#pragma once

// Exact pure-capillary waves: f_A(w) = 2i log((1 + A e^{-iw}) / (1 - A e^{-iw})).

#include "splash/curve.hpp"
#include "splash/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace splash::crapper {

template <typename Scalar>
void check_amplitude(Scalar A)
{
    if (!(std::abs(A) < Scalar(1)))
        throw std::domain_error("crapper: amplitude parameter must satisfy |A| < 1, got " + std::to_string(double(A)));
}

/// Capillary coefficient q = (1 + A^2) / (1 - A^2).
template <typename Scalar>
Scalar q_of_A(Scalar A)
{
    check_amplitude(A);
    return (1 + A * A) / (1 - A * A);
}

/// Inverse of q_of_A on A >= 0.
template <typename Scalar>
Scalar A_of_q(Scalar q)
{
    if (!(q >= Scalar(1)))
        throw std::domain_error("crapper: q must be >= 1");
    return std::sqrt((q - 1) / (q + 1));
}

/// Boundary trace f_A(alpha) = theta + i tau at a single point.
template <typename Scalar>
std::complex<Scalar> boundary_trace(Scalar A, Scalar alpha)
{
    using Complex = std::complex<Scalar>;
    const Complex u = A * std::exp(Complex(0, -alpha));
    return Complex(0, 2) * std::log((Scalar(1) + u) / (Scalar(1) - u));
}

/// (theta_A, tau_A) on an n-point grid; theta is odd, tau even.
template <typename Scalar>
std::pair<PeriodicField<Scalar>, PeriodicField<Scalar>> theta_tau(Scalar A, Index n)
{
    check_amplitude(A);
    const VectorX<Scalar> alpha = grid_nodes<Scalar>(n);
    VectorX<Scalar> theta(n), tau(n);
    for (Index j = 0; j < n; ++j) {
        const auto f = boundary_trace(A, alpha[j]);
        theta[j] = f.real();
        tau[j] = f.imag();
    }
    return {PeriodicField<Scalar>::projected(theta, Parity::odd), PeriodicField<Scalar>::projected(tau, Parity::even)};
}

template <typename Scalar>
PeriodicField<Scalar> theta(Scalar A, Index n)
{
    return theta_tau(A, n).first;
}

/// z_A(alpha) = alpha + 4i/(1 + A e^{-i alpha}) - 4i with its exact tangent.
template <typename Scalar>
InterfaceCurve<Scalar> curve(Scalar A, Index n)
{
    using Complex = std::complex<Scalar>;
    check_amplitude(A);
    if (!is_power_of_two(n))
        throw std::invalid_argument("crapper::curve: n must be a power of two");
    const VectorX<Scalar> alpha = grid_nodes<Scalar>(n);
    InterfaceCurve<Scalar> c;
    c.z.resize(n);
    c.tangent.resize(n);
    for (Index j = 0; j < n; ++j) {
        const Complex u = A * std::exp(Complex(0, -alpha[j]));
        c.z[j] = alpha[j] + Complex(0, 4) / (Scalar(1) + u) - Complex(0, 4);
        const Complex r = (Scalar(1) - u) / (Scalar(1) + u);
        c.tangent[j] = r * r;
    }
    c.symmetric = true;
    return c;
}

/// Graph threshold sqrt(2) - 1 and the splash parameter A0.
struct CriticalConstants {
    double a_graph;
    double a_splash;
};

/// A0 is recomputed once per process by bisection on the self-intersection predicate.
const CriticalConstants& critical_constants();

/// Bisection for the first A at which z_A self-intersects.
double find_splash_parameter(Index n = 4096, double lo = 0.44, double hi = 0.47, double tol = 1e-9);

/// Bisection for the first A at which z_A stops being a graph.
double find_graph_threshold(Index n = 4096, double lo = 0.35, double hi = 0.45, double tol = 1e-9);

/// Smallest power of two with A^(n/2) < 1e-14, at least 64 and capped at 8192.
Index resolution_for(double A);

/// Truncation estimate A^(n/2) for a given grid.
double truncation_estimate(double A, Index n);

} // namespace splash::crapper
