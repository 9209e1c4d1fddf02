#pragma once

// Independent brute-force oracles used to cross-check the fast algorithms.

#include "splash/curve.hpp"

#include <complex>
#include <functional>

namespace splash::reference {

/// Chord-arc infimum by an exhaustive double loop over `points` arc-length
/// nodes followed by a golden-section polish of the best pair.
double brute_force_eta(const Curve& c, Index points = 4096, double min_separation = 0.25);

/// theta_A and tau_A from the odd-power series 4 sum A^k sin(k a)/k, 4 sum A^k cos(k a)/k.
double crapper_theta_series(double A, double alpha);
double crapper_tau_series(double A, double alpha);

using CurveFunction = std::function<std::complex<double>(double)>;

/// Birkhoff-Rott velocity at z(alpha) by a direct midpoint sum over `points`
/// nodes placed symmetrically about alpha (a principal-value rule).
std::complex<double> direct_br(const CurveFunction& z, const std::function<double(double)>& omega, double alpha,
                               long points);

/// Exact Crapper profile and its derivative at a single parameter value.
std::complex<double> crapper_z(double A, double alpha);
std::complex<double> crapper_dz(double A, double alpha);

} // namespace splash::reference
