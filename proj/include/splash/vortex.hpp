#pragma once

// Birkhoff-Rott integral on periodic curves, the sheet operator
// A(z)w = 2 BR(z, w) . dz/dalpha, the vorticity solve and induced velocities.
//
// Complex numbers stand for plane vectors and x^perp = i x. The periodized
// kernel gives
//
//   BR(alpha) = conj( (1/(4 pi i)) PV int w(beta) cot((z(alpha) - z(beta))/2) dbeta ).
//
// The principal value is handled by subtracting (w/z')(beta) cot((alpha - beta)/2),
// whose integral is -2 pi H(w/z'), and summing the smooth remainder with the
// trapezoid rule. Its diagonal value is -w z''/z'^2.

#include "splash/curve.hpp"
#include "splash/spectral.hpp"

#include <complex>
#include <string>

namespace splash::vortex {

using Complex = std::complex<double>;

/// Smallest relative separation |e^{iz_i} - e^{iz_j}| / (|e^{iz_i}| + |e^{iz_j}|) accepted off the diagonal.
inline constexpr double contact_threshold = 1e-9;

/// Quadrature data for one curve. Requires exact tangent samples or computes them spectrally.
class SheetOperator {
public:
    explicit SheetOperator(const Curve& c);

    Index size() const { return n_; }
    const Curve& curve() const { return curve_; }
    const CVectorX<double>& tangent() const { return dz_; }
    const CVectorX<double>& second_derivative() const { return ddz_; }

    /// S with BR = conj(S).
    CVectorX<double> kernel_sum(const Eigen::VectorXd& omega) const;

    /// Complex matrix M with S = M w.
    Eigen::MatrixXcd kernel_matrix() const;

    /// Collocation matrix of A(z) on all n nodes.
    Eigen::MatrixXd operator_matrix() const;

    /// A(z) restricted to even fields, in the basis of node values 0..n/2.
    /// Only meaningful for symmetric curves.
    Eigen::MatrixXd even_operator_matrix() const;

private:
    Complex entry(Index i, Index j) const;
    Complex row_sum(Index i, const Eigen::VectorXd& omega) const;

    Curve curve_;
    Index n_ = 0;
    double h_ = 0;
    CVectorX<double> dz_, ddz_, expz_;
    Eigen::VectorXd cot_grid_;
    Eigen::VectorXd hilbert_column_;
};

/// Near-contact guard: throws std::domain_error naming the closest offending pair.
void check_contact(const Curve& c);

CVectorX<double> br_integral(const Curve& c, const Field& omega);

/// 2 BR . dz/dalpha.
Field sheet_operator_apply(const Curve& c, const Field& omega);

/// BR . (dz/dalpha)^perp.
Field normal_component(const Curve& c, const Field& omega);

struct OmegaSolution {
    Field omega;
    double residual = 0.0; ///< max |w + A w - 2|
    double rcond = 1.0;    ///< reciprocal condition estimate (dense path)
    bool iterative = false;
    int iterations = 0;
};

struct OmegaOptions {
    Index dense_limit = 4096;
    double rcond_min = 1e-13;
    double gmres_tol = 1e-13;
    int gmres_restart = 60;
    int gmres_max_iter = 2000;
};

/// Solves (1 + A(z)) w = 2.
OmegaSolution solve_omega_detailed(const Curve& c, const OmegaOptions& opts = {});
Field solve_omega(const Curve& c);

/// Largest |eigenvalue| of A(z) on even fields (all fields when the curve is not symmetric).
double spectral_radius(const Curve& c);

struct InterfaceVelocities {
    CVectorX<double> lower; ///< v2, the limit from below
    CVectorX<double> upper; ///< v1, the limit from above
};

InterfaceVelocities interface_velocities(const Curve& c, const Field& omega);

/// Induced velocity at points at least one mean grid spacing away from the curve.
CVectorX<double> velocity_field(const Curve& c, const Field& omega, const CVectorX<double>& points);

/// psi = (1/2 pi) int ln|2 sin((p - z)/2)| w dbeta at the same kind of points.
Eigen::VectorXd stream_function(const Curve& c, const Field& omega, const CVectorX<double>& points);

/// psi evaluated on the curve itself.
Eigen::VectorXd interface_stream_function(const Curve& c, const Field& omega);

/// Distance from p to the nearest node of the curve or of its +-shift translates.
double distance_to_nodes(const Curve& c, Complex p);

} // namespace splash::vortex
