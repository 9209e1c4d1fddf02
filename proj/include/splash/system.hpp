#pragma once

// Residuals of the stationary two-fluid problem, the kappa-augmented Newton
// solver, continuation in (A, eps, g) and the splash searches.
//
//   G1 = sinh(tau) - q (1 + eps/2) theta' + g e^{-tau} Im z - (eps/4) e^{tau} w (w - 2) - kappa e^{-tau}
//   G2 = w + A(z) w - 2
//
// with tau = H theta, z = I(theta) and q = (1 + A^2)/(1 - A^2). The capillary
// term carries a minus sign because H maps sin to cos: with that convention the
// Crapper waves satisfy q theta' = sinh(H theta). The remaining signs follow from
// Bernoulli's law in both fluids and the Laplace pressure jump.

#include "splash/curve.hpp"
#include "splash/geometry.hpp"
#include "splash/spectral.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splash::system {

struct WaveParams {
    double A = 0.0;
    double eps = 0.0;
    double g = 0.0;
    double kappa = 0.0;

    double q() const;
    void validate() const;
};

/// eps = 2 rho1 / (rho2 - rho1), q = sigma / rho2, A from q.
WaveParams params_from_physical(double rho1, double rho2, double sigma, double g);

struct ResidualNorms {
    double G1 = 0.0;
    double G2 = 0.0;
    double normal = 0.0;
};

struct NewtonRecord {
    int iteration = 0;
    double residual = 0.0; ///< |G1|_inf + |G2|_inf before the step
    double step = 0.0;     ///< max-norm of the accepted update
    double lambda = 0.0;   ///< accepted damping factor
    bool fresh_jacobian = false;
    int rejected = 0; ///< trial points rejected for self-crossing or contact
};

struct SolveState {
    Field theta;
    Field omega;
    double kappa = 0.0;
    WaveParams params;
    ResidualNorms residual;
    std::vector<NewtonRecord> log;
    bool converged = false;
    bool has_omega = true;

    Index size() const { return theta.size(); }
    Curve curve() const { return curve_from_theta(theta); }
};

Field residual_G1(const Field& theta, const Field& omega, const WaveParams& params);
Field residual_G2(const Field& theta, const Field& omega);
Field residual_normal(const Field& theta, const Field& omega);

/// Linearization of the pure-capillary part: Gamma u = cosh(H theta_base) H u - q u'.
Field gamma_apply(const Field& theta_base, const Field& u, double q);

/// <G1(theta; eps = g = kappa = 0), cos theta>, which vanishes for every odd theta.
double orthogonality_check(const Field& theta, double q = 1.0);

/// Unknown and residual ordering of the discrete system.
///   unknowns:  b_1..b_M (sine coefficients of theta), w at nodes 0..n/2, kappa
///   residuals: cosine coefficients 0..M of G1, G2 at nodes 0..n/2
/// The even node values of w are in one-to-one correspondence with its n/2+1
/// cosine coefficients, so the system stays square.
struct Layout {
    Index n = 0;
    Index modes = 0;

    Index omega_nodes() const { return n / 2 + 1; }
    Index omega_offset() const { return modes; }
    Index kappa_index() const { return modes + omega_nodes(); }
    Index size() const { return modes + omega_nodes() + 1; }
    Index g1_rows() const { return modes + 1; }
};

/// Default number of sine modes: n/4, capped at 128.
Index default_modes(Index n);

struct JacobianOptions {
    Index modes = 0; ///< 0 selects default_modes(n)
    double fd_step = 1e-7;
};

/// Dense Jacobian in the Layout ordering. At eps = 0 the G1 rows of the w
/// columns are exactly zero and are not evaluated.
Eigen::MatrixXd assemble_jacobian(const SolveState& state, const JacobianOptions& opts = {});
Layout layout_for(const SolveState& state, const JacobianOptions& opts = {});

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 25;
    Index modes = 0;
    double fd_step = 1e-7;
    int max_rejections = 8;
    bool solve_omega = true; ///< at eps = 0, follow the theta solve with the vorticity solve
    bool check_crossing = true;
    Index geometry_points = 4096;
};

/// Newton failure; carries the last iterate so callers can keep it.
class NewtonFailure : public std::runtime_error {
public:
    NewtonFailure(const std::string& what, SolveState last) : std::runtime_error(what), last_(std::move(last)) {}
    const SolveState& last() const { return last_; }

private:
    SolveState last_;
};

/// Crapper state at amplitude A: theta_A, its vorticity (optional) and kappa = 0.
SolveState crapper_state(double A, Index n, bool with_omega = true);

/// Damped Newton on the kappa-augmented system. Throws NewtonFailure on
/// divergence, line-search failure or repeated self-crossing of trial curves.
SolveState newton_solve(const SolveState& initial, const WaveParams& params, const SolveOptions& opts = {});

struct KappaCheck {
    double derivative = 0.0;    ///< finite-difference d f / d kappa
    double cauchy_integral = 0.0; ///< int e^{-tau_A} cos theta_A
    double inner_residual = 0.0;
};

/// Reduced function f(kappa) = <cos theta_A, G1(Theta(kappa); kappa)> where
/// Theta(kappa) solves the complemented equation Q G1 = 0; returns df/dkappa at 0.
KappaCheck kappa_derivative_check(double A, Index n = 512, double h = 1e-4);

struct ContinuationOptions {
    SolveOptions solve;
    int max_bisections = 6;
};

struct ContinuationResult {
    std::vector<SolveState> branch;
    bool complete = true;
    std::string message;
    int substeps = 0;
};

ContinuationResult continuation(const std::vector<WaveParams>& schedule, const SolveState& seed,
                                const ContinuationOptions& opts = {});

/// Linear schedule from `from` to `to` with the given number of steps.
std::vector<WaveParams> linear_schedule(const WaveParams& from, const WaveParams& to, int steps);

/// Schedule from `from` to `target`: A linearly in steps of at most dA, then
/// (eps, g) jointly by factors of 10 starting at 1e-6.
std::vector<WaveParams> default_schedule(const WaveParams& from, const WaveParams& target, double dA = 0.02);

struct SplashOptions {
    Index n = 512;
    Index modes = 0;
    Index geometry_points = 4096;
    double tol_A = 1e-9;
};

struct SplashResult {
    double A = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    SolveState state;
    geometry::SplashReport report;
    double omega_amplitude = 0.0; ///< max |w| on the returned curve (NaN if the vorticity solve fails)
    int bisections = 0;
};

/// Bisection in A of the crossing predicate for the eps = 0 solution at gravity g.
/// Returns the simple-side endpoint.
SplashResult splash_search(double g, double eps, std::pair<double, double> bracket, const SplashOptions& opts = {});

struct EtaTargetOptions {
    Index n = 1024;
    Index modes = 0;
    Index geometry_points = 4096;
    double tol_A = 1e-7;
    double lo = 0.40;
};

struct EtaTargetResult {
    double A = 0.0;
    double crapper_eta = 0.0; ///< eta of z_A from the brute-force oracle
    SolveState state;
    geometry::SplashReport report;
};

/// Finds A with eta(z_A) = eta (brute-force chord-arc oracle) and solves the
/// two-fluid problem there at (eps, g).
EtaTargetResult eta_target_search(double eta, double eps, double g, const EtaTargetOptions& opts = {});

/// Residual norms of a state (G2 and the normal residual only when omega is present).
ResidualNorms evaluate_residuals(const SolveState& state);

} // namespace splash::system
