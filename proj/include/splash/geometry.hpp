#pragma once

// Geometric diagnostics of interface curves: curvature, arc-length
// reparametrization, the chord-arc (eta-splash) functional, self-intersections
// and the opening map P(z) = sqrt(a - exp(-iz)).

#include "splash/curve.hpp"
#include "splash/spectral.hpp"

#include <complex>
#include <string>
#include <vector>

namespace splash::geometry {

enum class CurveClass { graph, simple, splash, crossing };

const char* to_string(CurveClass c);
CurveClass curve_class_from_string(const std::string& s);

struct SplashReport {
    /// Infimum of |z(s) - z(s')| / min(|s - s'|, 1) over pairs with |s - s'| >= min_separation.
    double eta = 1.0;
    /// Minimizing pair in arc length and in the curve's own parameter.
    double s_alpha = 0.0;
    double s_beta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double arc_separation = 0.0;
    /// Lengths (arc length) of the sublevel intervals around the minimizing pair.
    double interval_alpha = 0.0;
    double interval_beta = 0.0;
    double sublevel_threshold = 0.0;
    double min_separation = 0.25;
    double length = 0.0;
    int intersections = 0;
    bool graph = false;
    CurveClass classification = CurveClass::simple;
};

struct Crossing {
    double alpha = 0.0;
    /// Second parameter, unwrapped: the crossing is z(alpha) = z(beta) on the curve's covering.
    double beta = 0.0;
    std::complex<double> point;
    bool converged = false;
    double residual = 0.0;
};

/// K = exp(H theta) theta'.
Field curvature(const Field& theta);

/// Coordinate curvature Im(conj(z') z'') / |z'|^3 sampled at the nodes.
Eigen::VectorXd coordinate_curvature(const Curve& c);

/// Speed |dz/dt| at the nodes.
Eigen::VectorXd speed(const Curve& c);

/// Spectral resampling onto m uniform nodes (same t0, period, shift).
Curve resample_curve(const Curve& c, Index m);

struct ArclengthMap {
    Curve curve;                    ///< unit-speed curve, t0 = -length/2, period = length
    Eigen::VectorXd original_param; ///< parameter of the input curve at each new node
    double length = 0.0;            ///< length of one period
};

/// Resamples at m points equally spaced in arc length.
ArclengthMap arclength_map(const Curve& c, Index m);
Curve arclength_reparam(const Curve& c, Index m);

struct EtaOptions {
    Index points = 4096;
    double min_separation = 0.25;
    double sublevel_factor = 2.0;
};

SplashReport chord_arc_eta(const Curve& c, const EtaOptions& opts = {});

std::vector<Crossing> self_intersections(const Curve& c);

/// Minimum of Re dz/dt, refined between nodes.
double min_horizontal_speed(const Curve& c);
bool is_graph(const Curve& c);

struct ClassifyOptions {
    double splash_tol = 1e-6;
    Index geometry_points = 4096;
    EtaOptions eta;
};

SplashReport classify(const Curve& c, const ClassifyOptions& opts = {});

/// True iff the curve (upsampled to geometry_points) has a converged transverse crossing.
bool self_intersects(const Curve& c, Index geometry_points = 4096);

struct OpenedCurve {
    double a = 0.0;
    Curve image;              ///< closed curve (shift 0)
    bool simple = false;
    double min_real_part = 0.0;
    int axis_touches = 0;     ///< local minima of Re P below touch_tol
    std::vector<double> touch_params;
};

/// Applies P(z) = sqrt(a - exp(-iz)) over one period. Throws std::domain_error if the
/// interface crosses the branch cut.
OpenedCurve open_map(const Curve& c, double a, double touch_tol = 1e-6);

/// a = exp of the midpoint between the trough and the ordinate of the closest-approach pair.
double default_opening_constant(const Curve& c);

} // namespace splash::geometry
