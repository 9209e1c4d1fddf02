#pragma once

// CurveFile: the JSON interchange format for solved states, and the CSV
// writer for velocity/stream-function grids.
//
// Schema "splash-curve", version 1:
//   { "schema": "splash-curve", "version": 1, "n": n,
//     "alpha": [...], "x": [...], "y": [...], "theta": [...], "tau": [...],
//     "omega": [...] | null,
//     "params": { "A", "eps", "g", "kappa", "q" },
//     "diagnostics": { "eta", "arc_separation", "intersections", "classification",
//                      "residual": { "G1", "G2", "normal" }, "converged" } }
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every sample bit for bit.

#include "splash/geometry.hpp"
#include "splash/system.hpp"

#include <optional>
#include <ostream>
#include <string>

namespace splash::io {

inline constexpr const char* curve_schema = "splash-curve";
inline constexpr int curve_schema_version = 1;

struct Diagnostics {
    double eta = 1.0;
    double arc_separation = 0.0;
    int intersections = 0;
    geometry::CurveClass classification = geometry::CurveClass::simple;
    system::ResidualNorms residual;
    bool converged = false;
};

struct CurveFile {
    Index n = 0;
    Eigen::VectorXd alpha, x, y, theta, tau;
    std::optional<Eigen::VectorXd> omega;
    system::WaveParams params;
    Diagnostics diagnostics;
};

/// Thrown for malformed or inconsistent files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the file contents of a state; runs the geometric classification.
CurveFile make_curve_file(const system::SolveState& state, const geometry::ClassifyOptions& opts = {});

/// Same, with an already computed report.
CurveFile make_curve_file(const system::SolveState& state, const geometry::SplashReport& report);

std::string to_json_string(const CurveFile& f);
CurveFile from_json_string(const std::string& text);

void write_curve_file(const std::string& path, const CurveFile& f);
CurveFile read_curve_file(const std::string& path);

/// Rebuilds the solver state (theta, omega, kappa, params, stored residuals).
system::SolveState state_from_file(const CurveFile& f);

struct Revalidation {
    bool consistent = true;
    std::string message;
    Diagnostics recomputed;
};

/// Recomputes the diagnostics from the arrays and compares them with the stored block.
Revalidation revalidate(const CurveFile& f, const geometry::ClassifyOptions& opts = {});

struct FieldSample {
    double x = 0, y = 0, u = 0, v = 0, psi = 0;
};

/// CSV with header "x,y,u,v,psi".
void write_field_csv(std::ostream& os, const std::vector<FieldSample>& samples);

} // namespace splash::io
