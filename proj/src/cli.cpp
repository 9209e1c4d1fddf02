#include "splash/cli.hpp"

#include "splash/crapper.hpp"
#include "splash/geometry.hpp"
#include "splash/state_io.hpp"
#include "splash/system.hpp"
#include "splash/validation.hpp"
#include "splash/vortex.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace splash::cli {

namespace {

using nlohmann::json;

/// Bad flags or inputs; mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json residual_json(const system::ResidualNorms& r)
{
    return {{"G1", number(r.G1)}, {"G2", number(r.G2)}, {"normal", number(r.normal)}};
}

json report_json(const geometry::SplashReport& r)
{
    return {{"eta", number(r.eta)},
            {"arc_separation", number(r.arc_separation)},
            {"intersections", r.intersections},
            {"classification", geometry::to_string(r.classification)},
            {"graph", r.graph},
            {"interval_alpha", number(r.interval_alpha)},
            {"interval_beta", number(r.interval_beta)}};
}

json params_json(const system::WaveParams& p)
{
    return {{"A", p.A}, {"eps", p.eps}, {"g", p.g}, {"kappa", p.kappa}, {"q", p.q()}};
}

void check_grid_size(Index n)
{
    if (n < 16 || !is_power_of_two(n))
        throw UsageError("--n must be a power of two of at least 16");
}

void check_amplitude(double A)
{
    if (!(A >= 0.0 && A < 1.0))
        throw UsageError("--A must satisfy 0 <= A < 1");
}

void check_params(const system::WaveParams& p)
{
    check_amplitude(p.A);
    if (!(p.eps >= 0.0) || !std::isfinite(p.eps))
        throw UsageError("--eps must be finite and nonnegative");
    if (!std::isfinite(p.g))
        throw UsageError("--g must be finite");
}

geometry::ClassifyOptions classify_options(Index points)
{
    geometry::ClassifyOptions co;
    co.geometry_points = points;
    co.eta.points = points;
    return co;
}

void write_state(const std::string& path, const system::SolveState& s, const geometry::SplashReport& rep)
{
    io::write_curve_file(path, io::make_curve_file(s, rep));
}

system::SolveState resampled(system::SolveState s, Index n)
{
    if (s.size() == n)
        return s;
    s.theta = resample(s.theta, n);
    s.omega = resample(s.omega, n);
    return s;
}

struct Context {
    std::ostream& out;
    std::ostream& err;
};

int cmd_crapper(const Context& ctx, double A, Index n, Index points, const std::string& out_path)
{
    check_amplitude(A);
    if (n == 0)
        n = std::max<Index>(512, crapper::resolution_for(A));
    check_grid_size(n);
    system::SolveState s = system::crapper_state(A, n, false);
    const geometry::SplashReport rep = geometry::classify(s.curve(), classify_options(points));
    try {
        s.omega = vortex::solve_omega(s.curve());
        s.has_omega = true;
        s.residual = system::evaluate_residuals(s);
    } catch (const std::exception& e) {
        // a crossing curve has no vorticity; the geometry is still exported
        if (rep.classification != geometry::CurveClass::crossing)
            throw;
        ctx.err << "note: vorticity solve skipped on a self-intersecting curve: " << e.what() << "\n";
    }
    write_state(out_path, s, rep);
    json j = {{"command", "crapper"},
              {"n", n},
              {"params", params_json(s.params)},
              {"truncation_estimate", crapper::truncation_estimate(A, n)},
              {"report", report_json(rep)},
              {"residual", residual_json(s.residual)},
              {"omega", s.has_omega},
              {"out", out_path}};
    ctx.out << j.dump(2) << "\n";
    return ok;
}

struct SolveArgs {
    double A = 0.0, eps = 0.0, g = 0.0, tol = 1e-10, dA = 0.02;
    Index n = 512, modes = 0, points = 4096;
    std::string out, seed;
};

int cmd_solve(const Context& ctx, const SolveArgs& a)
{
    system::WaveParams target;
    target.A = a.A;
    target.eps = a.eps;
    target.g = a.g;
    check_params(target);
    check_grid_size(a.n);
    if (!(a.tol > 0))
        throw UsageError("--tol must be positive");
    if (!(a.dA > 0))
        throw UsageError("--dA must be positive");

    system::SolveState seed;
    if (!a.seed.empty()) {
        try {
            seed = resampled(io::state_from_file(io::read_curve_file(a.seed)), a.n);
        } catch (const io::FormatError& e) {
            throw UsageError(std::string("--seed: ") + e.what());
        }
    } else {
        seed = system::crapper_state(a.A, a.n);
    }

    system::ContinuationOptions co;
    co.solve.tol = a.tol;
    co.solve.modes = a.modes;
    co.solve.geometry_points = a.points;
    const system::ContinuationResult branch =
        system::continuation(system::default_schedule(seed.params, target, a.dA), seed, co);
    if (!branch.complete) {
        const system::SolveState& last = branch.branch.empty() ? seed : branch.branch.back();
        const std::string side = sidecar_path(a.out);
        write_state(side, last, geometry::classify(last.curve(), classify_options(a.points)));
        ctx.err << "error: " << branch.message << "\nlast good state (A=" << last.params.A
                << ", eps=" << last.params.eps << ", g=" << last.params.g << ") written to " << side << "\n";
        return numerical_failure;
    }
    const system::SolveState& s = branch.branch.back();
    const geometry::SplashReport rep = geometry::classify(s.curve(), classify_options(a.points));
    write_state(a.out, s, rep);
    int iterations = 0;
    for (const system::SolveState& b : branch.branch)
        iterations += int(b.log.size());
    json j = {{"command", "solve"},
              {"n", a.n},
              {"params", params_json(s.params)},
              {"kappa", s.kappa},
              {"converged", s.converged},
              {"residual", residual_json(s.residual)},
              {"continuation_steps", branch.branch.size()},
              {"bisected_steps", branch.substeps},
              {"newton_iterations", iterations},
              {"report", report_json(rep)},
              {"out", a.out}};
    ctx.out << j.dump(2) << "\n";
    return ok;
}

struct SplashArgs {
    double g = 0.0, eps = 0.0, tolA = 1e-9, lo = 0.44, hi = 0.47;
    std::optional<double> eta;
    Index n = 0, points = 4096;
    std::string out;
};

int cmd_splash_find(const Context& ctx, const SplashArgs& a)
{
    if (!(a.eps >= 0.0) || !std::isfinite(a.eps))
        throw UsageError("--eps must be finite and nonnegative");
    if (!std::isfinite(a.g))
        throw UsageError("--g must be finite");
    if (!(a.tolA > 0))
        throw UsageError("--tolA must be positive");
    if (a.n != 0)
        check_grid_size(a.n);

    if (a.eta) {
        if (!(*a.eta > 0 && *a.eta < 1))
            throw UsageError("--eta must lie in (0, 1)");
        system::EtaTargetOptions eo;
        if (a.n != 0)
            eo.n = a.n;
        eo.geometry_points = a.points;
        eo.tol_A = std::max(a.tolA, 1e-9);
        std::optional<system::EtaTargetResult> found;
        try {
            found = system::eta_target_search(*a.eta, a.eps, a.g, eo);
        } catch (const system::NewtonFailure& e) {
            const std::string side = sidecar_path(a.out);
            write_state(side, e.last(), geometry::classify(e.last().curve(), classify_options(a.points)));
            ctx.err << "last good state written to " << side << "\n";
            throw;
        }
        const system::EtaTargetResult& r = *found;
        write_state(a.out, r.state, r.report);
        json j = {{"command", "splash-find"},
                  {"mode", "eta-target"},
                  {"target_eta", *a.eta},
                  {"A", r.A},
                  {"crapper_eta", r.crapper_eta},
                  {"params", params_json(r.state.params)},
                  {"residual", residual_json(r.state.residual)},
                  {"report", report_json(r.report)},
                  {"out", a.out}};
        ctx.out << j.dump(2) << "\n";
        return ok;
    }
    if (a.eps != 0.0)
        throw UsageError("a splash endpoint requires --eps 0; with --eps > 0 pass --eta for the eta-splash target");
    if (!(0 <= a.lo && a.lo < a.hi && a.hi < 1))
        throw UsageError("--lo and --hi must satisfy 0 <= lo < hi < 1");
    system::SplashOptions so;
    if (a.n != 0)
        so.n = a.n;
    so.geometry_points = a.points;
    so.tol_A = a.tolA;
    const system::SplashResult r = system::splash_search(a.g, 0.0, {a.lo, a.hi}, so);
    system::SolveState s = r.state;
    try {
        s.omega = vortex::solve_omega(s.curve());
        s.has_omega = true;
        s.residual = system::evaluate_residuals(s);
    } catch (const std::exception& e) {
        ctx.err << "note: vorticity solve failed on the splash curve: " << e.what() << "\n";
    }
    write_state(a.out, s, r.report);
    json j = {{"command", "splash-find"},
              {"mode", "splash"},
              {"A", r.A},
              {"bracket", {r.bracket_lo, r.bracket_hi}},
              {"bisections", r.bisections},
              {"params", params_json(s.params)},
              {"kappa", s.kappa},
              {"residual", residual_json(s.residual)},
              {"omega_amplitude", number(r.omega_amplitude)},
              {"report", report_json(r.report)},
              {"out", a.out}};
    ctx.out << j.dump(2) << "\n";
    return ok;
}

int cmd_validate(const Context& ctx, const std::string& level_name)
{
    validation::Level level;
    try {
        level = validation::level_from_string(level_name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    int failed = 0;
    const auto results = validation::run(level, [&](const validation::CriterionResult& r) {
        validation::print_result(ctx.out, r);
        ctx.out.flush();
        failed += r.passed ? 0 : 1;
    });
    ctx.out << (failed == 0 ? "all " : "") << results.size() - std::size_t(failed) << "/" << results.size()
            << " checks passed\n";
    return failed == 0 ? ok : validation_failed;
}

double curve_distance(const Curve& fine, std::complex<double> p) { return vortex::distance_to_nodes(fine, p); }

int cmd_field(const Context& ctx, const std::string& state_path, const std::string& grid, const std::string& out_path)
{
    GridSpec spec;
    try {
        spec = parse_grid(grid);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    system::SolveState s;
    try {
        s = io::state_from_file(io::read_curve_file(state_path));
    } catch (const io::FormatError& e) {
        throw UsageError(std::string("--state: ") + e.what());
    }
    const Curve c = s.curve();
    const Field omega = s.has_omega ? s.omega : vortex::solve_omega(c);

    // exclusion radius: one spacing of the requested grid, and never less than
    // the node spacing the quadrature needs
    const Curve fine = geometry::resample_curve(c, 8 * c.size());
    double length = 0;
    for (Index j = 0; j + 1 < fine.size(); ++j)
        length += std::abs(fine.z[j + 1] - fine.z[j]);
    length += std::abs(fine.z[0] + fine.shift - fine.z[fine.size() - 1]);
    const double node_spacing = length / double(c.size());
    const double radius = std::max({spec.x.spacing(), spec.y.spacing(), 1.5 * node_spacing});

    CVectorX<double> points(Index(spec.x.count) * spec.y.count);
    Index m = 0;
    for (int iy = 0; iy < spec.y.count; ++iy) {
        for (int ix = 0; ix < spec.x.count; ++ix) {
            const std::complex<double> p(spec.x.at(ix), spec.y.at(iy));
            if (curve_distance(fine, p) >= radius)
                points[m++] = p;
        }
    }
    points.conservativeResize(m);
    const CVectorX<double> v = vortex::velocity_field(c, omega, points);
    const Eigen::VectorXd psi = vortex::stream_function(c, omega, points);
    std::vector<io::FieldSample> samples(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k)
        samples[std::size_t(k)] = {points[k].real(), points[k].imag(), v[k].real(), v[k].imag(), psi[k]};
    std::ofstream os(out_path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + out_path + "' for writing");
    io::write_field_csv(os, samples);
    json j = {{"command", "field"},
              {"points", m},
              {"excluded", Index(spec.x.count) * spec.y.count - m},
              {"exclusion_radius", radius},
              {"out", out_path}};
    ctx.out << j.dump(2) << "\n";
    return ok;
}

} // namespace

GridSpec parse_grid(const std::string& spec)
{
    auto axis = [](const std::string& text) {
        AxisRange r;
        std::istringstream is(text);
        std::string a, b, c;
        if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c) || a.empty() || b.empty()
            || c.empty())
            throw std::invalid_argument("grid axis '" + text + "' is not of the form from:to:count");
        try {
            std::size_t pa = 0, pb = 0, pc = 0;
            r.from = std::stod(a, &pa);
            r.to = std::stod(b, &pb);
            r.count = std::stoi(c, &pc);
            if (pa != a.size() || pb != b.size() || pc != c.size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument("grid axis '" + text + "' has a malformed number");
        }
        if (!std::isfinite(r.from) || !std::isfinite(r.to))
            throw std::invalid_argument("grid axis '" + text + "' has a non-finite bound");
        if (r.count < 1 || r.count > 100000)
            throw std::invalid_argument("grid axis '" + text + "' needs a count between 1 and 100000");
        return r;
    };
    const auto comma = spec.find(',');
    if (comma == std::string::npos || spec.find(',', comma + 1) != std::string::npos)
        throw std::invalid_argument("grid spec '" + spec + "' is not of the form x0:x1:nx,y0:y1:ny");
    return GridSpec{axis(spec.substr(0, comma)), axis(spec.substr(comma + 1))};
}

std::string sidecar_path(const std::string& out) { return out + ".last.json"; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stationary periodic capillary-gravity interfaces: Crapper waves, two-fluid solves and splash "
                 "searches",
                 "splash"};
    app.require_subcommand(1);
    const Context ctx{out, err};
    std::function<int()> action;

    double A = 0.0;
    Index n = 0, points = 4096;
    std::string out_path;
    auto* crapper = app.add_subcommand("crapper", "Export the exact Crapper wave at amplitude A");
    crapper->add_option("--A", A, "Amplitude parameter, 0 <= A < 1")->required();
    crapper->add_option("--n", n, "Grid size (power of two); default from the truncation estimate, at least 512");
    crapper->add_option("--geometry-points", points, "Resolution of the geometric diagnostics");
    crapper->add_option("--out", out_path, "Output curve file")->required();
    crapper->callback([&] { action = [&] { return cmd_crapper(ctx, A, n, points, out_path); }; });

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Continue from the Crapper seed to (A, eps, g) and solve");
    solve->add_option("--A", sa.A, "Amplitude parameter")->required();
    solve->add_option("--eps", sa.eps, "Density parameter 2 rho1 / (rho2 - rho1)");
    solve->add_option("--g", sa.g, "Gravity");
    solve->add_option("--n", sa.n, "Grid size (power of two)");
    solve->add_option("--tol", sa.tol, "Newton tolerance on |G1| + |G2|");
    solve->add_option("--modes", sa.modes, "Sine modes of theta (0: default)");
    solve->add_option("--dA", sa.dA, "Continuation step in A when seeding from a file");
    solve->add_option("--geometry-points", sa.points, "Resolution of the geometric diagnostics");
    solve->add_option("--seed", sa.seed, "Seed state file instead of the Crapper wave");
    solve->add_option("--out", sa.out, "Output curve file")->required();
    solve->callback([&] { action = [&] { return cmd_solve(ctx, sa); }; });

    SplashArgs pa;
    double eta = 0.0;
    auto* splash = app.add_subcommand("splash-find", "Locate the splash (eps = 0) or an eta-splash (--eta)");
    splash->add_option("--g", pa.g, "Gravity");
    splash->add_option("--eps", pa.eps, "Density parameter; eps > 0 requires --eta");
    splash->add_option("--tolA", pa.tolA, "Bisection tolerance in A");
    auto* eta_opt = splash->add_option("--eta", eta, "Target chord-arc value for the eta-splash search");
    splash->add_option("--n", pa.n, "Grid size (power of two)");
    splash->add_option("--lo", pa.lo, "Lower end of the bracket in A");
    splash->add_option("--hi", pa.hi, "Upper end of the bracket in A");
    splash->add_option("--geometry-points", pa.points, "Resolution of the geometric diagnostics");
    splash->add_option("--out", pa.out, "Output curve file")->required();
    splash->callback([&] {
        if (eta_opt->count() > 0)
            pa.eta = eta;
        action = [&] { return cmd_splash_find(ctx, pa); };
    });

    std::string level = "quick";
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
    validate->add_option("--level", level, "quick or full");
    validate->callback([&] { action = [&] { return cmd_validate(ctx, level); }; });

    std::string state_path, grid, field_out;
    auto* field = app.add_subcommand("field", "Velocity and stream function on a grid, as CSV");
    field->add_option("--state", state_path, "State file")->required();
    field->add_option("--grid", grid, "x0:x1:nx,y0:y1:ny")->required();
    field->add_option("--out", field_out, "Output CSV")->required();
    field->callback([&] { action = [&] { return cmd_field(ctx, state_path, grid, field_out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const system::NewtonFailure& e) {
        err << "error: " << e.what() << "\n";
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return numerical_failure;
    }
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace splash::cli
