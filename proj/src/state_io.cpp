#include "splash/state_io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace splash::io {

namespace {

using nlohmann::json;

json array_of(const Eigen::VectorXd& v)
{
    json a = json::array();
    for (Index j = 0; j < v.size(); ++j)
        a.push_back(v[j]);
    return a;
}

// JSON has no NaN or infinity; such values are written as null and read back as NaN
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j, const char* key)
{
    if (!j.contains(key))
        throw FormatError(std::string("curve file: missing field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number())
        throw FormatError(std::string("curve file: field '") + key + "' is not a number");
    return v.get<double>();
}

Eigen::VectorXd read_array(const json& j, const char* key, Index n)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw FormatError(std::string("curve file: missing array '") + key + "'");
    const json& a = j.at(key);
    if (Index(a.size()) != n)
        throw FormatError(std::string("curve file: array '") + key + "' has " + std::to_string(a.size())
                          + " entries, expected n = " + std::to_string(n));
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
        if (!a[i].is_number())
            throw FormatError(std::string("curve file: non-numeric entry in '") + key + "'");
        v[i] = a[i].get<double>();
    }
    return v;
}

Diagnostics diagnostics_of(const system::SolveState& s, const geometry::SplashReport& rep)
{
    Diagnostics d;
    d.eta = rep.eta;
    d.arc_separation = rep.arc_separation;
    d.intersections = rep.intersections;
    d.classification = rep.classification;
    d.residual = s.residual;
    d.converged = s.converged;
    return d;
}

bool close(double stored, double fresh, double abs_tol, double rel_tol)
{
    if (std::isnan(stored) || std::isnan(fresh))
        return std::isnan(stored) && std::isnan(fresh);
    return std::abs(stored - fresh) <= abs_tol + rel_tol * std::abs(stored);
}

} // namespace

CurveFile make_curve_file(const system::SolveState& state, const geometry::SplashReport& report)
{
    CurveFile f;
    const Index n = state.size();
    f.n = n;
    f.alpha = grid_nodes<double>(n);
    const Curve c = state.curve();
    f.x = c.z.real();
    f.y = c.z.imag();
    f.theta = state.theta.values();
    f.tau = hilbert(state.theta).values();
    if (state.has_omega)
        f.omega = state.omega.values();
    f.params = state.params;
    f.params.kappa = state.kappa;
    f.diagnostics = diagnostics_of(state, report);
    return f;
}

CurveFile make_curve_file(const system::SolveState& state, const geometry::ClassifyOptions& opts)
{
    return make_curve_file(state, geometry::classify(state.curve(), opts));
}

std::string to_json_string(const CurveFile& f)
{
    json j;
    j["schema"] = curve_schema;
    j["version"] = curve_schema_version;
    j["n"] = f.n;
    j["alpha"] = array_of(f.alpha);
    j["x"] = array_of(f.x);
    j["y"] = array_of(f.y);
    j["theta"] = array_of(f.theta);
    j["tau"] = array_of(f.tau);
    j["omega"] = f.omega ? array_of(*f.omega) : json(nullptr);
    j["params"] = {{"A", f.params.A},
                   {"eps", f.params.eps},
                   {"g", f.params.g},
                   {"kappa", f.params.kappa},
                   {"q", f.params.q()}};
    const Diagnostics& d = f.diagnostics;
    j["diagnostics"] = {{"eta", number(d.eta)},
                        {"arc_separation", number(d.arc_separation)},
                        {"intersections", d.intersections},
                        {"classification", geometry::to_string(d.classification)},
                        {"residual", {{"G1", number(d.residual.G1)},
                                      {"G2", number(d.residual.G2)},
                                      {"normal", number(d.residual.normal)}}},
                        {"converged", d.converged}};
    return j.dump(1) + "\n";
}

CurveFile from_json_string(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("curve file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("schema", "") != curve_schema)
        throw FormatError("curve file: schema is not '" + std::string(curve_schema) + "'");
    if (j.value("version", 0) != curve_schema_version)
        throw FormatError("curve file: unsupported schema version");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw FormatError("curve file: missing integer field 'n'");
    CurveFile f;
    f.n = j.at("n").get<Index>();
    if (!is_power_of_two(f.n))
        throw FormatError("curve file: n must be a positive power of two");
    f.alpha = read_array(j, "alpha", f.n);
    f.x = read_array(j, "x", f.n);
    f.y = read_array(j, "y", f.n);
    f.theta = read_array(j, "theta", f.n);
    f.tau = read_array(j, "tau", f.n);
    if (j.contains("omega") && !j.at("omega").is_null())
        f.omega = read_array(j, "omega", f.n);
    if (!j.contains("params") || !j.at("params").is_object())
        throw FormatError("curve file: missing 'params'");
    const json& p = j.at("params");
    f.params.A = read_number(p, "A");
    f.params.eps = read_number(p, "eps");
    f.params.g = read_number(p, "g");
    f.params.kappa = read_number(p, "kappa");
    try {
        f.params.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("curve file: ") + e.what());
    }
    if (j.contains("diagnostics") && j.at("diagnostics").is_object()) {
        const json& d = j.at("diagnostics");
        Diagnostics& out = f.diagnostics;
        out.eta = read_number(d, "eta");
        out.arc_separation = read_number(d, "arc_separation");
        out.intersections = d.value("intersections", 0);
        try {
            out.classification = geometry::curve_class_from_string(d.value("classification", "simple"));
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("curve file: ") + e.what());
        }
        if (d.contains("residual")) {
            const json& r = d.at("residual");
            out.residual.G1 = read_number(r, "G1");
            out.residual.G2 = read_number(r, "G2");
            out.residual.normal = read_number(r, "normal");
        }
        out.converged = d.value("converged", false);
    }
    return f;
}

void write_curve_file(const std::string& path, const CurveFile& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    os << to_json_string(f);
    if (!os)
        throw std::runtime_error("failed writing '" + path + "'");
}

CurveFile read_curve_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_json_string(ss.str());
}

system::SolveState state_from_file(const CurveFile& f)
{
    system::SolveState s;
    try {
        s.theta = Field(f.theta, Parity::odd);
        if (f.omega) {
            s.omega = Field(*f.omega, Parity::even);
            s.has_omega = true;
        } else {
            s.omega = Field::constant(f.n, 2.0);
            s.has_omega = false;
        }
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("curve file: ") + e.what());
    }
    s.kappa = f.params.kappa;
    s.params = f.params;
    s.residual = f.diagnostics.residual;
    s.converged = f.diagnostics.converged;
    return s;
}

Revalidation revalidate(const CurveFile& f, const geometry::ClassifyOptions& opts)
{
    Revalidation out;
    const system::SolveState s = state_from_file(f);
    system::SolveState fresh = s;
    fresh.residual = system::evaluate_residuals(s);
    out.recomputed = diagnostics_of(fresh, geometry::classify(s.curve(), opts));
    std::ostringstream why;
    const Diagnostics& a = f.diagnostics;
    const Diagnostics& b = out.recomputed;
    if (!close(a.eta, b.eta, 1e-9, 1e-6))
        why << "eta " << a.eta << " vs " << b.eta << "; ";
    if (a.intersections != b.intersections)
        why << "intersections " << a.intersections << " vs " << b.intersections << "; ";
    if (a.classification != b.classification)
        why << "classification " << geometry::to_string(a.classification) << " vs "
            << geometry::to_string(b.classification) << "; ";
    auto residual_ok = [](double stored, double now) { return now <= std::max(10 * stored, 1e-9); };
    if (!residual_ok(a.residual.G1, b.residual.G1))
        why << "G1 " << a.residual.G1 << " vs " << b.residual.G1 << "; ";
    if (!residual_ok(a.residual.G2, b.residual.G2))
        why << "G2 " << a.residual.G2 << " vs " << b.residual.G2 << "; ";
    if (!residual_ok(a.residual.normal, b.residual.normal))
        why << "normal " << a.residual.normal << " vs " << b.residual.normal << "; ";
    // the stored coordinates must be the curve of the stored angle
    const Curve c = s.curve();
    const double dx = (c.z.real() - f.x).cwiseAbs().maxCoeff();
    const double dy = (c.z.imag() - f.y).cwiseAbs().maxCoeff();
    if (dx > 1e-10 || dy > 1e-10)
        why << "coordinates differ from the curve of theta by " << std::max(dx, dy) << "; ";
    out.message = why.str();
    out.consistent = out.message.empty();
    return out;
}

void write_field_csv(std::ostream& os, const std::vector<FieldSample>& samples)
{
    os << "x,y,u,v,psi\n";
    os << std::setprecision(17);
    for (const FieldSample& s : samples)
        os << s.x << ',' << s.y << ',' << s.u << ',' << s.v << ',' << s.psi << '\n';
}

} // namespace splash::io
