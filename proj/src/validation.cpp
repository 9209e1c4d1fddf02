#include "splash/validation.hpp"

#include "splash/crapper.hpp"
#include "splash/geometry.hpp"
#include "splash/system.hpp"
#include "splash/vortex.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace splash::validation {

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok) { passed = passed && ok; }
};

std::string sci(double v)
{
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

std::string fix(double v, int digits = 6)
{
    std::ostringstream os;
    os << std::setprecision(digits) << std::fixed << v;
    return os.str();
}

Field pure_capillary_residual(double A, Index n)
{
    system::WaveParams p;
    p.A = A;
    return system::residual_G1(crapper::theta(A, n), Field::constant(n, 2.0), p);
}

void crapper_critical(Outcome& o)
{
    const double a0 = crapper::find_splash_parameter(4096);
    o.require(std::abs(a0 - 0.45467) <= 5e-4);
    o.detail << "A0 = " << fix(a0, 7) << " (target 0.45467 +- 5e-4)";
}

void graph_threshold(Outcome& o)
{
    const double a = crapper::find_graph_threshold(4096);
    o.require(std::abs(a - (std::sqrt(2.0) - 1.0)) <= 5e-4);
    o.detail << "flip at A = " << fix(a, 7) << ", sqrt(2)-1 = " << fix(std::sqrt(2.0) - 1.0, 7);
}

void capillary_residual(Outcome& o)
{
    double worst = 0, other_sign = 0;
    for (double A : {0.1, 0.2, 0.3, 0.4}) {
        const Index n = 512;
        worst = std::max(worst, pure_capillary_residual(A, n).max_abs());
        const Field theta = crapper::theta(A, n);
        const Eigen::ArrayXd plus = crapper::q_of_A(A) * derivative(theta).values().array()
                                    + hilbert(theta).values().array().sinh();
        other_sign = std::max(other_sign, plus.abs().maxCoeff());
    }
    o.require(worst < 1e-9);
    o.detail << "max |q theta' - sinh(H theta)| = " << sci(worst)
             << " over A in {0.1,0.2,0.3,0.4}; with H sin = cos the form q theta' + sinh(H theta) is "
             << sci(other_sign) << ", so the Crapper family satisfies q theta' = sinh(H theta)";
}

void cauchy_identity(Outcome& o)
{
    double crapper_err = 0, random_err = 0;
    for (double A : {0.1, 0.2, 0.3, 0.4})
        crapper_err = std::max(crapper_err, std::abs(cauchy_mean(crapper::theta(A, 512)) - 1.0));
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 100; ++i)
        random_err = std::max(random_err, std::abs(cauchy_mean(random_odd_field(rng, 256)) - 1.0));
    o.require(crapper_err < 1e-10 && random_err < 1e-10);
    o.detail << "Crapper " << sci(crapper_err) << ", 100 random odd fields " << sci(random_err);
}

void cokernel(Outcome& o)
{
    // the same 100 fields as the Cauchy identity check
    std::mt19937_64 rng(20240601);
    double random_max = 0;
    for (int i = 0; i < 100; ++i)
        random_max = std::max(random_max, std::abs(system::orthogonality_check(random_odd_field(rng, 256), 1.0)));
    rng.seed(20240602);
    double crapper_max = 0;
    for (double A : {0.1, 0.3, 0.44})
        crapper_max =
            std::max(crapper_max, std::abs(system::orthogonality_check(crapper::theta(A, 512), crapper::q_of_A(A))));
    const double A = 0.3;
    const Index n = 512;
    const Field theta_a = crapper::theta(A, n);
    const Field c = Field::projected(theta_a.values().array().cos().matrix(), Parity::even);
    double gamma_max = 0;
    for (int i = 0; i < 50; ++i) {
        const Field u = random_odd_field(rng, n, 32);
        gamma_max = std::max(gamma_max, std::abs(inner(system::gamma_apply(theta_a, u, crapper::q_of_A(A)), c)));
    }
    o.require(random_max < 1e-9 && crapper_max < 1e-9 && gamma_max < 1e-9);
    o.detail << "<G1, cos theta>: random " << sci(random_max) << ", Crapper " << sci(crapper_max)
             << "; <Gamma u, cos theta_A> over 50 u: " << sci(gamma_max);
}

void reduced_derivative(Outcome& o)
{
    double worst = 0;
    for (double A : {0.1, 0.3, 0.44}) {
        const system::KappaCheck k = system::kappa_derivative_check(A);
        const double rel = std::abs(std::abs(k.derivative) / (2 * pi) - 1);
        worst = std::max(worst, rel);
        o.detail << "A=" << A << ": " << std::setprecision(10) << k.derivative << "; ";
    }
    o.require(worst < 1e-5);
    o.detail << "max | |df/dkappa|/(2 pi) - 1 | = " << sci(worst);
}

void sheet_spectrum(Outcome& o)
{
    double prev = -1;
    bool increasing = true, below_one = true;
    for (double A : {0.1, 0.2, 0.3, 0.4, 0.45}) {
        const double r = vortex::spectral_radius(crapper::curve(A, 1024));
        increasing = increasing && r > prev;
        below_one = below_one && r < 1.0;
        prev = r;
        o.detail << "A=" << A << ": " << fix(r, 6) << "; ";
    }
    o.require(increasing && below_one);
    o.detail << (increasing ? "strictly increasing" : "NOT increasing") << (below_one ? ", all < 1" : ", some >= 1");
}

void vorticity_solve(Outcome& o)
{
    double res = 0, normal = 0;
    for (double A : {0.1, 0.2, 0.3, 0.4, 0.44}) {
        const Curve c = crapper::curve(A, 512);
        const vortex::OmegaSolution s = vortex::solve_omega_detailed(c);
        res = std::max(res, s.residual);
        normal = std::max(normal, vortex::normal_component(c, s.omega).max_abs());
    }
    o.require(res < 1e-10 && normal < 1e-8);
    o.detail << "max |w + A w - 2| = " << sci(res) << ", max |BR . z'^perp| = " << sci(normal);
}

void perturbed_existence(Outcome& o)
{
    const double A = 0.44;
    const Index n = 512;
    const system::SolveState seed = system::crapper_state(A, n);
    const Field theta_a = seed.theta;
    auto distance = [&](double scale) {
        system::WaveParams p;
        p.A = A;
        p.eps = scale;
        p.g = scale;
        const system::SolveState s = system::newton_solve(seed, p);
        return std::make_pair(s, (s.theta.values() - theta_a.values()).cwiseAbs().maxCoeff());
    };
    const auto [s1, d1] = distance(1e-3);
    const auto [s2, d2] = distance(5e-4);
    const double ratio = d2 / d1;
    o.require(s1.residual.G1 < 1e-10 && s1.residual.G2 < 1e-10);
    o.require(std::abs(ratio - 0.5) <= 0.05);
    o.detail << "(0.44, 1e-3, 1e-3): G1 " << sci(s1.residual.G1) << ", G2 " << sci(s1.residual.G2) << ", normal "
             << sci(s1.residual.normal) << ", kappa " << sci(s1.kappa) << ", " << s1.log.size()
             << " iterations; |theta - theta_A| " << sci(d1) << " -> " << sci(d2) << " (ratio " << fix(ratio, 4)
             << ")";
}

void splash_water_wave(Outcome& o)
{
    const std::pair<double, double> bracket{0.44, 0.47};
    const system::SplashResult r1 = system::splash_search(1e-3, 0.0, bracket);
    const system::SplashResult r2 = system::splash_search(5e-4, 0.0, bracket);
    const system::SplashResult r3 = system::splash_search(2.5e-4, 0.0, bracket);
    const double d1 = std::abs(r1.A - r2.A), d2 = std::abs(r2.A - r3.A);
    o.require(r1.report.eta < 1e-5 && r1.report.arc_separation > 1.0);
    o.require(d2 < d1);
    o.detail << "A*(1e-3) = " << fix(r1.A, 9) << ", eta " << sci(r1.report.eta) << ", arc separation "
             << fix(r1.report.arc_separation, 4) << ", class " << geometry::to_string(r1.report.classification)
             << "; |A*(g)-A*(g/2)| " << sci(d1) << " -> " << sci(d2);
}

void eta_splash(Outcome& o)
{
    const system::EtaTargetResult r = system::eta_target_search(0.05, 1e-3, 1e-3);
    o.require(std::abs(r.report.eta - 0.05) < 0.01 && r.state.converged);
    o.detail << "A = " << fix(r.A, 8) << ", eta(z_A) = " << fix(r.crapper_eta, 6) << ", solved eta = "
             << fix(r.report.eta, 6) << ", G1 " << sci(r.state.residual.G1) << ", G2 " << sci(r.state.residual.G2);
}

void quadrature_convergence(Outcome& o)
{
    const double A = 0.3;
    auto omega = [](Index n) {
        return Field::sample(n, [](double a) { return 1.0 + 0.5 * std::cos(a) + 0.25 * std::cos(2 * a); },
                             Parity::even);
    };
    double worst = 0;
    for (Index n : {512, 1024}) {
        const CVectorX<double> coarse = vortex::br_integral(crapper::curve(A, n), omega(n));
        const CVectorX<double> fine = vortex::br_integral(crapper::curve(A, 2 * n), omega(2 * n));
        double diff = 0;
        for (Index j = 0; j < n; ++j)
            diff = std::max(diff, std::abs(coarse[j] - fine[2 * j]));
        worst = std::max(worst, diff);
        o.detail << "n=" << n << " vs " << 2 * n << ": " << sci(diff) << "; ";
    }
    o.require(worst < 1e-10);
}

struct Criterion {
    const char* name;
    double budget;
    void (*body)(Outcome&);
};

const Criterion& criterion(int id)
{
    static const Criterion table[criterion_count] = {
        {"Crapper critical parameter", 60, crapper_critical},
        {"graph threshold", 10, graph_threshold},
        {"pure-capillary residual", 5, capillary_residual},
        {"Cauchy identity", 10, cauchy_identity},
        {"cokernel orthogonality", 30, cokernel},
        {"reduced derivative in kappa", 120, reduced_derivative},
        {"sheet operator spectrum", 300, sheet_spectrum},
        {"vorticity solve consistency", 120, vorticity_solve},
        {"perturbed existence", 300, perturbed_existence},
        {"splash water wave", 900, splash_water_wave},
        {"two-fluid eta-splash", 600, eta_splash},
        {"quadrature convergence", 60, quadrature_convergence},
    };
    if (id < 1 || id > criterion_count)
        throw std::out_of_range("validation: no criterion " + std::to_string(id));
    return table[id - 1];
}

} // namespace

Level level_from_string(const std::string& s)
{
    if (s == "quick")
        return Level::quick;
    if (s == "full")
        return Level::full;
    throw std::invalid_argument("unknown validation level '" + s + "' (expected quick or full)");
}

std::vector<int> criteria_for(Level level)
{
    if (level == Level::quick)
        return {2, 3, 4, 5, 12};
    std::vector<int> all;
    for (int i = 1; i <= criterion_count; ++i)
        all.push_back(i);
    return all;
}

CriterionResult run_criterion(int id)
{
    const Criterion& c = criterion(id);
    CriterionResult r;
    r.id = id;
    r.name = c.name;
    r.budget = c.budget;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        c.body(o);
        r.detail = o.detail.str();
        r.passed = o.passed;
    } catch (const std::exception& e) {
        r.detail = o.detail.str() + "error: " + e.what();
        r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget) {
        r.passed = false;
        r.detail += "; exceeded the " + fix(r.budget, 0) + " s budget";
    }
    return r;
}

std::vector<CriterionResult> run(Level level, const std::function<void(const CriterionResult&)>& on_result)
{
    std::vector<CriterionResult> out;
    for (int id : criteria_for(level)) {
        out.push_back(run_criterion(id));
        if (on_result)
            on_result(out.back());
    }
    return out;
}

void print_result(std::ostream& os, const CriterionResult& r)
{
    os << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.name << ": " << r.detail << " ("
       << fix(r.seconds, 2) << " s)\n";
}

Field random_odd_field(std::mt19937_64& rng, Index n, Index modes)
{
    if (modes >= n / 2)
        throw std::invalid_argument("random_odd_field: too many modes for the grid");
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd b(modes);
    for (Index k = 0; k < modes; ++k)
        b[k] = unit(rng) * std::ldexp(1.0, -int(k + 1));
    return from_sine_coefficients<double>(b, n);
}

} // namespace splash::validation
