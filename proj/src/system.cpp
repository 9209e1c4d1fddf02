#include "splash/system.hpp"

#include "splash/crapper.hpp"
#include "splash/parallel.hpp"
#include "splash/reference.hpp"
#include "splash/vortex.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

namespace splash::system {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Eigen::VectorXd even_expand(const Eigen::VectorXd& half, Index n)
{
    Eigen::VectorXd full(n);
    for (Index j = 0; j <= n / 2; ++j) {
        full[j] = half[j];
        if (j > 0 && j < n / 2)
            full[n - j] = half[j];
    }
    return full;
}

Eigen::VectorXd g1_grid(const Field& theta, const Field& tau, const Curve& z, const Eigen::VectorXd& omega,
                        const WaveParams& p, double kappa)
{
    const double q = p.q();
    const Field dtheta = derivative(theta);
    const Eigen::ArrayXd t = tau.values().array();
    const Eigen::ArrayXd w = omega.array();
    return t.sinh() - q * (1 + p.eps / 2) * dtheta.values().array() + p.g * (-t).exp() * z.z.imag().array()
           - (p.eps / 4) * t.exp() * w * (w - 2) - kappa * (-t).exp();
}

/// The discrete system of one Newton solve. With `full` the unknowns follow
/// Layout; otherwise they are (b_1..b_M, kappa) against the G1 rows alone.
class Discretization {
public:
    struct Eval {
        Eigen::VectorXd r;
        double g1_inf = 0;
        double g2_inf = 0;
        Field theta, tau, omega;
        Curve curve;
        double kappa = 0;
    };

    Discretization(Index n, Index modes, const WaveParams& p, bool full, Field fixed_omega)
        : n_(n), modes_(modes), params_(p), full_(full), fixed_omega_(std::move(fixed_omega))
    {
        if (modes_ < 1 || modes_ >= n_ / 2)
            throw std::invalid_argument("newton: mode count must lie in [1, n/2)");
    }

    Index unknowns() const { return full_ ? Layout{n_, modes_}.size() : modes_ + 1; }
    Index kappa_index() const { return unknowns() - 1; }

    Eigen::VectorXd pack(const Field& theta, const Field& omega, double kappa) const
    {
        Eigen::VectorXd x(unknowns());
        x.head(modes_) = sine_coefficients(resample(theta, n_), modes_);
        if (full_)
            x.segment(modes_, n_ / 2 + 1) = omega.values().head(n_ / 2 + 1);
        x[kappa_index()] = kappa;
        return x;
    }

    Eval evaluate(const Eigen::VectorXd& x) const
    {
        Eval e;
        e.theta = from_sine_coefficients<double>(x.head(modes_), n_);
        e.tau = hilbert(e.theta);
        e.curve = curve_from_theta(e.theta);
        e.omega = full_ ? Field(even_expand(x.segment(modes_, n_ / 2 + 1), n_), Parity::even) : fixed_omega_;
        e.kappa = x[kappa_index()];
        const Eigen::VectorXd g1 = g1_grid(e.theta, e.tau, e.curve, e.omega.values(), params_, e.kappa);
        e.g1_inf = g1.cwiseAbs().maxCoeff();
        e.r.resize(full_ ? modes_ + 1 + n_ / 2 + 1 : modes_ + 1);
        e.r.head(modes_ + 1) = cosine_coefficients(Field::projected(g1, Parity::even), modes_);
        if (full_) {
            const vortex::SheetOperator op(e.curve);
            const CVectorX<double> s = op.kernel_sum(e.omega.values());
            const Eigen::VectorXd g2 =
                e.omega.values().array() + 2 * (s.array() * op.tangent().array()).real() - 2.0;
            e.g2_inf = g2.cwiseAbs().maxCoeff();
            e.r.tail(n_ / 2 + 1) = g2.head(n_ / 2 + 1);
        }
        return e;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eval& at, double fd_step) const
    {
        const Index N = unknowns();
        const Index rows = at.r.size();
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, N);
        parallel_for(std::size_t(modes_), [&](std::size_t kk) {
            const Index k = Index(kk);
            Eigen::VectorXd xp = x;
            const double h = fd_step * (1 + std::abs(x[k]));
            xp[k] += h;
            J.col(k) = (evaluate(xp).r - at.r) / h;
        });
        const Eigen::ArrayXd t = at.tau.values().array();
        J.col(kappa_index()).head(modes_ + 1) =
            cosine_coefficients(Field::projected(Eigen::VectorXd(-(-t).exp()), Parity::even), modes_);
        if (full_) {
            const Index half = n_ / 2;
            // G1 depends on w only through the two-fluid term
            if (params_.eps != 0.0) {
                const Eigen::ArrayXd w = at.omega.values().array();
                const Eigen::VectorXd d = -(params_.eps / 4) * t.exp() * (2 * w - 2);
                const Eigen::VectorXd alpha = grid_nodes<double>(n_);
                for (Index jc = 0; jc <= half; ++jc) {
                    for (Index k = 0; k <= modes_; ++k) {
                        const double wk = (k == 0 ? 1.0 : 2.0) / double(n_);
                        double v = d[jc] * std::cos(double(k) * alpha[jc]);
                        if (jc > 0 && jc < half)
                            v += d[n_ - jc] * std::cos(double(k) * alpha[n_ - jc]);
                        J(k, modes_ + jc) = wk * v;
                    }
                }
            }
            const vortex::SheetOperator op(at.curve);
            Eigen::MatrixXd a = op.even_operator_matrix();
            a.diagonal().array() += 1.0;
            J.block(modes_ + 1, modes_, half + 1, half + 1) = a;
        }
        return J;
    }

    bool full() const { return full_; }
    Index modes() const { return modes_; }

private:
    Index n_;
    Index modes_;
    WaveParams params_;
    bool full_;
    Field fixed_omega_;
};

WaveParams lerp(const WaveParams& a, const WaveParams& b, double t)
{
    WaveParams p;
    p.A = a.A + t * (b.A - a.A);
    p.eps = a.eps + t * (b.eps - a.eps);
    p.g = a.g + t * (b.g - a.g);
    p.kappa = b.kappa;
    return p;
}

} // namespace

double WaveParams::q() const { return crapper::q_of_A(A); }

void WaveParams::validate() const
{
    if (!(A >= 0.0 && A < 1.0))
        throw std::invalid_argument("WaveParams: A must satisfy 0 <= A < 1");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("WaveParams: eps must be finite and nonnegative");
    if (!std::isfinite(g) || !std::isfinite(kappa))
        throw std::invalid_argument("WaveParams: g and kappa must be finite");
}

WaveParams params_from_physical(double rho1, double rho2, double sigma, double g)
{
    if (!(rho2 > 0))
        throw std::invalid_argument("params_from_physical: rho2 must be positive");
    if (!(rho1 >= 0))
        throw std::invalid_argument("params_from_physical: rho1 must be nonnegative");
    if (!(rho1 < rho2))
        throw std::invalid_argument("params_from_physical: rho1 must be smaller than rho2");
    if (!(sigma > 0))
        throw std::invalid_argument("params_from_physical: sigma must be positive");
    const double q = sigma / rho2;
    if (q < 1.0)
        throw std::domain_error("params_from_physical: q = sigma/rho2 below 1 has no Crapper parameter");
    WaveParams p;
    p.eps = 2 * rho1 / (rho2 - rho1);
    p.A = crapper::A_of_q(q);
    p.g = g;
    return p;
}

Field residual_G1(const Field& theta, const Field& omega, const WaveParams& params)
{
    if (theta.parity() != Parity::odd)
        throw std::invalid_argument("residual_G1: theta must be odd");
    if (omega.size() != theta.size())
        throw std::invalid_argument("residual_G1: theta and omega sizes differ");
    const Field tau = hilbert(theta);
    const Curve z = curve_from_theta(theta);
    return Field::projected(g1_grid(theta, tau, z, omega.values(), params, params.kappa),
                            omega.parity() == Parity::even ? Parity::even : Parity::none);
}

Field residual_G2(const Field& theta, const Field& omega)
{
    const Curve z = curve_from_theta(theta);
    const Field a = vortex::sheet_operator_apply(z, omega);
    return Field::projected(omega.values() + a.values() - Eigen::VectorXd::Constant(omega.size(), 2.0), a.parity());
}

Field residual_normal(const Field& theta, const Field& omega)
{
    return vortex::normal_component(curve_from_theta(theta), omega);
}

Field gamma_apply(const Field& theta_base, const Field& u, double q)
{
    if (u.parity() != Parity::odd)
        throw std::invalid_argument("gamma_apply: u must be odd");
    const Field tau = hilbert(theta_base);
    const Field du = derivative(u);
    const Field hu = hilbert(u);
    Eigen::VectorXd v = tau.values().array().cosh() * hu.values().array() - q * du.values().array();
    return Field::projected(v, Parity::even);
}

double orthogonality_check(const Field& theta, double q)
{
    const Field tau = hilbert(theta);
    const Field dtheta = derivative(theta);
    const Eigen::VectorXd g1 = tau.values().array().sinh() - q * dtheta.values().array();
    const Eigen::VectorXd c = theta.values().array().cos();
    return inner(Field::projected(g1, Parity::even), Field::projected(c, Parity::even));
}

Index default_modes(Index n) { return std::min<Index>(n / 4, 128); }

Layout layout_for(const SolveState& state, const JacobianOptions& opts)
{
    return Layout{state.size(), opts.modes > 0 ? opts.modes : default_modes(state.size())};
}

Eigen::MatrixXd assemble_jacobian(const SolveState& state, const JacobianOptions& opts)
{
    if (!state.has_omega)
        throw std::invalid_argument("assemble_jacobian: state has no vorticity");
    const Layout layout = layout_for(state, opts);
    WaveParams p = state.params;
    p.kappa = state.kappa;
    const Discretization disc(layout.n, layout.modes, p, true, state.omega);
    const Eigen::VectorXd x = disc.pack(state.theta, state.omega, state.kappa);
    return disc.jacobian(x, disc.evaluate(x), opts.fd_step);
}

ResidualNorms evaluate_residuals(const SolveState& state)
{
    ResidualNorms r;
    WaveParams p = state.params;
    p.kappa = state.kappa;
    const Field omega = state.has_omega ? state.omega : Field::constant(state.size(), 2.0);
    r.G1 = residual_G1(state.theta, omega, p).max_abs();
    if (state.has_omega) {
        r.G2 = residual_G2(state.theta, state.omega).max_abs();
        r.normal = residual_normal(state.theta, state.omega).max_abs();
    }
    return r;
}

SolveState crapper_state(double A, Index n, bool with_omega)
{
    SolveState s;
    s.theta = crapper::theta(A, n);
    s.params.A = A;
    s.kappa = 0;
    s.has_omega = with_omega;
    s.omega = with_omega ? vortex::solve_omega(s.curve()) : Field::constant(n, 2.0);
    s.residual = evaluate_residuals(s);
    s.converged = true;
    return s;
}

SolveState newton_solve(const SolveState& initial, const WaveParams& params, const SolveOptions& opts)
{
    params.validate();
    const Index n = initial.size();
    const Index modes = opts.modes > 0 ? opts.modes : default_modes(n);
    const bool full = params.eps > 0.0;

    Field omega0 = Field::constant(n, 2.0);
    if (full) {
        if (initial.has_omega && initial.omega.size() == n && initial.omega.parity() == Parity::even)
            omega0 = initial.omega;
        else
            omega0 = vortex::solve_omega(initial.curve());
    }
    const Discretization disc(n, modes, params, full, omega0);
    Eigen::VectorXd x = disc.pack(initial.theta, omega0, initial.kappa);

    SolveState out;
    out.params = params;
    auto snapshot = [&](const Discretization::Eval& e) {
        SolveState s = out;
        s.theta = e.theta;
        s.omega = e.omega;
        s.kappa = e.kappa;
        s.params.kappa = e.kappa;
        s.has_omega = full;
        s.residual.G1 = e.g1_inf;
        s.residual.G2 = e.g2_inf;
        return s;
    };

    Discretization::Eval ev = disc.evaluate(x);
    std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
    bool refresh = true;
    int rejections = 0;
    for (int it = 0;; ++it) {
        const double total = ev.g1_inf + ev.g2_inf;
        if (total < opts.tol)
            break;
        if (it >= opts.max_iter)
            throw NewtonFailure("newton: no convergence in " + std::to_string(opts.max_iter)
                                    + " iterations (residual " + fmt(total) + ")",
                                snapshot(ev));
        NewtonRecord rec;
        rec.iteration = it;
        rec.residual = total;
        bool accepted = false;
        while (!accepted) {
            if (refresh || !lu) {
                lu.emplace(disc.jacobian(x, ev, opts.fd_step));
                refresh = false;
                rec.fresh_jacobian = true;
            }
            const Eigen::VectorXd p = -lu->solve(ev.r);
            if (!p.allFinite())
                throw NewtonFailure("newton: singular Jacobian", snapshot(ev));
            const double rnorm = ev.r.norm();
            double lambda = 1.0;
            while (lambda >= 1e-4) {
                const Eigen::VectorXd xt = x + lambda * p;
                std::optional<Discretization::Eval> trial;
                try {
                    trial = disc.evaluate(xt);
                    if (full && opts.check_crossing && geometry::self_intersects(trial->curve, opts.geometry_points))
                        trial.reset();
                } catch (const std::domain_error&) {
                    trial.reset();
                }
                if (!trial) {
                    ++rec.rejected;
                    if (++rejections > opts.max_rejections)
                        throw NewtonFailure("newton: trial interface self-intersects; "
                                                + std::to_string(rejections) + " steps rejected",
                                            snapshot(ev));
                    lambda *= 0.5;
                    continue;
                }
                const double tnorm = trial->r.norm();
                if (tnorm <= (1 - 1e-4 * lambda) * rnorm) {
                    const double step = (lambda * p).cwiseAbs().maxCoeff();
                    refresh = tnorm > 0.25 * rnorm;
                    x = xt;
                    ev = std::move(*trial);
                    rec.lambda = lambda;
                    rec.step = step;
                    accepted = true;
                    if (step < 1e-15 * (1 + x.cwiseAbs().maxCoeff()) && ev.g1_inf + ev.g2_inf >= opts.tol)
                        throw NewtonFailure("newton: stalled at residual " + fmt(ev.g1_inf + ev.g2_inf)
                                                + " (resolution floor above tolerance)",
                                            snapshot(ev));
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) {
                if (rec.fresh_jacobian)
                    throw NewtonFailure("newton: line search failed at residual " + fmt(total), snapshot(ev));
                refresh = true;
            }
        }
        out.log.push_back(rec);
    }

    SolveState s = snapshot(ev);
    s.log = out.log;
    if (!full) {
        if (opts.solve_omega) {
            try {
                s.omega = vortex::solve_omega(s.curve());
                s.has_omega = true;
            } catch (const std::exception& e) {
                throw NewtonFailure(std::string("newton: vorticity solve failed: ") + e.what(), s);
            }
        } else {
            s.omega = Field::constant(n, 2.0);
            s.has_omega = false;
        }
    }
    s.residual = evaluate_residuals(s);
    s.converged = true;
    return s;
}

KappaCheck kappa_derivative_check(double A, Index n, double h)
{
    const Index modes = default_modes(n);
    const Field theta_a = crapper::theta(A, n);
    const Field c = Field::projected(theta_a.values().array().cos().matrix(), Parity::even);
    const double cc = inner(c, c);
    WaveParams base;
    base.A = A;
    const Field two = Field::constant(n, 2.0);

    // G1 with the cos(theta_A) component removed, in cosine coefficients 0..M
    auto complemented = [&](const Eigen::VectorXd& b, double kappa, double* f) {
        WaveParams p = base;
        p.kappa = kappa;
        const Field g1 = residual_G1(from_sine_coefficients<double>(b, n), two, p);
        const double proj = inner(g1, c) / cc;
        if (f)
            *f = proj * cc;
        const Eigen::VectorXd q = g1.values() - proj * c.values();
        return Eigen::VectorXd(cosine_coefficients(Field::projected(q, Parity::even), modes));
    };

    KappaCheck out;
    auto reduced = [&](double kappa) {
        Eigen::VectorXd b = sine_coefficients(theta_a, modes);
        for (int it = 0; it < 30; ++it) {
            const Eigen::VectorXd r = complemented(b, kappa, nullptr);
            Eigen::MatrixXd J(r.size(), modes);
            parallel_for(std::size_t(modes), [&](std::size_t kk) {
                const Index k = Index(kk);
                Eigen::VectorXd bp = b;
                const double step = 1e-7 * (1 + std::abs(b[k]));
                bp[k] += step;
                J.col(k) = (complemented(bp, kappa, nullptr) - r) / step;
            });
            const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(-r);
            b += delta;
            if (delta.cwiseAbs().maxCoeff() < 1e-15)
                break;
        }
        double f = 0;
        const Eigen::VectorXd r = complemented(b, kappa, &f);
        out.inner_residual = std::max(out.inner_residual, r.cwiseAbs().maxCoeff());
        return f;
    };
    out.derivative = (reduced(h) - reduced(-h)) / (2 * h);
    const Field tau = hilbert(theta_a);
    out.cauchy_integral = 2 * pi * (tau.values().array().exp().inverse() * theta_a.values().array().cos()).mean();
    return out;
}

std::vector<WaveParams> linear_schedule(const WaveParams& from, const WaveParams& to, int steps)
{
    if (steps < 1)
        throw std::invalid_argument("linear_schedule: steps must be positive");
    std::vector<WaveParams> out;
    for (int i = 1; i <= steps; ++i)
        out.push_back(i == steps ? to : lerp(from, to, double(i) / steps));
    return out;
}

std::vector<WaveParams> default_schedule(const WaveParams& from, const WaveParams& target, double dA)
{
    std::vector<WaveParams> out;
    WaveParams cur = from;
    const double dAabs = std::abs(target.A - from.A);
    if (dAabs > 0) {
        WaveParams mid = cur;
        mid.A = target.A;
        const int steps = std::max(1, int(std::ceil(dAabs / dA - 1e-12)));
        for (const WaveParams& p : linear_schedule(cur, mid, steps))
            out.push_back(p);
        cur = mid;
    }
    const double span = std::max(std::abs(target.eps - cur.eps), std::abs(target.g - cur.g));
    if (span > 0) {
        for (double s = 1e-6 / span; s < 1.0; s *= 10)
            out.push_back(lerp(cur, target, s));
        out.push_back(target);
    }
    if (out.empty())
        out.push_back(target);
    return out;
}

ContinuationResult continuation(const std::vector<WaveParams>& schedule, const SolveState& seed,
                                const ContinuationOptions& opts)
{
    ContinuationResult result;
    SolveState current = seed;
    WaveParams reached = seed.params;

    // reach `target` from `reached`, halving the step on failure
    auto reach = [&](auto&& self, const WaveParams& target, int depth) -> bool {
        try {
            current = newton_solve(current, target, opts.solve);
            reached = target;
            return true;
        } catch (const std::runtime_error& e) {
            if (depth >= opts.max_bisections) {
                result.message = e.what();
                return false;
            }
        }
        ++result.substeps;
        const WaveParams mid = lerp(reached, target, 0.5);
        if (!self(self, mid, depth + 1))
            return false;
        result.branch.push_back(current);
        return self(self, target, depth + 1);
    };

    for (const WaveParams& target : schedule) {
        if (!reach(reach, target, 0)) {
            result.complete = false;
            std::ostringstream os;
            os << "continuation stopped before (A=" << target.A << ", eps=" << target.eps << ", g=" << target.g
               << "): " << result.message;
            result.message = os.str();
            return result;
        }
        result.branch.push_back(current);
    }
    return result;
}

SplashResult splash_search(double g, double eps, std::pair<double, double> bracket, const SplashOptions& opts)
{
    if (eps != 0.0)
        throw std::invalid_argument("splash_search: a splash endpoint requires eps = 0; use the eta-target search for eps > 0");
    auto [lo, hi] = bracket;
    if (!(lo < hi) || lo < 0 || hi >= 1)
        throw std::invalid_argument("splash_search: bracket must satisfy 0 <= lo < hi < 1");

    SolveOptions so;
    so.modes = opts.modes;
    so.solve_omega = false;
    so.check_crossing = false;
    auto solve_at = [&](double A) {
        WaveParams p;
        p.A = A;
        p.g = g;
        return newton_solve(crapper_state(A, opts.n, false), p, so);
    };
    auto crosses = [&](const SolveState& s) { return geometry::self_intersects(s.curve(), opts.geometry_points); };

    SplashResult out;
    SolveState s_lo = solve_at(lo);
    const SolveState s_hi = solve_at(hi);
    if (crosses(s_lo) || !crosses(s_hi))
        throw std::runtime_error("splash_search: crossing predicate does not bracket on [" + fmt(lo) + ", " + fmt(hi)
                                 + "]");
    while (hi - lo > opts.tol_A) {
        const double mid = 0.5 * (lo + hi);
        SolveState s = solve_at(mid);
        if (crosses(s)) {
            hi = mid;
        } else {
            lo = mid;
            s_lo = std::move(s);
        }
        ++out.bisections;
    }
    out.A = lo;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    geometry::ClassifyOptions co;
    co.geometry_points = opts.geometry_points;
    co.eta.points = opts.geometry_points;
    out.report = geometry::classify(s_lo.curve(), co);
    try {
        out.omega_amplitude = vortex::solve_omega(s_lo.curve()).max_abs();
    } catch (const std::exception&) {
        out.omega_amplitude = std::numeric_limits<double>::quiet_NaN();
    }
    out.state = std::move(s_lo);
    return out;
}

EtaTargetResult eta_target_search(double eta, double eps, double g, const EtaTargetOptions& opts)
{
    if (!(eta > 0 && eta < 1))
        throw std::invalid_argument("eta_target_search: eta must lie in (0, 1)");
    const double a_splash = crapper::critical_constants().a_splash;
    auto oracle = [&](double A) {
        return reference::brute_force_eta(crapper::curve(A, 1024), opts.geometry_points);
    };
    double lo = opts.lo, hi = a_splash - 1e-6;
    if (!(oracle(lo) > eta) || !(oracle(hi) < eta))
        throw std::runtime_error("eta_target_search: target eta is not bracketed on [" + fmt(lo) + ", " + fmt(hi) + "]");
    while (hi - lo > opts.tol_A) {
        const double mid = 0.5 * (lo + hi);
        if (oracle(mid) > eta)
            lo = mid;
        else
            hi = mid;
    }
    EtaTargetResult out;
    out.A = 0.5 * (lo + hi);
    out.crapper_eta = oracle(out.A);

    WaveParams target;
    target.A = out.A;
    target.eps = eps;
    target.g = g;
    ContinuationOptions co;
    co.solve.modes = opts.modes;
    const SolveState seed = crapper_state(out.A, opts.n, true);
    ContinuationResult branch = continuation(default_schedule(seed.params, target), seed, co);
    if (!branch.complete)
        throw NewtonFailure("eta_target_search: " + branch.message,
                            branch.branch.empty() ? seed : branch.branch.back());
    out.state = branch.branch.back();
    geometry::ClassifyOptions cl;
    cl.geometry_points = opts.geometry_points;
    cl.eta.points = opts.geometry_points;
    out.report = geometry::classify(out.state.curve(), cl);
    return out;
}

} // namespace splash::system
