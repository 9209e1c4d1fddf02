#include "splash/vortex.hpp"

#include "splash/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace splash::vortex {

namespace {

constexpr double pi = std::numbers::pi;
const Complex prefactor = Complex(0, -1) / (4 * pi); // 1/(4 pi i)

void require_periodic(const Curve& c)
{
    if (!is_power_of_two(c.size()))
        throw std::invalid_argument("vortex: grid size must be a power of two");
    if (std::abs(c.period - 2 * pi) > 1e-12)
        throw std::invalid_argument("vortex: curve must be parametrized over a 2*pi period");
    if (std::abs(c.shift - Complex(2 * pi, 0)) > 1e-8)
        throw std::invalid_argument("vortex: curve must be 2*pi pseudo-periodic (shift = 2*pi)");
}

[[noreturn]] void contact_error(const Curve& c, Index i, Index j)
{
    throw std::domain_error("vortex: interface nodes " + std::to_string(i) + " (alpha = " + std::to_string(c.node(i))
                            + ") and " + std::to_string(j) + " (alpha = " + std::to_string(c.node(j))
                            + ") are in contact; the Birkhoff-Rott kernel is singular there");
}

/// cot(w/2) and ln|2 sin(w/2)| for arbitrary complex w without overflow.
Complex cot_half(Complex w)
{
    if (w.imag() >= 0) {
        const Complex e = std::exp(Complex(0, 1) * w);
        return Complex(0, 1) * (e + 1.0) / (e - 1.0);
    }
    const Complex e = std::exp(Complex(0, -1) * w);
    return Complex(0, 1) * (1.0 + e) / (1.0 - e);
}

double log_two_sin_half(Complex w)
{
    const double s = w.imag() >= 0 ? 1.0 : -1.0;
    const Complex e = std::exp(Complex(0, s) * w);
    return 0.5 * std::abs(w.imag()) + std::log(std::abs(1.0 - e));
}

/// Hilbert transform of complex samples (applied to real and imaginary parts).
CVectorX<double> hilbert_complex(const CVectorX<double>& v)
{
    const Index n = v.size();
    return detail::apply_multiplier<double>(v, [n](Index k) {
        if (k == 0 || k == n / 2)
            return Complex(0);
        return Complex(0, k > 0 ? 1 : -1);
    });
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

double mean_spacing(const Curve& c)
{
    CVectorX<double> d1, d2;
    if (c.has_tangent())
        d1 = c.tangent;
    else
        Interpolant::grid_derivatives(c, d1, d2);
    return d1.cwiseAbs().mean() * c.spacing();
}

/// Restarted GMRES for x + A x = b with a matrix-free operator.
template <typename Op>
Eigen::VectorXd gmres(const Op& apply, const Eigen::VectorXd& b, const OmegaOptions& opts, int& iterations)
{
    const Index n = b.size();
    const int m = opts.gmres_restart;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double bnorm = b.norm();
    iterations = 0;
    while (iterations < opts.gmres_max_iter) {
        Eigen::VectorXd r = b - apply(x);
        double beta = r.norm();
        if (beta <= opts.gmres_tol * bnorm)
            return x;
        Eigen::MatrixXd V(n, m + 1);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        Eigen::VectorXd cs(m), sn(m), g = Eigen::VectorXd::Zero(m + 1);
        V.col(0) = r / beta;
        g[0] = beta;
        int k = 0;
        for (; k < m && iterations < opts.gmres_max_iter; ++k, ++iterations) {
            Eigen::VectorXd w = apply(V.col(k));
            for (int i = 0; i <= k; ++i) {
                H(i, k) = V.col(i).dot(w);
                w -= H(i, k) * V.col(i);
            }
            H(k + 1, k) = w.norm();
            if (H(k + 1, k) > 0)
                V.col(k + 1) = w / H(k + 1, k);
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
                H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
                H(i, k) = t;
            }
            const double d = std::hypot(H(k, k), H(k + 1, k));
            cs[k] = H(k, k) / d;
            sn[k] = H(k + 1, k) / d;
            H(k, k) = d;
            H(k + 1, k) = 0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            if (std::abs(g[k + 1]) <= opts.gmres_tol * bnorm) {
                ++k;
                ++iterations;
                break;
            }
        }
        const Eigen::VectorXd y =
            H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        x += V.leftCols(k) * y;
    }
    throw std::runtime_error("solve_omega: GMRES did not converge within " + std::to_string(opts.gmres_max_iter)
                             + " iterations");
}

} // namespace

SheetOperator::SheetOperator(const Curve& c) : curve_(c), n_(c.size())
{
    require_periodic(c);
    h_ = c.spacing();
    if (c.has_tangent()) {
        dz_ = c.tangent;
    } else {
        CVectorX<double> d2;
        Interpolant::grid_derivatives(c, dz_, d2);
    }
    if (!(dz_.cwiseAbs().minCoeff() > 0))
        throw std::domain_error("vortex: degenerate tangent");
    ddz_ = complex_derivative<double>(dz_);
    expz_.resize(n_);
    for (Index j = 0; j < n_; ++j)
        expz_[j] = std::exp(Complex(0, 1) * c.z[j]);
    cot_grid_.resize(n_);
    cot_grid_[0] = 0;
    for (Index m = 1; m < n_; ++m)
        cot_grid_[m] = 1.0 / std::tan(pi * double(m) / double(n_));
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n_);
    e0[0] = 1;
    const Index n = n_;
    hilbert_column_ = detail::apply_real_multiplier<double>(e0, [n](Index k) {
        if (k == 0 || k == n / 2)
            return Complex(0);
        return Complex(0, k > 0 ? 1 : -1);
    });
}

Complex SheetOperator::entry(Index i, Index j) const
{
    const Index m = ((i - j) % n_ + n_) % n_;
    Complex smooth;
    if (i == j) {
        smooth = -ddz_[i] / (dz_[i] * dz_[i]);
    } else {
        const Complex ei = expz_[i], ej = expz_[j];
        const Complex diff = ei - ej;
        if (std::abs(diff) < contact_threshold * (std::abs(ei) + std::abs(ej)))
            contact_error(curve_, i, j);
        smooth = Complex(0, 1) * (ei + ej) / diff - cot_grid_[m] / dz_[j];
    }
    return prefactor * (h_ * smooth - 2 * pi * hilbert_column_[m] / dz_[j]);
}

Complex SheetOperator::row_sum(Index i, const Eigen::VectorXd& omega) const
{
    const Complex ei = expz_[i];
    const double ai = std::abs(ei);
    Complex acc = -omega[i] * ddz_[i] / (dz_[i] * dz_[i]);
    for (Index j = 0; j < n_; ++j) {
        if (j == i)
            continue;
        const Complex ej = expz_[j];
        const Complex diff = ei - ej;
        if (std::abs(diff) < contact_threshold * (ai + std::abs(ej)))
            contact_error(curve_, i, j);
        const Index m = ((i - j) % n_ + n_) % n_;
        acc += omega[j] * (Complex(0, 1) * (ei + ej) / diff - cot_grid_[m] / dz_[j]);
    }
    return h_ * acc;
}

CVectorX<double> SheetOperator::kernel_sum(const Eigen::VectorXd& omega) const
{
    if (omega.size() != n_)
        throw std::invalid_argument("vortex: omega and curve sizes differ");
    CVectorX<double> q(n_);
    for (Index j = 0; j < n_; ++j)
        q[j] = omega[j] / dz_[j];
    const CVectorX<double> hq = hilbert_complex(q);
    CVectorX<double> s(n_);
    const bool mirror = curve_.symmetric
                        && detail::parity_defect<double>(omega, Parity::even)
                               <= 1e-14 * std::max(1.0, omega.cwiseAbs().maxCoeff());
    // on a symmetric curve with even w, BR(-alpha) = conj(BR(alpha))
    const Index rows = mirror ? n_ / 2 + 1 : n_;
    parallel_for(std::size_t(rows), [&](std::size_t ii) {
        const Index i = Index(ii);
        s[i] = prefactor * (row_sum(i, omega) - 2 * pi * hq[i]);
    });
    if (mirror)
        for (Index i = 1; i < n_ / 2; ++i)
            s[n_ - i] = std::conj(s[i]);
    return s;
}

Eigen::MatrixXcd SheetOperator::kernel_matrix() const
{
    Eigen::MatrixXcd m(n_, n_);
    parallel_for(std::size_t(n_), [&](std::size_t ii) {
        const Index i = Index(ii);
        for (Index j = 0; j < n_; ++j)
            m(i, j) = entry(i, j);
    });
    return m;
}

Eigen::MatrixXd SheetOperator::operator_matrix() const
{
    Eigen::MatrixXd a(n_, n_);
    parallel_for(std::size_t(n_), [&](std::size_t ii) {
        const Index i = Index(ii);
        for (Index j = 0; j < n_; ++j)
            a(i, j) = 2 * (entry(i, j) * dz_[i]).real();
    });
    return a;
}

Eigen::MatrixXd SheetOperator::even_operator_matrix() const
{
    const Index half = n_ / 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(half + 1, half + 1);
    parallel_for(std::size_t(half + 1), [&](std::size_t ii) {
        const Index i = Index(ii);
        for (Index j = 0; j < n_; ++j) {
            const Index col = j <= half ? j : n_ - j;
            a(i, col) += 2 * (entry(i, j) * dz_[i]).real();
        }
    });
    return a;
}

void check_contact(const Curve& c)
{
    const Index n = c.size();
    CVectorX<double> e(n);
    for (Index j = 0; j < n; ++j)
        e[j] = std::exp(Complex(0, 1) * c.z[j]);
    double worst = std::numeric_limits<double>::infinity();
    Index wi = 0, wj = 0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double r = std::abs(e[i] - e[j]) / (std::abs(e[i]) + std::abs(e[j]));
            if (r < worst) {
                worst = r;
                wi = i;
                wj = j;
            }
        }
    if (worst < contact_threshold)
        contact_error(c, wi, wj);
}

CVectorX<double> br_integral(const Curve& c, const Field& omega)
{
    return SheetOperator(c).kernel_sum(omega.values()).conjugate();
}

Field sheet_operator_apply(const Curve& c, const Field& omega)
{
    const SheetOperator op(c);
    const CVectorX<double> s = op.kernel_sum(omega.values());
    Eigen::VectorXd out = 2 * (s.array() * op.tangent().array()).real();
    const Parity p = c.symmetric && omega.parity() == Parity::even ? Parity::even : Parity::none;
    return Field::projected(out, p);
}

Field normal_component(const Curve& c, const Field& omega)
{
    const SheetOperator op(c);
    const CVectorX<double> s = op.kernel_sum(omega.values());
    Eigen::VectorXd out = -(s.array() * op.tangent().array()).imag();
    const Parity p = c.symmetric && omega.parity() == Parity::even ? Parity::odd : Parity::none;
    return Field::projected(out, p);
}

OmegaSolution solve_omega_detailed(const Curve& c, const OmegaOptions& opts)
{
    const SheetOperator op(c);
    const Index n = c.size();
    OmegaSolution sol;
    Eigen::VectorXd omega;
    if (n <= opts.dense_limit) {
        Eigen::MatrixXd a = c.symmetric ? op.even_operator_matrix() : op.operator_matrix();
        a.diagonal().array() += 1.0;
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        sol.rcond = lu.rcond();
        if (!(sol.rcond > opts.rcond_min))
            throw std::runtime_error("solve_omega: 1 + A(z) is numerically singular (rcond estimate "
                                     + std::to_string(sol.rcond) + ")");
        const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Constant(a.rows(), 2.0));
        omega = c.symmetric ? even_expand(x, n) : x;
    } else {
        auto apply = [&](const Eigen::VectorXd& x) {
            const CVectorX<double> s = op.kernel_sum(x);
            return Eigen::VectorXd(x.array() + 2 * (s.array() * op.tangent().array()).real());
        };
        omega = gmres(apply, Eigen::VectorXd::Constant(n, 2.0), opts, sol.iterations);
        sol.iterative = true;
        sol.rcond = std::numeric_limits<double>::quiet_NaN();
    }
    const CVectorX<double> s = op.kernel_sum(omega);
    const Eigen::VectorXd res = omega.array() + 2 * (s.array() * op.tangent().array()).real() - 2.0;
    sol.residual = res.cwiseAbs().maxCoeff();
    sol.omega = Field::projected(omega, c.symmetric ? Parity::even : Parity::none);
    return sol;
}

Field solve_omega(const Curve& c) { return solve_omega_detailed(c).omega; }

double spectral_radius(const Curve& c)
{
    const SheetOperator op(c);
    const Eigen::MatrixXd a = c.symmetric ? op.even_operator_matrix() : op.operator_matrix();
    const Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_radius: eigenvalue computation failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

InterfaceVelocities interface_velocities(const Curve& c, const Field& omega)
{
    const SheetOperator op(c);
    const CVectorX<double> br = op.kernel_sum(omega.values()).conjugate();
    const CVectorX<double>& dz = op.tangent();
    InterfaceVelocities out;
    out.lower.resize(c.size());
    out.upper.resize(c.size());
    for (Index j = 0; j < c.size(); ++j) {
        const Complex jump = 0.5 * omega[j] * dz[j] / std::norm(dz[j]);
        out.lower[j] = br[j] + jump;
        out.upper[j] = br[j] - jump;
    }
    return out;
}

double distance_to_nodes(const Curve& c, Complex p)
{
    const double period_x = c.shift.real();
    double best = std::numeric_limits<double>::infinity();
    if (period_x != 0.0) {
        const double centre = c.z.real().mean();
        p -= std::round((p.real() - centre) / period_x) * c.shift;
    }
    for (int k = -1; k <= 1; ++k) {
        const Complex off = double(k) * c.shift;
        for (Index j = 0; j < c.size(); ++j)
            best = std::min(best, std::abs(p - c.z[j] - off));
        if (period_x == 0.0)
            break;
    }
    return best;
}

CVectorX<double> velocity_field(const Curve& c, const Field& omega, const CVectorX<double>& points)
{
    require_periodic(c);
    const double spacing = mean_spacing(c);
    const double h = c.spacing();
    CVectorX<double> v(points.size());
    parallel_for(std::size_t(points.size()), [&](std::size_t kk) {
        const Complex p = points[Index(kk)];
        if (distance_to_nodes(c, p) < spacing)
            throw std::domain_error("velocity_field: point (" + std::to_string(p.real()) + ", "
                                    + std::to_string(p.imag()) + ") is within one grid spacing of the interface");
        Complex acc = 0;
        for (Index j = 0; j < c.size(); ++j)
            acc += omega[j] * cot_half(p - c.z[j]);
        const Complex fprime = h / (4 * pi) * acc;
        v[Index(kk)] = Complex(0, 1) * std::conj(fprime);
    });
    return v;
}

Eigen::VectorXd stream_function(const Curve& c, const Field& omega, const CVectorX<double>& points)
{
    require_periodic(c);
    const double spacing = mean_spacing(c);
    const double h = c.spacing();
    Eigen::VectorXd psi(points.size());
    parallel_for(std::size_t(points.size()), [&](std::size_t kk) {
        const Complex p = points[Index(kk)];
        if (distance_to_nodes(c, p) < spacing)
            throw std::domain_error("stream_function: point is within one grid spacing of the interface");
        double acc = 0;
        for (Index j = 0; j < c.size(); ++j)
            acc += omega[j] * log_two_sin_half(p - c.z[j]);
        psi[Index(kk)] = h / (2 * pi) * acc;
    });
    return psi;
}

Eigen::VectorXd interface_stream_function(const Curve& c, const Field& omega)
{
    const SheetOperator op(c);
    const Index n = c.size();
    const double h = c.spacing();
    // int ln|2 sin((alpha - beta)/2)| e^{ik beta} dbeta = -(pi/|k|) e^{ik alpha}
    const Eigen::VectorXd conv = detail::apply_real_multiplier<double>(omega.values(), [](Index k) {
        return k == 0 ? Complex(0) : Complex(-pi / double(std::abs(k)), 0);
    });
    Eigen::VectorXd log_grid(n);
    log_grid[0] = 0;
    for (Index m = 1; m < n; ++m)
        log_grid[m] = std::log(2 * std::sin(pi * double(m) / double(n)));
    Eigen::VectorXd psi(n);
    parallel_for(std::size_t(n), [&](std::size_t ii) {
        const Index i = Index(ii);
        double acc = omega[i] * std::log(std::abs(op.tangent()[i]));
        for (Index j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const Index m = ((i - j) % n + n) % n;
            acc += omega[j] * (log_two_sin_half(c.z[i] - c.z[j]) - log_grid[m]);
        }
        psi[i] = (h * acc + conv[i]) / (2 * pi);
    });
    return psi;
}

} // namespace splash::vortex
