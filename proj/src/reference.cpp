#include "splash/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace splash::reference {

namespace {

using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

} // namespace

double brute_force_eta(const Curve& c, Index points, double min_separation)
{
    if (points < 16)
        throw std::invalid_argument("brute_force_eta: too few points");
    const Interpolant zi(c);
    // cumulative length on a 16x finer uniform parameter grid (trapezoid on |z'|)
    const Index fine = 16 * std::max(points, c.size());
    const double dt = c.period / double(fine);
    std::vector<double> cum(fine + 1, 0.0);
    double prev = std::abs(zi.derivative(c.t0));
    for (Index j = 1; j <= fine; ++j) {
        const double s = std::abs(zi.derivative(c.t0 + dt * double(j)));
        cum[j] = cum[j - 1] + 0.5 * dt * (prev + s);
        prev = s;
    }
    const double length = cum[fine];
    auto param_of = [&](double s) {
        const double w = std::floor(s / length);
        const double local = s - w * length;
        const auto it = std::upper_bound(cum.begin(), cum.end(), local);
        const Index j = std::clamp<Index>(Index(it - cum.begin()) - 1, 0, fine - 1);
        const double frac = (local - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
        return c.t0 + dt * (double(j) + frac) + w * c.period;
    };
    auto point = [&](double s) { return zi(param_of(s)); };

    const double ds = length / double(points);
    std::vector<Complex> z(points);
    for (Index k = 0; k < points; ++k)
        z[k] = point(ds * double(k));
    const Index kmin = std::max<Index>(1, Index(std::ceil(min_separation / ds - 1e-9)));
    double best = std::numeric_limits<double>::infinity();
    Index bi = 0, bj = 0;
    for (Index i = 0; i < points; ++i) {
        for (Index k = kmin; k < points; ++k) {
            const Index j = i + k;
            const Complex zj = j < points ? z[j] : z[j - points] + c.shift;
            const double r = std::abs(zj - z[i]) / std::min(double(k) * ds, 1.0);
            if (r < best) {
                best = r;
                bi = i;
                bj = j;
            }
        }
    }
    // alternate golden-section polish of each endpoint
    double s1 = ds * double(bi), s2 = ds * double(bj);
    auto ratio = [&](double a, double b) {
        if (b - a < min_separation)
            return std::numeric_limits<double>::infinity();
        return std::abs(point(b) - point(a)) / std::min(b - a, 1.0);
    };
    auto golden = [&](auto&& f, double a, double b) {
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - r * (b - a), x2 = a + r * (b - a);
        double f1 = f(x1), f2 = f(x2);
        while (b - a > 1e-12 * length) {
            if (f1 < f2) {
                b = x2, x2 = x1, f2 = f1, x1 = b - r * (b - a), f1 = f(x1);
            } else {
                a = x1, x1 = x2, f1 = f2, x2 = a + r * (b - a), f2 = f(x2);
            }
        }
        return 0.5 * (a + b);
    };
    for (int sweep = 0; sweep < 6; ++sweep) {
        s1 = golden([&](double s) { return ratio(s, s2); }, s1 - ds, s1 + ds);
        s2 = golden([&](double s) { return ratio(s1, s); }, s2 - ds, s2 + ds);
    }
    return std::min(best, ratio(s1, s2));
}

double crapper_theta_series(double A, double alpha)
{
    double sum = 0, term = A;
    for (int k = 1; std::abs(term) > 1e-20 && k < 100000; k += 2, term *= A * A)
        sum += term * std::sin(k * alpha) / k;
    return 4 * sum;
}

double crapper_tau_series(double A, double alpha)
{
    double sum = 0, term = A;
    for (int k = 1; std::abs(term) > 1e-20 && k < 100000; k += 2, term *= A * A)
        sum += term * std::cos(k * alpha) / k;
    return 4 * sum;
}

std::complex<double> crapper_z(double A, double alpha)
{
    const Complex u = A * std::exp(Complex(0, -alpha));
    return alpha + Complex(0, 4) / (1.0 + u) - Complex(0, 4);
}

std::complex<double> crapper_dz(double A, double alpha)
{
    const Complex u = A * std::exp(Complex(0, -alpha));
    const Complex r = (1.0 - u) / (1.0 + u);
    return r * r;
}

std::complex<double> direct_br(const CurveFunction& z, const std::function<double(double)>& omega, double alpha,
                               long points)
{
    // nodes at alpha + (j + 1/2) h pair up symmetrically about alpha, which realizes the principal value
    const double h = 2 * pi / double(points);
    const Complex za = z(alpha);
    Complex acc = 0;
    for (long j = 0; j < points; ++j) {
        const double beta = alpha + (double(j) + 0.5) * h;
        const Complex w = 0.5 * (za - z(beta));
        acc += omega(beta) * std::cos(w) / std::sin(w);
    }
    return std::conj(Complex(0, -1) / (4 * pi) * h * acc);
}

} // namespace splash::reference
