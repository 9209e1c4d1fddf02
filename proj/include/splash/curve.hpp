#pragma once

// Pseudo-periodic planar curves z(t), identified with complex samples, and
// their trigonometric interpolant.

#include "splash/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace splash {

/// Uniformly sampled curve with z(t + period) = z(t) + shift.
///
/// Curves produced from a tangent angle have t0 = -pi, period = shift = 2*pi.
/// Closed curves (test fixtures, opened splash images) use shift = 0.
template <typename Scalar>
struct InterfaceCurve {
    using Complex = std::complex<Scalar>;

    Scalar t0 = -std::numbers::pi_v<Scalar>;
    Scalar period = 2 * std::numbers::pi_v<Scalar>;
    Complex shift{2 * std::numbers::pi_v<Scalar>, 0};
    CVectorX<Scalar> z;
    /// dz/dt at the nodes; empty when not supplied.
    CVectorX<Scalar> tangent;
    /// Re z odd and Im z even about t = t0 + period/2.
    bool symmetric = false;

    Index size() const { return z.size(); }
    Scalar spacing() const { return period / Scalar(size()); }
    Scalar node(Index j) const { return t0 + spacing() * Scalar(j); }
    bool has_tangent() const { return tangent.size() == z.size(); }
};

/// Largest violation of the curve invariants: pseudo-periodicity against a 2*pi
/// shift (skipped for closed curves), the reflection symmetry when flagged.
template <typename Scalar>
Scalar symmetry_defect(const InterfaceCurve<Scalar>& c)
{
    if (!c.symmetric)
        return Scalar(0);
    const Index n = c.size();
    Scalar worst = 0;
    for (Index j = 0; j < n; ++j) {
        // node j <-> node n - j about the midpoint; the node at t0 pairs with t0 + period
        const Index r = (n - j) % n;
        std::complex<Scalar> mirror = c.z[r];
        if (j == 0)
            mirror += c.shift;
        worst = std::max(worst, std::abs(c.z[j].real() + mirror.real() - 2 * (c.z[n / 2].real())));
        worst = std::max(worst, std::abs(c.z[j].imag() - mirror.imag()));
    }
    return worst;
}

template <typename Scalar>
Scalar periodicity_defect(const InterfaceCurve<Scalar>& c)
{
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    if (c.shift == std::complex<Scalar>(0))
        return Scalar(0);
    return std::abs(c.shift - std::complex<Scalar>(two_pi, 0));
}

/// Trigonometric interpolant of z(t) - (shift/period)(t - t0).
template <typename Scalar>
class CurveInterpolant {
public:
    using Complex = std::complex<Scalar>;

    CurveInterpolant() = default;

    explicit CurveInterpolant(const InterfaceCurve<Scalar>& c)
        : t0_(c.t0), period_(c.period), slope_(c.shift / c.period)
    {
        const Index n = c.size();
        if (!is_power_of_two(n))
            throw std::invalid_argument("CurveInterpolant: grid size must be a power of two");
        CVectorX<Scalar> p(n);
        for (Index j = 0; j < n; ++j)
            p[j] = c.z[j] - slope_ * (c.period * Scalar(j) / Scalar(n));
        CVectorX<Scalar> slots = detail::fft_forward<Scalar>(p) / Scalar(n);
        // store k = -n/2..n/2 with the Nyquist term split evenly between +-n/2
        half_ = n / 2;
        coeffs_.resize(n + 1);
        for (Index k = -half_; k <= half_; ++k) {
            Complex v;
            if (k == half_ || k == -half_)
                v = Scalar(0.5) * slots[half_];
            else
                v = slots[k >= 0 ? k : k + n];
            coeffs_[k + half_] = v;
        }
        // modes at roundoff level do not change any evaluation
        const double cutoff = 1e-15 * std::max<double>(1.0, double(coeffs_.cwiseAbs().maxCoeff()));
        bandwidth_ = 0;
        for (Index k = 1; k <= half_; ++k)
            if (double(std::abs(coeffs_[half_ + k])) > cutoff || double(std::abs(coeffs_[half_ - k])) > cutoff)
                bandwidth_ = k;
    }

    Scalar period() const { return period_; }
    Scalar t0() const { return t0_; }
    Complex shift() const { return slope_ * period_; }
    Index bandwidth() const { return bandwidth_; }

    /// Value and first two derivatives at parameter t.
    void evaluate(Scalar t, Complex& value, Complex& d1, Complex& d2) const
    {
        const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
        const Scalar w = two_pi / period_;
        const Scalar phase = w * (t - t0_);
        const Complex unit = std::polar(Scalar(1), phase);
        Complex p(0), dp(0), ddp(0);
        // accumulate e^{ik phase} for k >= 0 and k < 0 by recurrence
        Complex ep(1), em(1);
        const Complex unit_inv = std::conj(unit);
        p += coeffs_[half_];
        for (Index k = 1; k <= bandwidth_; ++k) {
            ep *= unit;
            em *= unit_inv;
            if ((k & 63) == 0) {
                ep = std::polar(Scalar(1), phase * Scalar(k));
                em = std::conj(ep);
            }
            const Complex cp = coeffs_[half_ + k] * ep;
            const Complex cm = coeffs_[half_ - k] * em;
            const Scalar kw = Scalar(k) * w;
            p += cp + cm;
            dp += Complex(0, kw) * (cp - cm);
            ddp -= kw * kw * (cp + cm);
        }
        value = p + slope_ * (t - t0_);
        d1 = dp + slope_;
        d2 = ddp;
    }

    Complex operator()(Scalar t) const
    {
        Complex v, d1, d2;
        evaluate(t, v, d1, d2);
        return v;
    }

    Complex derivative(Scalar t) const
    {
        Complex v, d1, d2;
        evaluate(t, v, d1, d2);
        return d1;
    }

    /// Samples dz/dt and d2z/dt2 on the curve's own grid (spectral, O(n log n)).
    static void grid_derivatives(const InterfaceCurve<Scalar>& c, CVectorX<Scalar>& d1, CVectorX<Scalar>& d2)
    {
        const Index n = c.size();
        const Complex slope = c.shift / c.period;
        CVectorX<Scalar> p(n);
        for (Index j = 0; j < n; ++j)
            p[j] = c.z[j] - slope * (c.period * Scalar(j) / Scalar(n));
        const Scalar scale = 2 * std::numbers::pi_v<Scalar> / c.period;
        CVectorX<Scalar> dp = complex_derivative<Scalar>(p) * scale;
        d1 = dp.array() + slope;
        d2 = complex_derivative<Scalar>(dp) * scale;
    }

private:
    Scalar t0_ = 0;
    Scalar period_ = 1;
    Complex slope_{0};
    Index half_ = 0;
    Index bandwidth_ = 0;
    CVectorX<Scalar> coeffs_;
};

/// z = I(theta): integral of exp(-H theta + i theta) from -pi.
///
/// The linear part m*alpha (m the complex mean of the integrand) and the
/// zero-mean periodic part are combined, then the curve is shifted so that
/// Re z(0) = 0. The vertical constant is that of the zero-mean periodic part.
template <typename Scalar>
InterfaceCurve<Scalar> curve_from_theta(const PeriodicField<Scalar>& theta)
{
    using Complex = std::complex<Scalar>;
    if (theta.parity() != Parity::odd)
        throw std::invalid_argument("curve_from_theta: theta must be tagged odd");
    const Index n = theta.size();
    const PeriodicField<Scalar> tau = hilbert(theta);
    CVectorX<Scalar> w(n);
    for (Index j = 0; j < n; ++j)
        w[j] = std::exp(Complex(-tau[j], theta[j]));
    const Complex m = w.mean();
    const CVectorX<Scalar> periodic = periodic_antiderivative<Scalar>(w);
    const VectorX<Scalar> alpha = grid_nodes<Scalar>(n);

    InterfaceCurve<Scalar> c;
    c.z.resize(n);
    for (Index j = 0; j < n; ++j)
        c.z[j] = m * alpha[j] + periodic[j];
    const Scalar x_origin = c.z[n / 2].real();
    c.z.array() -= x_origin;
    c.tangent = w;
    c.shift = 2 * std::numbers::pi_v<Scalar> * m;
    c.symmetric = true;
    return c;
}

/// Complex mean of exp(-H theta + i theta); equal to 1 for odd theta by the Cauchy integral theorem.
template <typename Scalar>
std::complex<Scalar> cauchy_mean(const PeriodicField<Scalar>& theta, Scalar sign = Scalar(-1))
{
    const PeriodicField<Scalar> tau = hilbert(theta);
    std::complex<Scalar> acc(0);
    for (Index j = 0; j < theta.size(); ++j)
        acc += std::exp(std::complex<Scalar>(sign * tau[j], theta[j]));
    return acc / Scalar(theta.size());
}

using Curve = InterfaceCurve<double>;
using Interpolant = CurveInterpolant<double>;

} // namespace splash
