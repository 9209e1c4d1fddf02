#pragma once

// Uniform-grid representation of real 2*pi-periodic functions and the
// Fourier-multiplier operators built on it.
//
// Nodes are alpha_j = -pi + 2*pi*j/n, j = 0..n-1, so the reflection
// alpha -> -alpha maps node j to node (n - j) mod n and parity can be checked
// sample by sample.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace splash {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using CVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

enum class Parity { none, odd, even };

inline Parity flipped(Parity p)
{
    switch (p) {
    case Parity::odd:
        return Parity::even;
    case Parity::even:
        return Parity::odd;
    default:
        return Parity::none;
    }
}

inline const char* to_string(Parity p)
{
    switch (p) {
    case Parity::odd:
        return "odd";
    case Parity::even:
        return "even";
    default:
        return "none";
    }
}

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// Signed wavenumber of FFT slot j on an n-point grid; the Nyquist slot maps to +n/2.
inline Index wavenumber(Index j, Index n) { return j <= n / 2 ? j : j - n; }

template <typename Scalar>
VectorX<Scalar> grid_nodes(Index n)
{
    const Scalar pi = std::numbers::pi_v<Scalar>;
    VectorX<Scalar> alpha(n);
    for (Index j = 0; j < n; ++j)
        alpha[j] = -pi + 2 * pi * Scalar(j) / Scalar(n);
    return alpha;
}

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine()
{
    thread_local Eigen::FFT<Scalar> engine;
    return engine;
}

template <typename Scalar>
CVectorX<Scalar> fft_forward(const CVectorX<Scalar>& x)
{
    CVectorX<Scalar> out(x.size());
    fft_engine<Scalar>().fwd(out, x);
    return out;
}

template <typename Scalar>
CVectorX<Scalar> fft_inverse(const CVectorX<Scalar>& x)
{
    CVectorX<Scalar> out(x.size());
    fft_engine<Scalar>().inv(out, x);
    return out;
}

/// Applies the Fourier multiplier m(k) to complex grid samples.
template <typename Scalar, typename Multiplier>
CVectorX<Scalar> apply_multiplier(const CVectorX<Scalar>& samples, Multiplier&& m)
{
    const Index n = samples.size();
    CVectorX<Scalar> spec = fft_forward(samples);
    for (Index j = 0; j < n; ++j)
        spec[j] *= m(wavenumber(j, n));
    return fft_inverse(spec);
}

template <typename Scalar, typename Multiplier>
VectorX<Scalar> apply_real_multiplier(const VectorX<Scalar>& samples, Multiplier&& m)
{
    CVectorX<Scalar> c = samples.template cast<std::complex<Scalar>>();
    return apply_multiplier<Scalar>(c, std::forward<Multiplier>(m)).real();
}

/// Maximum deviation of v from the requested reflection symmetry.
template <typename Scalar>
Scalar parity_defect(const VectorX<Scalar>& v, Parity p)
{
    if (p == Parity::none)
        return Scalar(0);
    const Index n = v.size();
    const Scalar sign = p == Parity::odd ? Scalar(-1) : Scalar(1);
    Scalar worst = 0;
    for (Index j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(v[j] - sign * v[(n - j) % n]));
    return worst;
}

template <typename Scalar>
VectorX<Scalar> project_parity(const VectorX<Scalar>& v, Parity p)
{
    if (p == Parity::none)
        return v;
    const Index n = v.size();
    const Scalar sign = p == Parity::odd ? Scalar(-1) : Scalar(1);
    VectorX<Scalar> out(n);
    for (Index j = 0; j < n; ++j)
        out[j] = Scalar(0.5) * (v[j] + sign * v[(n - j) % n]);
    return out;
}

} // namespace detail

/// Real 2*pi-periodic samples on the uniform grid, tagged with their reflection parity.
template <typename Scalar>
class PeriodicField {
public:
    using Vector = VectorX<Scalar>;

    static constexpr Scalar parity_tolerance = Scalar(1e-12);

    PeriodicField() = default;

    /// Validates size, finiteness and the declared parity.
    explicit PeriodicField(Vector values, Parity parity = Parity::none)
        : values_(std::move(values)), parity_(parity)
    {
        validate();
    }

    /// Builds a field after projecting the samples exactly onto the parity subspace.
    static PeriodicField projected(const Vector& values, Parity parity)
    {
        return PeriodicField(detail::project_parity(values, parity), parity);
    }

    template <typename F>
    static PeriodicField sample(Index n, F&& f, Parity parity = Parity::none)
    {
        const Vector alpha = grid_nodes<Scalar>(n);
        Vector v(n);
        for (Index j = 0; j < n; ++j)
            v[j] = f(alpha[j]);
        return projected(v, parity);
    }

    static PeriodicField constant(Index n, Scalar c) { return PeriodicField(Vector::Constant(n, c), Parity::even); }

    Index size() const { return values_.size(); }
    const Vector& values() const { return values_; }
    Parity parity() const { return parity_; }
    Scalar operator[](Index j) const { return values_[j]; }

    Scalar mean() const { return values_.mean(); }
    Scalar max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : Scalar(0); }

private:
    void validate() const
    {
        if (!is_power_of_two(values_.size()))
            throw std::invalid_argument("PeriodicField: grid size must be a positive power of two, got "
                                        + std::to_string(values_.size()));
        if (!values_.allFinite())
            throw std::invalid_argument("PeriodicField: non-finite sample");
        const Scalar scale = std::max(max_abs(), Scalar(1));
        if (detail::parity_defect(values_, parity_) > parity_tolerance * scale)
            throw std::invalid_argument(std::string("PeriodicField: samples are not ") + to_string(parity_));
    }

    Vector values_;
    Parity parity_ = Parity::none;
};

/// Fourier coefficients c_k, k = -n/2+1..n/2, of f(alpha) = sum c_k exp(i k alpha).
template <typename Scalar>
class Spectrum {
public:
    using Complex = std::complex<Scalar>;

    Spectrum() = default;
    Spectrum(Index n, CVectorX<Scalar> slots) : n_(n), slots_(std::move(slots)) {}

    Index size() const { return n_; }

    Complex coefficient(Index k) const
    {
        if (k <= -n_ / 2 || k > n_ / 2)
            throw std::out_of_range("Spectrum: wavenumber out of range");
        return slots_[k >= 0 ? k : k + n_];
    }

    /// Coefficients in FFT slot order.
    const CVectorX<Scalar>& slots() const { return slots_; }

private:
    Index n_ = 0;
    CVectorX<Scalar> slots_;
};

template <typename Scalar>
Spectrum<Scalar> to_spectrum(const PeriodicField<Scalar>& f)
{
    const Index n = f.size();
    CVectorX<Scalar> s = detail::fft_forward<Scalar>(f.values().template cast<std::complex<Scalar>>());
    for (Index j = 0; j < n; ++j) {
        // the grid starts at -pi, so slot k picks up a factor (-1)^k
        const Scalar sign = (wavenumber(j, n) % 2 == 0) ? Scalar(1) : Scalar(-1);
        s[j] *= sign / Scalar(n);
    }
    return Spectrum<Scalar>(n, std::move(s));
}

template <typename Scalar>
PeriodicField<Scalar> to_field(const Spectrum<Scalar>& spec, Parity parity = Parity::none)
{
    const Index n = spec.size();
    CVectorX<Scalar> s = spec.slots();
    for (Index j = 0; j < n; ++j) {
        const Scalar sign = (wavenumber(j, n) % 2 == 0) ? Scalar(1) : Scalar(-1);
        s[j] *= sign * Scalar(n);
    }
    return PeriodicField<Scalar>::projected(detail::fft_inverse(s).real(), parity);
}

/// Periodic Hilbert transform with multiplier i*sgn(k): sin(k a) -> cos(k a).
/// The mean and the Nyquist mode are annihilated.
template <typename Scalar>
PeriodicField<Scalar> hilbert(const PeriodicField<Scalar>& f)
{
    using Complex = std::complex<Scalar>;
    const Index n = f.size();
    auto v = detail::apply_real_multiplier<Scalar>(f.values(), [n](Index k) {
        if (k == 0 || k == n / 2)
            return Complex(0);
        return Complex(0, k > 0 ? 1 : -1);
    });
    return PeriodicField<Scalar>::projected(v, flipped(f.parity()));
}

/// Spectral derivative; the Nyquist mode is dropped.
template <typename Scalar>
PeriodicField<Scalar> derivative(const PeriodicField<Scalar>& f)
{
    using Complex = std::complex<Scalar>;
    const Index n = f.size();
    auto v = detail::apply_real_multiplier<Scalar>(f.values(), [n](Index k) {
        if (k == n / 2)
            return Complex(0);
        return Complex(0, Scalar(k));
    });
    return PeriodicField<Scalar>::projected(v, flipped(f.parity()));
}

/// L2 pairing on [-pi, pi] by the trapezoidal rule.
template <typename Scalar>
Scalar inner(const PeriodicField<Scalar>& f, const PeriodicField<Scalar>& g)
{
    if (f.size() != g.size())
        throw std::invalid_argument("inner: grid size mismatch");
    return 2 * std::numbers::pi_v<Scalar> / Scalar(f.size()) * f.values().dot(g.values());
}

/// Fourier pad or truncate onto an m-point grid. Modes |k| >= m/2 are dropped on
/// truncation, and the new Nyquist coefficient collects c_{m/2} + c_{-m/2}.
template <typename Scalar>
PeriodicField<Scalar> resample(const PeriodicField<Scalar>& f, Index m)
{
    using Complex = std::complex<Scalar>;
    if (!is_power_of_two(m))
        throw std::invalid_argument("resample: target size must be a power of two");
    const Index n = f.size();
    if (m == n)
        return f;
    const CVectorX<Scalar> src = detail::fft_forward<Scalar>(f.values().template cast<Complex>());
    CVectorX<Scalar> dst = CVectorX<Scalar>::Zero(m);
    const Scalar scale = Scalar(m) / Scalar(n);
    auto slot = [](Index k, Index size) { return k >= 0 ? k : k + size; };
    if (m > n) {
        for (Index k = -n / 2 + 1; k < n / 2; ++k)
            dst[slot(k, m)] = scale * src[slot(k, n)];
        const Complex nyq = scale * src[n / 2];
        dst[slot(n / 2, m)] += Scalar(0.5) * nyq;
        dst[slot(-n / 2, m)] += Scalar(0.5) * nyq;
    } else {
        for (Index k = -m / 2 + 1; k < m / 2; ++k)
            dst[slot(k, m)] = scale * src[slot(k, n)];
        dst[m / 2] = scale * (src[slot(m / 2, n)] + src[slot(-m / 2, n)]);
    }
    return PeriodicField<Scalar>::projected(detail::fft_inverse(dst).real(), f.parity());
}

/// b_1..b_M with f = sum b_k sin(k alpha) (odd fields).
template <typename Scalar>
VectorX<Scalar> sine_coefficients(const PeriodicField<Scalar>& f, Index modes)
{
    const Spectrum<Scalar> s = to_spectrum(f);
    if (modes >= f.size() / 2)
        throw std::invalid_argument("sine_coefficients: too many modes for the grid");
    VectorX<Scalar> b(modes);
    for (Index k = 1; k <= modes; ++k)
        b[k - 1] = -2 * s.coefficient(k).imag();
    return b;
}

/// a_0..a_M with f = a_0 + sum a_k cos(k alpha) (even fields). M may reach n/2.
template <typename Scalar>
VectorX<Scalar> cosine_coefficients(const PeriodicField<Scalar>& f, Index modes)
{
    const Spectrum<Scalar> s = to_spectrum(f);
    if (modes > f.size() / 2)
        throw std::invalid_argument("cosine_coefficients: too many modes for the grid");
    VectorX<Scalar> a(modes + 1);
    a[0] = s.coefficient(0).real();
    for (Index k = 1; k <= modes; ++k)
        a[k] = (k == f.size() / 2 ? 1 : 2) * s.coefficient(k).real();
    return a;
}

template <typename Scalar>
PeriodicField<Scalar> from_sine_coefficients(const VectorX<Scalar>& b, Index n)
{
    if (b.size() >= n / 2)
        throw std::invalid_argument("from_sine_coefficients: too many modes for the grid");
    CVectorX<Scalar> slots = CVectorX<Scalar>::Zero(n);
    for (Index k = 1; k <= b.size(); ++k) {
        slots[k] = std::complex<Scalar>(0, -b[k - 1] / 2);
        slots[n - k] = std::complex<Scalar>(0, b[k - 1] / 2);
    }
    return to_field(Spectrum<Scalar>(n, std::move(slots)), Parity::odd);
}

template <typename Scalar>
PeriodicField<Scalar> from_cosine_coefficients(const VectorX<Scalar>& a, Index n)
{
    if (a.size() - 1 > n / 2)
        throw std::invalid_argument("from_cosine_coefficients: too many modes for the grid");
    CVectorX<Scalar> slots = CVectorX<Scalar>::Zero(n);
    slots[0] = a[0];
    for (Index k = 1; k < a.size(); ++k) {
        if (k == n / 2) {
            slots[k] = a[k];
        } else {
            slots[k] = a[k] / 2;
            slots[n - k] = a[k] / 2;
        }
    }
    return to_field(Spectrum<Scalar>(n, std::move(slots)), Parity::even);
}

/// Periodic antiderivative with zero mean of complex samples (mean and Nyquist dropped).
template <typename Scalar>
CVectorX<Scalar> periodic_antiderivative(const CVectorX<Scalar>& samples)
{
    using Complex = std::complex<Scalar>;
    const Index n = samples.size();
    return detail::apply_multiplier<Scalar>(samples, [n](Index k) {
        if (k == 0 || k == n / 2)
            return Complex(0);
        return Complex(0, -1 / Scalar(k));
    });
}

template <typename Scalar>
CVectorX<Scalar> complex_derivative(const CVectorX<Scalar>& samples)
{
    using Complex = std::complex<Scalar>;
    const Index n = samples.size();
    return detail::apply_multiplier<Scalar>(samples, [n](Index k) {
        if (k == n / 2)
            return Complex(0);
        return Complex(0, Scalar(k));
    });
}

using Field = PeriodicField<double>;

} // namespace splash
