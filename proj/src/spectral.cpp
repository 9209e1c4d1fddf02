#include "splash/spectral.hpp"
#include "splash/curve.hpp"

// Explicit instantiations for the double-precision build used by the library.

namespace splash {

template class PeriodicField<double>;
template class Spectrum<double>;
template class CurveInterpolant<double>;

template Spectrum<double> to_spectrum(const PeriodicField<double>&);
template PeriodicField<double> to_field(const Spectrum<double>&, Parity);
template PeriodicField<double> hilbert(const PeriodicField<double>&);
template PeriodicField<double> derivative(const PeriodicField<double>&);
template double inner(const PeriodicField<double>&, const PeriodicField<double>&);
template PeriodicField<double> resample(const PeriodicField<double>&, Index);
template VectorX<double> sine_coefficients(const PeriodicField<double>&, Index);
template VectorX<double> cosine_coefficients(const PeriodicField<double>&, Index);
template PeriodicField<double> from_sine_coefficients(const VectorX<double>&, Index);
template PeriodicField<double> from_cosine_coefficients(const VectorX<double>&, Index);
template InterfaceCurve<double> curve_from_theta(const PeriodicField<double>&);
template std::complex<double> cauchy_mean(const PeriodicField<double>&, double);

} // namespace splash
