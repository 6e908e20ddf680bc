#pragma once

#include <complex>

namespace tlau {

// Binary grating: transmission amplitude amp_open on the slit (-f*d, 0] of
// each period, amp_closed on the rest. All standard material gratings have
// amp_open = 1, amp_closed = 0; partially transparent substrates keep both.
struct GratingSpec {
    double period;
    double open_fraction;
    std::complex<double> amp_open{1.0, 0.0};
    std::complex<double> amp_closed{0.0, 0.0};

    void validate() const; // 0 < f < 1, |w| <= 1, |z| <= 1, period > 0
};

// sin(u)/u with the limit value 1 at u = 0.
double sinc(double u);

std::complex<double> transmission(double x, const GratingSpec& g);

// b_n = f * sinc(pi*n*f) * (z*exp(-i*pi*n*f) + w*exp(+i*pi*n*f)).
// Convention: these are the coefficients of the e^{+i 2 pi n x / d} expansion.
std::complex<double> fourier_coefficient(int n, const GratingSpec& g);

// Fourier coefficient A_l of |T(x)|^2, evaluated analytically as the b_l of a
// binary grating with amplitudes |w|^2 and |z|^2. For w=1, z=0 this equals b_l.
std::complex<double> intensity_coefficient(int l, const GratingSpec& g);

} // namespace tlau
