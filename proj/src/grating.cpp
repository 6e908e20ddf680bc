#include "tlau/grating.hpp"

#include <cmath>
#include <numbers>

#include "tlau/errors.hpp"

namespace tlau {

namespace {
constexpr double pi = std::numbers::pi;
}

void GratingSpec::validate() const {
    if (!(period > 0.0))
        throw physics_error("GratingSpec requires period > 0");
    if (!(open_fraction > 0.0) || !(open_fraction < 1.0))
        throw physics_error("GratingSpec requires 0 < open_fraction < 1");
    if (std::abs(amp_open) > 1.0 + 1e-12 || std::abs(amp_closed) > 1.0 + 1e-12)
        throw physics_error("GratingSpec amplitudes must have modulus <= 1");
}

double sinc(double u) {
    if (u == 0.0)
        return 1.0;
    return std::sin(u) / u;
}

std::complex<double> transmission(double x, const GratingSpec& g) {
    double r = std::fmod(x, g.period);
    if (r < 0.0)
        r += g.period;
    // Slit on (-f*d, 0] per period; this placement is what the phase
    // convention of fourier_coefficient reconstructs.
    if (r == 0.0 || r > (1.0 - g.open_fraction) * g.period)
        return g.amp_open;
    return g.amp_closed;
}

std::complex<double> fourier_coefficient(int n, const GratingSpec& g) {
    const double f = g.open_fraction;
    const double phase = pi * n * f;
    const std::complex<double> rot = std::polar(1.0, phase);
    return f * sinc(phase) * (g.amp_closed / rot + g.amp_open * rot);
}

std::complex<double> intensity_coefficient(int l, const GratingSpec& g) {
    GratingSpec sq = g;
    sq.amp_open = std::norm(g.amp_open);
    sq.amp_closed = std::norm(g.amp_closed);
    return fourier_coefficient(l, sq);
}

} // namespace tlau
