#pragma once

#include <complex>
#include <vector>

#include "tlau/geometry.hpp"
#include "tlau/grating.hpp"

namespace tlau {

// Generalized Talbot coefficient of a grating,
//   B_k(alpha) = sum_n b_n conj(b_{n-k}) exp(i pi alpha (k - 2n)),
// truncated to |n| <= n_max. alpha is the propagation phase L/L_T scaled by
// the harmonic under consideration.
std::complex<double> talbot_coefficient(int k, double alpha, const GratingSpec& g, int n_max);

// Precomputed state for near-field pattern evaluation behind a two-grating
// setup. lambda is the de Broglie wavelength at ref_speed; other speeds use
// lambda(v) = lambda * ref_speed / v.
struct TalbotContext {
    SetupGeometry setup;
    GratingSpec g1;
    GratingSpec g2;
    double lambda = 0.0;
    double ref_speed = 0.0;
    int l_max = 10;
    int n_max = 20;
    int q = 0;

    TalbotContext(const SetupGeometry& setup_, const GratingSpec& g1_, const GratingSpec& g2_,
                  double lambda_, double ref_speed_, int l_max_ = 10, int n_max_ = 20);

    double lambda_at(double speed) const { return lambda * ref_speed / speed; }
    double talbot_length(double lam) const { return setup.d2 * setup.d2 / lam; }
    double fringe_period() const { return setup.eta * setup.d1; }

    // Cached Fourier coefficient of G2 and intensity coefficient of G1.
    std::complex<double> b2(int n) const;
    std::complex<double> a1(int l) const;

    // Cached B_{k}(alpha) for G2 using the precomputed b2 table.
    std::complex<double> talbot_b(int k, double alpha) const;

  private:
    std::vector<std::complex<double>> b2_table;
    std::vector<std::complex<double>> a1_table;
    int b2_span = 0;
};

// Detector-plane fringe profile. intensities are the raw series samples and
// may dip slightly below zero from harmonic truncation; clamped() is the
// physical profile.
struct FringePattern {
    std::vector<double> xs;
    std::vector<double> intensities;
    double period = 0.0;
    double displacement = 0.0;
    double normalization = 0.0;

    std::vector<double> clamped() const;
};

// Harmonic amplitudes c_l, stored at index l + l_max for l in [-l_max, l_max].
// The intensity is I(x) = sum_l c_l exp(+i 2 pi l x / period) and the vector
// is Hermitian (c_{-l} = conj(c_l)) so I is real.
std::vector<std::complex<double>> pattern_coefficients(const TalbotContext& ctx, double a,
                                                       double speed);

// c_l <- c_l exp(-i 2 pi l s / period), i.e. the pattern moves by +s.
void shift_coefficients(std::vector<std::complex<double>>& c, double period, double s);

std::vector<double> sample_coefficients(const std::vector<std::complex<double>>& c, double period,
                                        const std::vector<double>& xs);

// Uniform grid of n_periods * samples_per_period points starting at start,
// step period / samples_per_period.
std::vector<double> make_grid(double period, int samples_per_period, int n_periods = 1,
                              double start = 0.0);

// Uniform, strictly increasing, integer number of periods; throws otherwise.
void validate_pattern_grid(const std::vector<double>& xs, double period);

FringePattern monochromatic_pattern(const TalbotContext& ctx, double a, double speed,
                                    const std::vector<double>& xs);

// Michelson contrast (max - min) / (max + min) of the clamped profile. The
// grid must cover at least one period with at least 256 samples per period.
double visibility(const FringePattern& p);

// First-harmonic visibility 2 |B_q(alpha_1)| / A_0 at the given speed.
double sinusoidal_visibility(const TalbotContext& ctx, double speed);

struct CarpetRow {
    double ratio = 0.0;
    FringePattern pattern;
    double vis = 0.0;
};

// Pattern and visibility as a function of L / L_T at fixed geometry. Each
// ratio is realized by rescaling the wavelength, lambda = ratio * d2^2 / L.
std::vector<CarpetRow> carpet(const TalbotContext& ctx, const std::vector<double>& ratios,
                              const std::vector<double>& xs);

double peak_location(const FringePattern& p);

}  // namespace tlau
