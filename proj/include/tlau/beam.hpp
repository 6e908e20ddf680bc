#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "tlau/talbot.hpp"

namespace tlau {

enum class SpeedKind { monochromatic, gaussian, gaussian_with_decay };

// Longitudinal speed distribution. The Gaussian is truncated to
// [mean - 4 sigma, mean + 4 sigma] intersected with v > 0 and renormalized
// there; the decay kind multiplies in the survival factor
// exp(-flight_length / (lifetime * v)) and renormalizes numerically.
// sigma = 0 beams use the monochromatic kind, not a degenerate Gaussian.
struct SpeedDistribution {
    SpeedKind kind = SpeedKind::monochromatic;
    double mean = 0.0;
    double sigma = 0.0;
    double lifetime = 0.0;
    double flight_length = 0.0;

    double support_lo() const;
    double support_hi() const;
};

SpeedDistribution monochromatic_beam(double mean);
SpeedDistribution gaussian_beam(double mean, double sigma);
SpeedDistribution decaying_beam(double mean, double sigma, double lifetime, double flight_length);

double pdf(const SpeedDistribution& dist, double v);

// Location of the pdf maximum over the support. With decay weighting this
// sits above the mean.
double pdf_argmax(const SpeedDistribution& dist);

struct SpeedQuadrature {
    std::vector<double> speeds;
    std::vector<double> weights;  // include the pdf; normalized to unit total
};

SpeedQuadrature speed_quadrature(const SpeedDistribution& dist, int nodes);

// Speed-averaged harmonic amplitudes; same layout as pattern_coefficients.
std::vector<std::complex<double>> polychromatic_coefficients(const TalbotContext& ctx,
                                                             const SpeedDistribution& dist,
                                                             double a, int nodes);

FringePattern polychromatic_pattern(const TalbotContext& ctx, const SpeedDistribution& dist,
                                    double a, const std::vector<double>& xs, int nodes);

// Relative pattern change when the node count doubles; above ~1e-3 the
// quadrature is under-resolving the slow tail and callers should warn.
double quadrature_doubling_delta(const TalbotContext& ctx, const SpeedDistribution& dist, double a,
                                 int nodes);

// Least-squares displacement of the accelerated polychromatic pattern
// relative to its a = 0 reference, searched over one fringe period
// [-d3/2, d3/2] by golden section with parabolic refinement. Both patterns
// are evaluated in the frame where the reference peak for the mean speed
// sits at x = 0.
double effective_displacement_fit(const TalbotContext& ctx, const SpeedDistribution& dist,
                                  double a, const std::vector<double>& xs, int nodes);

struct VisibilityRow {
    double sigma_rel = 0.0;
    double contrast = 0.0;
    double dx_eff = 0.0;
    double dx_rel = 0.0;
};

// Contrast and effective displacement versus sigma_v / mean. tmpl fixes the
// distribution kind and its decay parameters; each row rescales sigma.
std::vector<VisibilityRow> visibility_curve(const TalbotContext& ctx,
                                            const SpeedDistribution& tmpl,
                                            const std::vector<double>& sigma_rels, double a,
                                            const std::vector<double>& xs, int nodes);

struct SensitivityReport {
    double contrast = 0.0;
    double dx_eff = 0.0;
    double d3 = 0.0;
    double n_counts = 0.0;
    double sigma_a_over_a = 0.0;
    std::optional<double> rescaled;
};

// sigma_a / a = 1 / (sqrt(N) * 2 pi * C * dx_eff / d3).
SensitivityReport sensitivity(double contrast, double dx_eff, double d3, double n_counts);

// sqrt(N0) * sigma_a/a with N = f^2 * N0; independent of N0.
double rescaled_sensitivity(const SensitivityReport& report, double f, double n0);

}  // namespace tlau
