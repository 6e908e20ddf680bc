#pragma once

#include <optional>

namespace tlau {

// Two-grating interferometer: G1 (period d1) and G2 (period d2) separated by L,
// detection plane a further eta*L downstream. Fringe period at the detector is
// d3 = eta*d1 and the total length is L*(1+eta). a is the transverse
// acceleration (signed).
struct SetupGeometry {
    double d1;
    double d2;
    double L;
    double eta;
    double a = 0.0;

    double d3() const { return eta * d1; }
    double total_length() const { return L * (1.0 + eta); }

    void validate() const; // throws physics_error on non-positive d1, d2, L, eta
};

// Resonance order q = (d2/d1)*(1+eta)/eta. q=2 is the symmetric family
// (d1=d2, eta=1), q=1 the asymmetric one (d1 = d2*(1+eta)/eta).
struct ResonanceCheck {
    double q;
    bool integer; // |q - round(q)| < 1e-9
};

struct BeamSpec {
    double mass;       // kg
    double mean_speed; // m/s
    double sigma_v;    // m/s
    std::optional<double> lifetime; // s

    void validate() const; // mass, mean_speed > 0; sigma_v >= 0; mean - 3*sigma > 0
};

double de_broglie(double mass, double speed);

ResonanceCheck resonance_order(const SetupGeometry& setup);

// Builds the resonant geometry of family q at magnification eta for a given G2
// period and wavelength: d1 = d2*(1+eta)/(q*eta), L = d1*d2/lambda.
SetupGeometry design_from_family(int q, double eta, double d2, double lambda);

// Rigid fringe shift under transverse acceleration: a*T1^2/2 * eta*(eta+1).
double fringe_displacement(double a, double T1, double eta);

// Symmetric and asymmetric setups of equal total length, plus the ratios of
// their fringe periods, sqrt(2*eta), and displacements, 2*eta/(eta+1).
struct EqualLengthPair {
    SetupGeometry symmetric;
    SetupGeometry asymmetric;
    double period_ratio;
    double displacement_ratio;
};

EqualLengthPair equal_length_pair(double d2_sym, double eta, double lambda);

// Displacement in units of the fringe period, as a function of the total
// flight time only. family 1: (a/2)*(sqrt(eta)/(eta+1))*sqrt(m/h)*T^(3/2);
// family 2 (eta=1): a/(2*sqrt(2))*sqrt(m/h)*T^(3/2).
double relative_displacement_closed_form(int family, double eta, double mass,
                                         double a, double T_total);

// L/L_T with L_T = d2^2/lambda. Values below classical_threshold mean grating
// diffraction is negligible and the classical shadow model applies.
double classicality_margin(const SetupGeometry& setup, double lambda);

inline constexpr double classical_threshold = 0.05;
inline constexpr double integer_q_tolerance = 1e-9;

} // namespace tlau
