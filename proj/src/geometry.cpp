#include "tlau/geometry.hpp"

#include <cmath>
#include <string>

#include "tlau/constants.hpp"
#include "tlau/errors.hpp"

namespace tlau {

void SetupGeometry::validate() const {
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(L > 0.0) || !(eta > 0.0))
        throw physics_error("SetupGeometry requires d1, d2, L, eta > 0");
}

void BeamSpec::validate() const {
    if (!(mass > 0.0) || !(mean_speed > 0.0))
        throw physics_error("BeamSpec requires mass and mean_speed > 0");
    if (sigma_v < 0.0)
        throw physics_error("BeamSpec requires sigma_v >= 0");
    if (!(mean_speed - 3.0 * sigma_v > 0.0))
        throw physics_error("BeamSpec requires mean_speed - 3*sigma_v > 0");
    if (lifetime && !(*lifetime > 0.0))
        throw physics_error("BeamSpec lifetime must be positive");
}

double de_broglie(double mass, double speed) {
    if (!(mass > 0.0) || !(speed > 0.0))
        throw physics_error("de_broglie requires mass > 0 and speed > 0");
    return constants::planck / (mass * speed);
}

ResonanceCheck resonance_order(const SetupGeometry& setup) {
    setup.validate();
    const double q = (setup.d2 / setup.d1) * (1.0 + setup.eta) / setup.eta;
    return {q, std::abs(q - std::round(q)) < integer_q_tolerance};
}

SetupGeometry design_from_family(int q, double eta, double d2, double lambda) {
    if (q != 1 && q != 2)
        throw physics_error("design_from_family supports q = 1 or 2, got " + std::to_string(q));
    if (!(eta > 0.0) || !(d2 > 0.0) || !(lambda > 0.0))
        throw physics_error("design_from_family requires eta, d2, lambda > 0");
    const double d1 = d2 * (1.0 + eta) / (q * eta);
    const double L = d1 * d2 / lambda;
    return {d1, d2, L, eta};
}

double fringe_displacement(double a, double T1, double eta) {
    if (!(T1 > 0.0))
        throw physics_error("fringe_displacement requires T1 > 0");
    return 0.5 * a * T1 * T1 * eta * (eta + 1.0);
}

EqualLengthPair equal_length_pair(double d2_sym, double eta, double lambda) {
    if (!(eta >= 1.0))
        throw physics_error("equal_length_pair requires eta >= 1");
    SetupGeometry sym = design_from_family(2, 1.0, d2_sym, lambda);
    // Equal total length fixes the asymmetric G2 period:
    //   d2_a^2 / d2_s^2 = 2*eta/(1+eta)^2
    const double d2_asym = d2_sym * std::sqrt(2.0 * eta) / (1.0 + eta);
    SetupGeometry asym = design_from_family(1, eta, d2_asym, lambda);
    return {sym, asym, std::sqrt(2.0 * eta), 2.0 * eta / (eta + 1.0)};
}

double relative_displacement_closed_form(int family, double eta, double mass,
                                         double a, double T_total) {
    if (!(T_total > 0.0))
        throw physics_error("relative_displacement_closed_form requires T_total > 0");
    const double scale = std::sqrt(mass / constants::planck) * std::pow(T_total, 1.5);
    if (family == 1)
        return 0.5 * a * std::sqrt(eta) / (eta + 1.0) * scale;
    if (family == 2)
        return a / (2.0 * std::sqrt(2.0)) * scale;
    throw physics_error("relative_displacement_closed_form supports family 1 or 2");
}

double classicality_margin(const SetupGeometry& setup, double lambda) {
    setup.validate();
    if (lambda < 0.0)
        throw physics_error("classicality_margin requires lambda >= 0");
    return setup.L * lambda / (setup.d2 * setup.d2);
}

} // namespace tlau
