#include "doctest.h"

#include <cmath>

#include "tlau/constants.hpp"
#include "tlau/errors.hpp"
#include "tlau/geometry.hpp"

using namespace tlau;

namespace {
constexpr double kPsMass = 2.0 * constants::electron_mass;
constexpr double kPsSpeed = 800.0;
}  // namespace

TEST_CASE("de Broglie wavelength of slow positronium") {
    double lambda = de_broglie(kPsMass, kPsSpeed);
    CHECK(lambda == doctest::Approx(454.6e-9).epsilon(1e-3));
    CHECK(de_broglie(kPsMass, 2.0 * kPsSpeed) == doctest::Approx(lambda / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(de_broglie(-1.0, 100.0), physics_error);
    CHECK_THROWS_AS(de_broglie(kPsMass, 0.0), physics_error);
}

TEST_CASE("resonance order of the two standard families") {
    SetupGeometry sym{476e-6, 476e-6, 0.5, 1.0};
    ResonanceCheck rs = resonance_order(sym);
    CHECK(rs.integer);
    CHECK(rs.q == doctest::Approx(2.0).epsilon(1e-12));

    SetupGeometry asym{476e-6, 476e-6 * 2.0 / 3.0, 0.5, 2.0};
    ResonanceCheck ra = resonance_order(asym);
    CHECK(ra.integer);
    CHECK(ra.q == doctest::Approx(1.0).epsilon(1e-12));

    SetupGeometry off{476e-6, 500e-6, 0.5, 1.0};
    CHECK_FALSE(resonance_order(off).integer);
}

TEST_CASE("designed geometry is resonant and has the resonant length") {
    double lambda = de_broglie(kPsMass, kPsSpeed);
    for (int q : {1, 2}) {
        for (double eta : {1.0, 2.0, 3.0}) {
            SetupGeometry s = design_from_family(q, eta, 317.3e-6, lambda);
            ResonanceCheck res = resonance_order(s);
            CHECK(res.integer);
            CHECK(res.q == doctest::Approx(double(q)).epsilon(1e-12));
            CHECK(s.L == doctest::Approx(s.d1 * s.d2 / lambda).epsilon(1e-12));
            CHECK(s.d3() == doctest::Approx(eta * s.d1).epsilon(1e-12));
        }
    }
}

TEST_CASE("positronium designs land at half and third of a meter") {
    double lambda = de_broglie(kPsMass, kPsSpeed);
    SetupGeometry sym = design_from_family(2, 1.0, 476e-6, lambda);
    CHECK(sym.L == doctest::Approx(0.50).epsilon(0.01));
    CHECK(sym.d3() == doctest::Approx(476e-6).epsilon(1e-9));

    SetupGeometry asym = design_from_family(1, 2.0, 317.3e-6, lambda);
    CHECK(asym.L == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(asym.d3() == doctest::Approx(952e-6).epsilon(0.002));
    CHECK(asym.total_length() == doctest::Approx(sym.total_length()).epsilon(0.002));
}

TEST_CASE("gravity shift reduces to a*T1^2 in the symmetric setup") {
    double t1 = 0.5 / 100.0;
    CHECK(fringe_displacement(9.81, t1, 1.0) == 9.81 * t1 * t1);
    CHECK(fringe_displacement(0.0, t1, 2.0) == 0.0);
    CHECK(fringe_displacement(-9.81, t1, 1.0) == -9.81 * t1 * t1);
}

TEST_CASE("gravity shift for the one-meter eta=2 positronium flight") {
    double t1 = 0.33 / 800.0;
    CHECK(fringe_displacement(9.81, t1, 2.0) == doctest::Approx(5.008e-6).epsilon(1e-3));
}

TEST_CASE("equal length pair ratios are exact") {
    double lambda = de_broglie(kPsMass, kPsSpeed);
    for (double eta : {1.0, 2.0, 3.0, 4.0}) {
        EqualLengthPair pair = equal_length_pair(476e-6, eta, lambda);
        CHECK(pair.period_ratio == doctest::Approx(std::sqrt(2.0 * eta)).epsilon(1e-14));
        CHECK(pair.displacement_ratio == doctest::Approx(2.0 * eta / (eta + 1.0)).epsilon(1e-14));
        CHECK(pair.symmetric.total_length() ==
              doctest::Approx(pair.asymmetric.total_length()).epsilon(1e-12));
        CHECK(resonance_order(pair.symmetric).integer);
        CHECK(resonance_order(pair.asymmetric).integer);
    }
    CHECK(equal_length_pair(476e-6, 3.0, lambda).displacement_ratio ==
          doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("relative displacement closed forms match the assembled geometry") {
    double lambda = de_broglie(kPsMass, kPsSpeed);
    double a = 9.81;
    for (double eta : {1.5, 2.0, 3.0}) {
        SetupGeometry s = design_from_family(1, eta, 317.3e-6, lambda);
        double t1 = s.L / kPsSpeed;
        double t_total = s.total_length() / kPsSpeed;
        double direct = fringe_displacement(a, t1, s.eta) / s.d3();
        CHECK(relative_displacement_closed_form(1, eta, kPsMass, a, t_total) ==
              doctest::Approx(direct).epsilon(1e-10));
    }
    SetupGeometry sym = design_from_family(2, 1.0, 476e-6, lambda);
    double t1 = sym.L / kPsSpeed;
    double direct = fringe_displacement(a, t1, 1.0) / sym.d3();
    CHECK(relative_displacement_closed_form(2, 1.0, kPsMass, a, sym.total_length() / kPsSpeed) ==
          doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("classicality margin separates coarse slow beams from fine fast ones") {
    SetupGeometry coarse{800e-6, 800e-6, 0.5, 1.0};
    double lambda_pbar = de_broglie(1.67262192369e-27, 100.0);
    CHECK(classicality_margin(coarse, lambda_pbar) < classical_threshold);

    double lambda_ps = de_broglie(kPsMass, kPsSpeed);
    CHECK(classicality_margin(coarse, lambda_ps) == doctest::Approx(0.3552).epsilon(1e-3));
    CHECK(classicality_margin(coarse, lambda_ps) > classical_threshold);
}

TEST_CASE("geometry validation rejects non-positive dimensions") {
    CHECK_THROWS_AS((SetupGeometry{0.0, 476e-6, 0.5, 1.0}.validate()), physics_error);
    CHECK_THROWS_AS((SetupGeometry{476e-6, -1e-6, 0.5, 1.0}.validate()), physics_error);
    CHECK_THROWS_AS((SetupGeometry{476e-6, 476e-6, 0.0, 1.0}.validate()), physics_error);
    CHECK_THROWS_AS((SetupGeometry{476e-6, 476e-6, 0.5, 0.0}.validate()), physics_error);
    CHECK_NOTHROW((SetupGeometry{476e-6, 476e-6, 0.5, 1.0, -9.81}.validate()));
}
