#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "tlau/beam.hpp"
#include "tlau/constants.hpp"
#include "tlau/errors.hpp"
#include "tlau/geometry.hpp"
#include "tlau/quadrature.hpp"
#include "tlau/talbot.hpp"

using namespace tlau;

namespace {
constexpr double kPsMass = 2.0 * constants::electron_mass;
constexpr double kMean = 800.0;

TalbotContext make_context(int family, double eta, double d2, double f) {
    double lambda = de_broglie(kPsMass, kMean);
    SetupGeometry s = design_from_family(family, eta, d2, lambda);
    return TalbotContext(s, GratingSpec{s.d1, f}, GratingSpec{s.d2, f}, lambda, kMean);
}

TalbotContext sym_ctx(double f) { return make_context(2, 1.0, 476e-6, f); }
TalbotContext asym_ctx(double f) { return make_context(1, 2.0, 317.3e-6, f); }

double curve_contrast(const TalbotContext& ctx, double srel) {
    std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    SpeedDistribution tmpl = gaussian_beam(kMean, 0.05 * kMean);
    auto rows = visibility_curve(ctx, tmpl, {srel}, 0.0, xs, 257);
    return rows[0].contrast;
}

double curve_dx(const TalbotContext& ctx, double srel, double a) {
    std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    SpeedDistribution dist = gaussian_beam(kMean, srel * kMean);
    return effective_displacement_fit(ctx, dist, a, xs, 257);
}
}  // namespace

TEST_CASE("gaussian pdf peaks at the mean with the truncation-corrected height") {
    double sigma = 0.1 * kMean;
    SpeedDistribution d = gaussian_beam(kMean, sigma);
    double untruncated = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    CHECK(pdf(d, kMean) == doctest::Approx(untruncated).epsilon(1e-4));
    CHECK(pdf(d, kMean) > untruncated);
    CHECK(pdf(d, kMean * 1.01) < pdf(d, kMean));
    CHECK(pdf(d, d.support_hi() + 1.0) == 0.0);
}

TEST_CASE("pdf integrates to one over the support") {
    for (bool decay : {false, true}) {
        double sigma = 0.2 * kMean;
        SpeedDistribution d = decay ? decaying_beam(kMean, sigma, 500e-6, 1.0)
                                    : gaussian_beam(kMean, sigma);
        QuadratureRule rule = gauss_legendre(400, d.support_lo(), d.support_hi());
        double total = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            total += rule.weights[i] * pdf(d, rule.nodes[i]);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("speed quadrature weights are a normalized probability measure") {
    SpeedDistribution d = gaussian_beam(kMean, 0.2 * kMean);
    SpeedQuadrature sq = speed_quadrature(d, 257);
    REQUIRE(sq.speeds.size() == 257);
    double total = 0.0, first_moment = 0.0;
    for (std::size_t i = 0; i < sq.speeds.size(); ++i) {
        CHECK(sq.weights[i] >= 0.0);
        CHECK(sq.speeds[i] > d.support_lo());
        CHECK(sq.speeds[i] < d.support_hi());
        total += sq.weights[i];
        first_moment += sq.weights[i] * sq.speeds[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(first_moment == doctest::Approx(kMean).epsilon(1e-10));
}

TEST_CASE("monochromatic beams collapse the quadrature to a single node") {
    SpeedDistribution d = monochromatic_beam(kMean);
    SpeedQuadrature sq = speed_quadrature(d, 257);
    REQUIRE(sq.speeds.size() == 1);
    CHECK(sq.speeds[0] == kMean);
    CHECK(sq.weights[0] == 1.0);
    CHECK(pdf_argmax(d) == kMean);
}

TEST_CASE("decay weighting moves the most probable speed above the mean") {
    // Solving (v - mean) v^2 = flight * sigma^2 / lifetime for the stationary
    // point gives 932.5 m/s at sigma/mean = 0.3, tau = 500 us, flight 1 m.
    SpeedDistribution d = decaying_beam(kMean, 0.3 * kMean, 500e-6, 1.0);
    double peak = pdf_argmax(d);
    CHECK(peak == doctest::Approx(932.5).epsilon(2e-3));
    CHECK(peak > kMean);

    SpeedDistribution narrow = decaying_beam(kMean, 0.1 * kMean, 500e-6, 1.0);
    CHECK(pdf_argmax(narrow) > kMean);
    CHECK(pdf_argmax(narrow) < peak);
}

TEST_CASE("speed quadrature resolves the pattern at the working node count") {
    TalbotContext ctx = asym_ctx(0.3);
    SpeedDistribution d = gaussian_beam(kMean, 0.3 * kMean);
    CHECK(quadrature_doubling_delta(ctx, d, 0.0, 257) < 1e-3);
    CHECK(quadrature_doubling_delta(ctx, monochromatic_beam(kMean), 0.0, 257) == 0.0);
}

TEST_CASE("polychromatic contrast anchors at the working configurations") {
    CHECK(curve_contrast(sym_ctx(0.3), 0.01) == doctest::Approx(0.95018).epsilon(1e-3 / 0.95));
    CHECK(curve_contrast(sym_ctx(0.3), 0.3) == doctest::Approx(0.481186).epsilon(1e-3 / 0.48));
    CHECK(curve_contrast(asym_ctx(0.3), 0.01) == doctest::Approx(0.998256).epsilon(1e-3));
    CHECK(curve_contrast(asym_ctx(0.3), 0.3) == doctest::Approx(0.48415).epsilon(1e-3 / 0.48));
    CHECK(curve_contrast(asym_ctx(0.5), 0.01) == doctest::Approx(0.935446).epsilon(1e-3 / 0.93));
    CHECK(curve_contrast(asym_ctx(0.5), 0.3) == doctest::Approx(0.509771).epsilon(1e-3 / 0.51));
    CHECK(curve_contrast(sym_ctx(0.5), 0.01) == doctest::Approx(0.0351463).epsilon(2e-3 / 0.035));
    CHECK(curve_contrast(sym_ctx(0.5), 0.3) == doctest::Approx(0.261056).epsilon(5e-3 / 0.26));
}

TEST_CASE("effective displacement anchors for a slow thermal spread") {
    CHECK(curve_dx(sym_ctx(0.3), 0.3, 9.81) == doctest::Approx(5.00279e-6).epsilon(0.01));
    CHECK(curve_dx(asym_ctx(0.3), 0.3, 9.81) == doctest::Approx(5.44639e-6).epsilon(0.01));
    CHECK(curve_dx(asym_ctx(0.5), 0.3, 9.81) == doctest::Approx(3.94592e-6).epsilon(0.01));
}

TEST_CASE("monochromatic displacement fit recovers the closed form") {
    for (double f : {0.3, 0.5}) {
        TalbotContext ctx = asym_ctx(f);
        std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
        double dx = effective_displacement_fit(ctx, monochromatic_beam(kMean), 9.81, xs, 257);
        double closed = fringe_displacement(9.81, ctx.setup.L / kMean, ctx.setup.eta);
        CHECK(std::abs(dx - closed) < 1e-6 * ctx.fringe_period());
    }
}

TEST_CASE("decay weighting flattens the displacement growth with sigma") {
    TalbotContext ctx = asym_ctx(0.3);
    std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    double total_length = ctx.setup.L * (1.0 + ctx.setup.eta);

    auto slope = [&](bool with_decay) {
        double dx_lo = 0.0, dx_hi = 0.0;
        for (double srel : {0.1, 0.3}) {
            SpeedDistribution d = with_decay
                                      ? decaying_beam(kMean, srel * kMean, 500e-6, total_length)
                                      : gaussian_beam(kMean, srel * kMean);
            double v = effective_displacement_fit(ctx, d, 9.81, xs, 257);
            (srel < 0.2 ? dx_lo : dx_hi) = v;
        }
        return (dx_hi - dx_lo) / 0.2;
    };
    double plain = slope(false);
    double damped = slope(true);
    CHECK(plain > 0.0);
    CHECK(damped < plain);
}

TEST_CASE("visibility curve sweeps sigma and reports consistent ratios") {
    TalbotContext ctx = asym_ctx(0.3);
    std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    SpeedDistribution tmpl = gaussian_beam(kMean, 0.05 * kMean);
    auto rows = visibility_curve(ctx, tmpl, {0.0, 0.1, 0.2, 0.3}, 9.81, xs, 257);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].dx_rel == doctest::Approx(rows[i].dx_eff / ctx.fringe_period()).epsilon(1e-12));
        if (i > 0)
            CHECK(rows[i].contrast < rows[i - 1].contrast);
    }
    double closed = fringe_displacement(9.81, ctx.setup.L / kMean, ctx.setup.eta);
    CHECK(rows[0].dx_eff == doctest::Approx(closed).epsilon(1e-4));
}

TEST_CASE("sensitivity closed form and the rescaled estimator") {
    SensitivityReport r = sensitivity(0.5, 0.5, 1.0, 1.0);
    CHECK(r.sigma_a_over_a == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));

    SensitivityReport base = sensitivity(0.4, 2e-6, 952e-6, 1e6);
    double r1 = rescaled_sensitivity(base, 0.3, 1e6);
    double r2 = rescaled_sensitivity(base, 0.3, 1e9);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    CHECK(r1 == doctest::Approx(1.0 / (0.3 * 2.0 * std::numbers::pi * 0.4 * (2e-6 / 952e-6)))
                     .epsilon(1e-12));
}

TEST_CASE("sensitivity rejects degenerate inputs") {
    CHECK_THROWS_AS(sensitivity(0.0, 1e-6, 1e-3, 1e6), stats_error);
    CHECK_THROWS_AS(sensitivity(0.5, 0.0, 1e-3, 1e6), stats_error);
    CHECK_THROWS_AS(sensitivity(1.2, 1e-6, 1e-3, 1e6), physics_error);
    CHECK_THROWS_AS(sensitivity(0.5, 1e-6, 0.0, 1e6), physics_error);
    CHECK_THROWS_AS(sensitivity(0.5, 1e-6, 1e-3, 0.0), config_error);
    SensitivityReport r = sensitivity(0.5, 1e-6, 1e-3, 1e6);
    CHECK_THROWS_AS(rescaled_sensitivity(r, 0.0, 1e6), config_error);
    CHECK_THROWS_AS(rescaled_sensitivity(r, 1.0, 1e6), config_error);
    CHECK_THROWS_AS(rescaled_sensitivity(r, 0.3, 0.0), config_error);
}

TEST_CASE("displacement fit refuses a contrast-free reference") {
    double lambda = de_broglie(kPsMass, kMean);
    SetupGeometry s = design_from_family(1, 2.0, 317.3e-6, lambda);
    TalbotContext flat(s, GratingSpec{s.d1, 0.3}, GratingSpec{s.d2, 0.3}, lambda, kMean, 0, 20);
    std::vector<double> xs = make_grid(flat.fringe_period(), 512);
    CHECK_THROWS_AS(effective_displacement_fit(flat, monochromatic_beam(kMean), 9.81, xs, 257),
                    stats_error);
}

TEST_CASE("beam factories validate their parameters") {
    CHECK_THROWS_AS(monochromatic_beam(0.0), physics_error);
    CHECK_THROWS_AS(monochromatic_beam(-5.0), physics_error);
    CHECK_THROWS_AS(gaussian_beam(kMean, 0.0), physics_error);
    CHECK_THROWS_AS(gaussian_beam(kMean, kMean / 2.9), physics_error);
    CHECK_NOTHROW(gaussian_beam(kMean, kMean / 3.1));
    CHECK_THROWS_AS(decaying_beam(kMean, 80.0, 0.0, 1.0), physics_error);
    CHECK_THROWS_AS(decaying_beam(kMean, 80.0, 500e-6, 0.0), physics_error);
    CHECK_THROWS_AS(pdf(gaussian_beam(kMean, 80.0), 0.0), physics_error);
    CHECK_THROWS_AS(pdf(monochromatic_beam(kMean), kMean), physics_error);
}

TEST_CASE("polychromatic averaging needs a minimum node count") {
    TalbotContext ctx = asym_ctx(0.3);
    SpeedDistribution d = gaussian_beam(kMean, 0.1 * kMean);
    CHECK_THROWS_AS(polychromatic_coefficients(ctx, d, 0.0, 32), config_error);
    CHECK_NOTHROW(polychromatic_coefficients(ctx, d, 0.0, 33));
    std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    CHECK_THROWS_AS(visibility_curve(ctx, monochromatic_beam(kMean), {0.1}, 0.0, xs, 257),
                    config_error);
    CHECK_THROWS_AS(visibility_curve(ctx, d, {-0.1}, 0.0, xs, 257), config_error);
}
