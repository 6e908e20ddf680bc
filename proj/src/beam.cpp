#include "tlau/beam.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "tlau/errors.hpp"
#include "tlau/quadrature.hpp"

namespace tlau {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void validate_beam(const SpeedDistribution& d) {
    if (!(d.mean > 0.0))
        throw physics_error("beam mean speed must be positive");
    if (d.kind == SpeedKind::monochromatic)
        return;
    if (!(d.sigma > 0.0))
        throw physics_error("beam sigma must be positive; use the monochromatic kind for sigma = 0");
    if (!(d.mean - 3.0 * d.sigma > 0.0))
        throw physics_error("beam requires mean - 3*sigma > 0");
    if (d.kind == SpeedKind::gaussian_with_decay) {
        if (!(d.lifetime > 0.0) || !(d.flight_length > 0.0))
            throw physics_error("decay weighting requires positive lifetime and flight length");
    }
}

double gaussian_core(const SpeedDistribution& d, double v) {
    const double u = (v - d.mean) / d.sigma;
    return std::exp(-0.5 * u * u) / (std::sqrt(two_pi) * d.sigma);
}

double truncation_norm(const SpeedDistribution& d) {
    const double rt2 = std::numbers::sqrt2;
    return 0.5 * (std::erf((d.support_hi() - d.mean) / (d.sigma * rt2)) -
                  std::erf((d.support_lo() - d.mean) / (d.sigma * rt2)));
}

double survival(const SpeedDistribution& d, double v) {
    return std::exp(-d.flight_length / (d.lifetime * v));
}

// Integral of the truncated Gaussian times the survival factor.
double decay_norm(const SpeedDistribution& d) {
    static const QuadratureRule base = gauss_legendre(1025);
    const double zg = truncation_norm(d);
    const double mid = 0.5 * (d.support_lo() + d.support_hi());
    const double half = 0.5 * (d.support_hi() - d.support_lo());
    double z = 0.0;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const double v = mid + half * base.nodes[i];
        z += half * base.weights[i] * gaussian_core(d, v) / zg * survival(d, v);
    }
    return z;
}

double golden_parabolic_min(const std::function<double(double)>& fn, double lo, double hi,
                            double tol) {
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = fn(d);
        }
    }
    double x = 0.5 * (a + b);
    double h = tol;
    for (int round = 0; round < 2; ++round) {
        const double fm = fn(x - h), f0 = fn(x), fp = fn(x + h);
        const double denom = fm - 2.0 * f0 + fp;
        if (denom > 0.0)
            x += std::clamp(0.5 * h * (fm - fp) / denom, -h, h);
        h *= 0.1;
    }
    return x;
}

}  // namespace

double SpeedDistribution::support_lo() const { return std::max(mean - 4.0 * sigma, 0.0); }

double SpeedDistribution::support_hi() const { return mean + 4.0 * sigma; }

SpeedDistribution monochromatic_beam(double mean) {
    SpeedDistribution d;
    d.kind = SpeedKind::monochromatic;
    d.mean = mean;
    validate_beam(d);
    return d;
}

SpeedDistribution gaussian_beam(double mean, double sigma) {
    SpeedDistribution d;
    d.kind = SpeedKind::gaussian;
    d.mean = mean;
    d.sigma = sigma;
    validate_beam(d);
    return d;
}

SpeedDistribution decaying_beam(double mean, double sigma, double lifetime, double flight_length) {
    SpeedDistribution d;
    d.kind = SpeedKind::gaussian_with_decay;
    d.mean = mean;
    d.sigma = sigma;
    d.lifetime = lifetime;
    d.flight_length = flight_length;
    validate_beam(d);
    return d;
}

double pdf(const SpeedDistribution& dist, double v) {
    if (!(v > 0.0))
        throw physics_error("pdf requires v > 0");
    if (dist.kind == SpeedKind::monochromatic)
        throw physics_error("pdf undefined for a monochromatic beam");
    if (v < dist.support_lo() || v > dist.support_hi())
        return 0.0;
    const double base = gaussian_core(dist, v) / truncation_norm(dist);
    if (dist.kind == SpeedKind::gaussian)
        return base;
    return base * survival(dist, v) / decay_norm(dist);
}

double pdf_argmax(const SpeedDistribution& dist) {
    if (dist.kind == SpeedKind::monochromatic)
        return dist.mean;
    const double lo = dist.support_lo();
    const double hi = dist.support_hi();
    const int n = 4096;
    const double step = (hi - lo) / n;
    int best = 0;
    double best_val = -1.0;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = lo + step * (i + 0.5);
        vals[static_cast<std::size_t>(i)] = pdf(dist, v);
        if (vals[static_cast<std::size_t>(i)] > best_val) {
            best_val = vals[static_cast<std::size_t>(i)];
            best = i;
        }
    }
    double x = lo + step * (best + 0.5);
    if (best > 0 && best < n - 1) {
        const double ym = vals[static_cast<std::size_t>(best - 1)];
        const double yp = vals[static_cast<std::size_t>(best + 1)];
        const double denom = ym - 2.0 * best_val + yp;
        if (denom < 0.0)
            x += std::clamp(0.5 * step * (ym - yp) / denom, -step, step);
    }
    return x;
}

SpeedQuadrature speed_quadrature(const SpeedDistribution& dist, int nodes) {
    SpeedQuadrature sq;
    if (dist.kind == SpeedKind::monochromatic) {
        sq.speeds = {dist.mean};
        sq.weights = {1.0};
        return sq;
    }
    if (nodes < 1)
        throw config_error("speed_quadrature requires at least one node");
    const QuadratureRule rule = gauss_legendre(nodes, dist.support_lo(), dist.support_hi());
    sq.speeds = rule.nodes;
    sq.weights.resize(rule.nodes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sq.weights[i] = rule.weights[i] * pdf(dist, rule.nodes[i]);
        total += sq.weights[i];
    }
    if (!(total > 0.0))
        throw physics_error("speed quadrature collapsed: pdf vanished at every node");
    for (double& w : sq.weights)
        w /= total;
    return sq;
}

std::vector<std::complex<double>> polychromatic_coefficients(const TalbotContext& ctx,
                                                             const SpeedDistribution& dist,
                                                             double a, int nodes) {
    if (dist.kind == SpeedKind::monochromatic)
        return pattern_coefficients(ctx, a, dist.mean);
    if (nodes < 33)
        throw config_error("polychromatic quadrature needs at least 33 nodes");
    const SpeedQuadrature sq = speed_quadrature(dist, nodes);
    std::vector<std::complex<double>> acc(2 * static_cast<std::size_t>(ctx.l_max) + 1,
                                          std::complex<double>(0.0, 0.0));
    for (std::size_t j = 0; j < sq.speeds.size(); ++j) {
        const auto c = pattern_coefficients(ctx, a, sq.speeds[j]);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += sq.weights[j] * c[i];
    }
    return acc;
}

FringePattern polychromatic_pattern(const TalbotContext& ctx, const SpeedDistribution& dist,
                                    double a, const std::vector<double>& xs, int nodes) {
    FringePattern p;
    p.period = ctx.fringe_period();
    validate_pattern_grid(xs, p.period);
    const auto c = polychromatic_coefficients(ctx, dist, a, nodes);
    p.xs = xs;
    p.displacement = fringe_displacement(a, ctx.setup.L / dist.mean, ctx.setup.eta);
    p.normalization = c[static_cast<std::size_t>(ctx.l_max)].real();
    p.intensities = sample_coefficients(c, p.period, xs);
    const double mx = *std::max_element(p.intensities.begin(), p.intensities.end());
    const double mn = *std::min_element(p.intensities.begin(), p.intensities.end());
    if (!(mx > 0.0) || mn < -0.05 * mx)
        throw physics_error("intensity series came out negative beyond truncation ringing");
    return p;
}

double quadrature_doubling_delta(const TalbotContext& ctx, const SpeedDistribution& dist, double a,
                                 int nodes) {
    if (dist.kind == SpeedKind::monochromatic)
        return 0.0;
    const std::vector<double> xs = make_grid(ctx.fringe_period(), 512);
    const auto c1 = polychromatic_coefficients(ctx, dist, a, nodes);
    const auto c2 = polychromatic_coefficients(ctx, dist, a, 2 * nodes);
    const auto i1 = sample_coefficients(c1, ctx.fringe_period(), xs);
    const auto i2 = sample_coefficients(c2, ctx.fringe_period(), xs);
    const double mx = *std::max_element(i1.begin(), i1.end());
    double delta = 0.0;
    for (std::size_t i = 0; i < i1.size(); ++i)
        delta = std::max(delta, std::abs(i2[i] - i1[i]));
    return delta / mx;
}

double effective_displacement_fit(const TalbotContext& ctx, const SpeedDistribution& dist,
                                  double a, const std::vector<double>& xs, int nodes) {
    const double d3 = ctx.fringe_period();
    validate_pattern_grid(xs, d3);
    auto ca = polychromatic_coefficients(ctx, dist, a, nodes);
    auto c0 = polychromatic_coefficients(ctx, dist, 0.0, nodes);

    const double dc = std::abs(c0[static_cast<std::size_t>(ctx.l_max)]);
    double harmonics = 0.0;
    for (int l = 1; l <= ctx.l_max; ++l)
        harmonics += 2.0 * std::abs(c0[static_cast<std::size_t>(ctx.l_max + l)]);
    if (!(dc > 0.0) || harmonics < 1e-9 * dc)
        throw stats_error("displacement fit degenerate: reference pattern has no contrast");

    double s0 = 0.5 * d3;
    if (ctx.q != 1) {
        const FringePattern ref =
            monochromatic_pattern(ctx, 0.0, dist.mean, make_grid(d3, 4096));
        s0 = peak_location(ref);
    }
    shift_coefficients(ca, d3, -s0);
    shift_coefficients(c0, d3, -s0);
    const std::vector<double> target = sample_coefficients(ca, d3, xs);

    const auto objective = [&](double s) {
        auto c = c0;
        shift_coefficients(c, d3, s);
        const std::vector<double> ref = sample_coefficients(c, d3, xs);
        double sse = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double r = target[i] - ref[i];
            sse += r * r;
        }
        return sse;
    };
    return golden_parabolic_min(objective, -0.5 * d3, 0.5 * d3, 1e-5 * d3);
}

std::vector<VisibilityRow> visibility_curve(const TalbotContext& ctx,
                                            const SpeedDistribution& tmpl,
                                            const std::vector<double>& sigma_rels, double a,
                                            const std::vector<double>& xs, int nodes) {
    std::vector<VisibilityRow> rows;
    rows.reserve(sigma_rels.size());
    for (double srel : sigma_rels) {
        if (srel < 0.0)
            throw config_error("sigma_rel values must be non-negative");
        SpeedDistribution dist;
        if (srel == 0.0) {
            dist = monochromatic_beam(tmpl.mean);
        } else {
            if (tmpl.kind == SpeedKind::monochromatic)
                throw config_error("a monochromatic template cannot sweep sigma_rel > 0");
            dist = tmpl;
            dist.sigma = srel * tmpl.mean;
            validate_beam(dist);
        }
        VisibilityRow row;
        row.sigma_rel = srel;
        row.contrast = visibility(polychromatic_pattern(ctx, dist, a, xs, nodes));
        row.dx_eff = effective_displacement_fit(ctx, dist, a, xs, nodes);
        row.dx_rel = row.dx_eff / ctx.fringe_period();
        rows.push_back(row);
    }
    return rows;
}

SensitivityReport sensitivity(double contrast, double dx_eff, double d3, double n_counts) {
    if (!(d3 > 0.0))
        throw physics_error("sensitivity requires d3 > 0");
    if (!(n_counts > 0.0))
        throw config_error("sensitivity requires a positive count");
    if (!(contrast > 0.0) || !(dx_eff > 0.0))
        throw stats_error("sensitivity diverges: contrast or effective displacement is zero");
    if (contrast > 1.0 + 1e-12)
        throw physics_error("contrast above 1 is unphysical");
    SensitivityReport r;
    r.contrast = contrast;
    r.dx_eff = dx_eff;
    r.d3 = d3;
    r.n_counts = n_counts;
    r.sigma_a_over_a = 1.0 / (std::sqrt(n_counts) * two_pi * contrast * (dx_eff / d3));
    return r;
}

double rescaled_sensitivity(const SensitivityReport& report, double f, double n0) {
    if (!(f > 0.0) || !(f < 1.0))
        throw config_error("rescaled sensitivity requires 0 < f < 1");
    if (!(n0 > 0.0))
        throw config_error("rescaled sensitivity requires N0 > 0");
    const SensitivityReport scaled =
        sensitivity(report.contrast, report.dx_eff, report.d3, f * f * n0);
    return std::sqrt(n0) * scaled.sigma_a_over_a;
}

}  // namespace tlau
