#include "tlau/talbot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tlau/errors.hpp"

namespace tlau {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

void validate_pattern_grid(const std::vector<double>& xs, double period) {
    if (xs.empty())
        throw config_error("pattern grid must not be empty");
    if (xs.size() == 1)
        throw config_error("pattern grid must span a full period");
    const double step = xs[1] - xs[0];
    if (!(step > 0.0))
        throw config_error("pattern grid must be strictly increasing");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (!(d > 0.0) || std::abs(d - step) > 1e-9 * period)
            throw config_error("pattern grid must be uniform and strictly increasing");
    }
    const double span = (xs.back() - xs.front()) + step;
    const double periods = span / period;
    if (std::abs(periods - std::round(periods)) > 1e-6 || periods < 0.5)
        throw config_error("pattern grid must span an integer number of periods");
}

std::complex<double> talbot_coefficient(int k, double alpha, const GratingSpec& g, int n_max) {
    if (n_max < 1)
        throw physics_error("talbot_coefficient requires n_max >= 1");
    std::complex<double> sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
        sum += fourier_coefficient(n, g) * std::conj(fourier_coefficient(n - k, g)) *
               std::polar(1.0, pi * alpha * static_cast<double>(k - 2 * n));
    }
    return sum;
}

TalbotContext::TalbotContext(const SetupGeometry& setup_, const GratingSpec& g1_,
                             const GratingSpec& g2_, double lambda_, double ref_speed_, int l_max_,
                             int n_max_)
    : setup(setup_), g1(g1_), g2(g2_), lambda(lambda_), ref_speed(ref_speed_), l_max(l_max_),
      n_max(n_max_) {
    setup.validate();
    g1.validate();
    g2.validate();
    if (std::abs(g1.period - setup.d1) > 1e-9 * setup.d1 ||
        std::abs(g2.period - setup.d2) > 1e-9 * setup.d2)
        throw physics_error("grating periods must match the setup d1, d2");
    if (!(lambda > 0.0))
        throw physics_error("TalbotContext requires lambda > 0");
    if (!(ref_speed > 0.0))
        throw physics_error("TalbotContext requires ref_speed > 0");
    if (l_max < 0 || n_max < 1)
        throw physics_error("TalbotContext requires l_max >= 0 and n_max >= 1");
    const ResonanceCheck rc = resonance_order(setup);
    if (!rc.integer)
        throw physics_error("setup is off resonance: (d2/d1)(1+eta)/eta is not an integer");
    q = static_cast<int>(std::lround(rc.q));

    b2_span = n_max + q * l_max;
    b2_table.resize(2 * static_cast<std::size_t>(b2_span) + 1);
    for (int n = -b2_span; n <= b2_span; ++n)
        b2_table[static_cast<std::size_t>(n + b2_span)] = fourier_coefficient(n, g2);
    a1_table.resize(2 * static_cast<std::size_t>(l_max) + 1);
    for (int l = -l_max; l <= l_max; ++l)
        a1_table[static_cast<std::size_t>(l + l_max)] = intensity_coefficient(l, g1);
}

std::complex<double> TalbotContext::b2(int n) const {
    if (n < -b2_span || n > b2_span)
        throw std::out_of_range("b2 index outside the precomputed table");
    return b2_table[static_cast<std::size_t>(n + b2_span)];
}

std::complex<double> TalbotContext::a1(int l) const {
    if (l < -l_max || l > l_max)
        throw std::out_of_range("a1 index outside the precomputed table");
    return a1_table[static_cast<std::size_t>(l + l_max)];
}

std::complex<double> TalbotContext::talbot_b(int k, double alpha) const {
    std::complex<double> sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
        sum += b2(n) * std::conj(b2(n - k)) *
               std::polar(1.0, pi * alpha * static_cast<double>(k - 2 * n));
    }
    return sum;
}

std::vector<double> FringePattern::clamped() const {
    std::vector<double> out(intensities.size());
    std::transform(intensities.begin(), intensities.end(), out.begin(),
                   [](double v) { return std::max(v, 0.0); });
    return out;
}

std::vector<std::complex<double>> pattern_coefficients(const TalbotContext& ctx, double a,
                                                       double speed) {
    if (!(speed > 0.0))
        throw physics_error("pattern evaluation requires speed > 0");
    const double lam = ctx.lambda_at(speed);
    const double scale = ctx.setup.L / ctx.talbot_length(lam) * ctx.setup.d2 / ctx.setup.d1;
    const double dx = fringe_displacement(a, ctx.setup.L / speed, ctx.setup.eta);
    const double d3 = ctx.setup.d3();
    std::vector<std::complex<double>> c(2 * static_cast<std::size_t>(ctx.l_max) + 1);
    // Negative harmonics mirror the positive ones, which keeps the sampled
    // intensity exactly real.
    for (int l = 0; l <= ctx.l_max; ++l) {
        std::complex<double> cl = std::conj(ctx.a1(l)) * ctx.talbot_b(l * ctx.q, scale * l);
        cl *= std::polar(1.0, -two_pi * l * dx / d3);
        c[static_cast<std::size_t>(ctx.l_max + l)] = cl;
        c[static_cast<std::size_t>(ctx.l_max - l)] = std::conj(cl);
    }
    return c;
}

void shift_coefficients(std::vector<std::complex<double>>& c, double period, double s) {
    const int l_max = (static_cast<int>(c.size()) - 1) / 2;
    for (int l = -l_max; l <= l_max; ++l)
        c[static_cast<std::size_t>(l + l_max)] *= std::polar(1.0, -two_pi * l * s / period);
}

std::vector<double> sample_coefficients(const std::vector<std::complex<double>>& c, double period,
                                        const std::vector<double>& xs) {
    if (c.empty() || c.size() % 2 == 0)
        throw config_error("coefficient vector must have odd length 2*l_max+1");
    const int l_max = (static_cast<int>(c.size()) - 1) / 2;
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = c[static_cast<std::size_t>(l_max)].real();
        for (int l = 1; l <= l_max; ++l) {
            const std::complex<double> e = std::polar(1.0, two_pi * l * xs[i] / period);
            v += 2.0 * (c[static_cast<std::size_t>(l_max + l)] * e).real();
        }
        out[i] = v;
    }
    return out;
}

std::vector<double> make_grid(double period, int samples_per_period, int n_periods, double start) {
    if (!(period > 0.0) || samples_per_period < 1 || n_periods < 1)
        throw config_error("make_grid requires a positive period and positive counts");
    std::vector<double> xs(static_cast<std::size_t>(samples_per_period) *
                           static_cast<std::size_t>(n_periods));
    const double step = period / samples_per_period;
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = start + step * static_cast<double>(i);
    return xs;
}

FringePattern monochromatic_pattern(const TalbotContext& ctx, double a, double speed,
                                    const std::vector<double>& xs) {
    FringePattern p;
    p.period = ctx.fringe_period();
    validate_pattern_grid(xs, p.period);
    const auto c = pattern_coefficients(ctx, a, speed);
    p.xs = xs;
    p.displacement = fringe_displacement(a, ctx.setup.L / speed, ctx.setup.eta);
    p.normalization = c[static_cast<std::size_t>(ctx.l_max)].real();
    p.intensities = sample_coefficients(c, p.period, xs);
    const double mx = *std::max_element(p.intensities.begin(), p.intensities.end());
    const double mn = *std::min_element(p.intensities.begin(), p.intensities.end());
    // Harmonic truncation rings a little below zero; anything past a few
    // percent of the peak is not ringing but a broken input.
    if (!(mx > 0.0) || mn < -0.05 * mx)
        throw physics_error("intensity series came out negative beyond truncation ringing");
    return p;
}

double visibility(const FringePattern& p) {
    if (p.xs.size() < 2 || p.intensities.size() != p.xs.size())
        throw config_error("visibility needs a sampled pattern");
    const double step = p.xs[1] - p.xs[0];
    const double periods = ((p.xs.back() - p.xs.front()) + step) / p.period;
    if (periods < 1.0 - 1e-9)
        throw config_error("visibility needs at least one full period");
    if (static_cast<double>(p.xs.size()) / periods < 256.0 * (1.0 - 1e-9))
        throw config_error("visibility needs at least 256 samples per period");
    const auto prof = p.clamped();
    const double mx = *std::max_element(prof.begin(), prof.end());
    const double mn = *std::min_element(prof.begin(), prof.end());
    if (!(mx > 0.0))
        throw physics_error("visibility undefined for an all-zero pattern");
    return (mx - mn) / (mx + mn);
}

double sinusoidal_visibility(const TalbotContext& ctx, double speed) {
    if (!(speed > 0.0))
        throw physics_error("sinusoidal visibility requires speed > 0");
    const double lam = ctx.lambda_at(speed);
    const double alpha1 = ctx.setup.L / ctx.talbot_length(lam) * ctx.setup.d2 / ctx.setup.d1;
    const double a0 = std::abs(ctx.a1(0));
    if (a0 == 0.0)
        throw physics_error("sinusoidal visibility undefined when A_0 = 0");
    return 2.0 * std::abs(ctx.talbot_b(ctx.q, alpha1)) / a0;
}

std::vector<CarpetRow> carpet(const TalbotContext& ctx, const std::vector<double>& ratios,
                              const std::vector<double>& xs) {
    if (ratios.empty())
        throw config_error("carpet needs a nonempty list of L/L_T values");
    std::vector<CarpetRow> rows;
    rows.reserve(ratios.size());
    for (double r : ratios) {
        if (!(r > 0.0))
            throw config_error("carpet L/L_T values must be positive");
        const double lam = r * ctx.setup.d2 * ctx.setup.d2 / ctx.setup.L;
        const TalbotContext row_ctx(ctx.setup, ctx.g1, ctx.g2, lam, ctx.ref_speed, ctx.l_max,
                                    ctx.n_max);
        CarpetRow row;
        row.ratio = r;
        row.pattern = monochromatic_pattern(row_ctx, 0.0, row_ctx.ref_speed, xs);
        row.vis = visibility(row.pattern);
        rows.push_back(std::move(row));
    }
    return rows;
}

double peak_location(const FringePattern& p) {
    validate_pattern_grid(p.xs, p.period);
    const std::size_t n = p.intensities.size();
    const std::size_t i =
        static_cast<std::size_t>(std::max_element(p.intensities.begin(), p.intensities.end()) -
                                 p.intensities.begin());
    const double step = p.xs[1] - p.xs[0];
    const double ym = p.intensities[(i + n - 1) % n];
    const double y0 = p.intensities[i];
    const double yp = p.intensities[(i + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    const double off = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    return p.xs[i] + off * step;
}

}  // namespace tlau
