#include "tlau/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "tlau/errors.hpp"
#include "tlau/quadrature.hpp"

namespace tlau {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

struct SlitPoints {
    std::vector<double> xi;
    std::vector<double> w;
};

// Quadrature points over every open G2 slit. Panels are sized from an upper
// bound on the phase derivative across the slit, every source position and
// the whole detector window, so each panel spans at most 1/8 of the fastest
// local oscillation.
SlitPoints build_slit_points(const OracleConfig& cfg, double x_lo, double x_hi, double x0_lo,
                             double x0_hi) {
    static const QuadratureRule g4 = gauss_legendre(4);
    const double d2 = cfg.setup.d2;
    const double f = cfg.g2.open_fraction;
    const double lam_l = cfg.lambda * cfg.setup.L;
    const double lam_eta_l = cfg.lambda * cfg.setup.eta * cfg.setup.L;
    const int min_panels = (cfg.integration_samples + 3) / 4;

    SlitPoints pts;
    const int m0 = -cfg.n_periods / 2;
    for (int m = m0; m < m0 + cfg.n_periods; ++m) {
        // Slit on (m*d2 - f*d2, m*d2], matching the transmission convention.
        const double xi_b = m * d2;
        const double xi_a = xi_b - f * d2;
        const double src = std::max({std::abs(xi_a - x0_lo), std::abs(xi_a - x0_hi),
                                     std::abs(xi_b - x0_lo), std::abs(xi_b - x0_hi)});
        const double det = std::max({std::abs(xi_a - x_lo), std::abs(xi_a - x_hi),
                                     std::abs(xi_b - x_lo), std::abs(xi_b - x_hi)});
        const double max_deriv = two_pi * (src / lam_l + det / lam_eta_l);
        const double width = xi_b - xi_a;
        int panels = static_cast<int>(std::ceil(width * max_deriv * 8.0 / two_pi));
        panels = std::max(panels, min_panels);
        const double pw = width / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = xi_a + p * pw;
            for (std::size_t i = 0; i < g4.nodes.size(); ++i) {
                pts.xi.push_back(lo + 0.5 * pw * (1.0 + g4.nodes[i]));
                pts.w.push_back(0.5 * pw * g4.weights[i]);
            }
        }
    }
    return pts;
}

// Coherent amplitude on the uniform grid for one source. The x-dependent
// Fresnel factor advances by a phase-rotation recurrence; its second phase
// difference is constant on a uniform grid.
void accumulate_amplitude(const SlitPoints& pts, double x0, double lam_l, double lam_eta_l,
                          const std::vector<double>& xs, std::vector<std::complex<double>>& amp) {
    const double h = xs[1] - xs[0];
    const double c = pi / lam_eta_l;
    const std::complex<double> q = std::polar(1.0, 2.0 * c * h * h);
    std::fill(amp.begin(), amp.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t k = 0; k < pts.xi.size(); ++k) {
        const double xi = pts.xi[k];
        const double u = xi - x0;
        const std::complex<double> pref =
            pts.w[k] * std::polar(1.0, pi * u * u / lam_l);
        const double d0 = xs[0] - xi;
        std::complex<double> e = std::polar(1.0, c * d0 * d0);
        std::complex<double> r = std::polar(1.0, c * (2.0 * d0 * h + h * h));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            amp[j] += pref * e;
            e *= r;
            r *= q;
        }
    }
}

}  // namespace

void OracleConfig::validate() const {
    setup.validate();
    g1.validate();
    g2.validate();
    if (std::abs(g1.period - setup.d1) > 1e-9 * setup.d1 ||
        std::abs(g2.period - setup.d2) > 1e-9 * setup.d2)
        throw physics_error("oracle grating periods must match the setup d1, d2");
    if (setup.a != 0.0)
        throw physics_error("the Fresnel oracle supports a = 0 only");
    if (!(lambda > 0.0))
        throw physics_error("oracle requires lambda > 0");
    if (n_periods < 100)
        throw config_error("oracle requires n_periods >= 100");
    if (n_sources < 64)
        throw config_error("oracle requires n_sources >= 64");
    if (integration_samples < 200)
        throw config_error("oracle requires integration_samples >= 200");
}

std::vector<double> point_source_pattern(double x0, const OracleConfig& cfg,
                                         const std::vector<double>& xs) {
    cfg.validate();
    validate_pattern_grid(xs, cfg.setup.d3());
    const double lam_l = cfg.lambda * cfg.setup.L;
    const double lam_eta_l = cfg.lambda * cfg.setup.eta * cfg.setup.L;
    const SlitPoints pts = build_slit_points(cfg, xs.front(), xs.back(), x0, x0);
    std::vector<std::complex<double>> amp(xs.size());
    accumulate_amplitude(pts, x0, lam_l, lam_eta_l, xs, amp);
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        out[j] = std::norm(amp[j]);
    return out;
}

FringePattern incoherent_pattern(const OracleConfig& cfg, const std::vector<double>& xs,
                                 int threads) {
    cfg.validate();
    validate_pattern_grid(xs, cfg.setup.d3());
    if (threads < 1)
        throw config_error("incoherent_pattern requires threads >= 1");
    const double f1 = cfg.g1.open_fraction;
    const double d1 = cfg.setup.d1;
    const double lam_l = cfg.lambda * cfg.setup.L;
    const double lam_eta_l = cfg.lambda * cfg.setup.eta * cfg.setup.L;
    const SlitPoints pts = build_slit_points(cfg, xs.front(), xs.back(), -f1 * d1, 0.0);

    std::vector<std::vector<double>> rows(
        static_cast<std::size_t>(cfg.n_sources), std::vector<double>(xs.size(), 0.0));
    const auto worker = [&](int t) {
        std::vector<std::complex<double>> amp(xs.size());
        for (int s = t; s < cfg.n_sources; s += threads) {
            const double x0 = -f1 * d1 * (s + 0.5) / cfg.n_sources;
            accumulate_amplitude(pts, x0, lam_l, lam_eta_l, xs, amp);
            std::vector<double>& row = rows[static_cast<std::size_t>(s)];
            for (std::size_t j = 0; j < xs.size(); ++j)
                row[j] = std::norm(amp[j]);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (std::thread& th : pool)
            th.join();
    }

    // Fixed source-order reduction keeps the result identical for any thread
    // count.
    std::vector<double> total(xs.size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < xs.size(); ++j)
            total[j] += row[j];
    double mean = 0.0;
    for (double v : total)
        mean += v;
    mean /= static_cast<double>(total.size());
    if (!(mean > 0.0))
        throw physics_error("oracle pattern vanished everywhere");
    for (double& v : total)
        v /= mean;

    FringePattern p;
    p.xs = xs;
    p.intensities = std::move(total);
    p.period = cfg.setup.d3();
    p.displacement = 0.0;
    p.normalization = 1.0;
    return p;
}

double compare(const FringePattern& oracle_p, const FringePattern& series_p) {
    if (oracle_p.xs.size() != series_p.xs.size())
        throw config_error("compare requires a common grid");
    for (std::size_t i = 0; i < oracle_p.xs.size(); ++i)
        if (std::abs(oracle_p.xs[i] - series_p.xs[i]) > 1e-12 * std::max(1.0, std::abs(series_p.xs[i])))
            throw config_error("compare requires a common grid");
    const std::size_t n = oracle_p.xs.size();
    auto normalized = [n](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= static_cast<double>(n);
        if (!(mean > 0.0))
            throw physics_error("compare requires patterns with positive mean");
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = v[i] / mean;
        return out;
    };
    const std::vector<double> o = normalized(oracle_p.intensities);
    const std::vector<double> s = normalized(series_p.intensities);
    double rms = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = o[i] - s[i];
        rms += d * d;
        const double dev = s[i] - 1.0;
        var += dev * dev;
    }
    rms = std::sqrt(rms / static_cast<double>(n));
    var = std::sqrt(var / static_cast<double>(n));
    if (!(var > 0.0))
        throw physics_error("compare undefined against a constant series pattern");
    return rms / var;
}

}  // namespace tlau
