#include "tlau/moire.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "tlau/errors.hpp"
#include "tlau/rng.hpp"

namespace tlau {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double positive_mod(double x, double d) {
    double r = std::fmod(x, d);
    if (r < 0.0)
        r += d;
    return r;
}

// Stream layout per particle p: stream 2p carries draw 0 = x0, draw 1 = v0
// and draws 2+j = decay-acceptance uniforms; stream 2p+1 carries the normal
// deviates for the speed attempts. Rejected attempts advance the draw index,
// never the stream, so the mapping particle -> randomness is fixed.
double sample_speed(const CounterRng& rng, std::uint64_t particle, const SpeedDistribution& dist) {
    if (dist.kind == SpeedKind::monochromatic)
        return dist.mean;
    const std::uint64_t uniform_stream = 2 * particle;
    const std::uint64_t normal_stream = 2 * particle + 1;
    const double lo = dist.support_lo();
    const double hi = dist.support_hi();
    const double max_survival =
        dist.kind == SpeedKind::gaussian_with_decay
            ? std::exp(-dist.flight_length / (dist.lifetime * hi))
            : 1.0;
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        const double v = dist.mean + dist.sigma * rng.standard_normal(normal_stream, attempt);
        if (v < lo || v > hi || !(v > 0.0))
            continue;
        if (dist.kind == SpeedKind::gaussian) {
            return v;
        }
        const double keep = std::exp(-dist.flight_length / (dist.lifetime * v)) / max_survival;
        if (rng.uniform(uniform_stream, 2 + attempt) < keep)
            return v;
    }
    throw stats_error("speed sampling failed to accept after 10000 attempts");
}

}  // namespace

void MCConfig::validate() const {
    setup.validate();
    if (!(open_fraction > 0.0) || !(open_fraction < 1.0))
        throw config_error("moire requires 0 < open_fraction < 1");
    if (n_particles < 10000)
        throw config_error("moire requires n_particles >= 1e4");
    if (bins < 64)
        throw config_error("moire requires bins >= 64");
    if (!(source_width >= 100.0 * setup.d1))
        throw config_error("moire requires source_width >= 100*d1");
    if (!(transverse_speed_halfwidth >= 50.0 * dist.mean * setup.d1 / setup.L))
        throw config_error("moire requires transverse_speed_halfwidth >= 50*mean*d1/L");
    if (source_distance < 0.0)
        throw config_error("moire requires source_distance >= 0");
    if (!(dist.mean > 0.0))
        throw physics_error("moire requires a positive mean speed");
}

std::optional<PlanePositions> propagate(double x0, double v0, double v, const MCConfig& cfg) {
    if (!(v > 0.0))
        throw physics_error("propagate requires v > 0");
    const double t1 = cfg.source_distance / v;
    const double t2 = t1 + cfg.setup.L / v;
    const double t3 = t2 + cfg.setup.eta * cfg.setup.L / v;
    PlanePositions p;
    p.x1 = x0 + v0 * t1 + 0.5 * cfg.a * t1 * t1;
    p.x2 = x0 + v0 * t2 + 0.5 * cfg.a * t2 * t2;
    p.x3 = x0 + v0 * t3 + 0.5 * cfg.a * t3 * t3;
    if (positive_mod(p.x1, cfg.setup.d1) >= cfg.open_fraction * cfg.setup.d1)
        return std::nullopt;
    if (positive_mod(p.x2, cfg.setup.d2) >= cfg.open_fraction * cfg.setup.d2)
        return std::nullopt;
    return p;
}

MCHistogram simulate(const MCConfig& cfg, int threads) {
    cfg.validate();
    if (threads < 1)
        throw config_error("simulate requires threads >= 1");
    const double d3 = cfg.setup.d3();
    const int bins = cfg.bins;
    const CounterRng rng{cfg.seed};

    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(threads), std::vector<std::uint64_t>(static_cast<std::size_t>(bins), 0));
    const auto worker = [&](int t) {
        std::vector<std::uint64_t>& local = partial[static_cast<std::size_t>(t)];
        for (std::uint64_t p = static_cast<std::uint64_t>(t); p < cfg.n_particles;
             p += static_cast<std::uint64_t>(threads)) {
            const double v = sample_speed(rng, p, cfg.dist);
            const double x0 = rng.uniform(2 * p, 0, 0.0, cfg.source_width);
            const double v0 = rng.uniform(2 * p, 1, -cfg.transverse_speed_halfwidth,
                                          cfg.transverse_speed_halfwidth);
            const auto pos = propagate(x0, v0, v, cfg);
            if (!pos)
                continue;
            const double big_t1 = cfg.setup.L / v;
            const double big_t2 = cfg.setup.eta * big_t1;
            const double rebuilt = pos->x2 * (1.0 + big_t2 / big_t1) - pos->x1 * big_t2 / big_t1 +
                                   0.5 * cfg.a * (big_t2 * big_t2 + big_t1 * big_t2);
            assert(std::abs(rebuilt - pos->x3) <=
                   1e-9 * std::max(1.0, std::abs(pos->x3)));
            (void)rebuilt;
            const double r = positive_mod(pos->x3, d3);
            int b = static_cast<int>(r / d3 * bins);
            if (b >= bins)
                b = bins - 1;
            ++local[static_cast<std::size_t>(b)];
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

    MCHistogram h;
    h.period = d3;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (const auto& local : partial)
        for (std::size_t i = 0; i < local.size(); ++i)
            h.counts[i] += local[i];
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] = d3 * static_cast<double>(i) / bins;
    for (std::uint64_t c : h.counts)
        h.total_accepted += c;
    if (h.total_accepted < 1000)
        throw stats_error("moire acceptance below 1e3 counts; increase n_particles");
    h.contrast_estimate = harmonic_contrast(h);
    return h;
}

double harmonic_contrast(const MCHistogram& h) {
    const std::size_t n = h.counts.size();
    if (n < 64)
        throw config_error("harmonic_contrast requires at least 64 bins");
    double c0 = 0.0;
    std::complex<double> c1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = static_cast<double>(h.counts[j]);
        c0 += w;
        c1 += w * std::polar(1.0, -two_pi * static_cast<double>(j) / static_cast<double>(n));
    }
    if (c0 == 0.0)
        throw stats_error("harmonic_contrast undefined for an empty histogram");
    return 2.0 * std::abs(c1) / c0;
}

double mc_displacement(const MCConfig& with_a, const MCConfig& reference, int threads) {
    if (reference.a != 0.0)
        throw config_error("mc_displacement reference run must have a = 0");
    if (with_a.seed != reference.seed || with_a.n_particles != reference.n_particles ||
        with_a.bins != reference.bins)
        throw config_error("mc_displacement runs must share seed, n_particles and bins");
    const MCHistogram ha = simulate(with_a, threads);
    const MCHistogram h0 = simulate(reference, threads);
    if (ha.contrast_estimate < 0.005 || h0.contrast_estimate < 0.005)
        throw stats_error("mc_displacement undefined for flat histograms");

    const std::size_t n = ha.counts.size();
    std::vector<double> corr(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += static_cast<double>(ha.counts[j]) *
                 static_cast<double>(h0.counts[(j + n - k) % n]);
        corr[k] = s;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (corr[k] > corr[best])
            best = k;
    const double ym = corr[(best + n - 1) % n];
    const double y0 = corr[best];
    const double yp = corr[(best + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    double k_peak = static_cast<double>(best);
    if (denom != 0.0)
        k_peak += std::max(-1.0, std::min(1.0, 0.5 * (ym - yp) / denom));
    if (k_peak > static_cast<double>(n) / 2.0)
        k_peak -= static_cast<double>(n);
    return k_peak * ha.period / static_cast<double>(n);
}

}  // namespace tlau
