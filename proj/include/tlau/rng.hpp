#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tlau {

namespace detail {

// SplitMix64 finalizer (Steele, Lea and Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based generator: every value is a pure function of (seed, stream,
// draw), so output never depends on thread count or evaluation order. Each
// stream is its own SplitMix64 sequence; the stream index selects the initial
// state and the draw index steps the sequence.
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t stream, std::uint64_t draw) const {
        constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;
        const std::uint64_t base = detail::mix64(seed + gamma * (stream + 1));
        return detail::mix64(base + gamma * draw);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform(std::uint64_t stream, std::uint64_t draw) const {
        return static_cast<double>(bits(stream, draw) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t stream, std::uint64_t draw, double lo, double hi) const {
        return lo + (hi - lo) * uniform(stream, draw);
    }

    // Box-Muller, cosine branch only; consumes draws 2*draw and 2*draw+1.
    double standard_normal(std::uint64_t stream, std::uint64_t draw) const {
        const double u1 =
            static_cast<double>((bits(stream, 2 * draw) >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform(stream, 2 * draw + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

}  // namespace tlau
