#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tlau/beam.hpp"
#include "tlau/geometry.hpp"

namespace tlau {

// Classical shadow simulation. Gratings act as pure masks on ballistic
// trajectories; the source plane sits source_distance upstream of G1 and the
// acceleration acts on every leg, source leg included.
struct MCConfig {
    SetupGeometry setup;
    SpeedDistribution dist;
    double a = 0.0;
    double open_fraction = 0.0;
    std::uint64_t n_particles = 0;
    int bins = 0;
    std::uint64_t seed = 0;
    double source_width = 0.0;
    double transverse_speed_halfwidth = 0.0;
    double source_distance = 0.0;

    void validate() const;
};

struct MCHistogram {
    std::vector<double> bin_edges;  // bins + 1 edges over [0, d3]
    std::vector<std::uint64_t> counts;
    std::uint64_t total_accepted = 0;
    double contrast_estimate = 0.0;
    double displacement_estimate = 0.0;
    double period = 0.0;
};

struct PlanePositions {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

// Ballistic flight through both gratings; nullopt when a mask absorbs the
// particle.
std::optional<PlanePositions> propagate(double x0, double v0, double v, const MCConfig& cfg);

MCHistogram simulate(const MCConfig& cfg, int threads = 1);

// 2|c_1|/c_0 from the circular Fourier coefficients of the binned counts.
double harmonic_contrast(const MCHistogram& h);

// Shift of the accelerated histogram relative to the a = 0 run of the same
// seed, from the circular cross-correlation peak with parabolic refinement.
double mc_displacement(const MCConfig& with_a, const MCConfig& reference, int threads = 1);

}  // namespace tlau
