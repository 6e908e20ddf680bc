#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlau/beam.hpp"
#include "tlau/geometry.hpp"
#include "tlau/grating.hpp"
#include "tlau/moire.hpp"
#include "tlau/oracle.hpp"
#include "tlau/talbot.hpp"

namespace tlau {

// One scenario file, fully resolved. Every default is materialized on load so
// the manifest echo alone reproduces the run. Sections and keys:
//   setup:    family, eta, d2 [, d1, L], f [, a]
//   beam:     mass, mean_speed [, sigma_rel, lifetime]
//   numerics: l_max, n_max, grid, quadrature_nodes, seed, n_particles, bins,
//             oracle_periods, oracle_sources, oracle_samples, source_width,
//             transverse_speed_halfwidth, source_distance (all optional)
//   output:   paths, format (optional)
// Geometry comes either from (family, eta, d2) at the beam's de Broglie
// wavelength or from explicit (d1, d2, L, eta). Lengths in meters, speeds in
// m/s, mass in kg, lifetime in seconds. Unknown keys are rejected.
struct Scenario {
    SetupGeometry setup;
    GratingSpec g1;
    GratingSpec g2;
    std::optional<int> family;

    double mass = 0.0;
    double mean_speed = 0.0;
    std::vector<double> sigma_rel{0.0};
    std::optional<double> lifetime;
    double lambda = 0.0;

    int l_max = 10;
    int n_max = 20;
    int grid = 512;
    int quadrature_nodes = 257;
    std::uint64_t seed = 1234;
    std::uint64_t n_particles = 1000000;
    int bins = 128;
    int oracle_periods = 200;
    int oracle_sources = 64;
    int oracle_samples = 200;
    double source_width = 0.0;
    double transverse_speed_halfwidth = 0.0;
    double source_distance = 0.0;

    std::map<std::string, std::string> paths;
    std::string format = "csv";

    std::string config_id;

    TalbotContext context() const;
    SpeedDistribution speed_distribution(double sigma_rel_value) const;
    MCConfig mc_config() const;
    OracleConfig oracle_config() const;
    std::string csv_path(const std::string& command) const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text, const std::string& config_id);

// Shortest decimal representation that round-trips the double exactly.
std::string format_number(double v);

// Run manifest: command, echo of every resolved config, derived geometry and
// the physical constants in use, seed actually applied, output files written.
// Deliberately free of timestamps so reruns are byte-identical.
std::string manifest_text(const std::string& command, const std::vector<Scenario>& scenarios,
                          std::uint64_t seed, const std::vector<std::string>& outputs);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace tlau
