#pragma once

#include <vector>

#include "tlau/geometry.hpp"
#include "tlau/grating.hpp"
#include "tlau/talbot.hpp"

namespace tlau {

// Fresnel check of the series model: point sources in one G1 period
// propagated coherently through a finite stretch of G2 and summed
// incoherently. Supports a = 0 only.
struct OracleConfig {
    SetupGeometry setup;
    GratingSpec g1;
    GratingSpec g2;
    double lambda = 0.0;
    int n_periods = 100;          // illuminated G2 periods
    int n_sources = 64;           // source positions per G1 period
    int integration_samples = 200;  // minimum quadrature points per slit

    void validate() const;
};

// |integral over the open G2 slits of exp{i pi [(xi-x0)^2/(lambda L) +
// (x-xi)^2/(lambda eta L)]} d xi|^2 on the given uniform grid.
std::vector<double> point_source_pattern(double x0, const OracleConfig& cfg,
                                         const std::vector<double>& xs);

// Sum of point_source_pattern over the sources, normalized to unit mean.
// Sources sample a single G1 period; further periods repeat the same
// pattern displaced by a whole fringe.
FringePattern incoherent_pattern(const OracleConfig& cfg, const std::vector<double>& xs,
                                 int threads = 1);

// RMS of the pointwise difference after unit-mean normalization, divided by
// the standard deviation of the series pattern.
double compare(const FringePattern& oracle_p, const FringePattern& series_p);

}  // namespace tlau
