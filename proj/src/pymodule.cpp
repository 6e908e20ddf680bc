#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlau/beam.hpp"
#include "tlau/errors.hpp"
#include "tlau/geometry.hpp"
#include "tlau/grating.hpp"
#include "tlau/moire.hpp"
#include "tlau/oracle.hpp"
#include "tlau/scenario.hpp"
#include "tlau/talbot.hpp"

namespace py = pybind11;

namespace {

// Same sweep template rule as the CLI: monochromatic only when every
// requested sigma_rel is zero.
tlau::SpeedDistribution sweep_template(const tlau::Scenario& s) {
    for (double r : s.sigma_rel) {
        if (r > 0.0) return s.speed_distribution(0.05);
    }
    return tlau::monochromatic_beam(s.mean_speed);
}

py::dict design(const std::string& path) {
    tlau::Scenario s = tlau::load_scenario(path);
    tlau::ResonanceCheck res = tlau::resonance_order(s.setup);
    if (!res.integer) {
        throw tlau::physics_error("geometry is off resonance: q = " +
                                  tlau::format_number(res.q) + " is not an integer");
    }
    py::dict d;
    d["config_id"] = s.config_id;
    d["q"] = res.q;
    d["d1_m"] = s.setup.d1;
    d["d2_m"] = s.setup.d2;
    d["d3_m"] = s.setup.d3();
    d["L_m"] = s.setup.L;
    d["total_length_m"] = s.setup.total_length();
    d["lambda_m"] = s.lambda;
    d["L_over_talbot_length"] = tlau::classicality_margin(s.setup, s.lambda);
    return d;
}

py::dict pattern(const std::string& path) {
    tlau::Scenario s = tlau::load_scenario(path);
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    tlau::FringePattern p = tlau::polychromatic_pattern(
        ctx, s.speed_distribution(s.sigma_rel.front()), s.setup.a, xs, s.quadrature_nodes);
    py::dict d;
    d["x_m"] = p.xs;
    d["intensity"] = p.clamped();
    d["period_m"] = p.period;
    d["displacement_m"] = p.displacement;
    return d;
}

py::dict visibility(const std::string& path) {
    tlau::Scenario s = tlau::load_scenario(path);
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    std::vector<tlau::VisibilityRow> rows = tlau::visibility_curve(
        ctx, sweep_template(s), s.sigma_rel, s.setup.a, xs, s.quadrature_nodes);
    std::vector<double> srel, contrast, dx_eff, dx_rel;
    for (const tlau::VisibilityRow& row : rows) {
        srel.push_back(row.sigma_rel);
        contrast.push_back(row.contrast);
        dx_eff.push_back(row.dx_eff);
        dx_rel.push_back(row.dx_rel);
    }
    py::dict d;
    d["sigma_rel"] = srel;
    d["contrast"] = contrast;
    d["dx_eff_m"] = dx_eff;
    d["dx_rel"] = dx_rel;
    return d;
}

py::dict moire(const std::string& path, int threads) {
    tlau::Scenario s = tlau::load_scenario(path);
    tlau::MCConfig cfg = s.mc_config();
    tlau::MCHistogram hist = tlau::simulate(cfg, threads);
    std::vector<double> centers;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        centers.push_back(0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]));
    }
    py::dict d;
    d["bin_center_m"] = centers;
    d["count"] = hist.counts;
    d["total_accepted"] = hist.total_accepted;
    d["contrast"] = hist.contrast_estimate;
    return d;
}

py::dict sensitivity(const std::vector<std::string>& paths) {
    std::vector<double> srel, contrast, dx_rel, rescaled;
    std::vector<std::string> ids;
    for (const std::string& path : paths) {
        tlau::Scenario s = tlau::load_scenario(path);
        tlau::TalbotContext ctx = s.context();
        std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
        std::vector<tlau::VisibilityRow> rows = tlau::visibility_curve(
            ctx, sweep_template(s), s.sigma_rel, s.setup.a, xs, s.quadrature_nodes);
        for (const tlau::VisibilityRow& row : rows) {
            tlau::SensitivityReport rep = tlau::sensitivity(
                row.contrast, row.dx_eff, ctx.fringe_period(), double(s.n_particles));
            srel.push_back(row.sigma_rel);
            ids.push_back(s.config_id);
            contrast.push_back(row.contrast);
            dx_rel.push_back(row.dx_rel);
            rescaled.push_back(
                tlau::rescaled_sensitivity(rep, s.g1.open_fraction, double(s.n_particles)));
        }
    }
    py::dict d;
    d["sigma_rel"] = srel;
    d["config_id"] = ids;
    d["contrast"] = contrast;
    d["dx_rel"] = dx_rel;
    d["sigma_a_over_a_rescaled"] = rescaled;
    return d;
}

double verify(const std::string& path, int threads) {
    tlau::Scenario s = tlau::load_scenario(path);
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    tlau::FringePattern oracle_p = tlau::incoherent_pattern(s.oracle_config(), xs, threads);
    tlau::FringePattern series_p = tlau::monochromatic_pattern(ctx, 0.0, s.mean_speed, xs);
    return tlau::compare(oracle_p, series_p);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Talbot-Lau interferometer design and simulation toolkit";

    py::register_exception<tlau::config_error>(m, "ConfigError");
    py::register_exception<tlau::physics_error>(m, "PhysicsError");
    py::register_exception<tlau::stats_error>(m, "StatsError");

    m.def("de_broglie", &tlau::de_broglie, py::arg("mass"), py::arg("speed"));
    m.def("fringe_displacement", &tlau::fringe_displacement, py::arg("a"), py::arg("t1"),
          py::arg("eta"));
    m.def(
        "talbot_coefficient",
        [](int k, double alpha, double open_fraction, int n_max) {
            tlau::GratingSpec g{1.0, open_fraction};
            return tlau::talbot_coefficient(k, alpha, g, n_max);
        },
        py::arg("k"), py::arg("alpha"), py::arg("open_fraction"), py::arg("n_max") = 20);

    m.def("design", &design, py::arg("config"));
    m.def("pattern", &pattern, py::arg("config"));
    m.def("visibility", &visibility, py::arg("config"));
    m.def("moire", &moire, py::arg("config"), py::arg("threads") = 1);
    m.def("sensitivity", &sensitivity, py::arg("configs"));
    m.def("verify", &verify, py::arg("config"), py::arg("threads") = 1);
}
