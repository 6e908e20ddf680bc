#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tlau/beam.hpp"
#include "tlau/errors.hpp"
#include "tlau/geometry.hpp"
#include "tlau/moire.hpp"
#include "tlau/oracle.hpp"
#include "tlau/scenario.hpp"
#include "tlau/talbot.hpp"

namespace {

struct Args {
    std::vector<std::string> configs;
    std::string out = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
};

std::vector<tlau::Scenario> load_scenarios(const Args& args) {
    std::vector<tlau::Scenario> out;
    for (const std::string& path : args.configs) {
        tlau::Scenario s = tlau::load_scenario(path);
        if (args.seed_given) s.seed = args.seed;
        out.push_back(std::move(s));
    }
    return out;
}

std::string out_path(const Args& args, const std::string& name) {
    return (std::filesystem::path(args.out) / name).string();
}

void prepare_out_dir(const Args& args) {
    std::error_code ec;
    std::filesystem::create_directories(args.out, ec);
    if (ec) throw tlau::config_error("cannot create output directory " + args.out);
}

void emit(const Args& args, const std::string& command,
          const std::vector<tlau::Scenario>& scenarios, const std::string& csv_name,
          const std::string& csv_text) {
    prepare_out_dir(args);
    tlau::write_text_file(out_path(args, csv_name), csv_text);
    std::uint64_t seed = scenarios.front().seed;
    tlau::write_text_file(out_path(args, command + "_manifest.json"),
                          tlau::manifest_text(command, scenarios, seed, {csv_name}));
}

// Distribution whose kind and decay parameters seed the sigma sweep; the
// sigma value itself is rescaled per row.
tlau::SpeedDistribution sweep_template(const tlau::Scenario& s) {
    bool any_poly = false;
    for (double r : s.sigma_rel) any_poly = any_poly || r > 0.0;
    if (!any_poly) return tlau::monochromatic_beam(s.mean_speed);
    return s.speed_distribution(0.05);
}

void warn_if_underresolved(const tlau::TalbotContext& ctx, const tlau::SpeedDistribution& dist,
                           double a, int nodes) {
    if (dist.kind == tlau::SpeedKind::monochromatic) return;
    double delta = tlau::quadrature_doubling_delta(ctx, dist, a, nodes);
    if (delta > 1e-3) {
        std::fprintf(stderr,
                     "warning: doubling quadrature_nodes changes the pattern by %s; "
                     "increase numerics.quadrature_nodes\n",
                     tlau::format_number(delta).c_str());
    }
}

int run_design(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::ResonanceCheck res = tlau::resonance_order(s.setup);
    if (!res.integer) {
        throw tlau::physics_error("geometry is off resonance: q = " +
                                  tlau::format_number(res.q) + " is not an integer");
    }
    double margin = tlau::classicality_margin(s.setup, s.lambda);
    double d2_sym = std::sqrt(s.lambda * s.setup.total_length() / 2.0);
    tlau::EqualLengthPair pair = tlau::equal_length_pair(d2_sym, s.setup.eta, s.lambda);

    auto line = [](const char* name, const std::string& value) {
        std::printf("%s %s\n", name, value.c_str());
    };
    line("config_id", s.config_id);
    line("q", tlau::format_number(res.q));
    line("d1_m", tlau::format_number(s.setup.d1));
    line("d2_m", tlau::format_number(s.setup.d2));
    line("d3_m", tlau::format_number(s.setup.d3()));
    line("L_m", tlau::format_number(s.setup.L));
    line("total_length_m", tlau::format_number(s.setup.total_length()));
    line("lambda_m", tlau::format_number(s.lambda));
    line("L_over_talbot_length", tlau::format_number(margin));
    line("classical_shadow_regime", margin < tlau::classical_threshold ? "true" : "false");
    line("equal_length_period_ratio", tlau::format_number(pair.period_ratio));
    line("equal_length_displacement_ratio", tlau::format_number(pair.displacement_ratio));
    return 0;
}

int run_pattern(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    tlau::SpeedDistribution dist = s.speed_distribution(s.sigma_rel.front());
    tlau::FringePattern p =
        tlau::polychromatic_pattern(ctx, dist, s.setup.a, xs, s.quadrature_nodes);
    warn_if_underresolved(ctx, dist, s.setup.a, s.quadrature_nodes);

    std::string csv = "x_m,intensity\n";
    std::vector<double> ys = p.clamped();
    for (std::size_t i = 0; i < p.xs.size(); ++i) {
        csv += tlau::format_number(p.xs[i]) + "," + tlau::format_number(ys[i]) + "\n";
    }
    emit(args, "pattern", {s}, s.csv_path("pattern"), csv);
    return 0;
}

int run_carpet(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    std::vector<double> ratios;
    for (int i = 2; i <= 200; ++i) ratios.push_back(i / 100.0);
    std::vector<tlau::CarpetRow> rows = tlau::carpet(ctx, ratios, xs);

    std::string csv = "L_over_LT,x_m,intensity\n";
    for (const tlau::CarpetRow& row : rows) {
        std::string prefix = tlau::format_number(row.ratio) + ",";
        std::vector<double> ys = row.pattern.clamped();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            csv += prefix + tlau::format_number(xs[i]) + "," + tlau::format_number(ys[i]) + "\n";
        }
    }
    emit(args, "carpet", {s}, s.csv_path("carpet"), csv);
    return 0;
}

int run_visibility(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    std::vector<tlau::VisibilityRow> rows = tlau::visibility_curve(
        ctx, sweep_template(s), s.sigma_rel, s.setup.a, xs, s.quadrature_nodes);

    std::string csv = "sigma_rel,contrast,dx_eff_m,dx_rel\n";
    for (const tlau::VisibilityRow& row : rows) {
        csv += tlau::format_number(row.sigma_rel) + "," + tlau::format_number(row.contrast) + "," +
               tlau::format_number(row.dx_eff) + "," + tlau::format_number(row.dx_rel) + "\n";
    }
    emit(args, "visibility", {s}, s.csv_path("visibility"), csv);
    return 0;
}

int run_fit(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    double t1 = s.setup.L / s.mean_speed;
    double closed = tlau::fringe_displacement(s.setup.a, t1, s.setup.eta);

    std::string csv = "sigma_rel,dx_eff_m,dx_closed_form_m\n";
    for (double srel : s.sigma_rel) {
        tlau::SpeedDistribution dist = s.speed_distribution(srel);
        double dx = tlau::effective_displacement_fit(ctx, dist, s.setup.a, xs, s.quadrature_nodes);
        csv += tlau::format_number(srel) + "," + tlau::format_number(dx) + "," +
               tlau::format_number(closed) + "\n";
    }
    emit(args, "fit", {s}, s.csv_path("fit"), csv);
    return 0;
}

int run_moire(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::MCConfig cfg = s.mc_config();
    tlau::MCHistogram hist = tlau::simulate(cfg, args.threads);

    std::string csv = "bin_center_m,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        double center = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        csv += tlau::format_number(center) + "," + std::to_string(hist.counts[i]) + "\n";
    }
    csv += "# total_accepted," + std::to_string(hist.total_accepted) + "\n";
    csv += "# contrast," + tlau::format_number(hist.contrast_estimate) + "\n";
    if (s.setup.a != 0.0) {
        tlau::MCConfig ref = cfg;
        ref.a = 0.0;
        ref.setup.a = 0.0;
        double dx = tlau::mc_displacement(cfg, ref, args.threads);
        double t1 = s.setup.L / s.mean_speed;
        csv += "# displacement_m," + tlau::format_number(dx) + "\n";
        csv += "# displacement_closed_form_m," +
               tlau::format_number(tlau::fringe_displacement(s.setup.a, t1, s.setup.eta)) + "\n";
    }
    emit(args, "moire", {s}, s.csv_path("moire"), csv);
    return 0;
}

int run_sensitivity(const Args& args) {
    std::vector<tlau::Scenario> scenarios = load_scenarios(args);
    std::string csv = "sigma_rel,config_id,contrast,dx_rel,sigma_a_over_a_rescaled\n";
    for (const tlau::Scenario& s : scenarios) {
        tlau::TalbotContext ctx = s.context();
        std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
        std::vector<tlau::VisibilityRow> rows = tlau::visibility_curve(
            ctx, sweep_template(s), s.sigma_rel, s.setup.a, xs, s.quadrature_nodes);
        for (const tlau::VisibilityRow& row : rows) {
            tlau::SensitivityReport rep = tlau::sensitivity(
                row.contrast, row.dx_eff, ctx.fringe_period(), double(s.n_particles));
            double rescaled =
                tlau::rescaled_sensitivity(rep, s.g1.open_fraction, double(s.n_particles));
            csv += tlau::format_number(row.sigma_rel) + "," + s.config_id + "," +
                   tlau::format_number(row.contrast) + "," + tlau::format_number(row.dx_rel) +
                   "," + tlau::format_number(rescaled) + "\n";
        }
    }
    prepare_out_dir(args);
    std::string name = scenarios.front().csv_path("sensitivity");
    tlau::write_text_file(out_path(args, name), csv);
    tlau::write_text_file(
        out_path(args, "sensitivity_manifest.json"),
        tlau::manifest_text("sensitivity", scenarios, scenarios.front().seed, {name}));
    return 0;
}

int run_verify(const Args& args) {
    tlau::Scenario s = load_scenarios(args).front();
    tlau::OracleConfig ocfg = s.oracle_config();
    tlau::TalbotContext ctx = s.context();
    std::vector<double> xs = tlau::make_grid(ctx.fringe_period(), s.grid);
    tlau::FringePattern oracle_p = tlau::incoherent_pattern(ocfg, xs, args.threads);
    tlau::FringePattern series_p = tlau::monochromatic_pattern(ctx, 0.0, s.mean_speed, xs);
    double rms = tlau::compare(oracle_p, series_p);

    std::printf("n_periods %d\n", ocfg.n_periods);
    std::printf("rms_deviation %s\n", tlau::format_number(rms).c_str());
    std::printf("threshold 0.05\n");
    std::string csv = "n_periods,rms_deviation\n" + std::to_string(ocfg.n_periods) + "," +
                      tlau::format_number(rms) + "\n";
    emit(args, "verify", {s}, s.csv_path("verify"), csv);
    if (rms >= 0.05) {
        throw tlau::physics_error("oracle deviation " + tlau::format_number(rms) +
                                  " exceeds the 0.05 acceptance threshold");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Talbot-Lau interferometer design and simulation toolkit"};
    app.require_subcommand(1);

    Args args;
    const std::vector<std::pair<std::string, bool>> commands = {
        {"design", false},     {"pattern", false}, {"carpet", false}, {"visibility", false},
        {"fit", false},        {"moire", false},   {"sensitivity", true}, {"verify", false}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, multi] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        CLI::Option* cfg = sub->add_option("--config", args.configs, "scenario file (JSON)");
        cfg->required()->check(CLI::ExistingFile);
        if (!multi) cfg->expected(1);
        sub->add_option("--out", args.out, "output directory");
        sub->add_option("--seed", args.seed, "override the scenario seed");
        sub->add_option("--threads", args.threads, "worker threads")->check(CLI::Range(1, 1024));
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed() && subs[i]->count("--seed") > 0) args.seed_given = true;
    }

    try {
        if (subs[0]->parsed()) return run_design(args);
        if (subs[1]->parsed()) return run_pattern(args);
        if (subs[2]->parsed()) return run_carpet(args);
        if (subs[3]->parsed()) return run_visibility(args);
        if (subs[4]->parsed()) return run_fit(args);
        if (subs[5]->parsed()) return run_moire(args);
        if (subs[6]->parsed()) return run_sensitivity(args);
        if (subs[7]->parsed()) return run_verify(args);
    } catch (const tlau::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const tlau::physics_error& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const tlau::stats_error& e) {
        std::fprintf(stderr, "statistics error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
