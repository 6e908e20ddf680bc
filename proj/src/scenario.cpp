#include "tlau/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tlau/constants.hpp"
#include "tlau/errors.hpp"

namespace tlau {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"design", "pattern",     "carpet", "visibility",
                                            "fit",    "sensitivity", "moire",  "verify"};

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::vector<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw config_error("unknown key \"" + it.key() + "\" in section \"" + section + "\"");
        }
    }
}

const json& section(const json& root, const std::string& name) {
    const json& s = root.at(name);
    if (!s.is_object()) throw config_error("section \"" + name + "\" must be an object");
    return s;
}

double number_at(const json& obj, const std::string& section_name, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw config_error(section_name + "." + key + " must be a number");
    return v.get<double>();
}

int integer_at(const json& obj, const std::string& section_name, const std::string& key, int lo) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw config_error(section_name + "." + key + " must be an integer");
    }
    long long n = v.get<long long>();
    if (n < lo) {
        throw config_error(section_name + "." + key + " must be >= " + std::to_string(lo));
    }
    return static_cast<int>(n);
}

std::uint64_t unsigned_at(const json& obj, const std::string& section_name,
                          const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw config_error(section_name + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& config_id) {
    json root;
    try {
        root = json::parse(json_text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse failure: ") + e.what());
    }
    if (!root.is_object()) throw config_error("config root must be an object");
    reject_unknown_keys(root, "(root)", {"setup", "beam", "numerics", "output"});
    if (!root.contains("setup")) throw config_error("missing section \"setup\"");
    if (!root.contains("beam")) throw config_error("missing section \"beam\"");

    Scenario s;
    s.config_id = config_id;

    const json& beam = section(root, "beam");
    reject_unknown_keys(beam, "beam", {"mass", "mean_speed", "sigma_rel", "lifetime"});
    if (!beam.contains("mass")) throw config_error("beam.mass is required");
    if (!beam.contains("mean_speed")) throw config_error("beam.mean_speed is required");
    s.mass = number_at(beam, "beam", "mass");
    s.mean_speed = number_at(beam, "beam", "mean_speed");
    if (s.mass <= 0.0) throw config_error("beam.mass must be > 0");
    if (s.mean_speed <= 0.0) throw config_error("beam.mean_speed must be > 0");
    if (beam.contains("sigma_rel")) {
        const json& list = beam.at("sigma_rel");
        if (!list.is_array() || list.empty()) {
            throw config_error("beam.sigma_rel must be a non-empty array");
        }
        s.sigma_rel.clear();
        for (const json& v : list) {
            if (!v.is_number()) throw config_error("beam.sigma_rel entries must be numbers");
            double r = v.get<double>();
            if (r < 0.0) throw config_error("beam.sigma_rel entries must be >= 0");
            s.sigma_rel.push_back(r);
        }
    }
    if (beam.contains("lifetime")) {
        double tau = number_at(beam, "beam", "lifetime");
        if (tau <= 0.0) throw config_error("beam.lifetime must be > 0");
        s.lifetime = tau;
    }
    s.lambda = de_broglie(s.mass, s.mean_speed);

    const json& setup = section(root, "setup");
    reject_unknown_keys(setup, "setup", {"family", "eta", "d2", "d1", "L", "f", "a"});
    for (const char* key : {"eta", "d2", "f"}) {
        if (!setup.contains(key)) {
            throw config_error(std::string("setup.") + key + " is required");
        }
    }
    double eta = number_at(setup, "setup", "eta");
    double d2 = number_at(setup, "setup", "d2");
    double f = number_at(setup, "setup", "f");
    double a = setup.contains("a") ? number_at(setup, "setup", "a") : 0.0;
    bool explicit_geometry = setup.contains("d1") || setup.contains("L");
    if (explicit_geometry) {
        if (setup.contains("family")) {
            throw config_error("setup gives both family and explicit d1/L; use exactly one");
        }
        if (!setup.contains("d1") || !setup.contains("L")) {
            throw config_error("explicit geometry needs both setup.d1 and setup.L");
        }
        s.setup = SetupGeometry{number_at(setup, "setup", "d1"), d2,
                                number_at(setup, "setup", "L"), eta, a};
    } else {
        if (!setup.contains("family")) {
            throw config_error("setup needs either family or explicit d1 and L");
        }
        int family = integer_at(setup, "setup", "family", 1);
        s.family = family;
        s.setup = design_from_family(family, eta, d2, s.lambda);
        s.setup.a = a;
    }
    s.setup.validate();
    s.g1 = GratingSpec{s.setup.d1, f};
    s.g2 = GratingSpec{s.setup.d2, f};
    s.g1.validate();
    s.g2.validate();

    s.source_width = 200.0 * s.setup.d1;
    s.transverse_speed_halfwidth = 100.0 * s.mean_speed * s.setup.d1 / s.setup.L;
    s.source_distance = s.setup.L;
    if (root.contains("numerics")) {
        const json& num = section(root, "numerics");
        reject_unknown_keys(num, "numerics",
                            {"l_max", "n_max", "grid", "quadrature_nodes", "seed", "n_particles",
                             "bins", "oracle_periods", "oracle_sources", "oracle_samples",
                             "source_width", "transverse_speed_halfwidth", "source_distance"});
        if (num.contains("l_max")) s.l_max = integer_at(num, "numerics", "l_max", 0);
        if (num.contains("n_max")) s.n_max = integer_at(num, "numerics", "n_max", 1);
        if (num.contains("grid")) s.grid = integer_at(num, "numerics", "grid", 2);
        if (num.contains("quadrature_nodes")) {
            s.quadrature_nodes = integer_at(num, "numerics", "quadrature_nodes", 1);
        }
        if (num.contains("seed")) s.seed = unsigned_at(num, "numerics", "seed");
        if (num.contains("n_particles")) s.n_particles = unsigned_at(num, "numerics", "n_particles");
        if (num.contains("bins")) s.bins = integer_at(num, "numerics", "bins", 1);
        if (num.contains("oracle_periods")) {
            s.oracle_periods = integer_at(num, "numerics", "oracle_periods", 1);
        }
        if (num.contains("oracle_sources")) {
            s.oracle_sources = integer_at(num, "numerics", "oracle_sources", 1);
        }
        if (num.contains("oracle_samples")) {
            s.oracle_samples = integer_at(num, "numerics", "oracle_samples", 1);
        }
        if (num.contains("source_width")) {
            s.source_width = number_at(num, "numerics", "source_width");
        }
        if (num.contains("transverse_speed_halfwidth")) {
            s.transverse_speed_halfwidth = number_at(num, "numerics", "transverse_speed_halfwidth");
        }
        if (num.contains("source_distance")) {
            s.source_distance = number_at(num, "numerics", "source_distance");
        }
    }

    if (root.contains("output")) {
        const json& out = section(root, "output");
        reject_unknown_keys(out, "output", {"paths", "format"});
        if (out.contains("format")) {
            const json& fmt = out.at("format");
            if (!fmt.is_string()) throw config_error("output.format must be a string");
            s.format = fmt.get<std::string>();
            if (s.format != "csv") throw config_error("output.format must be \"csv\"");
        }
        if (out.contains("paths")) {
            const json& paths = out.at("paths");
            if (!paths.is_object()) throw config_error("output.paths must be an object");
            reject_unknown_keys(paths, "output.paths", kCommands);
            for (auto it = paths.begin(); it != paths.end(); ++it) {
                if (!it.value().is_string()) {
                    throw config_error("output.paths." + it.key() + " must be a string");
                }
                s.paths[it.key()] = it.value().get<std::string>();
            }
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos) {
        stem = stem.substr(slash + 1);
    }
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) {
        stem = stem.substr(0, dot);
    }
    return parse_scenario(buf.str(), stem);
}

TalbotContext Scenario::context() const {
    return TalbotContext(setup, g1, g2, lambda, mean_speed, l_max, n_max);
}

SpeedDistribution Scenario::speed_distribution(double sigma_rel_value) const {
    if (sigma_rel_value == 0.0) return monochromatic_beam(mean_speed);
    double sigma = sigma_rel_value * mean_speed;
    if (lifetime) return decaying_beam(mean_speed, sigma, *lifetime, setup.total_length());
    return gaussian_beam(mean_speed, sigma);
}

MCConfig Scenario::mc_config() const {
    MCConfig cfg;
    cfg.setup = setup;
    cfg.dist = speed_distribution(sigma_rel.front());
    cfg.a = setup.a;
    cfg.open_fraction = g1.open_fraction;
    cfg.n_particles = n_particles;
    cfg.bins = bins;
    cfg.seed = seed;
    cfg.source_width = source_width;
    cfg.transverse_speed_halfwidth = transverse_speed_halfwidth;
    cfg.source_distance = source_distance;
    return cfg;
}

OracleConfig Scenario::oracle_config() const {
    OracleConfig cfg;
    cfg.setup = setup;
    cfg.setup.a = 0.0;  // the comparison is defined for the undisplaced pattern
    cfg.g1 = g1;
    cfg.g2 = g2;
    cfg.lambda = lambda;
    cfg.n_periods = oracle_periods;
    cfg.n_sources = oracle_sources;
    cfg.integration_samples = oracle_samples;
    return cfg;
}

std::string Scenario::csv_path(const std::string& command) const {
    if (auto it = paths.find(command); it != paths.end()) return it->second;
    return command + ".csv";
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

ordered echo_config(const Scenario& s) {
    ordered setup;
    if (s.family) {
        setup["family"] = *s.family;
        setup["eta"] = s.setup.eta;
        setup["d2"] = s.setup.d2;
    } else {
        setup["eta"] = s.setup.eta;
        setup["d1"] = s.setup.d1;
        setup["d2"] = s.setup.d2;
        setup["L"] = s.setup.L;
    }
    setup["f"] = s.g1.open_fraction;
    setup["a"] = s.setup.a;

    ordered beam;
    beam["mass"] = s.mass;
    beam["mean_speed"] = s.mean_speed;
    beam["sigma_rel"] = s.sigma_rel;
    if (s.lifetime) beam["lifetime"] = *s.lifetime;

    ordered numerics;
    numerics["l_max"] = s.l_max;
    numerics["n_max"] = s.n_max;
    numerics["grid"] = s.grid;
    numerics["quadrature_nodes"] = s.quadrature_nodes;
    numerics["seed"] = s.seed;
    numerics["n_particles"] = s.n_particles;
    numerics["bins"] = s.bins;
    numerics["oracle_periods"] = s.oracle_periods;
    numerics["oracle_sources"] = s.oracle_sources;
    numerics["oracle_samples"] = s.oracle_samples;
    numerics["source_width"] = s.source_width;
    numerics["transverse_speed_halfwidth"] = s.transverse_speed_halfwidth;
    numerics["source_distance"] = s.source_distance;

    ordered output;
    ordered paths = ordered::object();
    for (const auto& [cmd, path] : s.paths) paths[cmd] = path;
    output["paths"] = paths;
    output["format"] = s.format;

    ordered cfg;
    cfg["setup"] = setup;
    cfg["beam"] = beam;
    cfg["numerics"] = numerics;
    cfg["output"] = output;
    return cfg;
}

ordered derived_block(const Scenario& s) {
    ResonanceCheck res = resonance_order(s.setup);
    ordered d;
    d["d1_m"] = s.setup.d1;
    d["d2_m"] = s.setup.d2;
    d["d3_m"] = s.setup.d3();
    d["L_m"] = s.setup.L;
    d["total_length_m"] = s.setup.total_length();
    d["eta"] = s.setup.eta;
    d["q"] = res.q;
    d["lambda_m"] = s.lambda;
    d["L_over_talbot_length"] = classicality_margin(s.setup, s.lambda);
    double t1 = s.setup.L / s.mean_speed;
    d["T1_s"] = t1;
    d["fringe_displacement_m"] = fringe_displacement(s.setup.a, t1, s.setup.eta);
    return d;
}

}  // namespace

std::string manifest_text(const std::string& command, const std::vector<Scenario>& scenarios,
                          std::uint64_t seed, const std::vector<std::string>& outputs) {
    ordered m;
    m["command"] = command;
    m["seed"] = seed;
    m["constants"] = {{"planck_J_s", constants::planck},
                      {"electron_mass_kg", constants::electron_mass}};
    ordered configs = ordered::array();
    for (const Scenario& s : scenarios) {
        ordered entry;
        entry["config_id"] = s.config_id;
        entry["config"] = echo_config(s);
        entry["derived"] = derived_block(s);
        configs.push_back(entry);
    }
    m["configs"] = configs;
    m["outputs"] = outputs;
    return m.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write output file " + path);
    out << text;
    if (!out) throw config_error("write failure on " + path);
}

}  // namespace tlau
