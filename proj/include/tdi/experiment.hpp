#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdi/forward.hpp"
#include "tdi/imaging.hpp"
#include "tdi/theory.hpp"

// -----------------------------------------------------------------------------
// Experiment orchestration: plain-text configuration files, the four built-in
// presets, and the full synthesize -> image -> extract pipeline with CSV/PGM
// artifact emission.
//
// Config format: flat "key = value" lines plus one [crack] block per crack
// (center_x, center_y, half_length, angle_deg).  Lengths in meters,
// frequency in Hz, angles in degrees; '#' starts a comment.
// -----------------------------------------------------------------------------

namespace tdi::experiment {

struct CrackSpec {
    double center_x = 0.0;
    double center_y = 0.0;
    double half_length = 0.0;
    double angle_deg = 0.0;  // kept in degrees so a config round-trips exactly
    bool operator==(const CrackSpec&) const = default;
};

struct OutputSelection {
    bool csv = true;
    bool pgm = true;
    bool peaks = true;
    bool operator==(const OutputSelection&) const = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    double domain_radius = 1.0;
    double frequency = 875e6;
    double permittivity = vacuum_permittivity;
    double permeability = vacuum_permeability;
    int directions = 32;
    int boundary_nodes = 256;
    int grid_resolution = 201;
    std::vector<double> epsilon_ratios = {1.0};
    double mu_ratio = 1.0;
    double snr_db = 20.0;  // forward::no_noise disables the noise channel
    std::uint64_t seed = 1;
    OutputSelection outputs;
    std::vector<CrackSpec> cracks;
    bool operator==(const ExperimentConfig&) const = default;
};

inline void validate_config(const ExperimentConfig& c) {
    if (!(c.domain_radius > 0.0 && std::isfinite(c.domain_radius)))
        throw std::invalid_argument("config: domain_radius must be positive");
    if (!(c.frequency > 0.0 && std::isfinite(c.frequency)))
        throw std::invalid_argument("config: frequency must be positive");
    if (!(c.permittivity > 0.0 && c.permeability > 0.0))
        throw std::invalid_argument("config: medium constants must be positive");
    if (c.directions < 1) throw std::invalid_argument("config: directions must be >= 1");
    if (c.boundary_nodes < 8) throw std::invalid_argument("config: boundary_nodes must be >= 8");
    if (c.grid_resolution < 33) throw std::invalid_argument("config: grid_resolution must be >= 33");
    if (c.epsilon_ratios.empty()) throw std::invalid_argument("config: epsilon_ratios must be nonempty");
    for (double r : c.epsilon_ratios)
        if (!(r > 0.0 && std::isfinite(r)))
            throw std::invalid_argument("config: epsilon ratios must be positive");
    if (!(c.mu_ratio > 0.0 && std::isfinite(c.mu_ratio)))
        throw std::invalid_argument("config: mu_ratio must be positive");
    if (!(c.snr_db == forward::no_noise || std::isfinite(c.snr_db)))
        throw std::invalid_argument("config: snr_db must be finite or 'none'");
    if (c.cracks.empty()) throw std::invalid_argument("config: at least one [crack] block required");
}

inline Scene make_scene(const ExperimentConfig& c) {
    Scene s;
    s.domain_radius = c.domain_radius;
    s.true_medium = {c.permittivity, c.permeability, c.frequency};
    for (const CrackSpec& cs : c.cracks)
        s.cracks.push_back(make_crack({cs.center_x, cs.center_y}, cs.half_length,
                                      cs.angle_deg * pi / 180.0));
    return s;
}

// ---- presets ------------------------------------------------------------------

// The four benchmark scenes: a single crack at the origin; two cracks on the
// axes; three equal cracks; three cracks of different lengths.
inline ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    if (name == "ex1") {
        c.cracks = {{0.0, 0.0, 0.03, 0.0}};
    } else if (name == "ex2") {
        c.cracks = {{0.6, 0.0, 0.03, 45.0}, {0.0, 0.5, 0.03, 0.0}};
    } else if (name == "ex3") {
        c.cracks = {{-0.6, -0.1, 0.03, 0.0}, {0.3, 0.5, 0.03, 45.0}, {0.2, -0.6, 0.03, 210.0}};
    } else if (name == "ex4") {
        c.cracks = {{-0.6, -0.1, 0.02, 0.0}, {0.3, 0.5, 0.06, 45.0}, {0.2, -0.6, 0.01, 210.0}};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "' (expected ex1|ex2|ex3|ex4)");
    }
    return c;
}

// ---- config file I/O ------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad numeric value for '" + key + "': " + v);
    }
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void save_config(const ExperimentConfig& c, std::ostream& os) {
    os << "# " << c.name << " experiment configuration\n";
    os << "name = " << c.name << "\n";
    os << "domain_radius = " << detail::fmt(c.domain_radius) << "\n";
    os << "frequency = " << detail::fmt(c.frequency) << "\n";
    os << "permittivity = " << detail::fmt(c.permittivity) << "\n";
    os << "permeability = " << detail::fmt(c.permeability) << "\n";
    os << "directions = " << c.directions << "\n";
    os << "boundary_nodes = " << c.boundary_nodes << "\n";
    os << "grid_resolution = " << c.grid_resolution << "\n";
    os << "epsilon_ratios = ";
    for (size_t i = 0; i < c.epsilon_ratios.size(); ++i)
        os << (i ? "," : "") << detail::fmt(c.epsilon_ratios[i]);
    os << "\n";
    os << "mu_ratio = " << detail::fmt(c.mu_ratio) << "\n";
    os << "snr_db = " << (c.snr_db == forward::no_noise ? std::string("none") : detail::fmt(c.snr_db))
       << "\n";
    os << "seed = " << c.seed << "\n";
    std::string outs;
    if (c.outputs.csv) outs += "csv";
    if (c.outputs.pgm) outs += outs.empty() ? "pgm" : ",pgm";
    if (c.outputs.peaks) outs += outs.empty() ? "peaks" : ",peaks";
    os << "outputs = " << outs << "\n";
    for (const CrackSpec& cs : c.cracks) {
        os << "\n[crack]\n";
        os << "center_x = " << detail::fmt(cs.center_x) << "\n";
        os << "center_y = " << detail::fmt(cs.center_y) << "\n";
        os << "half_length = " << detail::fmt(cs.half_length) << "\n";
        os << "angle_deg = " << detail::fmt(cs.angle_deg) << "\n";
    }
}

inline void save_config(const ExperimentConfig& c, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    save_config(c, os);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline ExperimentConfig load_config(std::istream& is) {
    ExperimentConfig c;
    c.cracks.clear();
    c.outputs = {false, false, false};
    bool outputs_seen = false;
    CrackSpec* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line == "[crack]") {
            c.cracks.emplace_back();
            current = &c.cracks.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (current) {
            if (key == "center_x") current->center_x = detail::parse_double(key, val);
            else if (key == "center_y") current->center_y = detail::parse_double(key, val);
            else if (key == "half_length") current->half_length = detail::parse_double(key, val);
            else if (key == "angle_deg") current->angle_deg = detail::parse_double(key, val);
            else throw std::runtime_error("config: unknown [crack] key '" + key + "'");
            continue;
        }
        if (key == "name") c.name = val;
        else if (key == "domain_radius") c.domain_radius = detail::parse_double(key, val);
        else if (key == "frequency") c.frequency = detail::parse_double(key, val);
        else if (key == "permittivity") c.permittivity = detail::parse_double(key, val);
        else if (key == "permeability") c.permeability = detail::parse_double(key, val);
        else if (key == "directions") c.directions = static_cast<int>(detail::parse_double(key, val));
        else if (key == "boundary_nodes") c.boundary_nodes = static_cast<int>(detail::parse_double(key, val));
        else if (key == "grid_resolution") c.grid_resolution = static_cast<int>(detail::parse_double(key, val));
        else if (key == "mu_ratio") c.mu_ratio = detail::parse_double(key, val);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(val));
        else if (key == "snr_db") c.snr_db = (val == "none" || val == "off" || val == "inf")
                                                 ? forward::no_noise
                                                 : detail::parse_double(key, val);
        else if (key == "epsilon_ratios" || key == "epsilon_ratio") {
            c.epsilon_ratios.clear();
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ','))
                c.epsilon_ratios.push_back(detail::parse_double(key, detail::trim(item)));
        } else if (key == "outputs") {
            outputs_seen = true;
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = detail::trim(item);
                if (item == "csv") c.outputs.csv = true;
                else if (item == "pgm") c.outputs.pgm = true;
                else if (item == "peaks") c.outputs.peaks = true;
                else throw std::runtime_error("config: unknown output kind '" + item + "'");
            }
        } else {
            throw std::runtime_error("config: unknown key '" + key + "'");
        }
    }
    if (!outputs_seen) c.outputs = {true, true, true};
    validate_config(c);
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open config: " + path.string());
    return load_config(is);
}

// ---- pipeline -------------------------------------------------------------------

struct RatioResult {
    double epsilon_ratio = 0.0;
    double assumed_wavenumber = 0.0;
    double correlation = 0.0;  // F vs Phi on |z| <= 0.7 R
    int peak_count = 0;
    std::vector<double> shift_errors;  // per crack, m
};

// Compact ratio label for filenames: %g, '.' kept (e.g. "0.6", "1", "1.2").
inline std::string ratio_label(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

inline void write_map_meta(const imaging::ImagingMap& map, const ExperimentConfig& cfg,
                           double k_true, const std::filesystem::path& path) {
    nlohmann::json j;
    j["kind"] = map.kind == imaging::MapKind::normalized ? "normalized"
                : map.kind == imaging::MapKind::phi_predictor ? "phi_predictor" : "raw_td";
    j["true_wavenumber_rad_per_m"] = k_true;
    j["assumed_wavenumber_rad_per_m"] = map.assumed_wavenumber;
    j["domain_radius_m"] = cfg.domain_radius;
    j["grid_resolution"] = map.grid.resolution;
    j["seed"] = cfg.seed;
    j["snr_db"] = cfg.snr_db == forward::no_noise ? nlohmann::json(nullptr) : nlohmann::json(cfg.snr_db);
    j["masked_cells_rendered_as"] = 0.0;
    j["pgm_note"] = "P5 8-bit, value 0 -> black, 1 -> white, rows top (y=+R) to bottom (y=-R)";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << j.dump(2) << "\n";
}

// Runs the full pipeline for every requested epsilon ratio and emits the
// selected artifacts into out_dir.  Deterministic for a fixed config.
inline std::vector<RatioResult> run_experiment(const ExperimentConfig& cfg,
                                               const std::filesystem::path& out_dir,
                                               std::ostream& log = std::cout) {
    validate_config(cfg);
    const Scene scene = make_scene(cfg);
    const auto diags = validate_scene(scene);
    for (const auto& d : diags)
        log << (d.severity == Severity::error ? "error: " : "warning: ") << d.message << "\n";
    if (has_errors(diags)) throw std::invalid_argument("scene validation failed");

    std::filesystem::create_directories(out_dir);
    const double k = wavenumber(scene.true_medium);
    const auto dirs = uniform_directions(cfg.directions);
    const auto bgrid = make_boundary_grid(cfg.domain_radius, cfg.boundary_nodes);
    const auto igrid = make_imaging_grid(cfg.domain_radius, cfg.grid_resolution);
    const auto params = greens::SeriesParams::for_geometry(k, cfg.domain_radius);

    auto data = forward::synthesize_data(scene, dirs, bgrid, params);
    if (cfg.snr_db != forward::no_noise) data = forward::add_noise(data, cfg.snr_db, cfg.seed);

    std::vector<RatioResult> results;
    for (double ratio : cfg.epsilon_ratios) {
        const double k_a = k * std::sqrt(ratio * cfg.mu_ratio);
        const auto params_a = greens::SeriesParams::for_geometry(k_a, cfg.domain_radius);
        const auto f_map = imaging::normalize(imaging::td_map(data, igrid, k_a, params_a));
        const auto phi = theory::phi_map(scene, igrid, k, k_a);

        RatioResult res;
        res.epsilon_ratio = ratio;
        res.assumed_wavenumber = k_a;
        res.correlation =
            theory::compare_maps(imaging::restrict_to_radius(f_map, 0.7 * cfg.domain_radius),
                                 imaging::restrict_to_radius(phi, 0.7 * cfg.domain_radius));
        const auto report = theory::extract_peaks(f_map, theory::default_peak_threshold,
                                                  theory::default_suppression_radius(k_a));
        const auto matching = theory::match_peaks(report, scene, k, k_a);
        res.peak_count = static_cast<int>(report.peaks.size());
        res.shift_errors = matching.crack_shift_error;

        const std::string tag = ratio_label(ratio);
        if (cfg.outputs.csv) {
            imaging::write_map_csv(f_map, (out_dir / ("map_F_" + tag + ".csv")).string());
            imaging::write_map_csv(phi, (out_dir / ("map_Phi_" + tag + ".csv")).string());
        }
        if (cfg.outputs.pgm) {
            imaging::write_map_pgm(f_map, (out_dir / ("map_F_" + tag + ".pgm")).string());
            imaging::write_map_pgm(phi, (out_dir / ("map_Phi_" + tag + ".pgm")).string());
            write_map_meta(f_map, cfg, k, out_dir / ("map_F_" + tag + ".meta.json"));
            write_map_meta(phi, cfg, k, out_dir / ("map_Phi_" + tag + ".meta.json"));
        }
        if (cfg.outputs.peaks)
            theory::write_peaks_csv(report, matching, (out_dir / ("peaks_" + tag + ".csv")).string());

        log << "ratio " << tag << ": k_a = " << k_a << " rad/m, corr(F,Phi)|0.7R = " << res.correlation
            << ", peaks = " << res.peak_count << ", shift errors (m):";
        for (double e : res.shift_errors) log << " " << e;
        log << "\n";
        results.push_back(std::move(res));
    }

    std::ofstream os(out_dir / "summary.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + (out_dir / "summary.csv").string());
    os << "epsilon_ratio,k_a,correlation_0p7R,peak_count,max_shift_error_m,mean_shift_error_m\n";
    char buf[256];
    for (const auto& r : results) {
        double mx = 0.0, mean = 0.0;
        for (double e : r.shift_errors) {
            mx = std::max(mx, e);
            mean += e;
        }
        mean /= r.shift_errors.empty() ? 1.0 : static_cast<double>(r.shift_errors.size());
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.17g,%.17g\n", r.epsilon_ratio,
                      r.assumed_wavenumber, r.correlation, r.peak_count, mx, mean);
        os << buf;
    }
    return results;
}

}  // namespace tdi::experiment
