// Command-line front end: `run` executes a configuration file, `preset`
// prints or writes one of the built-in benchmark configurations, `sweep`
// re-runs a configuration over a list of permittivity ratios.

#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdi/tdi.hpp"

namespace {

std::vector<double> parse_ratio_list(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::runtime_error("bad epsilon ratio '" + item + "'");
        }
    }
    if (out.empty()) throw std::runtime_error("empty epsilon-ratio list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological-derivative imaging of short conducting cracks in a disk"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", preset_name, emit_path, ratio_list;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");

    auto* preset = app.add_subcommand("preset", "show or export a built-in configuration");
    preset->add_option("name", preset_name, "one of ex1|ex2|ex3|ex4")->required();
    preset->add_option("--emit-config", emit_path, "write the config to this file instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "run a config over a list of permittivity ratios");
    sweep->add_option("--config", config_path, "configuration file")->required();
    sweep->add_option("--epsilon-ratios", ratio_list, "comma-separated ratios, e.g. 0.6,1,2")->required();
    sweep->add_option("--out", out_dir, "output directory (default: current)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = tdi::experiment::load_config(config_path);
            tdi::experiment::run_experiment(cfg, out_dir);
        } else if (preset->parsed()) {
            const auto cfg = tdi::experiment::preset(preset_name);
            if (emit_path.empty()) {
                tdi::experiment::save_config(cfg, std::cout);
            } else {
                tdi::experiment::save_config(cfg, std::filesystem::path(emit_path));
            }
        } else if (sweep->parsed()) {
            auto cfg = tdi::experiment::load_config(config_path);
            cfg.epsilon_ratios = parse_ratio_list(ratio_list);
            tdi::experiment::run_experiment(cfg, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
