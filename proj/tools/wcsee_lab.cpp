// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "wcsee/config.hpp"
#include "wcsee/error.hpp"
#include "wcsee/experiments.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::istringstream in("seeds = " + text);
    return wcsee::parse_config(in, "--seeds").seeds;
}

void apply_sweep(wcsee::ExperimentSpec& spec, const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw wcsee::ParseError("--sweep: expected <axis>=v1,v2,...");
    spec.axis = wcsee::parse_axis(text.substr(0, eq));
    std::istringstream in("sweep_values = " + text.substr(eq + 1));
    spec.sweep_values = wcsee::parse_config(in, "--sweep").sweep_values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-RIS secure MISO simulator: WCSEE, SAC/DDPG training and the SCA benchmark"};
    std::string mode;
    std::string config_path;
    std::string seeds;
    std::string out_dir;
    std::string sweep;
    bool list_keys = false;
    app.add_option("mode", mode, "train-sac | train-ddpg | sca-benchmark | eval | sweep");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seeds", seeds, "comma-separated seed list");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--sweep", sweep, "<axis>=v1,v2,... with axis one of P_max, M, nu, batch");
    app.add_flag("--list-keys", list_keys, "print every configuration key and exit");
    CLI11_PARSE(app, argc, argv);

    if (list_keys) {
        for (const auto& k : wcsee::config_keys()) std::cout << k.key << "  " << k.description << '\n';
        return 0;
    }
    if (mode.empty()) {
        std::cerr << "wcsee-lab: missing mode\n" << app.help();
        return 2;
    }

    try {
        wcsee::ExperimentSpec spec;
        if (!config_path.empty()) spec = wcsee::load_config(config_path);
        spec.mode = wcsee::parse_mode(mode);
        if (!seeds.empty()) spec.seeds = parse_seeds(seeds);
        if (!out_dir.empty()) spec.out_dir = out_dir;
        if (!sweep.empty()) apply_sweep(spec, sweep);
        wcsee::validate(spec);
        const auto files = wcsee::run_experiment(spec, std::cerr);
        for (const auto& f : files) std::cout << spec.out_dir << '/' << f << '\n';
    } catch (const wcsee::Error& e) {
        std::cerr << "wcsee-lab: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "wcsee-lab: unexpected failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
