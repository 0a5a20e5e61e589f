// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_CONFIG_HPP
#define WCSEE_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wcsee/agents.hpp"
#include "wcsee/sca.hpp"
#include "wcsee/scenario.hpp"

namespace wcsee {

enum class Mode { TrainSac, TrainDdpg, ScaBenchmark, Eval, Sweep };
enum class SweepAxis { None, PMax, RisElements, Nu, Batch };
enum class Method { Sac, Ddpg, Sca };

std::string to_string(Mode m);
std::string to_string(SweepAxis a);
std::string to_string(Method m);
// Throw ValidationError on unknown names.
Mode parse_mode(const std::string& s);
SweepAxis parse_axis(const std::string& s);
Method parse_method(const std::string& s);

struct ExperimentSpec {
    Mode mode = Mode::TrainSac;
    ScenarioConfig scenario;
    rl::SacConfig sac;
    rl::DdpgConfig ddpg;
    sca::ScaOptions sca;
    int episodes = 100;
    int horizon = 200;
    int eval_episodes = 5;
    int realizations = 100;
    bool fixed_draw = false;
    bool write_trajectory = true;
    Method sweep_method = Method::Sac;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
    SweepAxis axis = SweepAxis::None;
    std::vector<double> sweep_values;
};

// Flat "key = value" text, '#' starts a comment. Every key is optional.
// Throws ParseError for malformed lines and ValidationError for unknown keys
// or bad values; both messages start with "<source>:<line>:".
ExperimentSpec parse_config(std::istream& in, const std::string& source);
ExperimentSpec load_config(const std::string& path);

// Cross-field checks; also run by parse_config.
void validate(const ExperimentSpec& spec);

// Applies one sweep value to a copy of the spec (P_max in dBm).
ExperimentSpec with_sweep_value(const ExperimentSpec& spec, double value);

// Key, unit and default of every recognized setting.
struct KeyInfo {
    std::string key;
    std::string description;
};
const std::vector<KeyInfo>& config_keys();

}  // namespace wcsee

#endif
