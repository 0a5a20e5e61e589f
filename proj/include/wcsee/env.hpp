// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_ENV_HPP
#define WCSEE_ENV_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wcsee/channels.hpp"
#include "wcsee/phy.hpp"
#include "wcsee/rng.hpp"
#include "wcsee/scenario.hpp"

namespace wcsee {

struct ControlDecision {
    Vec power;   // p~, length K
    Vec theta;   // RIS phases in [0, 2*pi)
    Position2D q;
};

int action_dim(const ScenarioConfig& cfg);  // K + M + 2
int state_dim(const ScenarioConfig& cfg);   // 2 N_t K + 2 N_t J + 2

// Raw action in [-1, 1]^(K+M+2) to a decision. Entries outside are clipped.
ControlDecision map_action(const Vec& action, const ScenarioConfig& cfg);

struct StepResult {
    double reward = 0.0;
    Vec state;
    bool done = false;
    Evaluation eval;
    ControlDecision decision;
};

struct TrajectoryRow {
    int episode = 0;
    int step = 0;
    double reward = 0.0;
    double secrecy_rate = 0.0;
    double total_power = 0.0;
    double eh_slack = 0.0;  // sum of EH lower bounds minus the RF requirement
    double q_x = 0.0;
    double q_y = 0.0;
};

void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, const TrajectoryRow& row);

class Environment {
  public:
    // Episodes draw placement and fading from rng.split("episode", n). With
    // fixed_draw every episode reuses the draw of episode 0.
    Environment(ScenarioConfig cfg, int horizon, RngStream rng, bool fixed_draw = false);

    Vec reset();
    StepResult step(const Vec& action);

    // Reward of a decision on the current channel draw, with the UAV and RIS
    // moved as the decision says. Does not advance the episode.
    Evaluation evaluate(const ControlDecision& decision) const;

    Vec observe() const;
    const ScenarioConfig& config() const { return cfg_; }
    const ChannelRealization& channels() const { return ch_; }
    int horizon() const { return horizon_; }
    int episode() const { return episode_; }
    int step_index() const { return step_; }
    TrajectoryRow last_row() const { return last_row_; }

  private:
    ScenarioConfig cfg_;
    int horizon_;
    RngStream rng_;
    bool fixed_draw_;
    int episode_ = -1;
    int step_ = 0;
    ChannelRealization ch_;
    double hc_scale_ = 1.0;
    double u_scale_ = 1.0;
    TrajectoryRow last_row_;
};

}  // namespace wcsee

#endif
