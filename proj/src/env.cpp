// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/env.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "wcsee/error.hpp"

namespace wcsee {

int action_dim(const ScenarioConfig& cfg) { return cfg.n_ihr + cfg.n_ris + 2; }

int state_dim(const ScenarioConfig& cfg) { return 2 * cfg.n_tx * cfg.n_ihr + 2 * cfg.n_tx * cfg.n_uehr + 2; }

ControlDecision map_action(const Vec& action, const ScenarioConfig& cfg) {
    const int k_n = cfg.n_ihr;
    const int m_n = cfg.n_ris;
    if (action.size() != action_dim(cfg)) {
        throw DimensionMismatch("map_action: expected " + std::to_string(action_dim(cfg)) + " entries");
    }
    const Vec a = action.cwiseMax(-1.0).cwiseMin(1.0);

    ControlDecision d;
    const Vec level = 0.5 * (a.head(k_n).array() + 1.0);
    const double total = level.sum();
    d.power = total > 0.0 ? Vec(cfg.p_max * level / total) : Vec(Vec::Zero(k_n));

    d.theta.resize(m_n);
    for (int m = 0; m < m_n; ++m) {
        const double raw = wrap_phase(kPi * (a(k_n + m) + 1.0));
        d.theta(m) = cfg.discrete_phases ? quantize_phase(raw, cfg.codebook) : raw;
    }

    const auto& r = cfg.region;
    const Position2D q{r.x_min + 0.5 * (a(k_n + m_n) + 1.0) * (r.x_max - r.x_min),
                       r.y_min + 0.5 * (a(k_n + m_n + 1) + 1.0) * (r.y_max - r.y_min)};
    d.q = project_uav(q, r);
    return d;
}

void write_trajectory_header(std::ostream& out) {
    out << "episode,step,reward,secrecy_rate,total_power,eh_slack,q_x,q_y\n";
}

void write_trajectory_row(std::ostream& out, const TrajectoryRow& row) {
    out << row.episode << ',' << row.step << ',' << row.reward << ',' << row.secrecy_rate << ','
        << row.total_power << ',' << row.eh_slack << ',' << row.q_x << ',' << row.q_y << '\n';
}

Environment::Environment(ScenarioConfig cfg, int horizon, RngStream rng, bool fixed_draw)
    : cfg_(std::move(cfg)), horizon_(horizon), rng_(rng), fixed_draw_(fixed_draw) {
    cfg_.validate();
    if (horizon_ <= 0) throw ConfigError("episode horizon must be positive");
}

namespace {

double rms(const CMat& m) {
    if (m.size() == 0) return 1.0;
    const double v = std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
    return v > 0.0 && std::isfinite(v) ? v : 1.0;
}

}  // namespace

Vec Environment::reset() {
    ++episode_;
    step_ = 0;
    RngStream draw = rng_.split("episode", fixed_draw_ ? 0 : static_cast<std::uint64_t>(episode_));
    const Placement placement = sample_placement(cfg_, draw);
    ch_ = sample_channels(cfg_, placement, cfg_.uav_start, Vec::Zero(cfg_.n_ris), draw);

    // Observation scales are frozen per episode so within-episode changes stay visible.
    hc_scale_ = rms(ch_.cascaded_ihr);
    CMat u(cfg_.n_tx, cfg_.n_uehr);
    for (int j = 0; j < cfg_.n_uehr; ++j) u.col(j) = ch_.estimated_uehr[j];
    u_scale_ = rms(u);
    last_row_ = {};
    return observe();
}

Vec Environment::observe() const {
    if (episode_ < 0) throw DomainError("Environment::observe before reset");
    Vec s(state_dim(cfg_));
    Eigen::Index at = 0;
    for (int k = 0; k < cfg_.n_ihr; ++k)
        for (int n = 0; n < cfg_.n_tx; ++n) s(at++) = ch_.cascaded_ihr(n, k).real() / hc_scale_;
    for (int k = 0; k < cfg_.n_ihr; ++k)
        for (int n = 0; n < cfg_.n_tx; ++n) s(at++) = ch_.cascaded_ihr(n, k).imag() / hc_scale_;
    for (int j = 0; j < cfg_.n_uehr; ++j) {
        for (int n = 0; n < cfg_.n_tx; ++n) s(at++) = ch_.estimated_uehr[j](n).real() / u_scale_;
        for (int n = 0; n < cfg_.n_tx; ++n) s(at++) = ch_.estimated_uehr[j](n).imag() / u_scale_;
    }
    const auto& r = cfg_.region;
    const double wx = r.x_max - r.x_min;
    const double wy = r.y_max - r.y_min;
    s(at++) = wx > 0.0 ? 2.0 * (ch_.q.x - r.x_min) / wx - 1.0 : 0.0;
    s(at++) = wy > 0.0 ? 2.0 * (ch_.q.y - r.y_min) / wy - 1.0 : 0.0;
    return s;
}

Evaluation Environment::evaluate(const ControlDecision& decision) const {
    ChannelRealization moved = ch_;
    update_channels(moved, cfg_, decision.q, decision.theta);
    return evaluate_decision(moved, cfg_, decision.power);
}

StepResult Environment::step(const Vec& action) {
    if (episode_ < 0) throw DomainError("Environment::step before reset");
    StepResult out;
    out.decision = map_action(action, cfg_);
    update_channels(ch_, cfg_, out.decision.q, out.decision.theta);
    out.eval = evaluate_decision(ch_, cfg_, out.decision.power);
    out.reward = out.eval.reward;
    ++step_;
    out.done = step_ >= horizon_;
    out.state = observe();

    last_row_.episode = episode_;
    last_row_.step = step_;
    last_row_.reward = out.reward;
    last_row_.secrecy_rate = out.eval.rates.min_rate;
    last_row_.total_power = out.decision.power.sum();
    last_row_.eh_slack = out.eval.eh_lower_sum - out.eval.eh_required;
    last_row_.q_x = out.decision.q.x;
    last_row_.q_y = out.decision.q.y;
    return out;
}

}  // namespace wcsee
