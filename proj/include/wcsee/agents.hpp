// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_AGENTS_HPP
#define WCSEE_AGENTS_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wcsee/env.hpp"
#include "wcsee/neural.hpp"
#include "wcsee/rng.hpp"

namespace wcsee::rl {

struct SacConfig {
    int hidden = 256;
    int hidden_layers = 2;
    int batch = 256;
    double gamma = 0.99;
    double tau = 5e-3;
    double lr_actor = 1e-4;
    double lr_critic = 1e-3;
    double lr_temperature = 1e-3;
    double init_temperature = 1.0;
    std::size_t buffer = 100000;
    int warmup = 1000;
    int updates_per_step = 1;
    std::optional<double> target_entropy;  // -(action dim) when unset
};

struct DdpgConfig {
    int hidden = 256;
    int hidden_layers = 2;
    int batch = 256;
    double gamma = 0.99;
    double tau = 5e-3;
    double lr_actor = 1e-4;
    double lr_critic = 1e-3;
    std::size_t buffer = 100000;
    int warmup = 1000;
    int updates_per_step = 1;
    double noise_sigma = 0.1;  // decays linearly to 0 over the run
};

struct UpdateStats {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double beta = 0.0;
};

std::vector<int> network_widths(int in, int out, int hidden, int hidden_layers);

// Stacks state over action, column per sample.
Mat join(const Mat& state, const Mat& action);

// y = r + gamma (1 - done) (min_i Q'_i(s', a') - beta log pi(a'|s')), a' drawn
// with the given standard-normal noise.
Vec sac_critic_target(const nn::Mlp& actor, const nn::Mlp& q1_target, const nn::Mlp& q2_target,
                      const nn::Batch& batch, const Mat& noise, double beta, double gamma);

// mean of 0.5 (Q(s, a) - y)^2. grad, when given, is filled with dL/dparams.
double critic_loss(const nn::Mlp& q, const Mat& state, const Mat& action, const Vec& y, Vec* grad);

struct ActorLoss {
    double loss = 0.0;
    Vec grad;      // dL/d actor params
    Vec log_prob;  // log pi of the sampled actions
};

// mean of beta log pi(a|s) - min(Q1, Q2)(s, a) with a reparameterized by noise.
ActorLoss sac_actor_loss(const nn::Mlp& actor, const nn::Mlp& q1, const nn::Mlp& q2, const Mat& state,
                         const Mat& noise, double beta);

// mean of -exp(log_beta) (log pi + target_entropy). grad is d/d log_beta.
double temperature_loss(double log_beta, const Vec& log_prob, double target_entropy, double* grad);

// -mean Q(s, tanh(actor(s))).
double ddpg_actor_loss(const nn::Mlp& actor, const nn::Mlp& critic, const Mat& state, Vec* grad);

class SacAgent {
  public:
    SacAgent(int state_dim, int action_dim, SacConfig cfg, RngStream rng);

    Vec act(const Vec& state, bool deterministic);
    UpdateStats update(const nn::Batch& batch);

    double beta() const;
    double target_entropy() const { return target_entropy_; }
    const SacConfig& config() const { return cfg_; }
    int action_dim() const { return action_dim_; }

    nn::Mlp actor, q1, q2, q1_target, q2_target;
    double log_beta = 0.0;

    void save(std::ostream& out) const;

  private:
    Mat normal(Eigen::Index rows, Eigen::Index cols);

    SacConfig cfg_;
    int action_dim_;
    double target_entropy_;
    RngStream rng_;
    nn::Adam actor_opt_, q1_opt_, q2_opt_, beta_opt_;
};

class DdpgAgent {
  public:
    DdpgAgent(int state_dim, int action_dim, DdpgConfig cfg, RngStream rng);

    // tanh(actor(s)) plus N(0, sigma^2) noise, clipped to [-1, 1].
    Vec act(const Vec& state, double sigma);
    UpdateStats update(const nn::Batch& batch);

    const DdpgConfig& config() const { return cfg_; }
    int action_dim() const { return action_dim_; }

    nn::Mlp actor, critic, actor_target, critic_target;

    void save(std::ostream& out) const;

  private:
    DdpgConfig cfg_;
    int action_dim_;
    RngStream rng_;
    nn::Adam actor_opt_, critic_opt_;
};

struct CurveRow {
    int episode = 0;
    double mean_reward = 0.0;
    double beta = 0.0;
    double critic_loss = 0.0;
    double actor_loss = 0.0;
};

void write_curve_header(std::ostream& out);
void write_curve_row(std::ostream& out, const CurveRow& row);

struct TrainOutput {
    std::vector<CurveRow> curve;
    std::vector<TrajectoryRow> trajectory;
};

// Training loop: one environment step, one buffer push, then updates_per_step
// gradient phases once warmup random steps are done. Transitions are stored
// with done = 0 since the horizon is a time limit.
TrainOutput train_sac(Environment& env, SacAgent& agent, int episodes, RngStream rng, bool keep_trajectory = false);
TrainOutput train_ddpg(Environment& env, DdpgAgent& agent, int episodes, RngStream rng,
                       bool keep_trajectory = false);

struct PolicyEval {
    double mean_reward = 0.0;
    double best_reward = 0.0;
    ControlDecision best;
    std::vector<TrajectoryRow> trajectory;
};

using Policy = std::function<Vec(const Vec&)>;

// Runs full episodes with the given policy and records the best single step.
PolicyEval evaluate_policy(Environment& env, const Policy& policy, int episodes);

}  // namespace wcsee::rl

#endif
