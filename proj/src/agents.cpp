// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/agents.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wcsee/error.hpp"

namespace wcsee::rl {

using nn::Mlp;

std::vector<int> network_widths(int in, int out, int hidden, int hidden_layers) {
    std::vector<int> w{in};
    for (int i = 0; i < hidden_layers; ++i) w.push_back(hidden);
    w.push_back(out);
    return w;
}

Mat join(const Mat& state, const Mat& action) {
    Mat x(state.rows() + action.rows(), state.cols());
    x.topRows(state.rows()) = state;
    x.bottomRows(action.rows()) = action;
    return x;
}

namespace {

struct PolicyOut {
    nn::SquashedBatch head;
    Mlp::Tape tape;
};

PolicyOut policy_forward(const Mlp& actor, const Mat& state, const Mat& noise) {
    PolicyOut out;
    const Mat raw = actor.forward(state, out.tape);
    const Eigen::Index a = raw.rows() / 2;
    out.head = nn::squashed_forward(raw.topRows(a), raw.bottomRows(a), noise);
    return out;
}

}  // namespace

Vec sac_critic_target(const Mlp& actor, const Mlp& q1_target, const Mlp& q2_target, const nn::Batch& batch,
                      const Mat& noise, double beta, double gamma) {
    const PolicyOut next = policy_forward(actor, batch.next_state, noise);
    const Mat x = join(batch.next_state, next.head.action);
    const Vec qmin = q1_target.forward(x).row(0).transpose().cwiseMin(q2_target.forward(x).row(0).transpose());
    return batch.reward.array() + gamma * (1.0 - batch.done.array()) * (qmin - beta * next.head.log_prob).array();
}

double critic_loss(const Mlp& q, const Mat& state, const Mat& action, const Vec& y, Vec* grad) {
    Mlp::Tape tape;
    const Vec pred = q.forward(join(state, action), tape).row(0).transpose();
    const double n = static_cast<double>(y.size());
    const Vec err = pred - y;
    if (grad != nullptr) {
        *grad = Vec::Zero(static_cast<Eigen::Index>(q.size()));
        q.backward(tape, (err / n).transpose(), *grad);
    }
    return 0.5 * err.squaredNorm() / n;
}

ActorLoss sac_actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2, const Mat& state, const Mat& noise,
                         double beta) {
    ActorLoss out;
    const PolicyOut pol = policy_forward(actor, state, noise);
    const Mat x = join(state, pol.head.action);
    Mlp::Tape t1, t2;
    const Vec v1 = q1.forward(x, t1).row(0).transpose();
    const Vec v2 = q2.forward(x, t2).row(0).transpose();
    const Eigen::Index b = state.cols();
    const double n = static_cast<double>(b);

    Mat d1 = Mat::Zero(1, b);
    Mat d2 = Mat::Zero(1, b);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
        const bool first = v1(i) <= v2(i);
        loss += beta * pol.head.log_prob(i) - (first ? v1(i) : v2(i));
        (first ? d1 : d2)(0, i) = -1.0 / n;
    }
    out.loss = loss / n;
    out.log_prob = pol.head.log_prob;

    Vec scratch1, scratch2;
    const Mat dx1 = q1.backward(t1, d1, scratch1);
    const Mat dx2 = q2.backward(t2, d2, scratch2);
    const Eigen::Index a = pol.head.action.rows();
    const Mat d_action = dx1.bottomRows(a) + dx2.bottomRows(a);
    const Vec d_logp = Vec::Constant(b, beta / n);
    Mat d_mean, d_ls;
    nn::squashed_backward(pol.head, d_action, d_logp, d_mean, d_ls);
    Mat dy(2 * a, b);
    dy.topRows(a) = d_mean;
    dy.bottomRows(a) = d_ls;
    out.grad = Vec::Zero(static_cast<Eigen::Index>(actor.size()));
    actor.backward(pol.tape, dy, out.grad);
    return out;
}

double temperature_loss(double log_beta, const Vec& log_prob, double target_entropy, double* grad) {
    const double beta = std::exp(log_beta);
    const double m = log_prob.size() > 0 ? (log_prob.array() + target_entropy).mean() : 0.0;
    if (grad != nullptr) *grad = -beta * m;
    return -beta * m;
}

double ddpg_actor_loss(const Mlp& actor, const Mlp& critic, const Mat& state, Vec* grad) {
    Mlp::Tape ta, tc;
    const Mat raw = actor.forward(state, ta);
    const Mat action = raw.array().tanh().matrix();
    const Vec q = critic.forward(join(state, action), tc).row(0).transpose();
    const double n = static_cast<double>(state.cols());
    if (grad != nullptr) {
        Vec scratch;
        const Mat dx = critic.backward(tc, Mat::Constant(1, state.cols(), -1.0 / n), scratch);
        const Mat d_raw = dx.bottomRows(action.rows()).cwiseProduct((1.0 - action.array().square()).matrix());
        *grad = Vec::Zero(static_cast<Eigen::Index>(actor.size()));
        actor.backward(ta, d_raw, *grad);
    }
    return -q.mean();
}

// ---------------------------------------------------------------------------

SacAgent::SacAgent(int state_dim, int action_dim, SacConfig cfg, RngStream rng)
    : actor(network_widths(state_dim, 2 * action_dim, cfg.hidden, cfg.hidden_layers)),
      q1(network_widths(state_dim + action_dim, 1, cfg.hidden, cfg.hidden_layers)),
      q2(q1.widths()),
      q1_target(q1.widths()),
      q2_target(q1.widths()),
      log_beta(std::log(cfg.init_temperature)),
      cfg_(std::move(cfg)),
      action_dim_(action_dim),
      target_entropy_(cfg_.target_entropy.value_or(-static_cast<double>(action_dim))),
      rng_(rng) {
    RngStream init = rng_.split("init");
    actor.init(init);
    q1.init(init);
    q2.init(init);
    nn::polyak(q1_target, q1, 1.0);
    nn::polyak(q2_target, q2, 1.0);
    actor_opt_ = nn::Adam(actor.size(), cfg_.lr_actor);
    q1_opt_ = nn::Adam(q1.size(), cfg_.lr_critic);
    q2_opt_ = nn::Adam(q2.size(), cfg_.lr_critic);
    beta_opt_ = nn::Adam(1, cfg_.lr_temperature);
}

double SacAgent::beta() const { return std::exp(log_beta); }

Mat SacAgent::normal(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng_.normal();
    return m;
}

Vec SacAgent::act(const Vec& state, bool deterministic) {
    const Mat raw = actor.forward(state);
    if (deterministic) return raw.topRows(action_dim_).col(0).array().tanh().matrix();
    const Mat noise = normal(action_dim_, 1);
    return nn::squashed_forward(raw.topRows(action_dim_), raw.bottomRows(action_dim_), noise).action.col(0);
}

UpdateStats SacAgent::update(const nn::Batch& batch) {
    UpdateStats st;
    const double beta = std::exp(log_beta);
    const Eigen::Index b = batch.state.cols();

    const Vec y = sac_critic_target(actor, q1_target, q2_target, batch, normal(action_dim_, b), beta, cfg_.gamma);
    Vec g1, g2;
    const double l1 = critic_loss(q1, batch.state, batch.action, y, &g1);
    const double l2 = critic_loss(q2, batch.state, batch.action, y, &g2);
    q1_opt_.step(q1.params(), g1);
    q2_opt_.step(q2.params(), g2);
    st.critic_loss = 0.5 * (l1 + l2);

    const ActorLoss al = sac_actor_loss(actor, q1, q2, batch.state, normal(action_dim_, b), beta);
    actor_opt_.step(actor.params(), al.grad);
    st.actor_loss = al.loss;

    double gb = 0.0;
    temperature_loss(log_beta, al.log_prob, target_entropy_, &gb);
    Vec lb = Vec::Constant(1, log_beta);
    beta_opt_.step(lb, Vec::Constant(1, gb));
    log_beta = lb(0);
    st.beta = std::exp(log_beta);

    nn::polyak(q1_target, q1, cfg_.tau);
    nn::polyak(q2_target, q2, cfg_.tau);
    return st;
}

void SacAgent::save(std::ostream& out) const { nn::save_checkpoint(out, {&actor, &q1, &q2, &q1_target, &q2_target}); }

DdpgAgent::DdpgAgent(int state_dim, int action_dim, DdpgConfig cfg, RngStream rng)
    : actor(network_widths(state_dim, action_dim, cfg.hidden, cfg.hidden_layers)),
      critic(network_widths(state_dim + action_dim, 1, cfg.hidden, cfg.hidden_layers)),
      actor_target(actor.widths()),
      critic_target(critic.widths()),
      cfg_(std::move(cfg)),
      action_dim_(action_dim),
      rng_(rng) {
    RngStream init = rng_.split("init");
    actor.init(init);
    critic.init(init);
    nn::polyak(actor_target, actor, 1.0);
    nn::polyak(critic_target, critic, 1.0);
    actor_opt_ = nn::Adam(actor.size(), cfg_.lr_actor);
    critic_opt_ = nn::Adam(critic.size(), cfg_.lr_critic);
}

Vec DdpgAgent::act(const Vec& state, double sigma) {
    Vec a = actor.forward(state).col(0).array().tanh().matrix();
    if (sigma > 0.0) {
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) += sigma * rng_.normal();
    }
    return a.cwiseMax(-1.0).cwiseMin(1.0);
}

UpdateStats DdpgAgent::update(const nn::Batch& batch) {
    UpdateStats st;
    const Mat next_a = actor_target.forward(batch.next_state).array().tanh().matrix();
    const Vec q_next = critic_target.forward(join(batch.next_state, next_a)).row(0).transpose();
    const Vec y = batch.reward.array() + cfg_.gamma * (1.0 - batch.done.array()) * q_next.array();
    Vec gc;
    st.critic_loss = critic_loss(critic, batch.state, batch.action, y, &gc);
    critic_opt_.step(critic.params(), gc);

    Vec ga;
    st.actor_loss = ddpg_actor_loss(actor, critic, batch.state, &ga);
    actor_opt_.step(actor.params(), ga);

    nn::polyak(actor_target, actor, cfg_.tau);
    nn::polyak(critic_target, critic, cfg_.tau);
    return st;
}

void DdpgAgent::save(std::ostream& out) const {
    nn::save_checkpoint(out, {&actor, &critic, &actor_target, &critic_target});
}

// ---------------------------------------------------------------------------

void write_curve_header(std::ostream& out) { out << "episode,mean_reward,beta,critic_loss,actor_loss\n"; }

void write_curve_row(std::ostream& out, const CurveRow& row) {
    out << row.episode << ',' << row.mean_reward << ',' << row.beta << ',' << row.critic_loss << ','
        << row.actor_loss << '\n';
}

namespace {

Vec uniform_action(int dim, RngStream& rng) {
    Vec a(dim);
    for (int i = 0; i < dim; ++i) a(i) = rng.uniform(-1.0, 1.0);
    return a;
}

// Shared loop; act(state, global_step) picks the action, update(batch) trains.
template <class Act, class Update, class Beta>
TrainOutput run_loop(Environment& env, int episodes, int action_dim, std::size_t capacity, int warmup, int batch,
                     int updates_per_step, RngStream rng, bool keep_trajectory, Act act, Update update,
                     Beta beta) {
    TrainOutput out;
    nn::ReplayBuffer buffer(capacity);
    RngStream explore = rng.split("explore");
    RngStream sampler = rng.split("replay");
    long global = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        Vec state = env.reset();
        double reward_sum = 0.0;
        double closs = 0.0;
        double aloss = 0.0;
        int n_updates = 0;
        bool done = false;
        int steps = 0;
        while (!done) {
            const Vec action = global < warmup ? uniform_action(action_dim, explore) : act(state, global);
            StepResult sr = env.step(action);
            reward_sum += sr.reward;
            ++steps;
            done = sr.done;
            if (keep_trajectory) out.trajectory.push_back(env.last_row());
            buffer.push({state, action, sr.reward, sr.state, 0.0});
            state = std::move(sr.state);
            ++global;
            if (global >= warmup && buffer.size() >= static_cast<std::size_t>(batch)) {
                for (int u = 0; u < updates_per_step; ++u) {
                    const UpdateStats st = update(buffer.sample(static_cast<std::size_t>(batch), sampler));
                    closs += st.critic_loss;
                    aloss += st.actor_loss;
                    ++n_updates;
                }
            }
        }
        CurveRow row;
        row.episode = ep;
        row.mean_reward = reward_sum / static_cast<double>(steps);
        row.beta = beta();
        row.critic_loss = n_updates > 0 ? closs / n_updates : 0.0;
        row.actor_loss = n_updates > 0 ? aloss / n_updates : 0.0;
        out.curve.push_back(row);
    }
    return out;
}

}  // namespace

TrainOutput train_sac(Environment& env, SacAgent& agent, int episodes, RngStream rng, bool keep_trajectory) {
    const auto& c = agent.config();
    return run_loop(
        env, episodes, agent.action_dim(), c.buffer, c.warmup, c.batch, c.updates_per_step, rng, keep_trajectory,
        [&](const Vec& s, long) { return agent.act(s, false); },
        [&](const nn::Batch& b) { return agent.update(b); }, [&] { return agent.beta(); });
}

TrainOutput train_ddpg(Environment& env, DdpgAgent& agent, int episodes, RngStream rng, bool keep_trajectory) {
    const auto& c = agent.config();
    const double total = static_cast<double>(episodes) * env.horizon();
    return run_loop(
        env, episodes, agent.action_dim(), c.buffer, c.warmup, c.batch, c.updates_per_step, rng, keep_trajectory,
        [&](const Vec& s, long step) {
            const double sigma = c.noise_sigma * std::max(0.0, 1.0 - static_cast<double>(step) / total);
            return agent.act(s, sigma);
        },
        [&](const nn::Batch& b) { return agent.update(b); }, [] { return 0.0; });
}

PolicyEval evaluate_policy(Environment& env, const Policy& policy, int episodes) {
    PolicyEval out;
    out.best_reward = -1.0;
    double sum = 0.0;
    long count = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        Vec state = env.reset();
        bool done = false;
        while (!done) {
            StepResult sr = env.step(policy(state));
            out.trajectory.push_back(env.last_row());
            sum += sr.reward;
            ++count;
            if (sr.reward > out.best_reward) {
                out.best_reward = sr.reward;
                out.best = sr.decision;
            }
            done = sr.done;
            state = std::move(sr.state);
        }
    }
    out.mean_reward = count > 0 ? sum / static_cast<double>(count) : 0.0;
    if (out.best_reward < 0.0) out.best_reward = 0.0;
    return out;
}

}  // namespace wcsee::rl
