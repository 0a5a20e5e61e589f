// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "wcsee/error.hpp"

namespace wcsee {

namespace fs = std::filesystem;

int worker_count(std::size_t jobs) {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("WCSEE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, static_cast<int>(std::max<std::size_t>(jobs, 1))));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

Environment make_env(const ExperimentSpec& spec, const RngStream& base, const char* tag) {
    // With a fixed draw, training and evaluation share the one channel draw.
    const RngStream stream = spec.fixed_draw ? base.split("env") : base.split(tag);
    return Environment(spec.scenario, spec.horizon, stream, spec.fixed_draw);
}

}  // namespace

DrlRun run_sac(const ExperimentSpec& spec, std::uint64_t seed) {
    const RngStream base(seed);
    Environment env = make_env(spec, base, "env");
    rl::SacAgent agent(state_dim(spec.scenario), action_dim(spec.scenario), spec.sac, base.split("agent"));
    DrlRun out;
    auto tr = rl::train_sac(env, agent, spec.episodes, base.split("loop"), spec.write_trajectory);
    out.curve = std::move(tr.curve);
    out.trajectory = std::move(tr.trajectory);
    Environment eval_env = make_env(spec, base, "eval");
    out.eval = rl::evaluate_policy(eval_env, [&](const Vec& s) { return agent.act(s, true); }, spec.eval_episodes);
    return out;
}

DrlRun run_ddpg(const ExperimentSpec& spec, std::uint64_t seed) {
    const RngStream base(seed);
    Environment env = make_env(spec, base, "env");
    rl::DdpgAgent agent(state_dim(spec.scenario), action_dim(spec.scenario), spec.ddpg, base.split("agent"));
    DrlRun out;
    auto tr = rl::train_ddpg(env, agent, spec.episodes, base.split("loop"), spec.write_trajectory);
    out.curve = std::move(tr.curve);
    out.trajectory = std::move(tr.trajectory);
    Environment eval_env = make_env(spec, base, "eval");
    out.eval = rl::evaluate_policy(eval_env, [&](const Vec& s) { return agent.act(s, 0.0); }, spec.eval_episodes);
    return out;
}

std::vector<ScaRealization> run_sca(const ExperimentSpec& spec, std::uint64_t seed, int realizations) {
    const RngStream base(seed);
    Environment env = make_env(spec, base, "eval");
    const ScenarioConfig& cfg = spec.scenario;
    std::vector<ScaRealization> out;
    for (int r = 0; r < realizations; ++r) {
        env.reset();
        ScaRealization row;
        row.realization = r;
        sca::BcdInit init;
        init.power = Vec::Constant(cfg.n_ihr, cfg.p_max / cfg.n_ihr);
        row.bcd = sca::bcd_outer(env.channels(), cfg, init, spec.sca);
        row.decision.power = row.bcd.power;
        row.decision.q = row.bcd.q;
        row.decision.theta = row.bcd.theta;
        for (Eigen::Index m = 0; m < row.decision.theta.size(); ++m) {
            const double t = wrap_phase(row.decision.theta(m));
            row.decision.theta(m) = cfg.discrete_phases ? quantize_phase(t, cfg.codebook) : t;
        }
        row.eval = env.evaluate(row.decision);
        out.push_back(std::move(row));
    }
    return out;
}

double final_reward(const std::vector<rl::CurveRow>& curve) {
    if (curve.empty()) return 0.0;
    const std::size_t tail = std::max<std::size_t>(1, curve.size() / 10);
    double s = 0.0;
    for (std::size_t i = curve.size() - tail; i < curve.size(); ++i) s += curve[i].mean_reward;
    return s / static_cast<double>(tail);
}

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd out;
    if (v.empty()) return out;
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size()));
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

class Writer {
  public:
    Writer(const ExperimentSpec& spec, std::vector<std::string>& files) : root_(spec.out_dir), files_(files) {}

    std::ofstream open(const std::string& name) {
        std::ofstream out(root_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + (root_ / name).string());
        out << std::setprecision(12);
        files_.push_back(name);
        return out;
    }

  private:
    fs::path root_;
    std::vector<std::string>& files_;
};

std::string fmt_value(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

void write_drl_seed(Writer& w, const std::string& prefix, const DrlRun& run, bool trajectory) {
    {
        auto out = w.open(prefix + "_curve.csv");
        rl::write_curve_header(out);
        for (const auto& row : run.curve) rl::write_curve_row(out, row);
    }
    if (trajectory) {
        auto out = w.open(prefix + "_trajectory.csv");
        write_trajectory_header(out);
        for (const auto& row : run.trajectory) write_trajectory_row(out, row);
    }
    auto out = w.open(prefix + "_eval.csv");
    write_trajectory_header(out);
    for (const auto& row : run.eval.trajectory) write_trajectory_row(out, row);
}

void write_sca_results(std::ostream& out, const std::vector<ScaRealization>& rows) {
    out << "realization,wcsee,secrecy_rate,total_power,eh_ok,passes,eta_last,q_x,q_y\n";
    for (const auto& r : rows) {
        out << r.realization << ',' << r.eval.reward << ',' << r.eval.rates.min_rate << ',' << r.decision.power.sum()
            << ',' << (r.eval.eh_ok ? 1 : 0) << ',' << r.bcd.passes << ','
            << (r.bcd.eta.empty() ? 0.0 : r.bcd.eta.back()) << ',' << r.decision.q.x << ',' << r.decision.q.y
            << '\n';
    }
}

struct ScaStats {
    double wcsee = 0.0;
    double rate = 0.0;
    double power = 0.0;
    double eh_ok = 0.0;
};

ScaStats sca_stats(const std::vector<ScaRealization>& rows) {
    ScaStats s;
    if (rows.empty()) return s;
    for (const auto& r : rows) {
        s.wcsee += r.eval.reward;
        s.rate += r.eval.rates.min_rate;
        s.power += r.decision.power.sum();
        s.eh_ok += r.eval.eh_ok ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(rows.size());
    s.wcsee /= n;
    s.rate /= n;
    s.power /= n;
    s.eh_ok /= n;
    return s;
}

void write_metric(std::ostream& out, const std::string& lead, const std::string& metric, const std::vector<double>& v) {
    const MeanStd ms = mean_std(v);
    out << lead << metric << ',' << ms.mean << ',' << ms.std << ',' << v.size() << '\n';
}

void write_schema(Writer& w) {
    auto out = w.open("schema.txt");
    out << "# Columns of every CSV written by wcsee-lab. Units: reward and wcsee in bits/Joule/Hz,\n"
           "# rates in bits/s/Hz, powers in W, positions in m.\n"
           "<method>_seed<S>_curve.csv: episode,mean_reward,beta,critic_loss,actor_loss\n"
           "  one row per training episode; beta is 0 for ddpg; losses are means over the episode's updates\n"
           "<method>_seed<S>_trajectory.csv: episode,step,reward,secrecy_rate,total_power,eh_slack,q_x,q_y\n"
           "  one row per training step; eh_slack = sum of UEHR harvest lower bounds minus the RF requirement\n"
           "<method>_seed<S>_eval.csv: same columns as the trajectory, deterministic policy on evaluation draws\n"
           "<method>_aggregate.csv: episode,mean_reward_mean,mean_reward_std,critic_loss_mean,actor_loss_mean,seeds\n"
           "<method>_summary.csv: seed,final_reward,eval_mean_reward,eval_best_reward\n"
           "  final_reward averages the last tenth of the training episodes\n"
           "sca_seed<S>_r<R>_trace.csv: outer_iter,block,stage,inner_iter,objective,lambda,residual\n"
           "  block is power, ris, uav or outer; objective is the block's own surrogate value\n"
           "sca_seed<S>_results.csv: realization,wcsee,secrecy_rate,total_power,eh_ok,passes,eta_last,q_x,q_y\n"
           "sca_aggregate.csv: metric,mean,std,count over seeds of the per-seed means\n"
           "eval_seed<S>.csv: method,eval_mean_reward,eval_best_reward,final_train_reward\n"
           "eval_aggregate.csv: method,metric,mean,std,count\n"
           "sweep_<axis>_<value>_seed<S>.csv: curve columns (sac, ddpg) or results columns (sca)\n"
           "sweep_aggregate.csv: axis,value,method,metric,mean,std,count\n";
}

void write_drl_aggregate(Writer& w, const std::string& method, const std::vector<std::uint64_t>& seeds,
                         const std::vector<DrlRun>& runs) {
    {
        auto out = w.open(method + "_aggregate.csv");
        out << "episode,mean_reward_mean,mean_reward_std,critic_loss_mean,actor_loss_mean,seeds\n";
        const std::size_t episodes = runs.empty() ? 0 : runs.front().curve.size();
        for (std::size_t e = 0; e < episodes; ++e) {
            std::vector<double> r, c, a;
            for (const auto& run : runs) {
                r.push_back(run.curve[e].mean_reward);
                c.push_back(run.curve[e].critic_loss);
                a.push_back(run.curve[e].actor_loss);
            }
            const MeanStd mr = mean_std(r);
            out << e << ',' << mr.mean << ',' << mr.std << ',' << mean_std(c).mean << ',' << mean_std(a).mean << ','
                << runs.size() << '\n';
        }
    }
    auto out = w.open(method + "_summary.csv");
    out << "seed,final_reward,eval_mean_reward,eval_best_reward\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out << seeds[i] << ',' << final_reward(runs[i].curve) << ',' << runs[i].eval.mean_reward << ','
            << runs[i].eval.best_reward << '\n';
    }
}

void run_drl_mode(const ExperimentSpec& spec, Writer& w, std::ostream& log, bool sac) {
    const std::string method = sac ? "sac" : "ddpg";
    std::vector<DrlRun> runs(spec.seeds.size());
    parallel_for(spec.seeds.size(), [&](std::size_t i) {
        runs[i] = sac ? run_sac(spec, spec.seeds[i]) : run_ddpg(spec, spec.seeds[i]);
    });
    for (std::size_t i = 0; i < runs.size(); ++i) {
        write_drl_seed(w, method + "_" + seed_tag(spec.seeds[i]), runs[i], spec.write_trajectory);
        log << method << " seed " << spec.seeds[i] << ": final reward " << final_reward(runs[i].curve)
            << ", eval mean " << runs[i].eval.mean_reward << '\n';
    }
    write_drl_aggregate(w, method, spec.seeds, runs);
}

void run_sca_mode(const ExperimentSpec& spec, Writer& w, std::ostream& log) {
    std::vector<std::vector<ScaRealization>> runs(spec.seeds.size());
    parallel_for(spec.seeds.size(), [&](std::size_t i) { runs[i] = run_sca(spec, spec.seeds[i], spec.realizations); });
    std::vector<double> wcsee, rate, power, eh;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string tag = "sca_" + seed_tag(spec.seeds[i]);
        for (const auto& r : runs[i]) {
            auto out = w.open(tag + "_r" + std::to_string(r.realization) + "_trace.csv");
            sca::write_trace_csv(out, r.bcd.trace);
        }
        auto out = w.open(tag + "_results.csv");
        write_sca_results(out, runs[i]);
        const ScaStats s = sca_stats(runs[i]);
        wcsee.push_back(s.wcsee);
        rate.push_back(s.rate);
        power.push_back(s.power);
        eh.push_back(s.eh_ok);
        log << "sca seed " << spec.seeds[i] << ": mean wcsee " << s.wcsee << " over " << runs[i].size()
            << " draws\n";
    }
    auto out = w.open("sca_aggregate.csv");
    out << "metric,mean,std,count\n";
    write_metric(out, "", "wcsee", wcsee);
    write_metric(out, "", "secrecy_rate", rate);
    write_metric(out, "", "total_power", power);
    write_metric(out, "", "eh_ok_fraction", eh);
}

void run_eval_mode(const ExperimentSpec& spec, Writer& w, std::ostream& log) {
    struct SeedEval {
        DrlRun sac, ddpg;
        rl::PolicyEval random;
        std::vector<ScaRealization> sca;
    };
    std::vector<SeedEval> runs(spec.seeds.size());
    parallel_for(spec.seeds.size(), [&](std::size_t i) {
        const std::uint64_t seed = spec.seeds[i];
        runs[i].sac = run_sac(spec, seed);
        runs[i].ddpg = run_ddpg(spec, seed);
        runs[i].sca = run_sca(spec, seed, spec.eval_episodes);
        Environment env = make_env(spec, RngStream(seed), "eval");
        RngStream pick = RngStream(seed).split("random-policy");
        const int dim = action_dim(spec.scenario);
        runs[i].random = rl::evaluate_policy(
            env,
            [&](const Vec&) {
                Vec a(dim);
                for (int k = 0; k < dim; ++k) a(k) = pick.uniform(-1.0, 1.0);
                return a;
            },
            spec.eval_episodes);
    });
    std::vector<std::string> methods{"sac", "ddpg", "sca", "random"};
    std::vector<std::vector<double>> mean_of(4), best_of(4);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        double sca_best = 0.0;
        for (const auto& x : r.sca) sca_best = std::max(sca_best, x.eval.reward);
        const double sca_mean = sca_stats(r.sca).wcsee;
        const double means[4] = {r.sac.eval.mean_reward, r.ddpg.eval.mean_reward, sca_mean, r.random.mean_reward};
        const double bests[4] = {r.sac.eval.best_reward, r.ddpg.eval.best_reward, sca_best, r.random.best_reward};
        const double finals[4] = {final_reward(r.sac.curve), final_reward(r.ddpg.curve), sca_mean, 0.0};
        auto out = w.open("eval_" + seed_tag(spec.seeds[i]) + ".csv");
        out << "method,eval_mean_reward,eval_best_reward,final_train_reward\n";
        for (int m = 0; m < 4; ++m) {
            out << methods[m] << ',' << means[m] << ',' << bests[m] << ',' << finals[m] << '\n';
            mean_of[m].push_back(means[m]);
            best_of[m].push_back(bests[m]);
        }
        log << "eval seed " << spec.seeds[i] << ": sac " << means[0] << ", ddpg " << means[1] << ", sca " << means[2]
            << ", random " << means[3] << '\n';
    }
    auto out = w.open("eval_aggregate.csv");
    out << "method,metric,mean,std,count\n";
    for (int m = 0; m < 4; ++m) {
        write_metric(out, methods[m] + ",", "eval_mean_reward", mean_of[m]);
        write_metric(out, methods[m] + ",", "eval_best_reward", best_of[m]);
    }
}

void run_sweep_mode(const ExperimentSpec& spec, Writer& w, std::ostream& log) {
    const std::size_t nv = spec.sweep_values.size();
    const std::size_t ns = spec.seeds.size();
    struct Point {
        DrlRun drl;
        std::vector<ScaRealization> sca;
    };
    std::vector<Point> runs(nv * ns);
    parallel_for(nv * ns, [&](std::size_t i) {
        const ExperimentSpec s = with_sweep_value(spec, spec.sweep_values[i / ns]);
        validate(s);
        const std::uint64_t seed = spec.seeds[i % ns];
        switch (spec.sweep_method) {
            case Method::Sac: runs[i].drl = run_sac(s, seed); break;
            case Method::Ddpg: runs[i].drl = run_ddpg(s, seed); break;
            case Method::Sca: runs[i].sca = run_sca(s, seed, s.realizations); break;
        }
    });
    const std::string axis = to_string(spec.axis);
    const std::string method = to_string(spec.sweep_method);
    auto agg = w.open("sweep_aggregate.csv");
    agg << "axis,value,method,metric,mean,std,count\n";
    for (std::size_t v = 0; v < nv; ++v) {
        const std::string value = fmt_value(spec.sweep_values[v]);
        std::vector<double> m1, m2, m3;
        for (std::size_t k = 0; k < ns; ++k) {
            const Point& p = runs[v * ns + k];
            auto out = w.open("sweep_" + axis + "_" + value + "_" + seed_tag(spec.seeds[k]) + ".csv");
            if (spec.sweep_method == Method::Sca) {
                write_sca_results(out, p.sca);
                const ScaStats s = sca_stats(p.sca);
                m1.push_back(s.wcsee);
                m2.push_back(s.rate);
                m3.push_back(s.power);
            } else {
                rl::write_curve_header(out);
                for (const auto& row : p.drl.curve) rl::write_curve_row(out, row);
                m1.push_back(final_reward(p.drl.curve));
                m2.push_back(p.drl.eval.mean_reward);
                m3.push_back(p.drl.eval.best_reward);
            }
        }
        const std::string lead = axis + "," + value + "," + method + ",";
        if (spec.sweep_method == Method::Sca) {
            write_metric(agg, lead, "wcsee", m1);
            write_metric(agg, lead, "secrecy_rate", m2);
            write_metric(agg, lead, "total_power", m3);
        } else {
            write_metric(agg, lead, "final_reward", m1);
            write_metric(agg, lead, "eval_mean_reward", m2);
            write_metric(agg, lead, "eval_best_reward", m3);
        }
        log << "sweep " << axis << "=" << value << ": " << method << " mean " << mean_std(m1).mean << '\n';
    }
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentSpec& spec, std::ostream& log) {
    validate(spec);
    fs::create_directories(spec.out_dir);
    std::vector<std::string> files;
    Writer w(spec, files);
    write_schema(w);
    switch (spec.mode) {
        case Mode::TrainSac: run_drl_mode(spec, w, log, true); break;
        case Mode::TrainDdpg: run_drl_mode(spec, w, log, false); break;
        case Mode::ScaBenchmark: run_sca_mode(spec, w, log); break;
        case Mode::Eval: run_eval_mode(spec, w, log); break;
        case Mode::Sweep: run_sweep_mode(spec, w, log); break;
    }
    return files;
}

}  // namespace wcsee
