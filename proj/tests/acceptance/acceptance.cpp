// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"
#include "wcsee/config.hpp"
#include "wcsee/experiments.hpp"

using namespace wcsee;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome zf_orthogonality() {
    RngStream rng(101);
    double worst = 0.0;
    int drawn = 0;
    while (drawn < 100) {
        const CMat hc = test::random_cmat(6, 4, rng);
        Eigen::JacobiSVD<CMat> svd(hc);
        const Vec sv = svd.singularValues();
        if (sv(0) / sv(sv.size() - 1) > 1e3) continue;
        ++drawn;
        const ZfPrecoder zf = zf_precoder(hc);
        const CMat cross = hc.adjoint() * zf.directions;
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                if (i != k) off = std::max(off, std::abs(cross(i, k)));
        worst = std::max(worst, off / cross.diagonal().cwiseAbs().minCoeff());
    }
    return {worst <= 1e-10, fmt("worst cross/diag %.2e over 100 draws", worst)};
}

Outcome worst_case_dominance() {
    RngStream rng(102);
    long sinr_bad = 0, eh_bad = 0, checks = 0;
    for (int t = 0; t < 100; ++t) {
        auto cfg = test::desk_scenario(4, 2, 2, 6);
        cfg.nu = rng.uniform(0.005, 0.2);
        const ChannelRealization ch = test::draw(cfg, 1000 + t);
        const ZfPrecoder zf = zf_precoder(ch.cascaded_ihr);
        Vec p(2);
        p << rng.uniform(0.0, cfg.p_max), rng.uniform(0.0, cfg.p_max);
        for (const CVec& u_hat : ch.estimated_uehr) {
            double bound[2];
            for (int k = 0; k < 2; ++k) bound[k] = worst_case_eve_sinr(u_hat, zf, p, cfg.sigma2, cfg.nu, k);
            const double eh_lb = eh_lower_bound(u_hat, zf, p, cfg.nu);
            for (int s = 0; s < 5000; ++s) {
                const CVec u = u_hat + test::ball_sample(cfg.n_tx, cfg.nu, rng);
                for (int k = 0; k < 2; ++k)
                    if (eve_sinr(u, zf, p, cfg.sigma2, k) > bound[k] * (1 + 1e-12)) ++sinr_bad;
                if (eh_received_power(u, zf, p) < eh_lb * (1 - 1e-12)) ++eh_bad;
                ++checks;
            }
        }
    }
    std::ostringstream d;
    d << checks << " samples, " << sinr_bad << " SINR and " << eh_bad << " EH violations";
    return {sinr_bad == 0 && eh_bad == 0, d.str()};
}

Outcome surrogate_suite() {
    bool ok = true;
    double worst = 0.0;
    int violations = 0;
    std::size_t ops = 0;
    for (const auto& c : test::surrogate_suite(103, 1000)) {
        ok = ok && c.tangency <= 1e-9 && c.violations == 0 && c.samples == 1000;
        worst = std::max(worst, c.tangency);
        violations += c.violations;
        ++ops;
    }
    std::ostringstream d;
    d << ops << " operations, worst tangency gap " << fmt("%.1e", worst) << ", " << violations << " violations";
    return {ok, d.str()};
}

Outcome eh_round_trip() {
    const EhModel m = EhModel::defaults();
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double x = m.saturation() * i / 1001.0;
        worst = std::max(worst, test::rel_err(eh_dc(eh_inverse(x, m), m), x));
    }
    return {worst <= 1e-9, fmt("worst relative error %.2e over 1000 points", worst)};
}

Outcome gradient_fidelity() {
    bool ok = true;
    std::ostringstream d;
    for (const auto& g : test::loss_gradient_suite(104, 10)) {
        ok = ok && g.fraction() >= 0.999;
        d << g.name << " " << g.passed << "/" << g.total << " ";
    }
    d << "within 1e-4";
    return {ok, d.str()};
}

Outcome dinkelbach_oracle() {
    int bad = 0, runs = 0;
    double worst = 1.0;
    for (double e_h : {0.0, 0.005, 0.01}) {
        auto cfg = test::tiny_scenario(2);
        cfg.e_h = e_h;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto r = test::dinkelbach_oracle(cfg, seed);
            ++runs;
            if (r.grid < 0.0) {
                if (r.method >= 0.0) ++bad;
                continue;
            }
            worst = std::min(worst, r.ratio());
            if (r.method < 0.99 * r.grid) ++bad;
        }
    }
    std::ostringstream d;
    d << runs << " instances, worst ratio to grid " << fmt("%.4f", worst);
    return {bad == 0, d.str()};
}

Outcome ris_uav_oracles() {
    double worst_ris = 1.0, worst_uav = 1.0;
    auto ris_cfg = test::tiny_scenario(1);
    ris_cfg.e_h = 0.0;
    auto uav_cfg = test::tiny_scenario(2);
    uav_cfg.e_h = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        worst_ris = std::min(worst_ris, test::ris_oracle(ris_cfg, seed).ratio());
        worst_uav = std::min(worst_uav, test::uav_oracle(uav_cfg, seed).ratio());
    }
    std::ostringstream d;
    d << "worst ratio ris " << fmt("%.4f", worst_ris) << ", uav " << fmt("%.4f", worst_uav) << " over 5 draws";
    return {worst_ris >= 0.98 && worst_uav >= 0.98, d.str()};
}

Outcome sca_monotonicity() {
    sca::ScaOptions o;
    o.eps = 1e-5;
    o.max_inner = 100;
    test::MonotoneReport total;
    for (int t = 0; t < 20; ++t) {
        auto cfg = test::desk_scenario(4, 2, 2, 6);
        cfg.discrete_phases = false;
        cfg.nu = (t % 3) * 0.02;
        cfg.e_h = (t % 2) * 0.005;
        const auto r = sca::bcd_outer(test::draw(cfg, 2000 + t), cfg, {}, o);
        const auto rep = test::check_monotone(r.trace, 1e-6);
        total.segments += rep.segments;
        total.steps += rep.steps;
        total.violations += rep.violations;
        total.lambda_violations += rep.lambda_violations;
        total.worst_drop = std::max(total.worst_drop, rep.worst_drop);
    }
    std::ostringstream d;
    d << total.segments << " block runs, " << total.steps << " steps, " << total.violations << " objective and "
      << total.lambda_violations << " lambda violations, worst drop " << fmt("%.1e", total.worst_drop);
    return {total.violations == 0 && total.lambda_violations == 0 && total.steps > 0, d.str()};
}

ExperimentSpec tiny_learning_spec() {
    ExperimentSpec spec;
    auto& c = spec.scenario;
    c = test::desk_scenario(2, 1, 1, 2);
    c.codebook = PhaseCodebook(4);
    spec.fixed_draw = true;
    spec.episodes = 50;
    spec.horizon = 200;
    spec.sac.hidden = 64;
    spec.sac.batch = 64;
    spec.sac.warmup = 500;
    spec.write_trajectory = false;
    return spec;
}

double quantized_grid_optimum(const ExperimentSpec& spec, std::uint64_t seed) {
    const auto& c = spec.scenario;
    Environment env(c, spec.horizon, RngStream(seed).split("env"), true);
    env.reset();
    const int levels = static_cast<int>(c.codebook.size());
    double best = 0.0;
    ControlDecision d;
    d.power = Vec::Constant(1, c.p_max);
    d.theta = Vec(2);
    for (int a = 0; a < levels; ++a)
        for (int b = 0; b < levels; ++b)
            for (int i = 0; i <= 20; ++i)
                for (int j = 0; j <= 20; ++j) {
                    d.theta << kTwoPi * a / levels, kTwoPi * b / levels;
                    d.q = {c.region.x_min + (c.region.x_max - c.region.x_min) * i / 20.0,
                           c.region.y_min + (c.region.y_max - c.region.y_min) * j / 20.0};
                    best = std::max(best, env.evaluate(d).reward);
                }
    return best;
}

Outcome learning_oracle() {
    const ExperimentSpec spec = tiny_learning_spec();
    std::vector<double> ratios(3);
    parallel_for(3, [&](std::size_t i) {
        const std::uint64_t seed = i + 1;
        const double grid = quantized_grid_optimum(spec, seed);
        const DrlRun run = run_sac(spec, seed);
        ratios[i] = grid > 0.0 ? run.eval.best_reward / grid : 0.0;
    });
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream d;
    d << "ratios " << fmt("%.3f", ratios[0]) << " " << fmt("%.3f", ratios[1]) << " " << fmt("%.3f", ratios[2])
      << ", median " << fmt("%.3f", sorted[1]);
    return {sorted[1] >= 0.8, d.str()};
}

Outcome desk_reproduction() {
    ExperimentSpec spec = load_config(WCSEE_DESK_CONFIG);
    spec.write_trajectory = false;
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const std::vector<double> nus{0.01, 0.05, 0.1};

    // Jobs 0-2 SAC, 3-5 DDPG, 6-14 SAC over the nu grid.
    std::vector<double> sac(3), ddpg(3), swept(9);
    parallel_for(3 + 9 + 3, [&](std::size_t i) {
        if (i < 3) {
            sac[i] = final_reward(run_sac(spec, seeds[i]).curve);
        } else if (i < 6) {
            ddpg[i - 3] = final_reward(run_ddpg(spec, seeds[i - 3]).curve);
        } else {
            const std::size_t j = i - 6;
            ExperimentSpec s = spec;
            s.scenario.nu = nus[j / 3];
            swept[j] = final_reward(run_sac(s, seeds[j % 3]).curve);
        }
    });
    int wins = 0;
    for (int i = 0; i < 3; ++i) wins += sac[i] >= ddpg[i] ? 1 : 0;
    std::vector<MeanStd> at(3);
    for (int v = 0; v < 3; ++v) at[v] = mean_std({swept[3 * v], swept[3 * v + 1], swept[3 * v + 2]});
    bool monotone = true;
    for (int v = 0; v + 1 < 3; ++v)
        monotone = monotone && at[v + 1].mean <= at[v].mean + std::max(at[v].std, at[v + 1].std);

    std::ostringstream d;
    d << "(a) SAC >= DDPG in " << wins << "/3 seeds [";
    for (int i = 0; i < 3; ++i) d << fmt("%.3f", sac[i]) << " vs " << fmt("%.3f", ddpg[i]) << (i < 2 ? ", " : "");
    d << "]; (b) SAC reward over nu:";
    for (int v = 0; v < 3; ++v) d << " " << nus[v] << "->" << fmt("%.3f", at[v].mean) << "+-" << fmt("%.3f", at[v].std);
    d << (monotone ? " non-increasing" : " increases");
    return {wins >= 2 && monotone, d.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "wcsee-acceptance-determinism";
    fs::remove_all(root);
    ExperimentSpec base = load_config(WCSEE_TINY_CONFIG);
    base.seeds = {1, 2};
    struct Case {
        std::string name;
        std::function<void(ExperimentSpec&)> set;
    };
    const std::vector<Case> cases{
        {"train-sac", [](ExperimentSpec& s) { s.mode = Mode::TrainSac; }},
        {"train-ddpg", [](ExperimentSpec& s) { s.mode = Mode::TrainDdpg; }},
        {"sca-benchmark", [](ExperimentSpec& s) { s.mode = Mode::ScaBenchmark; }},
        {"eval", [](ExperimentSpec& s) { s.mode = Mode::Eval; }},
        {"sweep-sac",
         [](ExperimentSpec& s) {
             s.mode = Mode::Sweep;
             s.axis = SweepAxis::PMax;
             s.sweep_values = {5.0, 10.0};
         }},
        {"sweep-sca",
         [](ExperimentSpec& s) {
             s.mode = Mode::Sweep;
             s.axis = SweepAxis::Nu;
             s.sweep_method = Method::Sca;
             s.sweep_values = {0.0, 0.05};
         }},
    };
    int files = 0;
    std::vector<std::string> differing;
    for (const auto& c : cases) {
        std::vector<std::string> written[2];
        for (int run = 0; run < 2; ++run) {
            ExperimentSpec s = base;
            c.set(s);
            s.out_dir = (root / (c.name + "_" + std::to_string(run))).string();
            std::ostringstream log;
            written[run] = run_experiment(s, log);
        }
        if (written[0] != written[1]) differing.push_back(c.name + " file list");
        for (const auto& f : written[0]) {
            ++files;
            if (slurp(root / (c.name + "_0") / f) != slurp(root / (c.name + "_1") / f)) differing.push_back(f);
        }
    }
    fs::remove_all(root);
    std::ostringstream d;
    d << cases.size() << " modes, " << files << " files compared, " << differing.size() << " differ";
    if (!differing.empty()) d << " (first: " << differing.front() << ")";
    return {differing.empty() && files > 0, d.str()};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "zero-forcing orthogonality", 1, zf_orthogonality},
        {2, "worst-case bounds dominate sampled channels", 120, worst_case_dominance},
        {3, "surrogates tangent and one-sided", 10, surrogate_suite},
        {4, "harvester inverse round trip", 10, eh_round_trip},
        {5, "loss gradients match finite differences", 60, gradient_fidelity},
        {6, "power block matches grid search", 30, dinkelbach_oracle},
        {7, "reflection and location blocks match grid search", 120, ris_uav_oracles},
        {8, "block objectives monotone", 600, sca_monotonicity},
        {9, "tiny-scenario learning oracle", 600, learning_oracle},
        {10, "desk-scale SAC vs DDPG and CSI-error trend", 1800, desk_reproduction},
        {11, "every mode reproducible byte for byte", 600, determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && only.count(c.id) == 0) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " | " << o.detail
                  << " | " << fmt("%.1f", secs) << " s" << (in_time ? "" : " over budget") << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
