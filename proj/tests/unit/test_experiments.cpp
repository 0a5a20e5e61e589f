// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "test_support.hpp"
#include "wcsee/error.hpp"
#include "wcsee/experiments.hpp"

using namespace wcsee;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny_spec(Mode mode, const std::string& dir) {
    ExperimentSpec s;
    s.mode = mode;
    s.scenario = test::desk_scenario(2, 1, 1, 2);
    s.episodes = 3;
    s.horizon = 8;
    s.eval_episodes = 2;
    s.realizations = 2;
    s.sac.hidden = s.ddpg.hidden = 8;
    s.sac.batch = s.ddpg.batch = 8;
    s.sac.warmup = s.ddpg.warmup = 8;
    s.sca.max_outer = 2;
    s.sca.max_inner = 10;
    s.seeds = {1, 2};
    s.out_dir = (fs::path(::testing::TempDir()) / dir).string();
    fs::remove_all(s.out_dir);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Stats, MeanStd) {
    const auto m = mean_std({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_DOUBLE_EQ(m.std, std::sqrt(1.25));
    EXPECT_EQ(mean_std({}).mean, 0.0);
}

TEST(Stats, FinalRewardUsesLastTenth) {
    std::vector<rl::CurveRow> curve;
    for (int e = 0; e < 20; ++e) curve.push_back({e, double(e)});
    EXPECT_DOUBLE_EQ(final_reward(curve), 18.5);
    curve.resize(5);
    EXPECT_DOUBLE_EQ(final_reward(curve), 4.0);
}

TEST(Pool, ThreadCap) {
    ::setenv("WCSEE_THREADS", "1", 1);
    EXPECT_EQ(worker_count(8), 1);
    ::setenv("WCSEE_THREADS", "3", 1);
    EXPECT_LE(worker_count(2), 2);
    ::unsetenv("WCSEE_THREADS");
    EXPECT_GE(worker_count(4), 1);
}

TEST(Pool, RunsEveryIndexAndRethrows) {
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("job 7");
                 }),
                 std::runtime_error);
}

TEST(Experiments, TrainSacFileSetAndRerun) {
    const auto spec = tiny_spec(Mode::TrainSac, "sac_a");
    std::ostringstream log;
    const auto files = run_experiment(spec, log);
    const std::vector<std::string> expected{"schema.txt",
                                            "sac_seed1_curve.csv",
                                            "sac_seed1_trajectory.csv",
                                            "sac_seed1_eval.csv",
                                            "sac_seed2_curve.csv",
                                            "sac_seed2_trajectory.csv",
                                            "sac_seed2_eval.csv",
                                            "sac_aggregate.csv",
                                            "sac_summary.csv"};
    EXPECT_EQ(files, expected);
    auto again = spec;
    again.out_dir = (fs::path(::testing::TempDir()) / "sac_b").string();
    fs::remove_all(again.out_dir);
    run_experiment(again, log);
    for (const auto& f : files) EXPECT_EQ(slurp(fs::path(spec.out_dir) / f), slurp(fs::path(again.out_dir) / f)) << f;
}

TEST(Experiments, AggregateMatchesSeedCurves) {
    const auto spec = tiny_spec(Mode::TrainDdpg, "ddpg_agg");
    std::ostringstream log;
    run_experiment(spec, log);
    const fs::path dir(spec.out_dir);
    const auto c1 = read_csv(dir / "ddpg_seed1_curve.csv");
    const auto c2 = read_csv(dir / "ddpg_seed2_curve.csv");
    const auto agg = read_csv(dir / "ddpg_aggregate.csv");
    ASSERT_EQ(agg.size(), 1u + spec.episodes);
    for (int e = 1; e <= spec.episodes; ++e) {
        const double a = std::stod(c1[e][1]), b = std::stod(c2[e][1]);
        EXPECT_NEAR(std::stod(agg[e][1]), 0.5 * (a + b), 1e-9 * (1 + std::abs(a + b)));
        EXPECT_NEAR(std::stod(agg[e][2]), 0.5 * std::abs(a - b), 1e-9 * (1 + std::abs(a - b)));
    }
    const auto summary = read_csv(dir / "ddpg_summary.csv");
    ASSERT_EQ(summary.size(), 3u);
    EXPECT_EQ(summary[0][0], "seed");
    EXPECT_NEAR(std::stod(summary[1][1]), std::stod(c1.back()[1]), 1e-9);
}

TEST(Experiments, ScaBenchmarkFiles) {
    const auto spec = tiny_spec(Mode::ScaBenchmark, "sca");
    std::ostringstream log;
    const auto files = run_experiment(spec, log);
    EXPECT_EQ(files.back(), "sca_aggregate.csv");
    EXPECT_EQ(std::count(files.begin(), files.end(), "sca_seed1_r0_trace.csv"), 1);
    const auto res = read_csv(fs::path(spec.out_dir) / "sca_seed2_results.csv");
    EXPECT_EQ(res.size(), 3u);
    const auto trace = read_csv(fs::path(spec.out_dir) / "sca_seed1_r1_trace.csv");
    EXPECT_EQ(trace.front()[0], "outer_iter");
    EXPECT_GT(trace.size(), 1u);
}

TEST(Experiments, SweepFiles) {
    auto spec = tiny_spec(Mode::Sweep, "sweep");
    spec.axis = SweepAxis::Nu;
    spec.sweep_values = {0.0, 0.1};
    spec.sweep_method = Method::Sca;
    spec.seeds = {3};
    std::ostringstream log;
    const auto files = run_experiment(spec, log);
    EXPECT_NE(std::find(files.begin(), files.end(), "sweep_nu_0.1_seed3.csv"), files.end());
    const auto agg = read_csv(fs::path(spec.out_dir) / "sweep_aggregate.csv");
    EXPECT_EQ(agg.size(), 1u + 2 * 3);
}

TEST(Experiments, RejectsInvalidSpec) {
    auto spec = tiny_spec(Mode::TrainSac, "bad");
    spec.seeds.clear();
    std::ostringstream log;
    EXPECT_THROW(run_experiment(spec, log), ValidationError);
}
