// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_EXPERIMENTS_HPP
#define WCSEE_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wcsee/agents.hpp"
#include "wcsee/config.hpp"
#include "wcsee/env.hpp"
#include "wcsee/sca.hpp"

namespace wcsee {

// Pool size: hardware threads, capped by WCSEE_THREADS when set, never more than jobs.
int worker_count(std::size_t jobs);

// Runs body(0..n-1) on the pool. Results must be written to per-index slots.
// The first exception thrown by a job is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct DrlRun {
    std::vector<rl::CurveRow> curve;
    std::vector<TrajectoryRow> trajectory;
    rl::PolicyEval eval;  // deterministic policy on the evaluation draws
};

DrlRun run_sac(const ExperimentSpec& spec, std::uint64_t seed);
DrlRun run_ddpg(const ExperimentSpec& spec, std::uint64_t seed);

struct ScaRealization {
    int realization = 0;
    sca::BcdResult bcd;
    ControlDecision decision;  // phases quantized when the scenario is discrete
    Evaluation eval;
};

// Draws come from the same stream as evaluation episodes of the learners.
std::vector<ScaRealization> run_sca(const ExperimentSpec& spec, std::uint64_t seed, int realizations);

// Mean reward over the last tenth of the episodes (at least one).
double final_reward(const std::vector<rl::CurveRow>& curve);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};
MeanStd mean_std(const std::vector<double>& v);

// Writes every output file of the spec under spec.out_dir and returns their
// paths relative to it, in write order.
std::vector<std::string> run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace wcsee

#endif
