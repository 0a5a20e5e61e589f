// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_SCA_HPP
#define WCSEE_SCA_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "wcsee/channels.hpp"
#include "wcsee/convex.hpp"
#include "wcsee/phy.hpp"

namespace wcsee::sca {

struct ScaOptions {
    double eps = 0.01;    // |zeta change| stopping tolerance of every block
    int max_inner = 50;   // convex solves per block (per penalty stage for the RIS block)
    double margin = 1e-6; // slack margin at block start
    double penalty_init = 10.0;
    double penalty_factor = 5.0;
    double penalty_max = 1e4;
    double modulus_tol = 1e-3;
    int max_outer = 20;
    double outer_eps = 0.01;
    convex::SolverOptions solver;
};

enum class BlockStatus { Converged, MaxIter, Infeasible };
const char* to_string(BlockStatus s);

struct TraceRow {
    int outer_iter = 0;
    std::string block;
    int stage = 0;
    int inner_iter = 0;
    double objective = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
};

// CSV columns: outer_iter,block,stage,inner_iter,objective,lambda,residual
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

struct PowerResult {
    BlockStatus status = BlockStatus::Infeasible;
    Vec power;
    double zeta = 0.0;
    double lambda = 0.0;
    double wcsee = 0.0;
    std::vector<TraceRow> trace;
};

// Dinkelbach iterations with one SCA convex solve per parameter update. The
// trace objective is the clamped surrogate ratio max(zeta, 0) / P_tot.
PowerResult dinkelbach_power(const ChannelRealization& ch, const ZfPrecoder& zf, const ScenarioConfig& cfg,
                             const Vec& init, const ScaOptions& opts = {});

// Exact rates for fixed beam directions, counting the interference that
// appears once H_c no longer matches the directions. nu = 0.
SecrecyRates fixed_precoder_rates(const ChannelRealization& ch, const CMat& directions, const Vec& power,
                                  double sigma2);

// Sum over UEHRs of the received RF power for fixed directions.
double fixed_precoder_eh(const ChannelRealization& ch, const CMat& directions, const Vec& power);

struct RisResult {
    BlockStatus status = BlockStatus::Infeasible;
    CVec s;          // unit modulus
    CVec s_relaxed;  // before the final projection
    Vec power;       // input power, or rescaled to restore EH
    double zeta = 0.0;
    double rate = 0.0;  // exact min secrecy rate at (s, power)
    double max_modulus_gap = 0.0;
    double penalty = 0.0;
    bool power_rescaled = false;
    bool eh_broken = false;
    bool kept_incumbent = false;
    std::vector<TraceRow> trace;
};

// Penalized SCA over the reflection vector. The trace objective is
// zeta + C ||s||^2, which cannot decrease within one penalty stage.
RisResult ris_phase_sca(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                        const ScenarioConfig& cfg, const CVec& s_init, const ScaOptions& opts = {});

struct UavResult {
    BlockStatus status = BlockStatus::Infeasible;
    Position2D q;
    double zeta = 0.0;
    std::vector<TraceRow> trace;
};

// Max-min IHR rate over q with the small-scale fading and the LoS array
// responses held at their values for the block's starting point.
UavResult uav_location_sca(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                           const ScenarioConfig& cfg, const Position2D& q_init, const ScaOptions& opts = {});

// Min IHR rate at q under the same frozen model the UAV block optimizes.
double uav_frozen_min_rate(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                           const ScenarioConfig& cfg, const Position2D& q);

struct BcdInit {
    Vec power;  // empty: uniform P_max / K
};

struct BcdResult {
    Vec power;
    Vec theta;
    Position2D q;
    std::vector<double> eta;
    std::vector<TraceRow> trace;
    int passes = 0;
    bool eh_ok = false;
    bool eh_broken = false;
    bool rank_deficient = false;
};

// Block coordinate ascent over (power, phases, location) starting from the
// state held in ch. Blocks that fail keep their previous iterate.
BcdResult bcd_outer(const ChannelRealization& ch, const ScenarioConfig& cfg, const BcdInit& init = {},
                    const ScaOptions& opts = {});

}  // namespace wcsee::sca

#endif
