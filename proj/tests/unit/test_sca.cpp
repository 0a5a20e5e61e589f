// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "wcsee/sca.hpp"

using namespace wcsee;

TEST(Dinkelbach, MatchesPowerGrid) {
    for (double e_h : {0.0, 0.01}) {
        auto cfg = test::tiny_scenario(2);
        cfg.e_h = e_h;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto r = test::dinkelbach_oracle(cfg, seed);
            SCOPED_TRACE(seed);
            if (r.grid < 0.0) {
                EXPECT_LT(r.method, 0.0);
                continue;
            }
            EXPECT_GE(r.method, 0.99 * r.grid);
        }
    }
}

TEST(Dinkelbach, ZeroBudget) {
    auto cfg = test::tiny_scenario(2);
    cfg.e_h = 0.0;
    cfg.p_max = 0.0;
    const auto ch = test::draw(cfg, 4);
    const auto r = sca::dinkelbach_power(ch, zf_precoder(ch.cascaded_ihr), cfg, Vec());
    if (r.status != sca::BlockStatus::Infeasible) {
        EXPECT_NEAR(r.power.sum(), 0.0, 1e-9);
        EXPECT_NEAR(r.wcsee, 0.0, 1e-9);
    }
}

TEST(Dinkelbach, UnreachableHarvestingIsInfeasible) {
    auto cfg = test::tiny_scenario(2);
    cfg.e_h = 0.9 * cfg.eh.saturation();
    cfg.p_max = 1e-6;
    const auto ch = test::draw(cfg, 5);
    const auto r = sca::dinkelbach_power(ch, zf_precoder(ch.cascaded_ihr), cfg, Vec());
    EXPECT_EQ(r.status, sca::BlockStatus::Infeasible);
}

TEST(Dinkelbach, TraceAndLambdaMonotone) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.e_h = 0.0;
    const auto ch = test::draw(cfg, 6);
    sca::ScaOptions o;
    o.eps = 1e-6;
    o.max_inner = 100;
    const auto r = sca::dinkelbach_power(ch, zf_precoder(ch.cascaded_ihr), cfg, Vec(), o);
    ASSERT_NE(r.status, sca::BlockStatus::Infeasible);
    const auto rep = test::check_monotone(r.trace, 1e-6);
    EXPECT_EQ(rep.violations, 0);
    EXPECT_EQ(rep.lambda_violations, 0);
    EXPECT_LE(r.power.sum(), cfg.p_max * (1 + 1e-9));
}

TEST(Ris, MatchesPhaseGrid) {
    auto cfg = test::tiny_scenario(1);
    cfg.e_h = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SCOPED_TRACE(seed);
        const auto r = test::ris_oracle(cfg, seed);
        EXPECT_GE(r.method, 0.98 * r.grid);
    }
}

TEST(Ris, LargePenaltyGivesUnitModulus) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.e_h = 0.0;
    cfg.discrete_phases = false;
    const auto ch = test::draw(cfg, 7);
    const auto zf = zf_precoder(ch.cascaded_ihr);
    sca::ScaOptions o;
    o.penalty_init = 1e4;
    o.max_inner = 200;
    const auto r = sca::ris_phase_sca(ch, zf, Vec::Constant(2, cfg.p_max / 2), cfg, reflection_vector(ch.theta), o);
    ASSERT_NE(r.status, sca::BlockStatus::Infeasible);
    EXPECT_LE(r.max_modulus_gap, 1e-3);
    for (Eigen::Index m = 0; m < r.s.size(); ++m) EXPECT_NEAR(std::abs(r.s(m)), 1.0, 1e-12);
}

TEST(Ris, StageObjectiveMonotone) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.e_h = 0.0;
    const auto ch = test::draw(cfg, 8);
    const auto zf = zf_precoder(ch.cascaded_ihr);
    sca::ScaOptions o;
    o.eps = 1e-5;
    o.max_inner = 300;
    const auto r = sca::ris_phase_sca(ch, zf, Vec::Constant(2, cfg.p_max / 2), cfg, reflection_vector(ch.theta), o);
    EXPECT_EQ(test::check_monotone(r.trace, 1e-6).violations, 0);
}

TEST(Uav, MatchesLocationGrid) {
    auto cfg = test::tiny_scenario(2);
    cfg.e_h = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SCOPED_TRACE(seed);
        const auto r = test::uav_oracle(cfg, seed);
        EXPECT_GE(r.method, 0.98 * r.grid);
    }
}

TEST(Uav, CollapsedRegion) {
    auto cfg = test::tiny_scenario(2);
    cfg.e_h = 0.0;
    cfg.region = {1000, 1000, 0, 0};
    const auto ch = test::draw(cfg, 9);
    const auto zf = zf_precoder(ch.cascaded_ihr);
    const auto r = sca::uav_location_sca(ch, zf, Vec::Constant(1, cfg.p_max), cfg, {1000, 0});
    EXPECT_EQ(r.q, (Position2D{1000, 0}));
    EXPECT_LE(r.trace.size(), 1u);
}

TEST(Uav, SymmetricUserStaysOnAxis) {
    auto cfg = test::tiny_scenario(2);
    cfg.e_h = 0.0;
    cfg.k_bs_ris = cfg.k_ris_ihr = cfg.k_ris_uehr = 1e12;
    cfg.ihr_radius = 0.0;
    cfg.ihr_center = {1200.0, 0.0};
    cfg.region = {900, 1100, -50, 50};
    cfg.uav_start = {1000.0, 20.0};
    const auto ch = test::draw(cfg, 10);
    const auto zf = zf_precoder(ch.cascaded_ihr);
    sca::ScaOptions o;
    o.eps = 1e-7;
    o.max_inner = 500;
    const auto r = sca::uav_location_sca(ch, zf, Vec::Constant(1, cfg.p_max), cfg, cfg.uav_start, o);
    EXPECT_NEAR(r.q.y, 0.0, 1.0);
}

TEST(Bcd, SinglePass) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.discrete_phases = false;
    const auto ch = test::draw(cfg, 11);
    sca::ScaOptions o;
    o.max_outer = 1;
    const auto r = sca::bcd_outer(ch, cfg, {}, o);
    EXPECT_EQ(r.passes, 1);
    EXPECT_EQ(r.eta.size(), 1u);
}

TEST(Bcd, DeterministicTrace) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.discrete_phases = false;
    const auto ch = test::draw(cfg, 12);
    std::ostringstream a, b;
    sca::write_trace_csv(a, sca::bcd_outer(ch, cfg).trace);
    sca::write_trace_csv(b, sca::bcd_outer(ch, cfg).trace);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().rfind("outer_iter,block,stage,inner_iter,objective,lambda,residual\n", 0), 0u);
}

TEST(Bcd, BlocksMonotoneAtPerfectCsi) {
    auto cfg = test::desk_scenario(4, 2, 2, 4);
    cfg.discrete_phases = false;
    cfg.nu = 0.0;
    for (std::uint64_t seed = 20; seed < 23; ++seed) {
        const auto r = sca::bcd_outer(test::draw(cfg, seed), cfg);
        const auto rep = test::check_monotone(r.trace, 1e-6);
        EXPECT_EQ(rep.violations, 0) << "seed " << seed << " worst drop " << rep.worst_drop;
        EXPECT_EQ(rep.lambda_violations, 0);
        EXPECT_GE(r.passes, 1);
    }
}
