// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "wcsee/config.hpp"
#include "wcsee/error.hpp"

using namespace wcsee;

namespace {

ExperimentSpec parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
    const auto s = parse("# nothing here\n\n");
    const ExperimentSpec d;
    EXPECT_EQ(s.scenario.n_tx, d.scenario.n_tx);
    EXPECT_EQ(s.scenario.n_ihr, 4);
    EXPECT_EQ(s.scenario.n_uehr, 3);
    EXPECT_EQ(s.scenario.n_ris, 10);
    EXPECT_DOUBLE_EQ(s.scenario.p_max, 0.01);
    EXPECT_DOUBLE_EQ(s.scenario.varrho, 1.0 / 0.35);
    EXPECT_EQ(s.sac.batch, 256);
    EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(s.mode, Mode::TrainSac);
}

TEST(Config, ParsesValuesAndComments) {
    const auto s = parse("n_tx = 8   # antennas\np_max_dbm=20\nseeds = 3, 4,5\nmode = sca-benchmark\n"
                         "discrete_phases = false\nsweep_axis = nu\nsweep_values = 0.01,0.1\n");
    EXPECT_EQ(s.scenario.n_tx, 8);
    EXPECT_NEAR(s.scenario.p_max, 0.1, 1e-15);
    EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
    EXPECT_EQ(s.mode, Mode::ScaBenchmark);
    EXPECT_FALSE(s.scenario.discrete_phases);
    EXPECT_EQ(s.axis, SweepAxis::Nu);
    EXPECT_EQ(s.sweep_values, (std::vector<double>{0.01, 0.1}));
}

TEST(Config, FewerAntennasThanUsersPointsAtLine) {
    const std::string msg = error_of("# header\nn_tx = 2\nn_ihr = 3\n");
    EXPECT_EQ(msg.rfind("test.cfg:3:", 0), 0u) << msg;
    EXPECT_THROW(parse("n_tx = 2\nn_ihr = 3\n"), ValidationError);
}

TEST(Config, UnknownKeyPointsAtLine) {
    const std::string msg = error_of("n_tx = 6\n\nantennas = 4\n");
    EXPECT_EQ(msg.rfind("test.cfg:3:", 0), 0u) << msg;
    EXPECT_NE(msg.find("antennas"), std::string::npos);
}

TEST(Config, MalformedLines) {
    EXPECT_THROW(parse("n_tx 6\n"), ParseError);
    EXPECT_THROW(parse("= 6\n"), ParseError);
    EXPECT_THROW(parse("n_tx =\n"), ParseError);
    EXPECT_EQ(error_of("n_tx = 6\nn_tx = 7\n").rfind("test.cfg:2:", 0), 0u);
}

TEST(Config, BadValues) {
    EXPECT_THROW(parse("n_tx = six\n"), ValidationError);
    EXPECT_THROW(parse("n_tx = 0\n"), ValidationError);
    EXPECT_THROW(parse("gamma = 1.5\n"), ValidationError);
    EXPECT_THROW(parse("p_max_dbm = nan\n"), ValidationError);
    EXPECT_THROW(parse("discrete_phases = maybe\n"), ValidationError);
    EXPECT_THROW(parse("mode = dance\n"), ValidationError);
    EXPECT_THROW(parse("seeds = -1\n"), ValidationError);
    EXPECT_THROW(parse("batch_size = 512\nbuffer_size = 100\n"), ValidationError);
    EXPECT_THROW(parse("mode = sweep\n"), ValidationError);
    EXPECT_THROW(parse("sweep_axis = M\nsweep_values = 2.5\n"), ValidationError);
    EXPECT_EQ(error_of("\n\nphase_bits = 0\n").rfind("test.cfg:3:", 0), 0u);
}

TEST(Config, SweepValueApplication) {
    auto s = parse("sweep_axis = P_max\nsweep_values = 20\n");
    EXPECT_NEAR(with_sweep_value(s, 20.0).scenario.p_max, 0.1, 1e-15);
    s.axis = SweepAxis::RisElements;
    EXPECT_EQ(with_sweep_value(s, 16).scenario.n_ris, 16);
    s.axis = SweepAxis::Batch;
    EXPECT_EQ(with_sweep_value(s, 32).ddpg.batch, 32);
    s.axis = SweepAxis::Nu;
    EXPECT_EQ(with_sweep_value(s, 0.05).scenario.nu, 0.05);
}

TEST(Config, NamesRoundTrip) {
    for (Mode m : {Mode::TrainSac, Mode::TrainDdpg, Mode::ScaBenchmark, Mode::Eval, Mode::Sweep})
        EXPECT_EQ(parse_mode(to_string(m)), m);
    for (SweepAxis a : {SweepAxis::None, SweepAxis::PMax, SweepAxis::RisElements, SweepAxis::Nu, SweepAxis::Batch})
        EXPECT_EQ(parse_axis(to_string(a)), a);
    for (Method m : {Method::Sac, Method::Ddpg, Method::Sca}) EXPECT_EQ(parse_method(to_string(m)), m);
}

TEST(Config, KeyTableIsUnique) {
    std::set<std::string> keys;
    for (const auto& k : config_keys()) {
        EXPECT_TRUE(keys.insert(k.key).second) << k.key;
        EXPECT_FALSE(k.description.empty());
    }
    EXPECT_GT(keys.size(), 40u);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/none.cfg"), ParseError); }
