// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "wcsee/error.hpp"

namespace wcsee {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::TrainSac: return "train-sac";
        case Mode::TrainDdpg: return "train-ddpg";
        case Mode::ScaBenchmark: return "sca-benchmark";
        case Mode::Eval: return "eval";
        case Mode::Sweep: return "sweep";
    }
    return "?";
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::PMax: return "P_max";
        case SweepAxis::RisElements: return "M";
        case SweepAxis::Nu: return "nu";
        case SweepAxis::Batch: return "batch";
    }
    return "?";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Sac: return "sac";
        case Method::Ddpg: return "ddpg";
        case Method::Sca: return "sca";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    for (Mode m : {Mode::TrainSac, Mode::TrainDdpg, Mode::ScaBenchmark, Mode::Eval, Mode::Sweep}) {
        if (to_string(m) == s) return m;
    }
    throw ValidationError("unknown mode '" + s + "'");
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "P_max" || s == "p_max") return SweepAxis::PMax;
    if (s == "M" || s == "m" || s == "n_ris") return SweepAxis::RisElements;
    if (s == "nu") return SweepAxis::Nu;
    if (s == "batch" || s == "B" || s == "batch_size") return SweepAxis::Batch;
    if (s == "none") return SweepAxis::None;
    throw ValidationError("unknown sweep axis '" + s + "' (expected P_max, M, nu or batch)");
}

Method parse_method(const std::string& s) {
    for (Method m : {Method::Sac, Method::Ddpg, Method::Sca}) {
        if (to_string(m) == s) return m;
    }
    throw ValidationError("unknown method '" + s + "' (expected sac, ddpg or sca)");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) throw ValidationError("'" + v + "' is not a finite number");
    return out;
}

long long to_int(const std::string& v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) throw ValidationError("'" + v + "' is not an integer");
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("'" + v + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int positive(long long v, const char* what) {
    if (v < 1 || v > 100000000) throw ValidationError(std::string(what) + " must be a positive integer");
    return static_cast<int>(v);
}

int non_negative(long long v, const char* what) {
    if (v < 0 || v > 100000000) throw ValidationError(std::string(what) + " must be >= 0");
    return static_cast<int>(v);
}

double in_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
    return v;
}

double positive_real(double v, const char* what) {
    if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be > 0");
    return v;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&)>;

struct Entry {
    KeyInfo info;
    Setter set;
};

const std::vector<Entry>& table() {
    static const std::vector<Entry> t = [] {
        std::vector<Entry> e;
        auto add = [&](std::string key, std::string desc, Setter s) {
            e.push_back({{std::move(key), std::move(desc)}, std::move(s)});
        };
        // Run control.
        add("mode", "train-sac | train-ddpg | sca-benchmark | eval | sweep", [](auto& s, auto& v) { s.mode = parse_mode(v); });
        add("seeds", "comma-separated seed list [1]", [](auto& s, auto& v) {
            s.seeds.clear();
            for (const auto& x : split_list(v)) {
                const long long n = to_int(x);
                if (n < 0) throw ValidationError("seeds must be non-negative");
                s.seeds.push_back(static_cast<std::uint64_t>(n));
            }
        });
        add("out_dir", "output directory [out]", [](auto& s, auto& v) { s.out_dir = v; });
        add("sweep_axis", "P_max | M | nu | batch [none]", [](auto& s, auto& v) { s.axis = parse_axis(v); });
        add("sweep_values", "comma-separated values for sweep_axis", [](auto& s, auto& v) {
            s.sweep_values.clear();
            for (const auto& x : split_list(v)) s.sweep_values.push_back(to_double(x));
        });
        add("sweep_method", "sac | ddpg | sca [sac]", [](auto& s, auto& v) { s.sweep_method = parse_method(v); });

        // Scenario.
        add("n_tx", "BS antennas N_t [6]", [](auto& s, auto& v) { s.scenario.n_tx = positive(to_int(v), "n_tx"); });
        add("n_ihr", "legitimate users K [4]", [](auto& s, auto& v) { s.scenario.n_ihr = positive(to_int(v), "n_ihr"); });
        add("n_uehr", "energy receivers J [3]", [](auto& s, auto& v) { s.scenario.n_uehr = non_negative(to_int(v), "n_uehr"); });
        add("n_ris", "RIS elements M [10]", [](auto& s, auto& v) { s.scenario.n_ris = positive(to_int(v), "n_ris"); });
        add("uav_height_m", "UAV altitude [100]", [](auto& s, auto& v) { s.scenario.height = to_double(v); });
        add("path_loss_exponent", "alpha [2.5]", [](auto& s, auto& v) { s.scenario.alpha = to_double(v); });
        add("rho0", "path gain at 1 m, linear [1e-3]", [](auto& s, auto& v) { s.scenario.rho0 = to_double(v); });
        add("noise_power_w", "sigma^2 in W [1e-3]", [](auto& s, auto& v) { s.scenario.sigma2 = to_double(v); });
        add("noise_power_dbm", "sigma^2 in dBm", [](auto& s, auto& v) { s.scenario.sigma2 = dbm_to_watts(to_double(v)); });
        add("k_bs_ris_db", "Rician factor BS-RIS in dB [3]", [](auto& s, auto& v) { s.scenario.k_bs_ris = db_to_linear(to_double(v)); });
        add("k_ris_ihr_db", "Rician factor RIS-IHR in dB [3]", [](auto& s, auto& v) { s.scenario.k_ris_ihr = db_to_linear(to_double(v)); });
        add("k_ris_uehr_db", "Rician factor RIS-UEHR in dB [3]", [](auto& s, auto& v) { s.scenario.k_ris_uehr = db_to_linear(to_double(v)); });
        add("p_max_dbm", "transmit budget in dBm [10]", [](auto& s, auto& v) { s.scenario.p_max = dbm_to_watts(to_double(v)); });
        add("circuit_power_w", "P0 in W [1]", [](auto& s, auto& v) { s.scenario.p0 = to_double(v); });
        add("pa_efficiency", "amplifier efficiency, varrho = 1/value [0.35]", [](auto& s, auto& v) {
            s.scenario.varrho = 1.0 / positive_real(to_double(v), "pa_efficiency");
        });
        add("nu", "UEHR CSI error radius [0]", [](auto& s, auto& v) { s.scenario.nu = to_double(v); });
        add("e_h_w", "harvested DC requirement in W [0.01]", [](auto& s, auto& v) { s.scenario.e_h = to_double(v); });
        add("eh_b0", "logistic slope [150]", [](auto& s, auto& v) {
            auto& m = s.scenario.eh;
            m = EhModel::zero_calibrated(to_double(v), m.b1, m.b2, m.k1);
        });
        add("eh_b1", "logistic midpoint in W [0.014]", [](auto& s, auto& v) {
            auto& m = s.scenario.eh;
            m = EhModel::zero_calibrated(m.b0, to_double(v), m.b2, m.k1);
        });
        add("eh_b2", "logistic amplitude in W [0.024]", [](auto& s, auto& v) {
            auto& m = s.scenario.eh;
            m = EhModel::zero_calibrated(m.b0, m.b1, to_double(v), m.k1);
        });
        add("eh_k1", "logistic normalizer [1]", [](auto& s, auto& v) {
            auto& m = s.scenario.eh;
            m = EhModel::zero_calibrated(m.b0, m.b1, m.b2, to_double(v));
        });
        add("region_x_min", "UAV region [975]", [](auto& s, auto& v) { s.scenario.region.x_min = to_double(v); });
        add("region_x_max", "UAV region [1025]", [](auto& s, auto& v) { s.scenario.region.x_max = to_double(v); });
        add("region_y_min", "UAV region [-25]", [](auto& s, auto& v) { s.scenario.region.y_min = to_double(v); });
        add("region_y_max", "UAV region [25]", [](auto& s, auto& v) { s.scenario.region.y_max = to_double(v); });
        add("uav_start_x", "UAV reset position [1000]", [](auto& s, auto& v) { s.scenario.uav_start.x = to_double(v); });
        add("uav_start_y", "UAV reset position [0]", [](auto& s, auto& v) { s.scenario.uav_start.y = to_double(v); });
        add("bs_x", "BS position [0]", [](auto& s, auto& v) { s.scenario.bs.x = to_double(v); });
        add("bs_y", "BS position [0]", [](auto& s, auto& v) { s.scenario.bs.y = to_double(v); });
        add("ihr_center_x", "IHR disk center [1000]", [](auto& s, auto& v) { s.scenario.ihr_center.x = to_double(v); });
        add("ihr_center_y", "IHR disk center [0]", [](auto& s, auto& v) { s.scenario.ihr_center.y = to_double(v); });
        add("ihr_radius_m", "IHR disk radius [500]", [](auto& s, auto& v) { s.scenario.ihr_radius = to_double(v); });
        add("uehr_center_x", "UEHR disk center [1000]", [](auto& s, auto& v) { s.scenario.uehr_center.x = to_double(v); });
        add("uehr_center_y", "UEHR disk center [0]", [](auto& s, auto& v) { s.scenario.uehr_center.y = to_double(v); });
        add("uehr_radius_m", "UEHR disk radius [500]", [](auto& s, auto& v) { s.scenario.uehr_radius = to_double(v); });
        add("phase_bits", "codebook resolution L in bits [8]", [](auto& s, auto& v) {
            const long long b = to_int(v);
            if (b < 1 || b > 30) throw ValidationError("phase_bits must lie in [1, 30]");
            s.scenario.codebook = PhaseCodebook(static_cast<int>(b));
        });
        add("discrete_phases", "quantize RIS phases [true]", [](auto& s, auto& v) { s.scenario.discrete_phases = to_bool(v); });

        // Learning.
        add("episodes", "training episodes [100]", [](auto& s, auto& v) { s.episodes = positive(to_int(v), "episodes"); });
        add("horizon", "steps per episode [200]", [](auto& s, auto& v) { s.horizon = positive(to_int(v), "horizon"); });
        add("eval_episodes", "evaluation episodes [5]", [](auto& s, auto& v) { s.eval_episodes = positive(to_int(v), "eval_episodes"); });
        add("fixed_draw", "reuse one channel draw for every episode [false]", [](auto& s, auto& v) { s.fixed_draw = to_bool(v); });
        add("write_trajectory", "emit per-step trajectory CSVs [true]", [](auto& s, auto& v) { s.write_trajectory = to_bool(v); });
        add("hidden_units", "units per hidden layer [256]", [](auto& s, auto& v) {
            s.sac.hidden = s.ddpg.hidden = positive(to_int(v), "hidden_units");
        });
        add("hidden_layers", "hidden layers [2]", [](auto& s, auto& v) {
            s.sac.hidden_layers = s.ddpg.hidden_layers = non_negative(to_int(v), "hidden_layers");
        });
        add("batch_size", "mini-batch B [256]", [](auto& s, auto& v) { s.sac.batch = s.ddpg.batch = positive(to_int(v), "batch_size"); });
        add("buffer_size", "replay capacity D [100000]", [](auto& s, auto& v) {
            s.sac.buffer = s.ddpg.buffer = static_cast<std::size_t>(positive(to_int(v), "buffer_size"));
        });
        add("gamma", "discount [0.99]", [](auto& s, auto& v) { s.sac.gamma = s.ddpg.gamma = in_unit(to_double(v), "gamma"); });
        add("tau", "Polyak factor [0.005]", [](auto& s, auto& v) { s.sac.tau = s.ddpg.tau = in_unit(to_double(v), "tau"); });
        add("lr_actor", "actor learning rate [1e-4]", [](auto& s, auto& v) {
            s.sac.lr_actor = s.ddpg.lr_actor = positive_real(to_double(v), "lr_actor");
        });
        add("lr_critic", "critic learning rate [1e-3]", [](auto& s, auto& v) {
            s.sac.lr_critic = s.ddpg.lr_critic = positive_real(to_double(v), "lr_critic");
        });
        add("lr_temperature", "temperature learning rate [1e-3]", [](auto& s, auto& v) {
            s.sac.lr_temperature = positive_real(to_double(v), "lr_temperature");
        });
        add("init_temperature", "initial beta [1]", [](auto& s, auto& v) {
            s.sac.init_temperature = positive_real(to_double(v), "init_temperature");
        });
        add("target_entropy", "entropy target [-(K+M+2)]", [](auto& s, auto& v) { s.sac.target_entropy = to_double(v); });
        add("warmup_steps", "random steps before updates [1000]", [](auto& s, auto& v) {
            s.sac.warmup = s.ddpg.warmup = non_negative(to_int(v), "warmup_steps");
        });
        add("updates_per_step", "gradient phases per environment step [1]", [](auto& s, auto& v) {
            s.sac.updates_per_step = s.ddpg.updates_per_step = non_negative(to_int(v), "updates_per_step");
        });
        add("ddpg_noise_sigma", "initial exploration noise [0.1]", [](auto& s, auto& v) {
            const double x = to_double(v);
            if (x < 0.0) throw ValidationError("ddpg_noise_sigma must be >= 0");
            s.ddpg.noise_sigma = x;
        });

        // Model-based benchmark.
        add("realizations", "channel draws per seed for sca-benchmark [100]", [](auto& s, auto& v) {
            s.realizations = positive(to_int(v), "realizations");
        });
        add("sca_eps", "inner SCA tolerance [0.01]", [](auto& s, auto& v) { s.sca.eps = positive_real(to_double(v), "sca_eps"); });
        add("sca_max_inner", "inner SCA iteration cap [50]", [](auto& s, auto& v) { s.sca.max_inner = positive(to_int(v), "sca_max_inner"); });
        add("sca_outer_eps", "BCD tolerance [0.01]", [](auto& s, auto& v) { s.sca.outer_eps = positive_real(to_double(v), "sca_outer_eps"); });
        add("sca_max_outer", "BCD pass cap [20]", [](auto& s, auto& v) { s.sca.max_outer = positive(to_int(v), "sca_max_outer"); });
        add("sca_penalty_init", "unit-modulus penalty start [10]", [](auto& s, auto& v) {
            s.sca.penalty_init = positive_real(to_double(v), "sca_penalty_init");
        });
        add("sca_penalty_factor", "penalty growth [5]", [](auto& s, auto& v) {
            s.sca.penalty_factor = positive_real(to_double(v), "sca_penalty_factor");
        });
        add("sca_penalty_max", "penalty cap [1e4]", [](auto& s, auto& v) {
            s.sca.penalty_max = positive_real(to_double(v), "sca_penalty_max");
        });
        return e;
    }();
    return t;
}

std::string anchor(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

}  // namespace

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = [] {
        std::vector<KeyInfo> k;
        for (const auto& e : table()) k.push_back(e.info);
        return k;
    }();
    return keys;
}

void validate(const ExperimentSpec& spec) {
    try {
        spec.scenario.validate();
    } catch (const ConfigError& e) {
        throw ValidationError(e.what());
    }
    if (spec.seeds.empty()) throw ValidationError("seed list is empty");
    if (spec.sac.buffer < static_cast<std::size_t>(spec.sac.batch)) {
        throw ValidationError("buffer_size must be at least batch_size");
    }
    if (spec.mode == Mode::Sweep && spec.axis == SweepAxis::None) throw ValidationError("sweep mode needs a sweep axis");
    if (spec.axis != SweepAxis::None && spec.sweep_values.empty()) throw ValidationError("sweep axis has no values");
    for (double v : spec.sweep_values) {
        if ((spec.axis == SweepAxis::RisElements || spec.axis == SweepAxis::Batch) && (v < 1.0 || v != std::floor(v))) {
            throw ValidationError("sweep values for " + to_string(spec.axis) + " must be positive integers");
        }
        if (spec.axis == SweepAxis::Nu && v < 0.0) throw ValidationError("sweep values for nu must be >= 0");
    }
    if (spec.sca.penalty_max < spec.sca.penalty_init) throw ValidationError("sca_penalty_max is below sca_penalty_init");
}

ExperimentSpec parse_config(std::istream& in, const std::string& source) {
    ExperimentSpec spec;
    std::map<std::string, int> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(anchor(source, line_no) + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(anchor(source, line_no) + "missing key before '='");
        if (value.empty()) throw ParseError(anchor(source, line_no) + "missing value for '" + key + "'");
        if (seen.count(key) != 0) {
            throw ValidationError(anchor(source, line_no) + "'" + key + "' repeats line " + std::to_string(seen[key]));
        }
        const auto& t = table();
        const auto it = std::find_if(t.begin(), t.end(), [&](const Entry& e) { return e.info.key == key; });
        if (it == t.end()) throw ValidationError(anchor(source, line_no) + "unknown key '" + key + "'");
        try {
            it->set(spec, value);
        } catch (const Error& e) {
            throw ValidationError(anchor(source, line_no) + key + ": " + e.what());
        }
        seen[key] = line_no;
    }
    try {
        validate(spec);
    } catch (const ValidationError& e) {
        int line = 0;
        for (const char* k : {"n_tx", "n_ihr"}) {
            if (seen.count(k) != 0) line = std::max(line, seen[k]);
        }
        const std::string msg = e.what();
        if (msg.find("n_tx") != std::string::npos && line > 0) throw ValidationError(anchor(source, line) + msg);
        throw ValidationError(source + ": " + msg);
    }
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");
    return parse_config(in, path);
}

ExperimentSpec with_sweep_value(const ExperimentSpec& spec, double value) {
    ExperimentSpec s = spec;
    switch (spec.axis) {
        case SweepAxis::PMax: s.scenario.p_max = dbm_to_watts(value); break;
        case SweepAxis::RisElements: s.scenario.n_ris = static_cast<int>(value); break;
        case SweepAxis::Nu: s.scenario.nu = value; break;
        case SweepAxis::Batch: s.sac.batch = s.ddpg.batch = static_cast<int>(value); break;
        case SweepAxis::None: break;
    }
    return s;
}

}  // namespace wcsee
