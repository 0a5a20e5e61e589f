// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/scenario.hpp"

#include <cmath>
#include <string>

#include "wcsee/error.hpp"

namespace wcsee {

EhModel EhModel::zero_calibrated(double b0, double b1, double b2, double k1) {
    EhModel m;
    m.b0 = b0;
    m.b1 = b1;
    m.b2 = b2;
    m.k1 = k1;
    m.k2 = b2 / (k1 * (1.0 + std::exp(b0 * b1)));
    return m;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (n_tx < 1 || n_ihr < 1 || n_uehr < 0 || n_ris < 1) {
        fail("array sizes must be positive (J may be zero)");
    }
    if (n_tx < n_ihr) {
        fail("zero forcing needs n_tx >= n_ihr (got n_tx=" + std::to_string(n_tx) +
             ", n_ihr=" + std::to_string(n_ihr) + ")");
    }
    if (!(alpha >= 2.0)) fail("alpha must be >= 2");
    if (!(height >= 0.0)) fail("height must be >= 0");
    if (!(rho0 > 0.0)) fail("rho0 must be > 0");
    if (!(sigma2 > 0.0)) fail("sigma2 must be > 0");
    if (!(k_bs_ris >= 0.0 && k_ris_ihr >= 0.0 && k_ris_uehr >= 0.0)) fail("Rician factors must be >= 0");
    if (!(p_max >= 0.0)) fail("p_max must be >= 0");
    if (!(p0 > 0.0)) fail("p0 must be > 0");
    if (!(varrho >= 1.0)) fail("varrho must be >= 1");
    if (!(nu >= 0.0)) fail("nu must be >= 0");
    if (!(e_h >= 0.0)) fail("e_h must be >= 0");
    if (!(eh.b0 > 0.0 && eh.b1 > 0.0 && eh.b2 > 0.0 && eh.k1 > 0.0 && eh.k2 >= 0.0)) {
        fail("EH model constants must be positive");
    }
    if (!region.valid()) fail("UAV region must satisfy min <= max");
    if (!(ihr_radius >= 0.0 && uehr_radius >= 0.0)) fail("placement radii must be >= 0");
}

}  // namespace wcsee
