// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_SCENARIO_HPP
#define WCSEE_SCENARIO_HPP

#include <vector>

#include "wcsee/geometry.hpp"

namespace wcsee {

// Logistic RF-to-DC harvesting curve
//   Omega(P) = b2 / (k1 * (1 + exp(-b0 * (P - b1)))) - k2.
struct EhModel {
    double b0 = 150.0;
    double b1 = 0.014;
    double b2 = 0.024;
    double k1 = 1.0;
    double k2 = 0.0;

    // Model whose k2 is chosen so that Omega(0) = 0.
    static EhModel zero_calibrated(double b0, double b1, double b2, double k1);
    static EhModel defaults() { return zero_calibrated(150.0, 0.014, 0.024, 1.0); }

    // Limit of Omega as the input power grows without bound.
    double saturation() const { return b2 / k1 - k2; }
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Every physical constant of one simulated deployment. All units SI.
struct ScenarioConfig {
    int n_tx = 6;     // BS antennas
    int n_ihr = 4;    // legitimate information receivers (K)
    int n_uehr = 3;   // untrusted energy-harvesting receivers (J)
    int n_ris = 10;   // RIS elements (M)

    double height = 100.0;  // UAV altitude [m]
    double alpha = 2.5;     // path-loss exponent
    double rho0 = 1e-3;     // path gain at 1 m
    double sigma2 = 1e-3;   // noise power [W]
    double k_bs_ris = db_to_linear(3.0);
    double k_ris_ihr = db_to_linear(3.0);
    double k_ris_uehr = db_to_linear(3.0);

    double p_max = dbm_to_watts(10.0);  // [W]
    double p0 = 1.0;                    // circuit power [W]
    double varrho = 1.0 / 0.35;         // inverse PA drain efficiency
    double nu = 0.0;                    // UEHR CSI error radius
    double e_h = 0.01;                  // minimum harvested DC power [W]
    EhModel eh = EhModel::defaults();

    UavRegion region{975.0, 1025.0, -25.0, 25.0};
    PhaseCodebook codebook{8};
    bool discrete_phases = true;

    Position2D bs{0.0, 0.0};
    Position2D uav_start{1000.0, 0.0};
    Position2D ihr_center{1000.0, 0.0};
    double ihr_radius = 500.0;
    Position2D uehr_center{1000.0, 0.0};
    double uehr_radius = 500.0;

    // Throws ConfigError when an invariant is broken.
    void validate() const;
};

// Ground positions of the receivers for one draw.
struct Placement {
    std::vector<Position2D> ihr;
    std::vector<Position2D> uehr;
};

}  // namespace wcsee

#endif
