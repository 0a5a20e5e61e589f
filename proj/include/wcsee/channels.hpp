// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_CHANNELS_HPP
#define WCSEE_CHANNELS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "wcsee/rng.hpp"
#include "wcsee/scenario.hpp"

namespace wcsee {

// Random parts of one channel draw. They stay fixed while the UAV moves or the
// RIS is reconfigured; only the geometry-dependent parts are recomposed.
struct SmallScale {
    CMat bs_ris_nlos;              // M x N_t, CN(0, 1) entries
    std::vector<CVec> ihr_nlos;    // K vectors of length M
    std::vector<CVec> uehr_nlos;   // J vectors of length M
    std::vector<CVec> direct_unit; // J vectors of length N_t, CN(0, I)
    std::vector<CVec> csi_error;   // J vectors of length N_t, norm <= nu
};

// One full channel state. Composed quantities always reflect (q, theta).
struct ChannelRealization {
    Position2D q;
    Vec theta;  // RIS phases [rad], length M
    Placement placement;
    SmallScale small;

    // Rician mixtures before path loss.
    CMat bs_ris_tilde;              // G~_b
    std::vector<CVec> ihr_tilde;    // g~_k
    std::vector<CVec> uehr_tilde;   // h~_j

    CMat bs_ris;                    // G_b
    std::vector<CVec> ihr;          // g_k
    std::vector<CVec> uehr;         // h_j
    std::vector<CVec> direct;       // h_bj
    CMat cascaded_ihr;              // H_c, N_t x K
    std::vector<CVec> cascaded_uehr;  // true u_j
    std::vector<CVec> estimated_uehr; // u^_j = u_j + du_j

    int n_tx() const { return static_cast<int>(bs_ris.cols()); }
    int n_ris() const { return static_cast<int>(bs_ris.rows()); }
    int n_ihr() const { return static_cast<int>(cascaded_ihr.cols()); }
    int n_uehr() const { return static_cast<int>(cascaded_uehr.size()); }
};

// sqrt(K/(K+1)) los + sqrt(1/(K+1)) w, w ~ CN(0, I). K >= 1e12 returns los.
CVec sample_rician_vector(double k_factor, const CVec& los, RngStream& rng);

// Same mixture with the scattered part supplied by the caller.
CVec rician_mix(double k_factor, const CVec& los, const CVec& scattered);

// u + du with du uniform in the complex l2-ball of radius nu.
CVec perturb_uehr_csi(const CVec& u, double nu, RngStream& rng);

// Receivers uniform in their configured disks.
Placement sample_placement(const ScenarioConfig& cfg, RngStream& rng);

// Draws from per-entity substreams of rng, so adding a UEHR leaves the IHR
// draws untouched.
SmallScale sample_small_scale(const ScenarioConfig& cfg, RngStream& rng);

ChannelRealization compose_channels(const ScenarioConfig& cfg, const Placement& placement,
                                    const SmallScale& small, const Position2D& q, const Vec& theta);

// Recomputes every q- and theta-dependent quantity in place.
void update_channels(ChannelRealization& ch, const ScenarioConfig& cfg, const Position2D& q,
                     const Vec& theta);

// Fresh small-scale draw at a fixed placement. Throws ConfigError if N_t < K.
ChannelRealization sample_channels(const ScenarioConfig& cfg, const Placement& placement,
                                   const Position2D& q, const Vec& theta, RngStream& rng);

// RIS reflection vector s_m = exp(j theta_m).
CVec reflection_vector(const Vec& theta);

// G_b^H Theta^H x for a length-M vector x.
CVec reflect_to_bs(const CMat& bs_ris, const CVec& s, const CVec& x);

// Regression-fixture dumps.
//
// Binary layout, all little-endian: 8-byte magic "WCSEECH1", then u32 M, N_t,
// K, J, then f64 pairs (re, im) for G_b (column-major), g_1..g_K, h_1..h_J,
// h_b1..h_bJ, H_c (column-major), u_1..u_J and u^_1..u^_J.
void write_channels_binary(std::ostream& out, const ChannelRealization& ch);

struct ChannelDump {
    CMat bs_ris;
    std::vector<CVec> ihr, uehr, direct;
    CMat cascaded_ihr;
    std::vector<CVec> cascaded_uehr, estimated_uehr;
};
ChannelDump read_channels_binary(std::istream& in);

// CSV with header "quantity,row,col,re,im".
void write_channels_csv(std::ostream& out, const ChannelRealization& ch);

}  // namespace wcsee

#endif
