// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_PHY_HPP
#define WCSEE_PHY_HPP

#include <vector>

#include "wcsee/channels.hpp"
#include "wcsee/scenario.hpp"

namespace wcsee {

// Normalized zero-forcing beam directions and the resulting per-user gains.
struct ZfPrecoder {
    CMat directions;  // N_t x K, unit-norm columns p^_k
    Vec gains;        // a_k = |h_c,k^H p^_k|^2
};

// Conditioning limit on H_c^H H_c beyond which zero forcing is refused.
inline constexpr double kMaxZfCondition = 1e12;

// Columns of H_c (H_c^H H_c)^-1, normalized. Throws RankDeficient.
ZfPrecoder zf_precoder(const CMat& cascaded_ihr);

// gamma_k = p_k a_k / sigma2.
Vec legit_sinr(const ZfPrecoder& zf, const Vec& power, double sigma2);

// b_k = |u^H p^_k|^2 for every k.
Vec leakage_gains(const CVec& u, const ZfPrecoder& zf);

// SINR at an eavesdropper with channel u when decoding stream k.
double eve_sinr(const CVec& u, const ZfPrecoder& zf, const Vec& power, double sigma2, int k);

// Upper bound on eve_sinr over every u in the nu-ball around u_hat.
double worst_case_eve_sinr(const CVec& u_hat, const ZfPrecoder& zf, const Vec& power, double sigma2,
                           double nu, int k);

struct SecrecyRates {
    Vec per_user;    // [log2(1+gamma_k) - log2(1+gamma_E,k)]^+
    Vec eve_sinr;    // gamma_E,k, max over UEHRs (0 when J = 0)
    double min_rate = 0.0;
};

SecrecyRates secrecy_rate(const std::vector<CVec>& u_hat, const ZfPrecoder& zf, const Vec& power,
                          double sigma2, double nu);

double eh_dc(double p_rf, const EhModel& model);

// RF power needed for a DC output x. Throws DomainError when x is at or
// above the saturation level.
double eh_inverse(double x, const EhModel& model);

// Sum_k ([|u^^H p_k| - nu ||p_k||]^+)^2 for one UEHR.
double eh_lower_bound(const CVec& u_hat, const ZfPrecoder& zf, const Vec& power, double nu);

// Sum_k |u^H p_k|^2 for a known channel.
double eh_received_power(const CVec& u, const ZfPrecoder& zf, const Vec& power);

// RF requirement Omega^-1(E_h), or +inf when E_h cannot be reached.
double eh_rf_requirement(const ScenarioConfig& cfg);

// R_sec / (varrho * sum p + P0).
double wcsee(double min_secrecy_rate, const Vec& power, double varrho, double p0);

// Everything the reward needs for one decision on one channel state.
struct Evaluation {
    SecrecyRates rates;
    double eh_lower_sum = 0.0;
    double eh_required = 0.0;
    bool eh_ok = false;
    double objective = 0.0;  // wcsee value, ignoring the EH gate
    double reward = 0.0;     // objective if eh_ok, else 0
    bool rank_deficient = false;
};

Evaluation evaluate_decision(const ChannelRealization& ch, const ScenarioConfig& cfg, const Vec& power);

}  // namespace wcsee

#endif
