// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/phy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcsee/error.hpp"

namespace wcsee {

ZfPrecoder zf_precoder(const CMat& hc) {
    const CMat gram = hc.adjoint() * hc;
    Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
    const Vec ev = eig.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    if (!(hi > 0.0) || !(lo > 0.0) || hi / lo > kMaxZfCondition) {
        throw RankDeficient("H_c^H H_c is singular or too ill-conditioned for zero forcing");
    }
    const CMat pbar = hc * gram.ldlt().solve(CMat::Identity(gram.rows(), gram.cols()));
    ZfPrecoder zf;
    zf.directions = pbar.colwise().normalized();
    zf.gains.resize(hc.cols());
    for (Eigen::Index k = 0; k < hc.cols(); ++k) {
        zf.gains(k) = std::norm(hc.col(k).dot(zf.directions.col(k)));
    }
    return zf;
}

Vec legit_sinr(const ZfPrecoder& zf, const Vec& power, double sigma2) {
    return power.cwiseProduct(zf.gains) / sigma2;
}

Vec leakage_gains(const CVec& u, const ZfPrecoder& zf) {
    // dot() conjugates its first argument: u.dot(p) = u^H p.
    Vec b(zf.directions.cols());
    for (Eigen::Index k = 0; k < b.size(); ++k) {
        b(k) = std::norm(u.dot(zf.directions.col(k)));
    }
    return b;
}

double eve_sinr(const CVec& u, const ZfPrecoder& zf, const Vec& power, double sigma2, int k) {
    const Vec b = leakage_gains(u, zf);
    double interference = 0.0;
    for (Eigen::Index l = 0; l < b.size(); ++l) {
        if (l != k) interference += power(l) * b(l);
    }
    return power(k) * b(k) / (interference + sigma2);
}

double worst_case_eve_sinr(const CVec& u_hat, const ZfPrecoder& zf, const Vec& power, double sigma2,
                           double nu, int k) {
    const Vec b = leakage_gains(u_hat, zf);
    double interference = 0.0;
    for (Eigen::Index l = 0; l < b.size(); ++l) {
        if (l == k) continue;
        const double amp = std::max(std::sqrt(b(l)) - nu, 0.0);
        interference += power(l) * amp * amp;
    }
    const double amp_k = std::sqrt(b(k)) + nu;
    return power(k) * amp_k * amp_k / (interference + sigma2);
}

SecrecyRates secrecy_rate(const std::vector<CVec>& u_hat, const ZfPrecoder& zf, const Vec& power,
                          double sigma2, double nu) {
    const auto k_n = zf.directions.cols();
    const Vec gamma = legit_sinr(zf, power, sigma2);
    SecrecyRates out;
    out.per_user.resize(k_n);
    out.eve_sinr = Vec::Zero(k_n);
    for (Eigen::Index k = 0; k < k_n; ++k) {
        for (const auto& u : u_hat) {
            out.eve_sinr(k) = std::max(out.eve_sinr(k),
                                       worst_case_eve_sinr(u, zf, power, sigma2, nu, static_cast<int>(k)));
        }
        const double r = std::log2(1.0 + gamma(k)) - std::log2(1.0 + out.eve_sinr(k));
        out.per_user(k) = std::max(r, 0.0);
    }
    out.min_rate = k_n > 0 ? out.per_user.minCoeff() : 0.0;
    return out;
}

double eh_dc(double p_rf, const EhModel& m) {
    return m.b2 / (m.k1 * (1.0 + std::exp(-m.b0 * (p_rf - m.b1)))) - m.k2;
}

double eh_inverse(double x, const EhModel& m) {
    const double arg = m.b2 / (m.k1 * (x + m.k2)) - 1.0;
    if (!(x + m.k2 > 0.0) || !(arg > 0.0)) {
        throw DomainError("harvesting target is outside the invertible range of the EH model");
    }
    return m.b1 - std::log(arg) / m.b0;
}

double eh_lower_bound(const CVec& u_hat, const ZfPrecoder& zf, const Vec& power, double nu) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < zf.directions.cols(); ++k) {
        const double sp = std::sqrt(std::max(power(k), 0.0));
        const double amp = std::max(std::abs(u_hat.dot(zf.directions.col(k))) * sp - nu * sp, 0.0);
        total += amp * amp;
    }
    return total;
}

double eh_received_power(const CVec& u, const ZfPrecoder& zf, const Vec& power) {
    return leakage_gains(u, zf).dot(power);
}

double eh_rf_requirement(const ScenarioConfig& cfg) {
    // No DC target, and zero RF input already yields (numerically) zero DC.
    if (cfg.e_h <= 0.0 && eh_dc(0.0, cfg.eh) >= -1e-12 * cfg.eh.saturation()) {
        return 0.0;
    }
    try {
        return eh_inverse(cfg.e_h, cfg.eh);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

double wcsee(double min_secrecy_rate, const Vec& power, double varrho, double p0) {
    return min_secrecy_rate / (varrho * power.sum() + p0);
}

Evaluation evaluate_decision(const ChannelRealization& ch, const ScenarioConfig& cfg, const Vec& power) {
    Evaluation ev;
    ev.eh_required = eh_rf_requirement(cfg);
    ZfPrecoder zf;
    try {
        zf = zf_precoder(ch.cascaded_ihr);
    } catch (const RankDeficient&) {
        ev.rank_deficient = true;
        ev.rates.per_user = Vec::Zero(ch.n_ihr());
        ev.rates.eve_sinr = Vec::Zero(ch.n_ihr());
        return ev;
    }
    ev.rates = secrecy_rate(ch.estimated_uehr, zf, power, cfg.sigma2, cfg.nu);
    for (const auto& u : ch.estimated_uehr) {
        ev.eh_lower_sum += eh_lower_bound(u, zf, power, cfg.nu);
    }
    // A vacuous requirement (J = 0 or E_h = 0) is met by construction.
    ev.eh_ok = ev.eh_required <= 0.0 || ch.n_uehr() == 0 || ev.eh_lower_sum >= ev.eh_required;
    ev.objective = wcsee(ev.rates.min_rate, power, cfg.varrho, cfg.p0);
    ev.reward = ev.eh_ok ? ev.objective : 0.0;
    return ev;
}

}  // namespace wcsee
