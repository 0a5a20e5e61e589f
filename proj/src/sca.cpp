// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "wcsee/error.hpp"
#include "wcsee/surrogates.hpp"

namespace wcsee::sca {

using convex::ConvexProgram;
using convex::ScalarTerm;
using convex::SmoothConstraint;
using convex::SolveStatus;

const char* to_string(BlockStatus s) {
    switch (s) {
        case BlockStatus::Converged: return "converged";
        case BlockStatus::MaxIter: return "max_iter";
        case BlockStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    const auto old = out.precision(12);
    out << "outer_iter,block,stage,inner_iter,objective,lambda,residual\n";
    for (const auto& r : rows) {
        out << r.outer_iter << ',' << r.block << ',' << r.stage << ',' << r.inner_iter << ',' << r.objective
            << ',' << r.lambda << ',' << r.residual << '\n';
    }
    out.precision(old);
}

namespace {

constexpr double kLn2 = std::numbers::ln2;

ScalarTerm neg_log2(const Vec& row, double offset) {
    ScalarTerm t;
    t.kind = ScalarTerm::Kind::NegLog;
    t.weight = 1.0 / kLn2;
    t.row = row;
    t.offset = offset;
    return t;
}

// A solve is usable when it converged, or stalled at a point that is still
// feasible to a loose tolerance.
bool usable(const convex::SolveResult& r, const ConvexProgram& prog) {
    if (r.status == SolveStatus::Optimal) return true;
    return r.status == SolveStatus::MaxIter && prog.max_violation(r.x) <= 1e-6;
}

std::vector<CVec> beams(const CMat& directions, const Vec& power) {
    std::vector<CVec> p(directions.cols());
    for (Eigen::Index l = 0; l < directions.cols(); ++l) {
        p[l] = std::sqrt(std::max(power(l), 0.0)) * directions.col(l);
    }
    return p;
}

// Real and imaginary parts of a + w^H s as affine rows over the stacked
// variable [Re s; Im s; ...] of length n.
struct AffineComplex {
    Vec re;
    Vec im;
    cplx a;
};

AffineComplex affine_complex(cplx a, const CVec& w, int n) {
    const auto m = w.size();
    AffineComplex f{Vec::Zero(n), Vec::Zero(n), a};
    for (Eigen::Index i = 0; i < m; ++i) {
        f.re(i) = w(i).real();
        f.re(m + i) = w(i).imag();
        f.im(i) = -w(i).imag();
        f.im(m + i) = w(i).real();
    }
    return f;
}

// Adds |a + w^H s|^2 to a constraint.
void add_abs2(SmoothConstraint& c, const AffineComplex& f) {
    c.quad += 2.0 * (f.re * f.re.transpose() + f.im * f.im.transpose());
    c.lin += 2.0 * (f.a.real() * f.re + f.a.imag() * f.im);
    c.constant += std::norm(f.a);
}

// Adds weight * Re{z0^* (a + w^H s)} to a constraint.
void add_re_conj(SmoothConstraint& c, cplx z0, const AffineComplex& f, double weight) {
    c.lin += weight * (z0.real() * f.re + z0.imag() * f.im);
    c.constant += weight * std::real(std::conj(z0) * f.a);
}

SmoothConstraint blank(int n, bool with_quad) {
    SmoothConstraint c;
    c.lin = Vec::Zero(n);
    if (with_quad) c.quad = Mat::Zero(n, n);
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact evaluation with fixed beam directions

SecrecyRates fixed_precoder_rates(const ChannelRealization& ch, const CMat& directions, const Vec& power,
                                  double sigma2) {
    const auto k_n = directions.cols();
    const auto p = beams(directions, power);
    SecrecyRates out;
    out.per_user = Vec::Zero(k_n);
    out.eve_sinr = Vec::Zero(k_n);
    for (Eigen::Index k = 0; k < k_n; ++k) {
        double sig = 0.0;
        double intf = 0.0;
        for (Eigen::Index l = 0; l < k_n; ++l) {
            const double g = std::norm(ch.cascaded_ihr.col(k).dot(p[l]));
            (l == k ? sig : intf) += g;
        }
        const double gamma = sig / (intf + sigma2);
        for (const auto& u : ch.estimated_uehr) {
            double e_sig = 0.0;
            double e_intf = 0.0;
            for (Eigen::Index l = 0; l < k_n; ++l) {
                const double g = std::norm(u.dot(p[l]));
                (l == k ? e_sig : e_intf) += g;
            }
            out.eve_sinr(k) = std::max(out.eve_sinr(k), e_sig / (e_intf + sigma2));
        }
        out.per_user(k) = std::max(std::log2(1.0 + gamma) - std::log2(1.0 + out.eve_sinr(k)), 0.0);
    }
    out.min_rate = k_n > 0 ? out.per_user.minCoeff() : 0.0;
    return out;
}

double fixed_precoder_eh(const ChannelRealization& ch, const CMat& directions, const Vec& power) {
    const auto p = beams(directions, power);
    double total = 0.0;
    for (const auto& u : ch.estimated_uehr) {
        for (const auto& pl : p) total += std::norm(u.dot(pl));
    }
    return total;
}

// ---------------------------------------------------------------------------
// Power block

PowerResult dinkelbach_power(const ChannelRealization& ch, const ZfPrecoder& zf, const ScenarioConfig& cfg,
                             const Vec& init, const ScaOptions& opts) {
    const int k_n = static_cast<int>(zf.gains.size());
    const int j_n = ch.n_uehr();
    const double pmax = cfg.p_max;
    const double s2 = cfg.sigma2;
    const Vec& a = zf.gains;
    std::vector<Vec> b;
    for (const auto& u : ch.estimated_uehr) b.push_back(leakage_gains(u, zf));
    Vec eh_gain = Vec::Zero(k_n);
    for (const auto& bj : b) eh_gain += bj;

    PowerResult res;
    res.power = Vec::Zero(k_n);
    const double req = eh_rf_requirement(cfg);
    const bool need_eh = req > 0.0 && j_n > 0;
    if (!std::isfinite(req)) return res;
    if (!(pmax > 0.0)) {
        if (!need_eh) res.status = BlockStatus::Converged;
        return res;
    }
    if (need_eh && pmax * eh_gain.maxCoeff() < req) return res;

    auto p_total = [&](const Vec& p) { return cfg.varrho * p.sum() + cfg.p0; };
    // min over (k, j) of log2(1 + gamma_k) - log2(1 + gamma_jk)
    auto zeta_of = [&](const Vec& p) {
        double z = std::numeric_limits<double>::infinity();
        for (int k = 0; k < k_n; ++k) {
            const double legit = std::log2(1.0 + p(k) * a(k) / s2);
            if (j_n == 0) z = std::min(z, legit);
            for (int j = 0; j < j_n; ++j) {
                const double all = b[j].dot(p);
                const double others = all - p(k) * b[j](k);
                z = std::min(z, legit + std::log2(1.0 + others / s2) - std::log2(1.0 + all / s2));
            }
        }
        return z;
    };

    Vec p_prev = init.size() == k_n ? Vec(init.cwiseMax(0.0)) : Vec::Constant(k_n, pmax / k_n);
    if (p_prev.sum() > pmax) p_prev *= pmax / p_prev.sum();
    if (need_eh && eh_gain.dot(p_prev) < req) {
        Eigen::Index best = 0;
        eh_gain.maxCoeff(&best);
        Vec corner = Vec::Zero(k_n);
        corner(best) = pmax;
        const double have = eh_gain.dot(p_prev);
        const double w = std::clamp((req * (1.0 + opts.margin) - have) / (pmax * eh_gain(best) - have), 0.0, 1.0);
        p_prev = (1.0 - w) * p_prev + w * corner;
    }
    double zeta_prev = zeta_of(p_prev);

    const int n = k_n + 1;
    const int iz = k_n;
    res.status = BlockStatus::MaxIter;
    for (int it = 1; it <= opts.max_inner; ++it) {
        const double lambda = std::max(0.0, zeta_prev / p_total(p_prev));
        ConvexProgram prog(n);
        Vec obj = Vec::Constant(n, lambda * cfg.varrho * pmax);
        obj(iz) = -1.0;
        prog.set_objective(obj);

        const Vec ph0 = p_prev / pmax;
        for (int k = 0; k < k_n; ++k) {
            for (int j = 0; j < std::max(j_n, 1); ++j) {
                SmoothConstraint c = blank(n, false);
                c.lin(iz) = 1.0;
                c.label = "secrecy";
                if (a(k) > 0.0) c.terms.push_back(neg_log2(pmax * a(k) / s2 * Vec::Unit(n, k), 1.0));
                if (j_n > 0) {
                    Vec others = Vec::Zero(n);
                    Vec all = Vec::Zero(n);
                    all.head(k_n) = pmax * b[j] / s2;
                    others.head(k_n) = all.head(k_n);
                    others(k) = 0.0;
                    if (others.cwiseAbs().maxCoeff() > 0.0) c.terms.push_back(neg_log2(others, 1.0));
                    const double s_norm = 1.0 + all.head(k_n).dot(ph0);
                    const Vec eta = all.head(k_n) / (kLn2 * s_norm);
                    c.lin.head(k_n) += eta;
                    c.constant += std::log2(s_norm) - eta.dot(ph0);
                }
                prog.add_smooth(std::move(c));
            }
        }
        if (need_eh) {
            Vec row = Vec::Zero(n);
            row.head(k_n) = -pmax * eh_gain / req;
            prog.add_affine(row, 1.0, "eh");
        }
        Vec budget = Vec::Zero(n);
        budget.head(k_n).setOnes();
        prog.add_affine(budget, -1.0, "budget");
        for (int k = 0; k < k_n; ++k) prog.set_bounds(k, 0.0, std::numeric_limits<double>::infinity());

        convex::SolverOptions so = opts.solver;
        Vec start(n);
        start.head(k_n) = ph0;
        start(iz) = zeta_prev - 1.0;
        so.start = start;
        const auto sol = convex::solve(prog, so);
        if (!usable(sol, prog)) {
            if (it == 1) res.status = BlockStatus::Infeasible;
            break;
        }
        const Vec p_new = pmax * sol.x.head(k_n).cwiseMax(0.0);
        const double zeta_new = sol.x(iz);

        TraceRow row;
        row.block = "power";
        row.inner_iter = it;
        row.objective = std::max(zeta_new, 0.0) / p_total(p_new);
        row.lambda = lambda;
        row.residual = std::max(0.0, prog.max_violation(sol.x));
        res.trace.push_back(row);

        const bool done = std::abs(zeta_new - zeta_prev) <= opts.eps;
        p_prev = p_new;
        zeta_prev = zeta_new;
        if (done) {
            res.status = BlockStatus::Converged;
            break;
        }
    }
    if (res.status == BlockStatus::Infeasible) return res;
    res.power = p_prev;
    res.zeta = zeta_prev;
    res.lambda = std::max(0.0, zeta_prev / p_total(p_prev));
    const auto rates = secrecy_rate(ch.estimated_uehr, zf, p_prev, s2, cfg.nu);
    res.wcsee = wcsee(rates.min_rate, p_prev, cfg.varrho, cfg.p0);
    return res;
}

// ---------------------------------------------------------------------------
// RIS block

namespace {

Vec phases_of(const CVec& s) {
    Vec th(s.size());
    for (Eigen::Index m = 0; m < s.size(); ++m) th(m) = wrap_phase(std::arg(s(m)));
    return th;
}

CVec unit_modulus(const CVec& s) {
    CVec out(s.size());
    for (Eigen::Index m = 0; m < s.size(); ++m) {
        const double r = std::abs(s(m));
        out(m) = r < 1e-9 ? cplx(1.0, 0.0) : s(m) / r;
    }
    return out;
}

}  // namespace

RisResult ris_phase_sca(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                        const ScenarioConfig& cfg, const CVec& s_init, const ScaOptions& opts) {
    const int m_n = ch.n_ris();
    const int k_n = static_cast<int>(zf.directions.cols());
    const int j_n = ch.n_uehr();
    const double s2 = cfg.sigma2;
    const double scale = 1.0 / std::sqrt(s2);

    RisResult res;
    res.s = s_init;
    res.s_relaxed = s_init;
    res.power = power;
    if (s_init.size() != m_n) throw DimensionMismatch("ris_phase_sca: s_init length differs from M");

    const auto p = beams(zf.directions, power);
    // t_kl^H s = g_k^H Theta G_b p_l, all scaled by 1/sigma.
    std::vector<std::vector<CVec>> t(k_n), te(j_n);
    std::vector<std::vector<cplx>> c(j_n);
    for (int l = 0; l < k_n; ++l) {
        const CVec v = ch.bs_ris * p[l];
        for (int k = 0; k < k_n; ++k) t[k].push_back(scale * ch.ihr[k].cwiseProduct(v.conjugate()));
        for (int j = 0; j < j_n; ++j) {
            te[j].push_back(scale * ch.uehr[j].cwiseProduct(v.conjugate()));
            c[j].push_back(scale * ch.direct[j].dot(p[l]));
        }
    }
    const double req = eh_rf_requirement(cfg);
    if (!std::isfinite(req)) return res;
    const bool need_eh = req > 0.0 && j_n > 0;
    const double req_n = req / s2;

    const int iz = 2 * m_n;
    auto irho = [&](int k) { return 2 * m_n + 1 + k; };
    auto irhoe = [&](int j, int k) { return 2 * m_n + 1 + k_n + j * k_n + k; };
    auto ife = [&](int k) { return 2 * m_n + 1 + k_n + j_n * k_n + k; };
    auto ixi = [&](int j, int k) { return 2 * m_n + 1 + 2 * k_n + j_n * k_n + j * k_n + k; };
    const int n = 2 * m_n + 1 + 2 * k_n + 2 * j_n * k_n;

    // Linearization state, seeded at a slightly shrunk s_init.
    CVec s0 = (1.0 - opts.margin) * s_init;
    Vec rho0(k_n), f0(k_n);
    Mat xi0(j_n, k_n), rhoe0(j_n, k_n);
    for (int k = 0; k < k_n; ++k) {
        double sig = 0.0;
        double intf = 0.0;
        for (int l = 0; l < k_n; ++l) (l == k ? sig : intf) += std::norm(t[k][l].dot(s0));
        rho0(k) = sig / (intf + 1.0) * (1.0 - opts.margin);
        if (!(rho0(k) > 0.0)) return res;
        f0(k) = opts.margin;
        for (int j = 0; j < j_n; ++j) {
            double e_intf = 0.0;
            for (int l = 0; l < k_n; ++l) {
                if (l != k) e_intf += std::norm(c[j][l] + te[j][l].dot(s0));
            }
            xi0(j, k) = (e_intf + 1.0) * (1.0 - opts.margin);
            const double e_sig = std::norm(c[j][k] + te[j][k].dot(s0));
            rhoe0(j, k) = e_sig / xi0(j, k) * (1.0 + opts.margin) + 1e-12;
            f0(k) = std::max(f0(k), std::log2(1.0 + rhoe0(j, k)) + opts.margin);
        }
    }
    double zeta_prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_n; ++k) zeta_prev = std::min(zeta_prev, std::log2(1.0 + rho0(k)) - f0(k));
    zeta_prev -= opts.margin;

    auto pack = [&](const CVec& s, double zeta) {
        Vec x = Vec::Zero(n);
        x.head(m_n) = s.real();
        x.segment(m_n, m_n) = s.imag();
        x(iz) = zeta;
        for (int k = 0; k < k_n; ++k) {
            x(irho(k)) = rho0(k);
            x(ife(k)) = f0(k);
            for (int j = 0; j < j_n; ++j) {
                x(irhoe(j, k)) = rhoe0(j, k);
                x(ixi(j, k)) = xi0(j, k);
            }
        }
        return x;
    };
    Vec x = pack(s0, zeta_prev);

    double penalty = opts.penalty_init;
    int stage = 0;
    bool any_solve = false;
    bool failed = false;
    res.status = BlockStatus::MaxIter;
    while (true) {
        bool stage_converged = false;
        for (int it = 1; it <= opts.max_inner; ++it) {
            ConvexProgram prog(n);
            Vec obj = Vec::Zero(n);
            obj(iz) = -1.0;
            obj.head(m_n) = -2.0 * penalty * s0.real();
            obj.segment(m_n, m_n) = -2.0 * penalty * s0.imag();
            prog.set_objective(obj);

            for (int k = 0; k < k_n; ++k) {
                // interference + 1 - Psi(s, rho_k) <= 0
                SmoothConstraint ca = blank(n, true);
                ca.label = "legit";
                ca.constant = 1.0;
                for (int l = 0; l < k_n; ++l) {
                    if (l != k) add_abs2(ca, affine_complex(0.0, t[k][l], n));
                }
                const cplx z0 = t[k][k].dot(s0);
                add_re_conj(ca, z0, affine_complex(0.0, t[k][k], n), -2.0 / rho0(k));
                ca.lin(irho(k)) += std::norm(z0) / (rho0(k) * rho0(k));
                prog.add_smooth(std::move(ca));

                // zeta <= log2(1 + rho_k) - f_E,k
                SmoothConstraint ce = blank(n, false);
                ce.label = "rate";
                ce.lin(iz) = 1.0;
                ce.lin(ife(k)) = 1.0;
                ce.terms.push_back(neg_log2(Vec::Unit(n, irho(k)), 1.0));
                prog.add_smooth(std::move(ce));

                for (int j = 0; j < j_n; ++j) {
                    // |c + t^H s|^2 <= bilinear_lb(xi, rho_E)
                    SmoothConstraint cb = blank(n, true);
                    cb.label = "eve";
                    add_abs2(cb, affine_complex(c[j][k], te[j][k], n));
                    // The bound is applied to (w xi, rho_E / w), which leaves the
                    // product unchanged but balances the two factors at the point.
                    const double w = std::sqrt(std::max(rhoe0(j, k), 1e-12) / xi0(j, k));
                    const double mid = w * xi0(j, k) + rhoe0(j, k) / w;
                    const int a_i = ixi(j, k);
                    const int b_i = irhoe(j, k);
                    cb.quad(a_i, a_i) += 0.5 * w * w;
                    cb.quad(b_i, b_i) += 0.5 / (w * w);
                    cb.quad(a_i, b_i) -= 0.5;
                    cb.quad(b_i, a_i) -= 0.5;
                    cb.lin(a_i) -= 0.5 * mid * w;
                    cb.lin(b_i) -= 0.5 * mid / w;
                    cb.constant += 0.25 * mid * mid;
                    prog.add_smooth(std::move(cb));

                    // xi <= sum_{l != k} quad_lb + 1
                    SmoothConstraint cc = blank(n, false);
                    cc.label = "eve_interference";
                    cc.lin(a_i) = 1.0;
                    cc.constant = -1.0;
                    for (int l = 0; l < k_n; ++l) {
                        if (l == k) continue;
                        const auto f = affine_complex(c[j][l], te[j][l], n);
                        const cplx zl = c[j][l] + te[j][l].dot(s0);
                        add_re_conj(cc, zl, f, -2.0);
                        cc.constant += std::norm(zl);
                    }
                    prog.add_smooth(std::move(cc));

                    // 1 - exp2_lb(f_E) + rho_E <= 0
                    const double e0 = std::exp2(f0(k));
                    Vec row = Vec::Zero(n);
                    row(b_i) = 1.0;
                    row(ife(k)) = -e0 * kLn2;
                    prog.add_affine(row, 1.0 - e0 * (1.0 - kLn2 * f0(k)), "eve_log");
                }
            }
            if (need_eh) {
                SmoothConstraint ch_eh = blank(n, false);
                ch_eh.label = "eh";
                ch_eh.constant = 1.0;
                for (int j = 0; j < j_n; ++j) {
                    for (int k = 0; k < k_n; ++k) {
                        const cplx zk = c[j][k] + te[j][k].dot(s0);
                        add_re_conj(ch_eh, zk, affine_complex(c[j][k], te[j][k], n), -2.0 / req_n);
                        ch_eh.constant += std::norm(zk) / req_n;
                    }
                }
                prog.add_smooth(std::move(ch_eh));
            }
            for (int m = 0; m < m_n; ++m) {
                Mat q = Mat::Zero(n, n);
                q(m, m) = 2.0;
                q(m_n + m, m_n + m) = 2.0;
                prog.add_quadratic(q, Vec::Zero(n), -1.0, "modulus");
            }
            const double inf = std::numeric_limits<double>::infinity();
            for (int k = 0; k < k_n; ++k) {
                prog.set_bounds(irho(k), 0.0, inf);
                prog.set_bounds(ife(k), 0.0, inf);
                for (int j = 0; j < j_n; ++j) prog.set_bounds(irhoe(j, k), 0.0, inf);
            }

            convex::SolverOptions so = opts.solver;
            so.start = x;
            const auto sol = convex::solve(prog, so);
            if (!usable(sol, prog)) {
                failed = true;
                break;
            }
            any_solve = true;
            x = sol.x;
            CVec s(m_n);
            for (int mm = 0; mm < m_n; ++mm) s(mm) = cplx(x(mm), x(m_n + mm));
            s0 = s;
            const double zeta = x(iz);
            for (int k = 0; k < k_n; ++k) {
                rho0(k) = std::max(x(irho(k)), 1e-12);
                f0(k) = x(ife(k));
                for (int j = 0; j < j_n; ++j) {
                    xi0(j, k) = x(ixi(j, k));
                    rhoe0(j, k) = x(irhoe(j, k));
                }
            }

            TraceRow row;
            row.block = "ris";
            row.stage = stage;
            row.inner_iter = it;
            row.objective = zeta + penalty * s.squaredNorm();
            row.lambda = penalty;
            row.residual = std::max(0.0, prog.max_violation(sol.x));
            res.trace.push_back(row);

            const bool done = std::abs(zeta - zeta_prev) <= opts.eps;
            zeta_prev = zeta;
            if (done) {
                stage_converged = true;
                break;
            }
        }
        if (failed) break;
        double gap = 0.0;
        for (int mm = 0; mm < m_n; ++mm) gap = std::max(gap, 1.0 - std::abs(s0(mm)));
        res.max_modulus_gap = gap;
        if (gap > opts.modulus_tol && penalty < opts.penalty_max) {
            penalty = std::min(penalty * opts.penalty_factor, opts.penalty_max);
            ++stage;
            continue;
        }
        res.status = stage_converged ? BlockStatus::Converged : BlockStatus::MaxIter;
        break;
    }
    if (!any_solve) {
        res.status = BlockStatus::Infeasible;
        return res;
    }
    if (failed) res.status = BlockStatus::MaxIter;

    res.penalty = penalty;
    res.zeta = zeta_prev;
    res.s_relaxed = s0;
    const CVec s_proj = unit_modulus(s0);

    ChannelRealization trial = ch;
    update_channels(trial, cfg, ch.q, phases_of(s_proj));
    ChannelRealization incumbent = ch;
    update_channels(incumbent, cfg, ch.q, phases_of(unit_modulus(s_init)));
    const double rate_new = fixed_precoder_rates(trial, zf.directions, power, s2).min_rate;
    const double rate_old = fixed_precoder_rates(incumbent, zf.directions, power, s2).min_rate;
    const ChannelRealization* chosen = &trial;
    res.s = s_proj;
    res.rate = rate_new;
    if (rate_new < rate_old) {
        res.s = unit_modulus(s_init);
        res.rate = rate_old;
        res.kept_incumbent = true;
        chosen = &incumbent;
    }
    if (need_eh) {
        const double eh = fixed_precoder_eh(*chosen, zf.directions, power);
        if (eh < req) {
            const double factor = eh > 0.0 ? req / eh : std::numeric_limits<double>::infinity();
            if (std::isfinite(factor) && factor * power.sum() <= cfg.p_max) {
                res.power = power * factor;
                res.power_rescaled = true;
                res.rate = fixed_precoder_rates(*chosen, zf.directions, res.power, s2).min_rate;
            } else {
                res.eh_broken = true;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// UAV block

namespace {

struct FrozenGains {
    Mat a;      // A~_kl
    CMat d;     // D~_jl
    CMat c;     // c_jl
};

FrozenGains frozen_gains(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                         const ScenarioConfig& cfg) {
    const auto k_n = zf.directions.cols();
    const int j_n = ch.n_uehr();
    const CVec s = reflection_vector(ch.theta);
    const auto p = beams(zf.directions, power);
    FrozenGains g{Mat::Zero(k_n, k_n), CMat::Zero(j_n, k_n), CMat::Zero(j_n, k_n)};
    for (Eigen::Index l = 0; l < k_n; ++l) {
        const CVec v = s.cwiseProduct(ch.bs_ris_tilde * p[l]);
        for (Eigen::Index k = 0; k < k_n; ++k) {
            g.a(k, l) = cfg.rho0 * cfg.rho0 * std::norm(ch.ihr_tilde[k].dot(v));
        }
        for (int j = 0; j < j_n; ++j) {
            g.d(j, l) = cfg.rho0 * ch.uehr_tilde[j].dot(v);
            g.c(j, l) = ch.direct[j].dot(p[l]);
        }
    }
    return g;
}

}  // namespace

double uav_frozen_min_rate(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                           const ScenarioConfig& cfg, const Position2D& q) {
    const auto g = frozen_gains(ch, zf, power, cfg);
    const double db = distance3d(q, cfg.bs, cfg.height);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < g.a.rows(); ++k) {
        const double dk = distance3d(q, ch.placement.ihr[k], cfg.height);
        const double intf = g.a.row(k).sum() - g.a(k, k);
        const double gamma = g.a(k, k) / (intf + cfg.sigma2 * std::pow(dk * db, cfg.alpha));
        best = std::min(best, std::log2(1.0 + gamma));
    }
    return best;
}

UavResult uav_location_sca(const ChannelRealization& ch, const ZfPrecoder& zf, const Vec& power,
                           const ScenarioConfig& cfg, const Position2D& q_init, const ScaOptions& opts) {
    const int k_n = static_cast<int>(zf.directions.cols());
    const int j_n = ch.n_uehr();
    const double s2 = cfg.sigma2;
    const double h = cfg.height;
    const auto& reg = cfg.region;

    UavResult res;
    res.q = q_init;
    const Position2D origin = project_uav(q_init, reg);
    const double wx = reg.x_max - reg.x_min;
    const double wy = reg.y_max - reg.y_min;
    if (wx <= 1e-12 && wy <= 1e-12) {
        res.q = origin;
        res.status = BlockStatus::Converged;
        res.zeta = uav_frozen_min_rate(ch, zf, power, cfg, origin);
        res.trace.push_back({0, "uav", 0, 1, res.zeta, 0.0, 0.0});
        return res;
    }
    const double len = std::max(1.0, 0.5 * std::hypot(wx, wy));

    const auto g = frozen_gains(ch, zf, power, cfg);
    const double req = eh_rf_requirement(cfg);
    if (!std::isfinite(req)) return res;
    const bool need_eh = req > 0.0 && j_n > 0;

    const double db0 = distance3d(origin, cfg.bs, h);
    Vec y_scale_k(k_n), gain_k(k_n), intf_k(k_n);
    for (int k = 0; k < k_n; ++k) {
        y_scale_k(k) = std::pow(distance3d(origin, ch.placement.ihr[k], h) * db0, cfg.alpha);
        gain_k(k) = g.a(k, k) / (s2 * y_scale_k(k));
        intf_k(k) = (g.a.row(k).sum() - g.a(k, k)) / (s2 * y_scale_k(k));
        if (!(gain_k(k) > 0.0)) return res;
    }
    Vec y_scale_j(j_n), eh_a(j_n), eh_b(j_n);
    for (int j = 0; j < j_n; ++j) {
        y_scale_j(j) = std::pow(distance3d(origin, ch.placement.uehr[j], h) * db0, cfg.alpha);
        const double u = g.c.row(j).squaredNorm();
        const double s = g.d.row(j).squaredNorm();
        double t = 0.0;
        for (int l = 0; l < k_n; ++l) t += std::real(std::conj(g.c(j, l)) * g.d(j, l));
        if (s > 0.0) {
            const auto lb = sur::eh_quadratic_lb(u, s, t, 2.0 / s);
            eh_a(j) = lb.a;
            eh_b(j) = lb.b;
        } else {
            eh_a(j) = u;
            eh_b(j) = 0.0;
        }
    }

    const int iz = 2;
    auto ir = [&](int k) { return 3 + k; };
    auto iyk = [&](int k) { return 3 + k_n + k; };
    auto iyj = [&](int j) { return 3 + 2 * k_n + j; };
    const int n = 3 + 2 * k_n + j_n;

    Position2D q_prev = origin;
    Vec r0(k_n), yk0 = Vec::Constant(k_n, 1.0 + opts.margin), yj0 = Vec::Constant(j_n, 1.0 + opts.margin);
    double zeta_prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_n; ++k) {
        r0(k) = (1.0 - opts.margin) / (intf_k(k) + yk0(k));
        zeta_prev = std::min(zeta_prev, std::log2(1.0 + gain_k(k) * r0(k)));
    }
    zeta_prev -= opts.margin;
    Vec x = Vec::Zero(n);
    x(iz) = zeta_prev;
    for (int k = 0; k < k_n; ++k) {
        x(ir(k)) = r0(k);
        x(iyk(k)) = yk0(k);
    }
    for (int j = 0; j < j_n; ++j) x(iyj(j)) = yj0(j);

    // AGM(d_w(q), d_b(q)) / Y^(1/alpha) - y^(1/alpha) <= 0 around q_prev.
    auto distance_constraint = [&](const Position2D& w, double y_scale, int iy) {
        const double a0 = distance3d(q_prev, w, h);
        const double b0 = distance3d(q_prev, cfg.bs, h);
        const double norm = 1.0 / std::pow(y_scale, 1.0 / cfg.alpha);
        SmoothConstraint c = blank(n, true);
        c.label = "distance";
        auto add_sq = [&](const Position2D& pt, double weight) {
            const double ox = origin.x - pt.x;
            const double oy = origin.y - pt.y;
            c.quad(0, 0) += weight * 2.0 * len * len;
            c.quad(1, 1) += weight * 2.0 * len * len;
            c.lin(0) += weight * 2.0 * len * ox;
            c.lin(1) += weight * 2.0 * len * oy;
            c.constant += weight * (ox * ox + oy * oy + h * h);
        };
        add_sq(w, 0.5 * b0 / a0 * norm);
        add_sq(cfg.bs, 0.5 * a0 / b0 * norm);
        ScalarTerm tpow;
        tpow.kind = ScalarTerm::Kind::NegPow;
        tpow.weight = 1.0;
        tpow.row = Vec::Unit(n, iy);
        tpow.exponent = 1.0 / cfg.alpha;
        c.terms.push_back(tpow);
        return c;
    };

    res.status = BlockStatus::MaxIter;
    bool any_solve = false;
    for (int it = 1; it <= opts.max_inner; ++it) {
        ConvexProgram prog(n);
        prog.set_objective(-Vec::Unit(n, iz));
        for (int k = 0; k < k_n; ++k) {
            SmoothConstraint cr = blank(n, false);
            cr.label = "rate";
            cr.lin(iz) = 1.0;
            cr.terms.push_back(neg_log2(gain_k(k) * Vec::Unit(n, ir(k)), 1.0));
            prog.add_smooth(std::move(cr));

            SmoothConstraint cs = blank(n, true);
            cs.label = "sinr";
            cs.quad(ir(k), ir(k)) = yk0(k) / r0(k);
            cs.quad(iyk(k), iyk(k)) = r0(k) / yk0(k);
            cs.lin(ir(k)) = intf_k(k);
            cs.constant = -1.0;
            prog.add_smooth(std::move(cs));

            prog.add_smooth(distance_constraint(ch.placement.ihr[k], y_scale_k(k), iyk(k)));
        }
        for (int j = 0; j < j_n; ++j) {
            prog.add_smooth(distance_constraint(ch.placement.uehr[j], y_scale_j(j), iyj(j)));
        }
        if (need_eh) {
            Vec row = Vec::Zero(n);
            double constant = 1.0;
            for (int j = 0; j < j_n; ++j) {
                const double bj = eh_b(j) / y_scale_j(j);
                constant -= (eh_a(j) + bj * 2.0 / yj0(j)) / req;
                row(iyj(j)) = bj / (yj0(j) * yj0(j)) / req;
            }
            prog.add_affine(row, constant, "eh");
        }
        const double lo_x = (reg.x_min - origin.x) / len;
        const double hi_x = (reg.x_max - origin.x) / len;
        const double lo_y = (reg.y_min - origin.y) / len;
        const double hi_y = (reg.y_max - origin.y) / len;
        if (wx <= 1e-12) {
            prog.add_equality(Vec::Unit(n, 0), 0.0);
        } else {
            prog.set_bounds(0, lo_x, hi_x);
        }
        if (wy <= 1e-12) {
            prog.add_equality(Vec::Unit(n, 1), 0.0);
        } else {
            prog.set_bounds(1, lo_y, hi_y);
        }

        convex::SolverOptions so = opts.solver;
        so.start = x;
        const auto sol = convex::solve(prog, so);
        if (!usable(sol, prog)) break;
        any_solve = true;
        x = sol.x;
        q_prev = project_uav({origin.x + len * x(0), origin.y + len * x(1)}, reg);
        for (int k = 0; k < k_n; ++k) {
            r0(k) = std::max(x(ir(k)), 1e-12);
            yk0(k) = x(iyk(k));
        }
        for (int j = 0; j < j_n; ++j) yj0(j) = x(iyj(j));
        const double zeta = x(iz);

        TraceRow row;
        row.block = "uav";
        row.inner_iter = it;
        row.objective = zeta;
        row.residual = std::max(0.0, prog.max_violation(sol.x));
        res.trace.push_back(row);

        const bool done = std::abs(zeta - zeta_prev) <= opts.eps;
        zeta_prev = zeta;
        if (done) {
            res.status = BlockStatus::Converged;
            break;
        }
    }
    if (!any_solve) {
        res.status = BlockStatus::Infeasible;
        return res;
    }
    res.q = q_prev;
    res.zeta = zeta_prev;
    return res;
}

// ---------------------------------------------------------------------------
// Outer loop

BcdResult bcd_outer(const ChannelRealization& start, const ScenarioConfig& cfg, const BcdInit& init,
                    const ScaOptions& opts) {
    ChannelRealization ch = start;
    const int k_n = ch.n_ihr();
    BcdResult res;
    res.power = init.power.size() == k_n ? init.power : Vec::Constant(k_n, cfg.p_max / k_n);
    res.theta = ch.theta;
    res.q = ch.q;

    for (int pass = 1; pass <= opts.max_outer; ++pass) {
        ZfPrecoder zf;
        try {
            zf = zf_precoder(ch.cascaded_ihr);
        } catch (const RankDeficient&) {
            res.rank_deficient = true;
            break;
        }
        auto tag = [&](std::vector<TraceRow> rows) {
            for (auto& r : rows) {
                r.outer_iter = pass;
                res.trace.push_back(r);
            }
        };

        const auto pw = dinkelbach_power(ch, zf, cfg, res.power, opts);
        tag(pw.trace);
        if (pw.status != BlockStatus::Infeasible) res.power = pw.power;

        const auto ris = ris_phase_sca(ch, zf, res.power, cfg, reflection_vector(res.theta), opts);
        tag(ris.trace);
        if (ris.status != BlockStatus::Infeasible) {
            res.power = ris.power;
            res.theta = phases_of(ris.s);
            res.eh_broken = ris.eh_broken;
            update_channels(ch, cfg, res.q, res.theta);
        }

        const auto uav = uav_location_sca(ch, zf, res.power, cfg, res.q, opts);
        tag(uav.trace);
        if (uav.status != BlockStatus::Infeasible) {
            res.q = uav.q;
            update_channels(ch, cfg, res.q, res.theta);
        }

        const auto ev = evaluate_decision(ch, cfg, res.power);
        res.rank_deficient = ev.rank_deficient;
        res.eh_ok = ev.eh_ok;
        res.eta.push_back(ev.objective);
        res.trace.push_back({pass, "outer", 0, 0, ev.objective, 0.0, 0.0});
        res.passes = pass;
        if (ev.rank_deficient) break;
        const auto m = res.eta.size();
        if (m >= 2 && std::abs(res.eta[m - 1] - res.eta[m - 2]) <= opts.outer_eps) break;
    }
    return res;
}

}  // namespace wcsee::sca
