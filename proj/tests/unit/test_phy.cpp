// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "wcsee/error.hpp"
#include "wcsee/phy.hpp"

using namespace wcsee;

TEST(Zf, OrthonormalColumnsAreTheirOwnDirections) {
    RngStream rng(1);
    const CMat q = Eigen::HouseholderQR<CMat>(test::random_cmat(6, 6, rng)).householderQ();
    const CMat hc = q.leftCols(4);
    const ZfPrecoder zf = zf_precoder(hc);
    EXPECT_LE((zf.directions - hc).norm(), 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(zf.gains(k), 1.0, 1e-12);
}

TEST(Zf, OrthogonalityOnRandomDraws) {
    RngStream rng(2);
    for (int t = 0; t < 100; ++t) {
        const CMat hc = test::random_cmat(6, 4, rng);
        const ZfPrecoder zf = zf_precoder(hc);
        const CMat cross = hc.adjoint() * zf.directions;
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                if (i != k) off = std::max(off, std::abs(cross(i, k)));
        EXPECT_LE(off / cross.diagonal().cwiseAbs().minCoeff(), 1e-10);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(zf.directions.col(k).norm(), 1.0, 1e-12);
    }
}

TEST(Zf, SingleUserIsMatchedFilter) {
    RngStream rng(3);
    const CMat hc = test::random_cmat(4, 1, rng);
    const ZfPrecoder zf = zf_precoder(hc);
    EXPECT_LE((zf.directions.col(0) - hc.col(0).normalized()).norm(), 1e-12);
    EXPECT_NEAR(zf.gains(0), hc.col(0).squaredNorm(), 1e-12 * hc.col(0).squaredNorm());
}

TEST(Zf, RankDeficientThrows) {
    RngStream rng(4);
    CMat hc = test::random_cmat(4, 2, rng);
    hc.col(1) = 2.0 * hc.col(0);
    EXPECT_THROW(zf_precoder(hc), RankDeficient);
}

TEST(Sinr, LegitimateExamples) {
    ZfPrecoder zf;
    zf.gains = Vec::Constant(2, 1e-3);
    Vec p(2);
    p << 1.0, 0.0;
    const Vec g = legit_sinr(zf, p, 1e-3);
    EXPECT_DOUBLE_EQ(g(0), 1.0);
    EXPECT_EQ(g(1), 0.0);
}

TEST(Sinr, ZfFormMatchesFullSum) {
    RngStream rng(5);
    const CMat hc = test::random_cmat(6, 4, rng);
    const ZfPrecoder zf = zf_precoder(hc);
    Vec p(4);
    p << 0.3, 0.1, 0.05, 0.2;
    const double s2 = 1e-2;
    const Vec g = legit_sinr(zf, p, s2);
    for (int k = 0; k < 4; ++k) {
        double interf = 0.0;
        for (int l = 0; l < 4; ++l)
            if (l != k) interf += p(l) * std::norm(hc.col(k).dot(zf.directions.col(l)));
        const double direct = p(k) * std::norm(hc.col(k).dot(zf.directions.col(k))) / (interf + s2);
        EXPECT_LE(test::rel_err(direct, g(k)), 1e-9);
    }
}

TEST(Sinr, EveExamples) {
    RngStream rng(6);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(4, 2, rng));
    const CVec u = test::random_cvec(4, rng);
    Vec only0(2);
    only0 << 0.5, 0.0;
    EXPECT_NEAR(eve_sinr(u, zf, only0, 1e-3, 0), 0.5 * std::norm(u.dot(zf.directions.col(0))) / 1e-3, 1e-9);

    // Orthogonal complement of both directions.
    const CMat basis = Eigen::HouseholderQR<CMat>(zf.directions).householderQ();
    const CVec perp = basis.col(3);
    Vec p(2);
    p << 0.5, 0.5;
    EXPECT_NEAR(eve_sinr(perp, zf, p, 1e-3, 0), 0.0, 1e-20);

    for (int k = 0; k < 2; ++k) {
        const cplx a = u.adjoint() * (std::sqrt(p(k)) * zf.directions.col(k));
        const cplx b = u.adjoint() * (std::sqrt(p(1 - k)) * zf.directions.col(1 - k));
        EXPECT_LE(test::rel_err(std::norm(a) / (std::norm(b) + 1e-3), eve_sinr(u, zf, p, 1e-3, k)), 1e-12);
    }
}

TEST(WorstCase, ZeroNuIsExact) {
    RngStream rng(7);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(6, 4, rng));
    const CVec u = test::random_cvec(6, rng);
    const Vec p = Vec::Constant(4, 0.25);
    for (int k = 0; k < 4; ++k)
        EXPECT_LE(test::rel_err(worst_case_eve_sinr(u, zf, p, 1e-3, 0.0, k), eve_sinr(u, zf, p, 1e-3, k)), 1e-12);
}

TEST(WorstCase, HingeSaturates) {
    RngStream rng(8);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(6, 4, rng));
    const CVec u = test::random_cvec(6, rng);
    const Vec p = Vec::Constant(4, 0.25);
    const double nu = std::sqrt(leakage_gains(u, zf).maxCoeff()) + 1.0;
    const double b0 = leakage_gains(u, zf)(0);
    const double want = 0.25 * std::pow(std::sqrt(b0) + nu, 2) / 1e-3;
    EXPECT_LE(test::rel_err(worst_case_eve_sinr(u, zf, p, 1e-3, nu, 0), want), 1e-12);
}

TEST(WorstCase, DominatesSampledChannels) {
    RngStream rng(9);
    int violations = 0;
    for (int t = 0; t < 20; ++t) {
        const ZfPrecoder zf = zf_precoder(test::random_cmat(6, 4, rng));
        const CVec u_hat = test::random_cvec(6, rng);
        Vec p(4);
        for (int k = 0; k < 4; ++k) p(k) = rng.uniform(0.0, 1.0);
        const double nu = rng.uniform(0.01, 0.3);
        for (int s = 0; s < 500; ++s) {
            const CVec u = u_hat + test::ball_sample(6, nu, rng);
            for (int k = 0; k < 4; ++k)
                if (eve_sinr(u, zf, p, 1e-2, k) > worst_case_eve_sinr(u_hat, zf, p, 1e-2, nu, k)) ++violations;
            if (eh_received_power(u, zf, p) < eh_lower_bound(u_hat, zf, p, nu)) ++violations;
        }
    }
    EXPECT_EQ(violations, 0);
}

TEST(Secrecy, HingeAndNoEavesdropper) {
    RngStream rng(10);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(4, 2, rng));
    const Vec p = Vec::Constant(2, 0.5);
    const SecrecyRates none = secrecy_rate({}, zf, p, 1e-3, 0.0);
    const Vec g = legit_sinr(zf, p, 1e-3);
    for (int k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(none.per_user(k), std::log2(1.0 + g(k)));

    const CMat q = Eigen::HouseholderQR<CMat>(test::random_cmat(4, 4, rng)).householderQ();
    const ZfPrecoder ortho = zf_precoder(q.leftCols(2));
    const CVec loud = 1e3 * ortho.directions.col(0);
    const SecrecyRates jammed = secrecy_rate({loud}, ortho, p, 1e-3, 0.0);
    EXPECT_EQ(jammed.per_user(0), 0.0);
    EXPECT_EQ(jammed.min_rate, 0.0);
}

TEST(Secrecy, InternalMaxMatchesBruteForce) {
    RngStream rng(11);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(6, 4, rng));
    std::vector<CVec> us;
    for (int j = 0; j < 3; ++j) us.push_back(0.05 * test::random_cvec(6, rng));
    const Vec p = Vec::Constant(4, 0.25);
    const SecrecyRates r = secrecy_rate(us, zf, p, 1e-3, 0.01);
    for (int k = 0; k < 4; ++k) {
        double worst = 0.0;
        for (const auto& u : us) worst = std::max(worst, worst_case_eve_sinr(u, zf, p, 1e-3, 0.01, k));
        EXPECT_EQ(r.eve_sinr(k), worst);
    }
}

TEST(Secrecy, NonIncreasingInNu) {
    RngStream rng(12);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(6, 4, rng));
    std::vector<CVec> us{0.05 * test::random_cvec(6, rng), 0.05 * test::random_cvec(6, rng)};
    const Vec p = Vec::Constant(4, 0.25);
    double prev = secrecy_rate(us, zf, p, 1e-3, 0.0).min_rate;
    for (double nu = 0.005; nu <= 0.2; nu += 0.005) {
        const double r = secrecy_rate(us, zf, p, 1e-3, nu).min_rate;
        EXPECT_LE(r, prev);
        prev = r;
    }
}

TEST(Eh, InverseRoundTripAndMidpoint) {
    const EhModel m = EhModel::defaults();
    EXPECT_NEAR(eh_inverse(eh_dc(m.b1, m), m), m.b1, 1e-12);
    const double sat = m.saturation();
    for (int i = 1; i < 1000; ++i) {
        const double x = sat * i / 1000.0;
        EXPECT_LE(test::rel_err(eh_dc(eh_inverse(x, m), m), x), 1e-9);
    }
    const double near_top = sat * (1.0 - 1e-9);
    EXPECT_TRUE(std::isfinite(eh_inverse(near_top, m)));
    EXPECT_THROW(eh_inverse(sat, m), DomainError);
    EXPECT_THROW(eh_inverse(2 * sat, m), DomainError);
}

TEST(Eh, ZeroInputGivesZeroOutputAndSaturates) {
    const EhModel m = EhModel::defaults();
    EXPECT_NEAR(eh_dc(0.0, m), 0.0, 1e-15);
    EXPECT_NEAR(eh_dc(10.0, m), m.saturation(), 1e-15);
    double prev = eh_dc(0.0, m);
    for (int i = 1; i <= 1000; ++i) {
        const double v = eh_dc(0.05 * i / 1000.0, m);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Eh, LowerBoundExamples) {
    RngStream rng(13);
    const ZfPrecoder zf = zf_precoder(test::random_cmat(4, 2, rng));
    const CVec u = test::random_cvec(4, rng);
    const Vec p = Vec::Constant(2, 0.4);
    EXPECT_NEAR(eh_lower_bound(u, zf, p, 0.0), eh_received_power(u, zf, p), 1e-12);
    EXPECT_EQ(eh_lower_bound(u, zf, Vec::Zero(2), 0.05), 0.0);
}

TEST(Objective, Examples) {
    Vec p(2);
    p << 0.1, 0.2;
    EXPECT_EQ(wcsee::wcsee(0.0, p, 2.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(wcsee::wcsee(3.0, Vec::Zero(2), 2.0, 1.5), 2.0);
    EXPECT_LT(wcsee::wcsee(3.0, 2 * p, 2.0, 1.0), wcsee::wcsee(3.0, p, 2.0, 1.0));
}

TEST(Objective, PhaseRotationInvariant) {
    const auto cfg = test::desk_scenario(4, 2, 2, 6);
    auto ch = test::draw(cfg, 14);
    const Vec p = Vec::Constant(2, cfg.p_max / 2);
    const double base = evaluate_decision(ch, cfg, p).objective;
    const cplx rot = std::polar(1.0, 0.77);
    ch.cascaded_ihr *= rot;
    for (auto& u : ch.estimated_uehr) u *= rot;
    EXPECT_LE(test::rel_err(evaluate_decision(ch, cfg, p).objective, base), 1e-12);
}
