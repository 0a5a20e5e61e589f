// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wcsee/error.hpp"
#include "wcsee/surrogates.hpp"

using namespace wcsee;

TEST(Surrogates, TangentAndOneSided) {
    for (const auto& c : test::surrogate_suite(21, 1000)) {
        SCOPED_TRACE(c.name);
        EXPECT_LE(c.tangency, 1e-9);
        EXPECT_EQ(c.violations, 0);
        EXPECT_EQ(c.samples, 1000);
    }
}

TEST(Surrogates, LogUpperWithZeroGainsIsConstant) {
    const auto f = sur::log_upper(Vec::Constant(3, 0.2), Vec::Zero(3), 1e-3);
    EXPECT_DOUBLE_EQ(f(Vec::Constant(3, 5.0)), std::log2(1e-3));
}

TEST(Surrogates, QuadOverLinWithZeroDirectionVanishes) {
    RngStream rng(2);
    const auto f = sur::quad_over_lin_lb(CVec::Zero(3), test::random_cvec(3, rng), 0.7);
    EXPECT_EQ(f(test::random_cvec(3, rng), 2.0), 0.0);
}

TEST(Surrogates, BilinearExactOnParallelLine) {
    EXPECT_NEAR(sur::bilinear_lb(1.5, 0.5, 1.0, 1.0), 0.75, 1e-15);
    // x0 + y0 = 0 leaves -(x - y)^2 / 4.
    EXPECT_DOUBLE_EQ(sur::bilinear_lb(2.0, -1.0, 1.0, -1.0), -0.25 * 9.0);
}

TEST(Surrogates, QuadLbConstantCase) {
    RngStream rng(3);
    const auto f = sur::quad_lb(cplx(0.6, -0.8), CVec::Zero(2), test::random_cvec(2, rng));
    EXPECT_NEAR(f(test::random_cvec(2, rng)), 1.0, 1e-15);
}

TEST(Surrogates, Exp2ClassicInequality) {
    for (double x = -5; x <= 5; x += 0.01) EXPECT_LE(sur::exp2_lb(x, 0.0), std::exp2(x) + 1e-15);
    EXPECT_DOUBLE_EQ(sur::exp2_lb(2.0, 0.0), 1.0 + 2.0 * std::log(2.0));
}

TEST(Surrogates, AgmExactAlongRay) {
    EXPECT_NEAR(sur::agm_ub(3.0, 3.0, 1.0, 1.0), 9.0, 1e-14);
    EXPECT_NEAR(sur::agm_ub(2.0, 6.0, 1.0, 3.0), 12.0, 1e-14);
    EXPECT_THROW(sur::agm_ub(1, 1, 0.0, 1.0), DomainError);
}

TEST(Surrogates, InverseAffineClassic) {
    for (double y = 0.01; y <= 10.0; y += 0.01) EXPECT_LE(sur::inv_affine_lb(y, 1.0), 1.0 / y + 1e-15);
    EXPECT_DOUBLE_EQ(sur::inv_affine_lb(0.5, 1.0), 1.5);
}

TEST(Surrogates, EhQuadraticRemarkChoice) {
    const double s = 4.0, t = 1.5, u = 2.0;
    const auto lb = sur::eh_quadratic_lb(u, s, t, 2.0 / s);
    EXPECT_DOUBLE_EQ(lb.b, s / 2);
    EXPECT_DOUBLE_EQ(lb.a, u - 2 * t * t / s);
    const auto flat = sur::eh_quadratic_lb(u, s, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(flat.a, u);
    EXPECT_DOUBLE_EQ(flat.b, s - 1.0);
    EXPECT_THROW(sur::eh_quadratic_lb(u, s, t, 0.25), InvalidEpsilon);
    EXPECT_THROW(sur::eh_quadratic_lb(u, -1.0, t, 5.0), InvalidEpsilon);
}
