// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_SURROGATES_HPP
#define WCSEE_SURROGATES_HPP

#include "wcsee/types.hpp"

// Tangent bounds used to convexify the benchmark subproblems. Each one is
// exact at its expansion point and bounds its target on one side everywhere.
namespace wcsee::sur {

// Affine over-estimate of log2(sigma2 + b'p) around p0.
struct LogUpper {
    double value0 = 0.0;  // log2(S0), S0 = sigma2 + b'p0
    Vec slope;            // eta_l = b_l / (ln2 * S0)
    Vec p0;

    double operator()(const Vec& p) const { return value0 + slope.dot(p - p0); }
};
LogUpper log_upper(const Vec& p0, const Vec& b, double sigma2);

// Affine (in s and rho) under-estimate of |t^H s|^2 / rho around (s0, rho0).
struct QuadOverLinLb {
    cplx z0;  // t^H s0
    double rho0 = 1.0;
    CVec t;

    double operator()(const CVec& s, double rho) const;
};
QuadOverLinLb quad_over_lin_lb(const CVec& t, const CVec& s0, double rho0);

// Concave quadratic under-estimate of x*y around (x0, y0).
double bilinear_lb(double x, double y, double x0, double y0);

// Affine under-estimate of |c + t^H s|^2 around s0.
struct QuadLb {
    cplx c;
    CVec t;
    cplx z0;  // c + t^H s0

    double operator()(const CVec& s) const;
};
QuadLb quad_lb(cplx c, const CVec& t, const CVec& s0);

// 2^x0 (1 + ln2 (x - x0)) <= 2^x.
double exp2_lb(double x, double x0);

// 0.5 (b0/a0 a^2 + a0/b0 b^2) >= a*b for a, b >= 0. Needs a0, b0 > 0.
double agm_ub(double a, double b, double a0, double b0);

// 1/y0 - (y - y0)/y0^2 <= 1/y for y > 0. Needs y0 > 0.
double inv_affine_lb(double y, double y0);

// U + S x^2 + 2 T x >= A + B x^2 with A = U - eps T^2, B = S - 1/eps.
// Throws InvalidEpsilon unless eps > 1/S (which requires S > 0).
struct EhQuadraticLb {
    double a = 0.0;
    double b = 0.0;
};
EhQuadraticLb eh_quadratic_lb(double u, double s, double t, double eps);

}  // namespace wcsee::sur

#endif
