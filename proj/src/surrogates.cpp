// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/surrogates.hpp"

#include <cmath>
#include <numbers>

#include "wcsee/error.hpp"

namespace wcsee::sur {

LogUpper log_upper(const Vec& p0, const Vec& b, double sigma2) {
    if (p0.size() != b.size()) throw DimensionMismatch("log_upper: p0 and b differ in length");
    const double s0 = sigma2 + b.dot(p0);
    if (!(s0 > 0.0)) throw DomainError("log_upper: expansion point has non-positive argument");
    LogUpper out;
    out.value0 = std::log2(s0);
    out.slope = b / (std::numbers::ln2 * s0);
    out.p0 = p0;
    return out;
}

double QuadOverLinLb::operator()(const CVec& s, double rho) const {
    const cplx z = t.dot(s);
    return 2.0 * std::real(std::conj(z0) * z) / rho0 - std::norm(z0) * rho / (rho0 * rho0);
}

QuadOverLinLb quad_over_lin_lb(const CVec& t, const CVec& s0, double rho0) {
    if (t.size() != s0.size()) throw DimensionMismatch("quad_over_lin_lb: t and s0 differ in length");
    if (!(rho0 > 0.0)) throw DomainError("quad_over_lin_lb: rho0 must be positive");
    return {t.dot(s0), rho0, t};
}

double bilinear_lb(double x, double y, double x0, double y0) {
    const double m = x0 + y0;
    return 0.5 * m * (x + y) - 0.25 * m * m - 0.25 * (x - y) * (x - y);
}

double QuadLb::operator()(const CVec& s) const {
    return 2.0 * std::real(std::conj(z0) * t.dot(s)) + 2.0 * std::real(std::conj(z0) * c) - std::norm(z0);
}

QuadLb quad_lb(cplx c, const CVec& t, const CVec& s0) {
    if (t.size() != s0.size()) throw DimensionMismatch("quad_lb: t and s0 differ in length");
    return {c, t, c + t.dot(s0)};
}

double exp2_lb(double x, double x0) {
    return std::exp2(x0) * (1.0 + std::numbers::ln2 * (x - x0));
}

double agm_ub(double a, double b, double a0, double b0) {
    if (!(a0 > 0.0) || !(b0 > 0.0)) throw DomainError("agm_ub: expansion point must be positive");
    return 0.5 * (b0 / a0 * a * a + a0 / b0 * b * b);
}

double inv_affine_lb(double y, double y0) {
    if (!(y0 > 0.0)) throw DomainError("inv_affine_lb: expansion point must be positive");
    return 1.0 / y0 - (y - y0) / (y0 * y0);
}

EhQuadraticLb eh_quadratic_lb(double u, double s, double t, double eps) {
    if (!(s > 0.0) || !(eps > 1.0 / s)) {
        throw InvalidEpsilon("eh_quadratic_lb: need S > 0 and eps > 1/S");
    }
    return {u - eps * t * t, s - 1.0 / eps};
}

}  // namespace wcsee::sur
