// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wcsee/error.hpp"

namespace wcsee {

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits) {
    if (bits < 1 || bits > 30) {
        throw ConfigError("phase codebook needs between 1 and 30 bits");
    }
}

std::int64_t PhaseCodebook::nearest_index(double theta) const {
    const double wrapped = wrap_phase(theta);
    const std::int64_t n = size();
    const auto lower = static_cast<std::int64_t>(std::floor(wrapped / step()));
    const std::int64_t lo = std::clamp<std::int64_t>(lower, 0, n - 1);
    const std::int64_t hi = (lo + 1) % n;
    // Distance to the upper neighbour is measured on the circle so that the
    // last bin wraps onto entry 0.
    const double d_lo = wrapped - entry(lo);
    const double d_hi = (lo + 1) * step() - wrapped;
    if (d_hi < d_lo) {
        return hi;
    }
    if (d_hi == d_lo) {
        return std::min(lo, hi);
    }
    return lo;
}

double distance3d(const Position2D& q, const Position2D& w, double height) {
    return std::hypot(q.x - w.x, q.y - w.y, height);
}

CVec steering_vector(int elements, double phi) {
    CVec a(elements);
    const double s = std::sin(phi);
    for (int m = 0; m < elements; ++m) {
        a(m) = std::polar(1.0, -kPi * static_cast<double>(m) * s);
    }
    return a;
}

double azimuth(const Position2D& from, const Position2D& to) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) {
        throw DegenerateGeometry("azimuth between coincident points");
    }
    return std::atan2(dy, dx);
}

double wrap_phase(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    // fmod of a value just below a multiple of 2*pi can round up to 2*pi.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

double quantize_phase(double theta, const PhaseCodebook& codebook) {
    return codebook.entry(codebook.nearest_index(theta));
}

Position2D project_uav(const Position2D& q, const UavRegion& region) {
    return {std::clamp(q.x, region.x_min, region.x_max), std::clamp(q.y, region.y_min, region.y_max)};
}

}  // namespace wcsee
