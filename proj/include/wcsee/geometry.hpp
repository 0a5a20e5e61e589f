// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_GEOMETRY_HPP
#define WCSEE_GEOMETRY_HPP

#include <cstdint>

#include "wcsee/types.hpp"

namespace wcsee {

// Horizontal ground-plane coordinates in meters.
struct Position2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position2D&, const Position2D&) = default;
};

// Axis-aligned rectangle the UAV is allowed to hover in.
struct UavRegion {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    bool valid() const { return x_min <= x_max && y_min <= y_max; }
    bool contains(const Position2D& q) const {
        return q.x >= x_min && q.x <= x_max && q.y >= y_min && q.y <= y_max;
    }
    Position2D center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
};

// Uniform phase codebook with 2^bits entries {2*pi*i / 2^bits}.
class PhaseCodebook {
  public:
    explicit PhaseCodebook(int bits = 8);

    int bits() const { return bits_; }
    std::int64_t size() const { return std::int64_t{1} << bits_; }
    double step() const { return kTwoPi / static_cast<double>(size()); }
    double entry(std::int64_t index) const { return step() * static_cast<double>(index); }

    // Index of the entry nearest to theta on the circle; ties go to the lower index.
    std::int64_t nearest_index(double theta) const;

  private:
    int bits_;
};

// sqrt(|q - w|^2 + H^2).
double distance3d(const Position2D& q, const Position2D& w, double height);

// Half-wavelength ULA response: element m is exp(-j*pi*m*sin(phi)).
CVec steering_vector(int elements, double phi);

// Four-quadrant angle of (to - from), in (-pi, pi]. Throws DegenerateGeometry if from == to.
double azimuth(const Position2D& from, const Position2D& to);

// Reduces theta to [0, 2*pi).
double wrap_phase(double theta);

double quantize_phase(double theta, const PhaseCodebook& codebook);

// Component-wise clamp into the region.
Position2D project_uav(const Position2D& q, const UavRegion& region);

}  // namespace wcsee

#endif
