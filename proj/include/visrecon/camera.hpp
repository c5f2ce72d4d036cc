// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "visrecon/geometry.hpp"

namespace visrecon {

struct Camera {
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;  // in [-90, 90]
    double distance = 3.0;       // > 0
    Vec3 target{0, 0, 0};
    double vertical_fov_deg = 45.0;  // in (0, 180)
    int width = 128;
    int height = 128;
};

inline void validate(const Camera& c) {
    if (!(c.distance > 0.0)) throw std::invalid_argument("camera: distance <= 0");
    if (!(c.vertical_fov_deg > 0.0 && c.vertical_fov_deg < 180.0))
        throw std::invalid_argument("camera: fov out of range");
    if (!(c.elevation_deg >= -90.0 && c.elevation_deg <= 90.0))
        throw std::invalid_argument("camera: elevation out of range");
    if (c.width <= 0 || c.height <= 0)
        throw std::invalid_argument("camera: non-positive image dims");
}

// Right-handed orthonormal frame; `up` is world +z projected out of the view
// axis, falling back to +x looking straight up or down.
struct CameraBasis {
    Vec3 eye;
    Vec3 forward;  // unit, towards target
    Vec3 right;    // unit, screen +x
    Vec3 up;       // unit, screen +y
};

inline CameraBasis camera_pose(const Camera& c) {
    validate(c);
    const bool at_pole = c.elevation_deg == 90.0 || c.elevation_deg == -90.0;
    Vec3 dir;  // unit vector from target to eye
    if (at_pole) {
        dir = {0.0, 0.0, c.elevation_deg > 0.0 ? 1.0 : -1.0};
    } else {
        const double a = deg_to_rad(c.azimuth_deg);
        const double e = deg_to_rad(c.elevation_deg);
        dir = {std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)};
    }
    CameraBasis b;
    b.eye = c.target + dir * c.distance;
    b.forward = -dir;
    const Vec3 up_hint = at_pole ? Vec3{1, 0, 0} : Vec3{0, 0, 1};
    b.right = up_hint.cross(b.forward).normalized();
    b.up = b.forward.cross(b.right);
    return b;
}

// Primary ray through the center of pixel (px, py); row 0 is the top of the
// image. Perspective with the camera's vertical fov.
struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit
};

inline Ray primary_ray(const Camera& c, const CameraBasis& b, int px, int py) {
    const double tan_half = std::tan(0.5 * deg_to_rad(c.vertical_fov_deg));
    const double aspect = static_cast<double>(c.width) / c.height;
    const double sx = (2.0 * (px + 0.5) / c.width - 1.0) * tan_half * aspect;
    const double sy = (1.0 - 2.0 * (py + 0.5) / c.height) * tan_half;
    return {b.eye, (b.forward + b.right * sx + b.up * sy).normalized()};
}

namespace detail {
// Cameras coincide when elevation matches and either both look along a pole
// (azimuth irrelevant there) or azimuths agree modulo 360.
inline bool same_view_direction(const Camera& a, const Camera& b) {
    if (a.elevation_deg != b.elevation_deg) return false;
    if (a.elevation_deg == 90.0 || a.elevation_deg == -90.0) return true;
    double d = std::fmod(a.azimuth_deg - b.azimuth_deg, 360.0);
    if (d < 0) d += 360.0;
    return d == 0.0;
}
}  // namespace detail

// The 3x3 angular grid {-10,0,+10}^2 around the center pose. Elevations
// clamp to [-90, 90]; poses that collapse at a pole are replaced by widening
// the azimuth offset (+-20, +-30, ...) at the surviving elevations so the
// set always holds 9 distinct views.
inline std::vector<Camera> around_view_cameras(const Camera& center) {
    validate(center);
    std::vector<Camera> out;
    auto push_unique = [&](double az, double el) {
        Camera c = center;
        c.azimuth_deg = az;
        c.elevation_deg = std::clamp(el, -90.0, 90.0);
        for (const Camera& seen : out)
            if (detail::same_view_direction(seen, c)) return;
        out.push_back(c);
    };

    const double offsets[] = {-10.0, 0.0, 10.0};
    for (double de : offsets)
        for (double da : offsets)
            push_unique(center.azimuth_deg + da, center.elevation_deg + de);

    // Clamped duplicates leave fewer than 9; widen azimuth offsets at each
    // surviving elevation until the set is full.
    const std::vector<Camera> base = out;
    for (int k = 2; out.size() < 9 && k <= 17; ++k) {
        for (const Camera& c : base) {
            if (out.size() >= 9) break;
            if (c.elevation_deg == 90.0 || c.elevation_deg == -90.0) continue;
            push_unique(center.azimuth_deg - 10.0 * k, c.elevation_deg);
            if (out.size() >= 9) break;
            push_unique(center.azimuth_deg + 10.0 * k, c.elevation_deg);
        }
    }
    return out;
}

}  // namespace visrecon
