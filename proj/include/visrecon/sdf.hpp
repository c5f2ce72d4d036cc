// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "visrecon/contour.hpp"
#include "visrecon/field.hpp"
#include "visrecon/geometry.hpp"
#include "visrecon/mesh.hpp"

namespace visrecon {

namespace detail {

inline double point_segment_dist2(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) return (p - a).norm2();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    return (p - q).norm2();
}

// Proper-crossing test between segments [a,b] and [p,q]; the caller
// perturbs one endpoint set so degenerate touches do not occur.
inline bool segments_cross(Vec2 a, Vec2 b, Vec2 p, Vec2 q) {
    auto orient = [](Vec2 u, Vec2 v, Vec2 w) {
        return (v.x - u.x) * (w.y - u.y) - (v.y - u.y) * (w.x - u.x);
    };
    const double o1 = orient(a, b, p);
    const double o2 = orient(a, b, q);
    const double o3 = orient(p, q, a);
    const double o4 = orient(p, q, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace detail

// Signed distance to the contour sampled on the nodes of `geometry` (its
// values are ignored). Unsigned distances are exact nearest distances to the
// polyline segments. Signs come from two-colouring the node graph: node
// (0, 0) seeds positive, and the sign flips across each node-to-node edge
// the contour crosses an odd number of times, which makes the
// boundary-connected region positive and nested regions alternate. Node
// positions are nudged by a fraction of a cell inside the crossing test
// only, so contour vertices that lie exactly on grid edges stay transversal.
inline Grid2D signed_distance(const Grid2D& geometry, const Contour2D& contour) {
    if (contour.empty()) throw std::invalid_argument("sdf: empty contour");
    struct Seg {
        Vec2 a, b;
    };
    std::vector<Seg> segs;
    for (const auto& line : contour.polylines)
        for (std::size_t i = 1; i < line.size(); ++i)
            if ((line[i] - line[i - 1]).norm2() > 0.0)
                segs.push_back({line[i - 1], line[i]});
    if (segs.empty()) throw std::invalid_argument("sdf: zero-length contour");

    Grid2D d(geometry.nx, geometry.ny, geometry.origin, geometry.spacing);
    for (std::size_t y = 0; y < d.ny; ++y) {
        for (std::size_t x = 0; x < d.nx; ++x) {
            const Vec2 p = d.position(x, y);
            double best = std::numeric_limits<double>::infinity();
            for (const Seg& s : segs)
                best = std::min(best, detail::point_segment_dist2(p, s.a, s.b));
            d.at(x, y) = std::sqrt(best);
        }
    }

    const Vec2 nudge{1.2345e-7 * geometry.spacing.x,
                     2.3456e-7 * geometry.spacing.y};
    auto crossings = [&](Vec2 a, Vec2 b) {
        int n = 0;
        for (const Seg& s : segs)
            if (detail::segments_cross(a + nudge, b + nudge, s.a, s.b)) ++n;
        return n;
    };

    std::vector<signed char> sign(d.size(), 0);
    std::deque<std::size_t> queue;
    sign[0] = 1;
    queue.push_back(0);
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const std::size_t x = idx % d.nx;
        const std::size_t y = idx / d.nx;
        const Vec2 p = d.position(x, y);
        auto visit = [&](std::size_t nx_, std::size_t ny_) {
            const std::size_t nidx = ny_ * d.nx + nx_;
            if (sign[nidx] != 0) return;
            const int c = crossings(p, d.position(nx_, ny_));
            sign[nidx] = static_cast<signed char>(c % 2 == 0 ? sign[idx] : -sign[idx]);
            queue.push_back(nidx);
        };
        if (x > 0) visit(x - 1, y);
        if (x + 1 < d.nx) visit(x + 1, y);
        if (y > 0) visit(x, y - 1);
        if (y + 1 < d.ny) visit(x, y + 1);
    }
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] *= sign[i];
    return d;
}

// 3D counterpart for a closed mesh: exact distance via the BVH, sign by
// parity of ray-mesh intersections along +x (odd = inside = negative).
inline Grid3D signed_distance(const Grid3D& geometry, const TriMesh& mesh,
                              const MeshBvh& bvh) {
    if (mesh.triangles.empty()) throw std::invalid_argument("sdf: empty mesh");
    Grid3D d(geometry.nx, geometry.ny, geometry.nz, geometry.origin,
             geometry.spacing);
    // Fixed irrational-ish direction avoids rays along mesh edges.
    const Vec3 dir = Vec3{1.0, 1.2345e-4, 2.3456e-4}.normalized();
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const Vec3 p = d.position(x, y, z);
                const double dist = std::sqrt(bvh.closest_point(p).dist2);
                const bool inside = bvh.count_intersections(p, dir) % 2 == 1;
                d.at(x, y, z) = inside ? -dist : dist;
            }
        }
    }
    return d;
}

}  // namespace visrecon
