// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "visrecon/field.hpp"
#include "visrecon/geometry.hpp"
#include "visrecon/mesh.hpp"
#include "visrecon/rng.hpp"

namespace visrecon {

struct Contour2D {
    std::vector<std::vector<Vec2>> polylines;  // each has >= 2 points
    double isovalue = 0.0;

    [[nodiscard]] bool empty() const { return polylines.empty(); }
};

inline double contour_length(const Contour2D& c) {
    double len = 0.0;
    for (const auto& line : c.polylines)
        for (std::size_t i = 1; i < line.size(); ++i)
            len += (line[i] - line[i - 1]).norm();
    return len;
}

namespace detail {

// Segment endpoints are keyed by the grid edge they sit on, so matching
// endpoints across cells is exact. An edge is named by its low node index
// and axis (0 = towards +x, 1 = towards +y).
struct EdgeKey {
    std::size_t node;
    int axis;
    auto operator<=>(const EdgeKey&) const = default;
};

struct MsSegment {
    EdgeKey a, b;
};

// Emits the marching-squares segments of one cell. Corner bits: 1 = bottom
// left, 2 = bottom right, 4 = top right, 8 = top left; "inside" is f >= iso.
// Saddles (cases 5, 10) split by comparing the cell-centre average to iso.
inline void ms_cell_segments(int code, bool center_inside,
                             const std::array<EdgeKey, 4>& e,  // bottom,right,top,left
                             std::vector<MsSegment>& out) {
    auto seg = [&](int i, int j) { out.push_back({e[i], e[j]}); };
    switch (code) {
        case 1: case 14: seg(3, 0); break;
        case 2: case 13: seg(0, 1); break;
        case 3: case 12: seg(3, 1); break;
        case 4: case 11: seg(1, 2); break;
        case 6: case 9:  seg(0, 2); break;
        case 7: case 8:  seg(3, 2); break;
        case 5:
            if (center_inside) { seg(3, 2); seg(0, 1); }
            else               { seg(3, 0); seg(1, 2); }
            break;
        case 10:
            if (center_inside) { seg(3, 0); seg(1, 2); }
            else               { seg(3, 2); seg(0, 1); }
            break;
        default: break;  // 0 and 15: no crossing
    }
}

}  // namespace detail

// Marching squares with linear edge interpolation. Saddle cells split
// according to the cell-centre average. Isovalues outside the field range
// give an empty contour.
inline Contour2D extract_contour_2d(const Grid2D& g, double isovalue) {
    Contour2D result;
    result.isovalue = isovalue;
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("contour: grid too small");
    const FieldStats stats = stats_of(g.values);
    if (isovalue < stats.min || isovalue > stats.max) return result;

    auto node = [&](std::size_t x, std::size_t y) { return y * g.nx + x; };
    std::map<detail::EdgeKey, Vec2> points;
    auto edge_point = [&](std::size_t x, std::size_t y, int axis) {
        const detail::EdgeKey key{node(x, y), axis};
        const auto it = points.find(key);
        if (it != points.end()) return key;
        const double fa = g.at(x, y);
        const double fb = axis == 0 ? g.at(x + 1, y) : g.at(x, y + 1);
        const double t = (isovalue - fa) / (fb - fa);
        Vec2 p = g.position(x, y);
        if (axis == 0)
            p.x += t * g.spacing.x;
        else
            p.y += t * g.spacing.y;
        points.emplace(key, p);
        return key;
    };

    std::vector<detail::MsSegment> segments;
    for (std::size_t y = 0; y + 1 < g.ny; ++y) {
        for (std::size_t x = 0; x + 1 < g.nx; ++x) {
            const bool b0 = g.at(x, y) >= isovalue;
            const bool b1 = g.at(x + 1, y) >= isovalue;
            const bool b2 = g.at(x + 1, y + 1) >= isovalue;
            const bool b3 = g.at(x, y + 1) >= isovalue;
            const int code = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const double center = 0.25 * (g.at(x, y) + g.at(x + 1, y) +
                                          g.at(x + 1, y + 1) + g.at(x, y + 1));
            std::array<detail::EdgeKey, 4> e{};
            // Bottom, right, top, left; only crossed edges are materialized.
            auto maybe = [&](int i, bool crossed, std::size_t ex, std::size_t ey,
                             int axis) {
                if (crossed) e[static_cast<std::size_t>(i)] = edge_point(ex, ey, axis);
            };
            maybe(0, b0 != b1, x, y, 0);
            maybe(1, b1 != b2, x + 1, y, 1);
            maybe(2, b3 != b2, x, y + 1, 0);
            maybe(3, b0 != b3, x, y, 1);
            detail::ms_cell_segments(code, center >= isovalue, e, segments);
        }
    }
    if (segments.empty()) return result;

    // Chain segments into polylines: walk from degree-1 endpoints first
    // (open curves), then consume remaining cycles.
    std::map<detail::EdgeKey, std::vector<std::size_t>> incident;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        incident[segments[i].a].push_back(i);
        incident[segments[i].b].push_back(i);
    }
    std::vector<bool> used(segments.size(), false);
    auto walk = [&](std::size_t start_seg, detail::EdgeKey start_pt) {
        std::vector<Vec2> line;
        line.push_back(points.at(start_pt));
        detail::EdgeKey cur = start_pt;
        std::size_t seg = start_seg;
        while (true) {
            used[seg] = true;
            const detail::EdgeKey next =
                segments[seg].a == cur ? segments[seg].b : segments[seg].a;
            line.push_back(points.at(next));
            cur = next;
            std::size_t follow = segments.size();
            for (std::size_t cand : incident[cur]) {
                if (!used[cand]) {
                    follow = cand;
                    break;
                }
            }
            if (follow == segments.size()) break;
            seg = follow;
        }
        return line;
    };
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (used[i]) continue;
        const bool a_open = incident[segments[i].a].size() == 1;
        const bool b_open = incident[segments[i].b].size() == 1;
        if (a_open || b_open)
            result.polylines.push_back(walk(i, a_open ? segments[i].a : segments[i].b));
    }
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (!used[i]) result.polylines.push_back(walk(i, segments[i].a));
    return result;
}

// Uniform-by-arc-length random points on the contour; one uniform draw per
// point, in order.
inline std::vector<Vec2> sample_contour_points(const Contour2D& c, std::size_t n,
                                               std::uint64_t seed) {
    if (c.empty()) throw std::invalid_argument("contour: empty");
    struct Piece {
        Vec2 a, b;
        double cum;  // cumulative length up to the end of this piece
    };
    std::vector<Piece> pieces;
    double total = 0.0;
    for (const auto& line : c.polylines) {
        for (std::size_t i = 1; i < line.size(); ++i) {
            const double len = (line[i] - line[i - 1]).norm();
            if (len <= 0.0) continue;
            total += len;
            pieces.push_back({line[i - 1], line[i], total});
        }
    }
    if (pieces.empty()) throw std::invalid_argument("contour: zero length");
    std::vector<Vec2> out;
    if (n == 0) return out;
    // Systematic draw: one random phase, then equal arc strides. Uniform by
    // arc length in expectation, and never produces near-duplicate points
    // that would ill-condition downstream kernel fits.
    Rng rng(seed);
    const double stride = total / static_cast<double>(n);
    const double phase = rng.next_double() * stride;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = phase + stride * static_cast<double>(i);
        const auto it = std::lower_bound(
            pieces.begin(), pieces.end(), u,
            [](const Piece& p, double v) { return p.cum < v; });
        const Piece& p = it == pieces.end() ? pieces.back() : *it;
        const double start = p.cum - (p.b - p.a).norm();
        const double t = std::clamp((u - start) / (p.b - p.a).norm(), 0.0, 1.0);
        out.push_back(lerp(p.a, p.b, t));
    }
    return out;
}

inline void save_contour_csv(const Contour2D& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "polyline,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < c.polylines.size(); ++i) {
        for (const Vec2& p : c.polylines[i]) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, p.x, p.y);
            os << buf;
        }
    }
}

// ---- isosurface extraction ----

namespace detail {

// Key for a point on a 3D grid edge: low node linear index plus axis.
struct GridEdgeKey {
    std::size_t node;
    int axis;  // 0:+x 1:+y 2:+z
    auto operator<=>(const GridEdgeKey&) const = default;
};

}  // namespace detail

// Isosurface of the f >= iso region. Cell-by-cell: each cube face runs the
// 2D saddle rule on its four corners (face-centre average), the resulting
// face segments chain into closed rings on the cube boundary, and each ring
// is fan-triangulated around its centroid. Face decisions are shared
// between neighbouring cubes, so the mesh is crack-free by construction;
// triangle winding is chosen so normals point towards lower field values.
inline TriMesh extract_isosurface_3d(const Grid3D& g, double isovalue) {
    TriMesh mesh;
    if (g.nx < 2 || g.ny < 2 || g.nz < 2)
        throw std::invalid_argument("isosurface: grid too small");
    const FieldStats stats = stats_of(g.values);
    if (isovalue < stats.min || isovalue > stats.max) return mesh;

    auto node = [&](std::size_t x, std::size_t y, std::size_t z) {
        return (z * g.ny + y) * g.nx + x;
    };
    std::map<detail::GridEdgeKey, std::uint32_t> edge_vertex;
    auto vertex_on_edge = [&](std::size_t x, std::size_t y, std::size_t z,
                              int axis) {
        const detail::GridEdgeKey key{node(x, y, z), axis};
        const auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        const double fa = g.at(x, y, z);
        const double fb = axis == 0   ? g.at(x + 1, y, z)
                          : axis == 1 ? g.at(x, y + 1, z)
                                      : g.at(x, y, z + 1);
        const double t = (isovalue - fa) / (fb - fa);
        Vec3 p = g.position(x, y, z);
        if (axis == 0)
            p.x += t * g.spacing.x;
        else if (axis == 1)
            p.y += t * g.spacing.y;
        else
            p.z += t * g.spacing.z;
        const auto idx = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(p);
        edge_vertex.emplace(key, idx);
        return idx;
    };

    // Cube corners in (dx, dy, dz) bit order; cube edges as corner pairs
    // with their grid-edge axis; faces as cyclic corner quads with the
    // local indices of their four boundary edges (in quad order).
    static constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0},
                                          {0, 1, 0}, {0, 0, 1}, {1, 0, 1},
                                          {1, 1, 1}, {0, 1, 1}};
    static constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3},
                                         {4, 5}, {5, 6}, {7, 6}, {4, 7},
                                         {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    struct Face {
        int corner[4];  // cyclic
        int edge[4];    // edge between corner[i] and corner[i+1]
    };
    static constexpr Face kFace[6] = {
        {{0, 1, 2, 3}, {0, 1, 2, 3}},    // z = 0
        {{4, 5, 6, 7}, {4, 5, 6, 7}},    // z = 1
        {{0, 1, 5, 4}, {0, 9, 4, 8}},    // y = 0
        {{3, 2, 6, 7}, {2, 10, 6, 11}},  // y = 1
        {{0, 3, 7, 4}, {3, 11, 7, 8}},   // x = 0
        {{1, 2, 6, 5}, {1, 10, 5, 9}},   // x = 1
    };

    std::vector<std::array<std::uint32_t, 3>>& tris = mesh.triangles;
    for (std::size_t z = 0; z + 1 < g.nz; ++z) {
        for (std::size_t y = 0; y + 1 < g.ny; ++y) {
            for (std::size_t x = 0; x + 1 < g.nx; ++x) {
                double value[8];
                bool inside[8];
                int mask = 0;
                for (int i = 0; i < 8; ++i) {
                    value[i] = g.at(x + kCorner[i][0], y + kCorner[i][1],
                                    z + kCorner[i][2]);
                    inside[i] = value[i] >= isovalue;
                    if (inside[i]) mask |= 1 << i;
                }
                if (mask == 0 || mask == 255) continue;

                std::uint32_t crossing[12] = {};
                for (int e = 0; e < 12; ++e) {
                    const int a = kEdge[e][0], b = kEdge[e][1];
                    if (inside[a] == inside[b]) continue;
                    // Grid-edge axis and low corner follow from the pair.
                    const int dx = kCorner[b][0] - kCorner[a][0];
                    const int dy = kCorner[b][1] - kCorner[a][1];
                    const int axis = dx != 0 ? 0 : (dy != 0 ? 1 : 2);
                    crossing[e] = vertex_on_edge(x + kCorner[a][0],
                                                 y + kCorner[a][1],
                                                 z + kCorner[a][2], axis);
                }

                // Face segments between cube-edge crossings (local edge ids).
                std::vector<std::pair<int, int>> segs;
                for (const Face& f : kFace) {
                    const int code = (inside[f.corner[0]] ? 1 : 0) |
                                     (inside[f.corner[1]] ? 2 : 0) |
                                     (inside[f.corner[2]] ? 4 : 0) |
                                     (inside[f.corner[3]] ? 8 : 0);
                    if (code == 0 || code == 15) continue;
                    const double center =
                        0.25 * (value[f.corner[0]] + value[f.corner[1]] +
                                value[f.corner[2]] + value[f.corner[3]]);
                    const bool center_inside = center >= isovalue;
                    auto seg = [&](int i, int j) {
                        segs.emplace_back(f.edge[i], f.edge[j]);
                    };
                    switch (code) {
                        case 1: case 14: seg(3, 0); break;
                        case 2: case 13: seg(0, 1); break;
                        case 3: case 12: seg(3, 1); break;
                        case 4: case 11: seg(1, 2); break;
                        case 6: case 9:  seg(0, 2); break;
                        case 7: case 8:  seg(3, 2); break;
                        case 5:
                            if (center_inside) { seg(3, 2); seg(0, 1); }
                            else               { seg(3, 0); seg(1, 2); }
                            break;
                        case 10:
                            if (center_inside) { seg(3, 0); seg(1, 2); }
                            else               { seg(3, 2); seg(0, 1); }
                            break;
                        default: break;
                    }
                }

                // Chain into rings; every crossing has exactly two incident
                // face segments inside the cube.
                std::vector<bool> used(segs.size(), false);
                for (std::size_t s = 0; s < segs.size(); ++s) {
                    if (used[s]) continue;
                    std::vector<int> ring;
                    ring.push_back(segs[s].first);
                    int cur = segs[s].second;
                    used[s] = true;
                    while (cur != ring.front()) {
                        ring.push_back(cur);
                        bool advanced = false;
                        for (std::size_t t = 0; t < segs.size(); ++t) {
                            if (used[t]) continue;
                            if (segs[t].first == cur || segs[t].second == cur) {
                                cur = segs[t].first == cur ? segs[t].second
                                                           : segs[t].first;
                                used[t] = true;
                                advanced = true;
                                break;
                            }
                        }
                        if (!advanced) break;  // defensive; rings always close
                    }
                    if (ring.size() < 3) continue;

                    // Centroid fan.
                    Vec3 centroid{0, 0, 0};
                    for (int e : ring) centroid = centroid + mesh.vertices[crossing[e]];
                    centroid = centroid / static_cast<double>(ring.size());
                    const auto cidx = static_cast<std::uint32_t>(mesh.vertices.size());
                    mesh.vertices.push_back(centroid);
                    const Vec3 grad = field_gradient_at(g, centroid);
                    for (std::size_t i = 0; i < ring.size(); ++i) {
                        std::uint32_t va = crossing[ring[i]];
                        std::uint32_t vb = crossing[ring[(i + 1) % ring.size()]];
                        const Vec3 n = (mesh.vertices[va] - centroid)
                                           .cross(mesh.vertices[vb] - centroid);
                        if (n.dot(grad) > 0.0) std::swap(va, vb);
                        if (va == vb || va == cidx || vb == cidx) continue;
                        tris.push_back({cidx, va, vb});
                    }
                }
            }
        }
    }
    return mesh;
}

}  // namespace visrecon
