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
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "visrecon/geometry.hpp"
#include "visrecon/rng.hpp"

namespace visrecon {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    [[nodiscard]] Aabb3 bounds() const {
        Aabb3 box;
        for (const Vec3& v : vertices) box.expand(v);
        return box;
    }
};

inline void validate(const TriMesh& m) {
    const std::uint32_t nv = static_cast<std::uint32_t>(m.vertices.size());
    for (const auto& t : m.triangles) {
        if (t[0] >= nv || t[1] >= nv || t[2] >= nv)
            throw std::invalid_argument("mesh: triangle index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw std::invalid_argument("mesh: degenerate triangle");
    }
}

inline double triangle_area(Vec3 a, Vec3 b, Vec3 c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

inline double surface_area(const TriMesh& m) {
    double area = 0.0;
    for (const auto& t : m.triangles)
        area += triangle_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
    return area;
}

// Geometric (unnormalized direction: (b-a) x (c-a)) unit normal.
inline Vec3 triangle_normal(Vec3 a, Vec3 b, Vec3 c) {
    return (b - a).cross(c - a).normalized();
}

// ---- OBJ subset ----
// Reads `v x y z` and `f i j k [l ...]` lines; faces with more than three
// vertices are fan-triangulated; `i/j/k` attribute suffixes are ignored.
// Other line types are skipped.
inline TriMesh load_obj(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    TriMesh m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": malformed vertex");
            m.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::uint32_t> idx;
            std::string tok;
            while (ss >> tok) {
                const std::string first = tok.substr(0, tok.find('/'));
                long v = 0;
                try {
                    v = std::stol(first);
                } catch (const std::exception&) {
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": malformed face index");
                }
                if (v <= 0 || static_cast<std::size_t>(v) > m.vertices.size())
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": face index out of range");
                idx.push_back(static_cast<std::uint32_t>(v - 1));
            }
            if (idx.size() < 3)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": face needs >= 3 vertices");
            for (std::size_t i = 1; i + 1 < idx.size(); ++i)
                m.triangles.push_back({idx[0], idx[i], idx[i + 1]});
        }
    }
    validate(m);
    return m;
}

inline void save_obj(const TriMesh& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    char buf[128];
    for (const Vec3& v : m.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        os << buf;
    }
    for (const auto& t : m.triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

// ---- point/triangle and ray/triangle primitives ----

// Closest point on triangle abc to p (Ericson, Real-Time Collision
// Detection, 5.1.5).
inline Vec3 closest_point_on_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

struct RayHit {
    double t = 0.0;
    std::uint32_t triangle = 0;
    Vec3 point;
};

// Moller-Trumbore; front and back faces both hit.
inline std::optional<double> ray_triangle(Vec3 orig, Vec3 dir, Vec3 a, Vec3 b,
                                          Vec3 c, double t_min = 1e-9) {
    const Vec3 e1 = b - a, e2 = c - a;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    if (std::fabs(det) < 1e-14) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 tv = orig - a;
    const double u = tv.dot(pv) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 qv = tv.cross(e1);
    const double v = dir.dot(qv) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = e2.dot(qv) * inv;
    if (t <= t_min) return std::nullopt;
    return t;
}

// ---- BVH over triangles ----
// Deterministic build: median split on the largest centroid axis, ties
// broken by triangle index, leaves hold <= 4 triangles.
class MeshBvh {
public:
    explicit MeshBvh(const TriMesh& mesh) : mesh_(&mesh) {
        validate(mesh);
        if (mesh.triangles.empty()) throw std::invalid_argument("BVH: empty mesh");
        order_.resize(mesh.triangles.size());
        for (std::size_t i = 0; i < order_.size(); ++i)
            order_[i] = static_cast<std::uint32_t>(i);
        nodes_.reserve(2 * order_.size());
        build(0, order_.size());
    }

    [[nodiscard]] std::optional<RayHit> raycast(Vec3 orig, Vec3 dir) const {
        std::optional<RayHit> best;
        std::uint32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            if (!ray_box(orig, dir, node.box, best ? best->t : kInf)) continue;
            if (node.count > 0) {
                for (std::uint32_t i = 0; i < node.count; ++i) {
                    const std::uint32_t tri = order_[node.first + i];
                    const auto& t = mesh_->triangles[tri];
                    const auto hit =
                        ray_triangle(orig, dir, mesh_->vertices[t[0]],
                                     mesh_->vertices[t[1]], mesh_->vertices[t[2]]);
                    if (hit && (!best || *hit < best->t))
                        best = RayHit{*hit, tri, orig + dir * *hit};
                }
            } else {
                stack[top++] = node.right;
                stack[top++] = node.left;
            }
        }
        return best;
    }

    // Number of ray-triangle intersections with t > 0; odd parity from a
    // point means inside a closed mesh.
    [[nodiscard]] int count_intersections(Vec3 orig, Vec3 dir) const {
        int count = 0;
        std::uint32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            if (!ray_box(orig, dir, node.box, kInf)) continue;
            if (node.count > 0) {
                for (std::uint32_t i = 0; i < node.count; ++i) {
                    const auto& t = mesh_->triangles[order_[node.first + i]];
                    if (ray_triangle(orig, dir, mesh_->vertices[t[0]],
                                     mesh_->vertices[t[1]], mesh_->vertices[t[2]],
                                     0.0))
                        ++count;
                }
            } else {
                stack[top++] = node.right;
                stack[top++] = node.left;
            }
        }
        return count;
    }

    struct ClosestPoint {
        Vec3 point;
        double dist2 = kInf;
        std::uint32_t triangle = 0;
    };

    [[nodiscard]] ClosestPoint closest_point(Vec3 p) const {
        ClosestPoint best;
        std::uint32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            if (node.box.dist2(p) >= best.dist2) continue;
            if (node.count > 0) {
                for (std::uint32_t i = 0; i < node.count; ++i) {
                    const std::uint32_t tri = order_[node.first + i];
                    const auto& t = mesh_->triangles[tri];
                    const Vec3 q = closest_point_on_triangle(
                        p, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                        mesh_->vertices[t[2]]);
                    const double d2 = (q - p).norm2();
                    if (d2 < best.dist2) best = {q, d2, tri};
                }
            } else {
                // Visit the nearer child last so it pops first.
                const double dl = nodes_[node.left].box.dist2(p);
                const double dr = nodes_[node.right].box.dist2(p);
                if (dl < dr) {
                    stack[top++] = node.right;
                    stack[top++] = node.left;
                } else {
                    stack[top++] = node.left;
                    stack[top++] = node.right;
                }
            }
        }
        return best;
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    struct Node {
        Aabb3 box;
        std::uint32_t left = 0;   // internal: child indices
        std::uint32_t right = 0;
        std::uint32_t first = 0;  // leaf: range into order_
        std::uint32_t count = 0;  // leaf iff count > 0
    };

    [[nodiscard]] Vec3 centroid(std::uint32_t tri) const {
        const auto& t = mesh_->triangles[tri];
        return (mesh_->vertices[t[0]] + mesh_->vertices[t[1]] +
                mesh_->vertices[t[2]]) /
               3.0;
    }

    std::uint32_t build(std::size_t first, std::size_t count) {
        const std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        Aabb3 box;
        for (std::size_t i = 0; i < count; ++i) {
            const auto& t = mesh_->triangles[order_[first + i]];
            box.expand(mesh_->vertices[t[0]]);
            box.expand(mesh_->vertices[t[1]]);
            box.expand(mesh_->vertices[t[2]]);
        }
        nodes_[index].box = box;
        if (count <= 4) {
            nodes_[index].first = static_cast<std::uint32_t>(first);
            nodes_[index].count = static_cast<std::uint32_t>(count);
            return index;
        }
        Aabb3 cbox;
        for (std::size_t i = 0; i < count; ++i)
            cbox.expand(centroid(order_[first + i]));
        const Vec3 ext = cbox.extent();
        const int axis = ext.x >= ext.y ? (ext.x >= ext.z ? 0 : 2)
                                        : (ext.y >= ext.z ? 1 : 2);
        auto key = [&](std::uint32_t tri) {
            const Vec3 c = centroid(tri);
            return axis == 0 ? c.x : (axis == 1 ? c.y : c.z);
        };
        std::sort(order_.begin() + static_cast<std::ptrdiff_t>(first),
                  order_.begin() + static_cast<std::ptrdiff_t>(first + count),
                  [&](std::uint32_t a, std::uint32_t b) {
                      const double ka = key(a), kb = key(b);
                      return ka != kb ? ka < kb : a < b;
                  });
        const std::size_t half = count / 2;
        const std::uint32_t left = build(first, half);
        const std::uint32_t right = build(first + half, count - half);
        nodes_[index].left = left;
        nodes_[index].right = right;
        return index;
    }

    static bool ray_box(Vec3 orig, Vec3 dir, const Aabb3& box, double t_best) {
        double t0 = 0.0, t1 = t_best;
        const double o[3] = {orig.x, orig.y, orig.z};
        const double d[3] = {dir.x, dir.y, dir.z};
        const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
        const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
        for (int i = 0; i < 3; ++i) {
            if (d[i] == 0.0) {
                if (o[i] < lo[i] || o[i] > hi[i]) return false;
                continue;
            }
            const double inv = 1.0 / d[i];
            double ta = (lo[i] - o[i]) * inv;
            double tb = (hi[i] - o[i]) * inv;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
        }
        return true;
    }

    const TriMesh* mesh_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

// Area-weighted uniform surface samples; per point the stream yields the
// triangle pick then two barycentric draws, in that order.
inline std::vector<Vec3> sample_surface_points(const TriMesh& m, std::size_t n,
                                               std::uint64_t seed) {
    validate(m);
    if (m.triangles.empty()) throw std::invalid_argument("sampling: empty mesh");
    std::vector<double> cum(m.triangles.size());
    double total = 0.0;
    for (std::size_t i = 0; i < m.triangles.size(); ++i) {
        const auto& t = m.triangles[i];
        total +=
            triangle_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        cum[i] = total;
    }
    if (total <= 0.0) throw std::invalid_argument("sampling: zero-area mesh");

    std::vector<Vec3> pts;
    if (n == 0) return pts;
    // Triangles are picked systematically along the area ladder (one random
    // phase, equal strides); the position within a triangle stays random.
    Rng rng(seed);
    const double stride = total / static_cast<double>(n);
    const double phase = rng.next_double() * stride;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pick = phase + stride * static_cast<double>(i);
        const std::size_t ti = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
        const auto& t = m.triangles[std::min(ti, m.triangles.size() - 1)];
        const double su = std::sqrt(rng.next_double());
        const double v = rng.next_double();
        const double b0 = 1.0 - su, b1 = su * (1.0 - v), b2 = su * v;
        pts.push_back(m.vertices[t[0]] * b0 + m.vertices[t[1]] * b1 +
                      m.vertices[t[2]] * b2);
    }
    return pts;
}

// Longitude/latitude sphere with outward winding; nlat >= 2 bands, nlon >= 3.
inline TriMesh make_uv_sphere(Vec3 center, double radius, std::size_t nlat = 16,
                              std::size_t nlon = 32) {
    if (nlat < 2 || nlon < 3) throw std::invalid_argument("sphere: too few bands");
    TriMesh m;
    m.vertices.push_back(center + Vec3{0, 0, radius});
    for (std::size_t i = 1; i < nlat; ++i) {
        const double theta =
            3.14159265358979323846 * static_cast<double>(i) / static_cast<double>(nlat);
        for (std::size_t j = 0; j < nlon; ++j) {
            const double phi = 2.0 * 3.14159265358979323846 *
                               static_cast<double>(j) / static_cast<double>(nlon);
            m.vertices.push_back(center + Vec3{radius * std::sin(theta) * std::cos(phi),
                                               radius * std::sin(theta) * std::sin(phi),
                                               radius * std::cos(theta)});
        }
    }
    m.vertices.push_back(center + Vec3{0, 0, -radius});
    const std::uint32_t top = 0;
    const std::uint32_t bottom = static_cast<std::uint32_t>(m.vertices.size() - 1);
    auto ring = [&](std::size_t i, std::size_t j) {
        return static_cast<std::uint32_t>(1 + (i - 1) * nlon + (j % nlon));
    };
    for (std::size_t j = 0; j < nlon; ++j)
        m.triangles.push_back({top, ring(1, j), ring(1, j + 1)});
    for (std::size_t i = 1; i + 1 < nlat; ++i) {
        for (std::size_t j = 0; j < nlon; ++j) {
            m.triangles.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            m.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (std::size_t j = 0; j < nlon; ++j)
        m.triangles.push_back({bottom, ring(nlat - 1, j + 1), ring(nlat - 1, j)});
    validate(m);
    return m;
}

}  // namespace visrecon
