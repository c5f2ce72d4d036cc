// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "visrecon/camera.hpp"
#include "visrecon/color.hpp"
#include "visrecon/colormap.hpp"
#include "visrecon/field.hpp"
#include "visrecon/geometry.hpp"
#include "visrecon/image.hpp"
#include "visrecon/mesh.hpp"

namespace visrecon {

struct Legend {
    std::string colormap_name;
    double vmin = 0.0;
    double vmax = 0.0;
    std::optional<double> isovalue;
};

struct RenderedView {
    ImageRGB image;
    Camera camera;
    Legend legend;
};

// Ray marching and shading constants. The base color for mesh renders is a
// neutral gray so shading carries all of the signal.
inline constexpr double kIsoHitTolerance = 1e-3;
inline constexpr RGBColor kMeshBaseColor{0.7, 0.7, 0.7};

namespace detail {

inline Camera top_down_camera(int width, int height) {
    Camera cam;
    cam.azimuth_deg = 0.0;
    cam.elevation_deg = 90.0;
    cam.distance = 1.0;
    cam.target = Vec3{0, 0, 0};
    cam.vertical_fov_deg = 45.0;
    cam.width = width;
    cam.height = height;
    return cam;
}

inline RGBColor shade(RGBColor base, double factor) {
    if (factor == 1.0) return base;
    const LinearRGB lin = srgb_to_linear(base);
    return linear_to_srgb(
        LinearRGB{lin.r * factor, lin.g * factor, lin.b * factor});
}

}  // namespace detail

// Image row p corresponds to grid row y = p / scale; no vertical flip.
inline RenderedView render_colormap_2d(const Grid2D& g, const Colormap& cm,
                                       int scale = 1) {
    if (scale < 1) throw std::invalid_argument("render: scale must be >= 1");
    auto [norm, stats] = normalize(g);
    const int width = static_cast<int>(g.nx) * scale;
    const int height = static_cast<int>(g.ny) * scale;
    ImageRGB img(width, height);
    for (std::size_t y = 0; y < g.ny; ++y) {
        for (std::size_t x = 0; x < g.nx; ++x) {
            const RGBColor c = sample_colormap(cm, norm.at(x, y));
            for (int dy = 0; dy < scale; ++dy)
                for (int dx = 0; dx < scale; ++dx)
                    img.at(static_cast<int>(x) * scale + dx,
                           static_cast<int>(y) * scale + dy) = c;
        }
    }
    return RenderedView{std::move(img), detail::top_down_camera(width, height),
                        Legend{cm.name, stats.min, stats.max, std::nullopt}};
}

// Orthographic top-down extrusion: surface z = z_scale * normalized value,
// headlight pointing straight down, one pixel per cell.
inline RenderedView render_shaded_heightfield(const Grid2D& g, const Colormap& cm,
                                              double z_scale, double ambient) {
    if (ambient < 0.0 || ambient > 1.0)
        throw std::invalid_argument("render: ambient must be in [0,1]");
    auto [norm, stats] = normalize(g);
    const std::size_t nx = g.nx, ny = g.ny;
    ImageRGB img(static_cast<int>(nx), static_cast<int>(ny));
    auto height_at = [&](std::size_t x, std::size_t y) {
        return z_scale * norm.at(x, y);
    };
    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x < nx; ++x) {
            double dzdx, dzdy;
            if (x == 0)
                dzdx = (height_at(1, y) - height_at(0, y)) / g.spacing.x;
            else if (x == nx - 1)
                dzdx = (height_at(nx - 1, y) - height_at(nx - 2, y)) / g.spacing.x;
            else
                dzdx = (height_at(x + 1, y) - height_at(x - 1, y)) /
                       (2.0 * g.spacing.x);
            if (y == 0)
                dzdy = (height_at(x, 1) - height_at(x, 0)) / g.spacing.y;
            else if (y == ny - 1)
                dzdy = (height_at(x, ny - 1) - height_at(x, ny - 2)) / g.spacing.y;
            else
                dzdy = (height_at(x, y + 1) - height_at(x, y - 1)) /
                       (2.0 * g.spacing.y);
            const Vec3 n = Vec3{-dzdx, -dzdy, 1.0}.normalized();
            const double factor = ambient + (1.0 - ambient) * std::max(0.0, n.z);
            img.at(static_cast<int>(x), static_cast<int>(y)) =
                detail::shade(sample_colormap(cm, norm.at(x, y)), factor);
        }
    }
    const Camera cam = detail::top_down_camera(static_cast<int>(nx),
                                               static_cast<int>(ny));
    return RenderedView{std::move(img), cam,
                        Legend{cm.name, stats.min, stats.max, std::nullopt}};
}

namespace detail {

inline bool ray_aabb(Vec3 orig, Vec3 dir, const Aabb3& box, double& t0,
                     double& t1) {
    t0 = 0.0;
    t1 = std::numeric_limits<double>::infinity();
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

}  // namespace detail

// First sign change of (f - isovalue) along each primary ray, refined by
// bisection until the hit satisfies |f - isovalue| <= 1e-3 * field range
// (with at least 8 bisection steps). Out-of-range isovalues simply never
// produce a sign change, leaving the background.
inline RenderedView render_isosurface(const Grid3D& g, double isovalue,
                                      RGBColor surface_color, const Camera& cam,
                                      double ambient = 0.2) {
    validate(cam);
    if (ambient < 0.0 || ambient > 1.0)
        throw std::invalid_argument("render: ambient must be in [0,1]");
    const CameraBasis basis = camera_pose(cam);
    const Aabb3 box = g.bounds();
    const FieldStats stats = stats_of(g.values);
    const double range = stats.max - stats.min;
    const double tol = kIsoHitTolerance * (range > 0.0 ? range : 1.0);
    const double step =
        0.5 * std::min({g.spacing.x, g.spacing.y, g.spacing.z});
    ImageRGB img(cam.width, cam.height);
    for (int py = 0; py < cam.height; ++py) {
        for (int px = 0; px < cam.width; ++px) {
            const Ray ray = primary_ray(cam, basis, px, py);
            double t0, t1;
            RGBColor color{0, 0, 0};
            if (detail::ray_aabb(ray.origin, ray.direction, box, t0, t1)) {
                double ta = t0;
                double fa = sample_trilinear(g, ray.origin + ray.direction * ta) -
                            isovalue;
                while (ta < t1) {
                    const double tb = std::min(ta + step, t1);
                    const double fb =
                        sample_trilinear(g, ray.origin + ray.direction * tb) -
                        isovalue;
                    if ((fa <= 0.0) != (fb <= 0.0)) {
                        double lo = ta, hi = tb, flo = fa;
                        double mid = 0.5 * (lo + hi);
                        double fmid = 0.0;
                        for (int it = 0; it < 64; ++it) {
                            mid = 0.5 * (lo + hi);
                            fmid = sample_trilinear(
                                       g, ray.origin + ray.direction * mid) -
                                   isovalue;
                            if ((flo <= 0.0) != (fmid <= 0.0)) {
                                hi = mid;
                            } else {
                                lo = mid;
                                flo = fmid;
                            }
                            if (it >= 7 && std::fabs(fmid) <= tol) break;
                        }
                        const Vec3 hit = ray.origin + ray.direction * mid;
                        Vec3 n = field_gradient_at(g, hit).normalized();
                        if (n.dot(ray.direction) > 0.0) n = -n;
                        const double lambert = std::max(0.0, n.dot(-ray.direction));
                        color = detail::shade(surface_color,
                                              ambient + (1.0 - ambient) * lambert);
                        break;
                    }
                    if (tb >= t1) break;
                    ta = tb;
                    fa = fb;
                }
            }
            img.at(px, py) = color;
        }
    }
    return RenderedView{std::move(img), cam,
                        Legend{"", stats.min, stats.max, isovalue}};
}

inline RenderedView render_mesh(const TriMesh& mesh, const MeshBvh& bvh,
                                const Camera& cam, double ambient = 0.2) {
    validate(cam);
    if (ambient < 0.0 || ambient > 1.0)
        throw std::invalid_argument("render: ambient must be in [0,1]");
    const CameraBasis basis = camera_pose(cam);
    ImageRGB img(cam.width, cam.height);
    for (int py = 0; py < cam.height; ++py) {
        for (int px = 0; px < cam.width; ++px) {
            const Ray ray = primary_ray(cam, basis, px, py);
            RGBColor color{0, 0, 0};
            if (const auto hit = bvh.raycast(ray.origin, ray.direction)) {
                const auto& t = mesh.triangles[hit->triangle];
                Vec3 n = triangle_normal(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                         mesh.vertices[t[2]]);
                if (n.dot(ray.direction) > 0.0) n = -n;
                const double lambert = std::max(0.0, n.dot(-ray.direction));
                color = detail::shade(kMeshBaseColor,
                                      ambient + (1.0 - ambient) * lambert);
            }
            img.at(px, py) = color;
        }
    }
    return RenderedView{std::move(img), cam, Legend{"", 0.0, 0.0, std::nullopt}};
}

inline RenderedView render_mesh(const TriMesh& mesh, const Camera& cam,
                                double ambient = 0.2) {
    const MeshBvh bvh(mesh);
    return render_mesh(mesh, bvh, cam, ambient);
}

// Renders the 3x3 neighborhood around `center` (see around_view_cameras for
// the pole rules); `fn` maps a Camera to a RenderedView.
template <typename RenderFn>
std::vector<RenderedView> render_view_set(const Camera& center, RenderFn&& fn) {
    std::vector<RenderedView> views;
    for (const Camera& cam : around_view_cameras(center)) views.push_back(fn(cam));
    return views;
}

// ---- legend metadata sidecar ----

inline void save_legend_json(const RenderedView& view, const std::string& path) {
    nlohmann::json j;
    j["colormap"] = view.legend.colormap_name;
    j["vmin"] = view.legend.vmin;
    j["vmax"] = view.legend.vmax;
    if (view.legend.isovalue)
        j["isovalue"] = *view.legend.isovalue;
    else
        j["isovalue"] = nullptr;
    j["camera"] = {{"azimuth", view.camera.azimuth_deg},
                   {"elevation", view.camera.elevation_deg},
                   {"distance", view.camera.distance},
                   {"fov", view.camera.vertical_fov_deg},
                   {"width", view.camera.width},
                   {"height", view.camera.height}};
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

// ---- decoding rendered colormap images back to values ----

// Per-pixel nearest-representative decode; returns values in [vmin, vmax].
inline Grid2D decode_colormap_image(const ImageRGB& img, const JndBinning& binning,
                                    ColorMetric metric, double vmin, double vmax) {
    Grid2D out(static_cast<std::size_t>(img.width),
               static_cast<std::size_t>(img.height), Vec2{0, 0}, Vec2{1, 1});
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t bin =
                decode_bin_index(binning, metric, srgb_to_lab(img.at(x, y)));
            out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
                vmin + binning.bins[bin].center_value * (vmax - vmin);
        }
    }
    return out;
}

}  // namespace visrecon
