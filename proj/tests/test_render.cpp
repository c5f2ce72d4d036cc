// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#include "visrecon/render.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace vr = visrecon;

namespace {

std::string data_path(const std::string& rel) {
    return std::string(VISRECON_DATA_DIR) + "/" + rel;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

vr::Colormap load_map(const std::string& name) {
    return vr::load_colormap(data_path("colormaps/" + name + ".json"));
}

bool same_pixels(const vr::ImageRGB& a, const vr::ImageRGB& b) {
    if (a.width != b.width || a.height != b.height) return false;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        if (a.pixels[i].r != b.pixels[i].r || a.pixels[i].g != b.pixels[i].g ||
            a.pixels[i].b != b.pixels[i].b)
            return false;
    }
    return true;
}

bool is_black(const vr::RGBColor& c) {
    return c.r == 0.0 && c.g == 0.0 && c.b == 0.0;
}

vr::Camera look_at_origin(double az, double el, double dist, int size) {
    vr::Camera cam;
    cam.azimuth_deg = az;
    cam.elevation_deg = el;
    cam.distance = dist;
    cam.target = vr::Vec3{0, 0, 0};
    cam.vertical_fov_deg = 45.0;
    cam.width = size;
    cam.height = size;
    return cam;
}

// f = -|x - c| on a node-centered grid spanning [-1.5, 1.5]^3.
vr::Grid3D ball_field(std::size_t n) {
    vr::Grid3D g(n, n, n, vr::Vec3{-1.5, -1.5, -1.5},
                 vr::Vec3{3.0 / (n - 1), 3.0 / (n - 1), 3.0 / (n - 1)});
    for (std::size_t z = 0; z < n; ++z)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x)
                g.at(x, y, z) = -g.position(x, y, z).norm();
    return g;
}

}  // namespace

TEST(Colormap2D, ConstantFieldPaintsMidpointColor) {
    const vr::Colormap cm = load_map("viridis");
    vr::Grid2D g(4, 3);
    for (double& v : g.values) v = 7.25;
    const vr::RenderedView view = vr::render_colormap_2d(g, cm);
    const vr::RGBColor expected = vr::sample_colormap(cm, 0.5);
    for (const auto& p : view.image.pixels) {
        EXPECT_DOUBLE_EQ(p.r, expected.r);
        EXPECT_DOUBLE_EQ(p.g, expected.g);
        EXPECT_DOUBLE_EQ(p.b, expected.b);
    }
    EXPECT_DOUBLE_EQ(view.legend.vmin, 7.25);
    EXPECT_DOUBLE_EQ(view.legend.vmax, 7.25);
    EXPECT_EQ(view.legend.colormap_name, "viridis");
}

TEST(Colormap2D, TwoCellGridHitsEndpoints) {
    const vr::Colormap cm = load_map("plasma");
    vr::Grid2D g(2, 1);
    g.at(0, 0) = 0.0;
    g.at(1, 0) = 1.0;
    const vr::RenderedView view = vr::render_colormap_2d(g, cm, 1);
    const vr::RGBColor lo = vr::sample_colormap(cm, 0.0);
    const vr::RGBColor hi = vr::sample_colormap(cm, 1.0);
    EXPECT_DOUBLE_EQ(view.image.at(0, 0).r, lo.r);
    EXPECT_DOUBLE_EQ(view.image.at(1, 0).b, hi.b);
}

TEST(Colormap2D, ImageRowZeroIsGridRowZero) {
    const vr::Colormap cm = load_map("gray");
    vr::Grid2D g(1, 2);
    g.at(0, 0) = 0.0;
    g.at(0, 1) = 1.0;
    const vr::RenderedView view = vr::render_colormap_2d(g, cm, 1);
    EXPECT_LT(view.image.at(0, 0).r, 0.5);
    EXPECT_GT(view.image.at(0, 1).r, 0.5);
}

TEST(Colormap2D, ScaleReplicatesBlocks) {
    const vr::Colormap cm = load_map("viridis");
    vr::Grid2D g(2, 2);
    g.at(0, 0) = 0.0;
    g.at(1, 0) = 1.0;
    g.at(0, 1) = 2.0;
    g.at(1, 1) = 3.0;
    const vr::RenderedView view = vr::render_colormap_2d(g, cm, 3);
    EXPECT_EQ(view.image.width, 6);
    EXPECT_EQ(view.image.height, 6);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
            EXPECT_DOUBLE_EQ(view.image.at(x, y).r, view.image.at(0, 0).r);
            EXPECT_DOUBLE_EQ(view.image.at(3 + x, y).g, view.image.at(3, 0).g);
        }
    EXPECT_THROW(vr::render_colormap_2d(g, cm, 0), std::invalid_argument);
}

TEST(Colormap2D, EncodeDecodeErrorBoundedByBinWidth) {
    const vr::Colormap cm = load_map("viridis");
    const vr::JndBinning binning = vr::build_jnd_binning(cm);
    vr::Grid2D g(8, 8);
    for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x)
            g.at(x, y) = static_cast<double>(x + 8 * y);
    const vr::RenderedView view = vr::render_colormap_2d(g, cm, 1);
    const vr::Grid2D back =
        vr::decode_colormap_image(view.image, binning, vr::ColorMetric::DE2000,
                                  view.legend.vmin, view.legend.vmax);
    const double range = view.legend.vmax - view.legend.vmin;
    for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
            const double t = g.at(x, y) / 63.0;
            double width = 0.0;
            for (const auto& bin : binning.bins)
                if (t >= bin.t_lo && t <= bin.t_hi)
                    width = std::max(width, bin.t_hi - bin.t_lo);
            EXPECT_LE(std::fabs(back.at(x, y) - g.at(x, y)), width * range + 1e-12)
                << "cell " << x << "," << y;
        }
    }
}

TEST(ShadedHeightfield, ConstantFieldEqualsFlatColormapRender) {
    const vr::Colormap cm = load_map("coolwarm");
    vr::Grid2D g(5, 4);
    for (double& v : g.values) v = -3.0;
    const vr::RenderedView shaded = vr::render_shaded_heightfield(g, cm, 25.0, 0.2);
    const vr::RenderedView flat = vr::render_colormap_2d(g, cm, 1);
    EXPECT_TRUE(same_pixels(shaded.image, flat.image));
}

TEST(ShadedHeightfield, FortyFiveDegreeSlopeDimsUniformly) {
    const vr::Colormap cm = load_map("gray");
    // Values rise linearly with x; z_scale equal to the x extent gives a
    // 45 degree slope everywhere.
    const std::size_t n = 9;
    vr::Grid2D g(n, n, vr::Vec2{0, 0}, vr::Vec2{1.0 / (n - 1), 1.0 / (n - 1)});
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            g.at(x, y) = static_cast<double>(x) / (n - 1);
    const double ambient = 0.2;
    const vr::RenderedView view =
        vr::render_shaded_heightfield(g, cm, 1.0, ambient);
    const double factor = ambient + (1.0 - ambient) / std::sqrt(2.0);
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            const vr::RGBColor base =
                vr::sample_colormap(cm, static_cast<double>(x) / (n - 1));
            const vr::LinearRGB lin = vr::srgb_to_linear(base);
            const vr::RGBColor expected = vr::linear_to_srgb(
                vr::LinearRGB{lin.r * factor, lin.g * factor, lin.b * factor});
            EXPECT_NEAR(view.image.at(static_cast<int>(x), static_cast<int>(y)).r,
                        expected.r, 1e-12);
        }
    }
}

TEST(ShadedHeightfield, AmbientOneEqualsColormapRender) {
    const vr::Colormap cm = load_map("plasma");
    const vr::Grid2D g =
        vr::synth_gaussian_field(vr::GaussianMixtureSpec2{{}, 3, 6}, 24, 24);
    const vr::RenderedView shaded = vr::render_shaded_heightfield(g, cm, 40.0, 1.0);
    const vr::RenderedView flat = vr::render_colormap_2d(g, cm, 1);
    EXPECT_TRUE(same_pixels(shaded.image, flat.image));
    EXPECT_THROW(vr::render_shaded_heightfield(g, cm, 40.0, 1.5),
                 std::invalid_argument);
}

TEST(Trilinear, ReproducesAffineFieldsExactly) {
    vr::Grid3D g(5, 6, 7, vr::Vec3{-1, 0, 2}, vr::Vec3{0.5, 0.25, 0.125});
    auto f = [](vr::Vec3 p) { return 2.0 * p.x + 3.0 * p.y - p.z + 0.25; };
    for (std::size_t z = 0; z < g.nz; ++z)
        for (std::size_t y = 0; y < g.ny; ++y)
            for (std::size_t x = 0; x < g.nx; ++x)
                g.at(x, y, z) = f(g.position(x, y, z));
    vr::Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        const vr::Vec3 p{rng.uniform(-1, 1), rng.uniform(0, 1.25),
                         rng.uniform(2, 2.75)};
        EXPECT_NEAR(vr::sample_trilinear(g, p), f(p), 1e-12);
    }
    // Node-exact.
    EXPECT_DOUBLE_EQ(vr::sample_trilinear(g, g.position(3, 4, 5)), g.at(3, 4, 5));
    // Gradient of an affine field is its coefficient vector.
    const vr::Vec3 grad = vr::field_gradient_at(g, vr::Vec3{-0.2, 0.6, 2.4});
    EXPECT_NEAR(grad.x, 2.0, 1e-9);
    EXPECT_NEAR(grad.y, 3.0, 1e-9);
    EXPECT_NEAR(grad.z, -1.0, 1e-9);
}

TEST(Isosurface, MissingRaysAreBlack) {
    const vr::Grid3D g = ball_field(17);
    // Isovalue outside the field range: nothing to hit.
    const vr::RenderedView view = vr::render_isosurface(
        g, 1.0, vr::RGBColor{1, 0, 0}, look_at_origin(30, 20, 5, 16));
    for (const auto& p : view.image.pixels) EXPECT_TRUE(is_black(p));
}

TEST(Isosurface, BallSilhouetteMatchesProjectedDisc) {
    const vr::Grid3D g = ball_field(49);
    const double r = 0.8;
    const int size = 101;
    const vr::Camera cam = look_at_origin(0, 0, 4.0, size);
    const vr::RenderedView view =
        vr::render_isosurface(g, -r, vr::RGBColor{1, 1, 1}, cam);
    // Angular radius asin(r/d) maps to pixel radius via the fov.
    const double pixel_radius = std::tan(std::asin(r / 4.0)) /
                                std::tan(0.5 * vr::deg_to_rad(45.0)) *
                                (size / 2.0);
    const double center = (size - 1) / 2.0;
    for (int py = 0; py < size; ++py) {
        for (int px = 0; px < size; ++px) {
            const double rho = std::hypot(px - center, py - center);
            const bool lit = !is_black(view.image.at(px, py));
            if (rho < pixel_radius - 1.0) {
                EXPECT_TRUE(lit) << px << "," << py;
            } else if (rho > pixel_radius + 1.0) {
                EXPECT_FALSE(lit) << px << "," << py;
            }
        }
    }
}

TEST(Isosurface, CenterPixelOfFacingSphereIsBrightest) {
    const vr::Grid3D g = ball_field(49);
    const int size = 41;
    const vr::RenderedView view = vr::render_isosurface(
        g, -0.8, vr::RGBColor{0.5, 0.8, 0.3}, look_at_origin(0, 0, 4.0, size),
        0.2);
    const vr::RGBColor center = view.image.at(size / 2, size / 2);
    const vr::RGBColor full = vr::linear_to_srgb(
        vr::LinearRGB{vr::srgb_to_linear(vr::RGBColor{0.5, 0.8, 0.3}).r,
                      vr::srgb_to_linear(vr::RGBColor{0.5, 0.8, 0.3}).g,
                      vr::srgb_to_linear(vr::RGBColor{0.5, 0.8, 0.3}).b});
    EXPECT_NEAR(center.r, full.r, 5e-3);
    EXPECT_NEAR(center.g, full.g, 5e-3);
    EXPECT_NEAR(center.b, full.b, 5e-3);
    // Every lit pixel is at most as bright.
    for (const auto& p : view.image.pixels) {
        if (!is_black(p)) {
            EXPECT_LE(p.g, center.g + 1e-12);
        }
    }
}

TEST(Isosurface, DeterministicAcrossRuns) {
    const vr::Grid3D g = ball_field(25);
    const vr::Camera cam = look_at_origin(25, 35, 4.5, 24);
    const vr::RenderedView a =
        vr::render_isosurface(g, -0.7, vr::RGBColor{1, 1, 1}, cam);
    const vr::RenderedView b =
        vr::render_isosurface(g, -0.7, vr::RGBColor{1, 1, 1}, cam);
    EXPECT_TRUE(same_pixels(a.image, b.image));
    EXPECT_TRUE(a.legend.isovalue.has_value());
    EXPECT_DOUBLE_EQ(*a.legend.isovalue, -0.7);
}

TEST(MeshRender, TriangleCoversCenterPixel) {
    vr::TriMesh m;
    m.vertices = {{0, -2, -2}, {0, 2, -2}, {0, 0, 3}};
    m.triangles = {{0, 1, 2}};
    const vr::Camera cam = look_at_origin(0, 0, 5, 33);
    const vr::RenderedView view = vr::render_mesh(m, cam);
    EXPECT_FALSE(is_black(view.image.at(16, 16)));
    EXPECT_TRUE(is_black(view.image.at(0, 0)));
    EXPECT_TRUE(is_black(view.image.at(32, 32)));
}

TEST(MeshRender, SphereSilhouetteAreaWithinFivePercent) {
    const vr::TriMesh m = vr::make_uv_sphere({0, 0, 0}, 1.0, 24, 48);
    const int size = 101;
    const vr::Camera cam = look_at_origin(40, 25, 4.0, size);
    const vr::RenderedView view = vr::render_mesh(m, cam);
    int lit = 0;
    for (const auto& p : view.image.pixels)
        if (!is_black(p)) ++lit;
    const double pixel_radius = std::tan(std::asin(1.0 / 4.0)) /
                                std::tan(0.5 * vr::deg_to_rad(45.0)) *
                                (size / 2.0);
    const double analytic = 3.14159265358979323846 * pixel_radius * pixel_radius;
    EXPECT_NEAR(static_cast<double>(lit), analytic, 0.05 * analytic);
}

TEST(MeshRender, FrontFacingTriangleSheenIsLambertTimesGray) {
    // Triangle in the y-z plane faced head-on from +x: n.l = 1.
    vr::TriMesh m;
    m.vertices = {{0, -3, -3}, {0, 3, -3}, {0, 0, 4}};
    m.triangles = {{0, 1, 2}};
    const vr::Camera cam = look_at_origin(0, 0, 5, 9);
    const vr::RenderedView view = vr::render_mesh(m, cam, 0.2);
    const vr::RGBColor center = view.image.at(4, 4);
    const vr::LinearRGB gray = vr::srgb_to_linear(vr::RGBColor{0.7, 0.7, 0.7});
    const vr::RGBColor expected =
        vr::linear_to_srgb(vr::LinearRGB{gray.r, gray.g, gray.b});
    EXPECT_NEAR(center.r, expected.r, 1e-9);
}

TEST(ViewSet, RendersNineImagesWithSharedDimensions) {
    const vr::TriMesh m = vr::make_uv_sphere({0, 0, 0}, 1.0, 8, 12);
    const vr::MeshBvh bvh(m);
    vr::Camera center = look_at_origin(10, 90, 4.0, 16);
    const auto views = vr::render_view_set(center, [&](const vr::Camera& c) {
        return vr::render_mesh(m, bvh, c);
    });
    ASSERT_EQ(views.size(), 9u);
    for (const auto& v : views) {
        EXPECT_EQ(v.image.width, 16);
        EXPECT_EQ(v.image.height, 16);
    }
}

TEST(Legend, SidecarJsonRoundTrips) {
    const vr::Colormap cm = load_map("viridis");
    vr::Grid2D g(3, 3);
    for (std::size_t i = 0; i < 9; ++i) g.values[i] = static_cast<double>(i);
    vr::RenderedView view = vr::render_colormap_2d(g, cm);
    view.legend.isovalue = 4.5;
    view.camera = look_at_origin(15, -30, 2.5, 3);
    const std::string path = temp_path("vr_test_legend.json");
    vr::save_legend_json(view, path);
    std::ifstream is(path);
    nlohmann::json j;
    is >> j;
    EXPECT_EQ(j["colormap"], "viridis");
    EXPECT_DOUBLE_EQ(j["vmin"].get<double>(), 0.0);
    EXPECT_DOUBLE_EQ(j["vmax"].get<double>(), 8.0);
    EXPECT_DOUBLE_EQ(j["isovalue"].get<double>(), 4.5);
    EXPECT_DOUBLE_EQ(j["camera"]["azimuth"].get<double>(), 15.0);
    EXPECT_DOUBLE_EQ(j["camera"]["elevation"].get<double>(), -30.0);
    EXPECT_EQ(j["camera"]["width"].get<int>(), 3);
    std::remove(path.c_str());
}
