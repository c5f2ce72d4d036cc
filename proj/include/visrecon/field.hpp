// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "visrecon/geometry.hpp"
#include "visrecon/rng.hpp"

namespace visrecon {

// Node-centered uniform grid; values row-major (x fastest).
struct Grid2D {
    std::size_t nx = 0;
    std::size_t ny = 0;
    Vec2 origin{0, 0};
    Vec2 spacing{1, 1};
    std::vector<double> values;

    Grid2D() = default;
    Grid2D(std::size_t nx_, std::size_t ny_, Vec2 origin_ = {0, 0},
           Vec2 spacing_ = {1, 1})
        : nx(nx_), ny(ny_), origin(origin_), spacing(spacing_),
          values(nx_ * ny_, 0.0) {}

    double& at(std::size_t x, std::size_t y) { return values[y * nx + x]; }
    [[nodiscard]] double at(std::size_t x, std::size_t y) const {
        return values[y * nx + x];
    }
    [[nodiscard]] Vec2 position(std::size_t x, std::size_t y) const {
        return {origin.x + spacing.x * static_cast<double>(x),
                origin.y + spacing.y * static_cast<double>(y)};
    }
    [[nodiscard]] std::size_t size() const { return values.size(); }
};

// Node-centered uniform grid; values x-fastest, then y, then z.
struct Grid3D {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;
    Vec3 origin{0, 0, 0};
    Vec3 spacing{1, 1, 1};
    std::vector<double> values;

    Grid3D() = default;
    Grid3D(std::size_t nx_, std::size_t ny_, std::size_t nz_,
           Vec3 origin_ = {0, 0, 0}, Vec3 spacing_ = {1, 1, 1})
        : nx(nx_), ny(ny_), nz(nz_), origin(origin_), spacing(spacing_),
          values(nx_ * ny_ * nz_, 0.0) {}

    double& at(std::size_t x, std::size_t y, std::size_t z) {
        return values[(z * ny + y) * nx + x];
    }
    [[nodiscard]] double at(std::size_t x, std::size_t y, std::size_t z) const {
        return values[(z * ny + y) * nx + x];
    }
    [[nodiscard]] Vec3 position(std::size_t x, std::size_t y, std::size_t z) const {
        return {origin.x + spacing.x * static_cast<double>(x),
                origin.y + spacing.y * static_cast<double>(y),
                origin.z + spacing.z * static_cast<double>(z)};
    }
    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] Aabb3 bounds() const {
        Aabb3 box;
        box.expand(origin);
        box.expand(position(nx - 1, ny - 1, nz - 1));
        return box;
    }
};

struct FieldStats {
    double min = 0.0;
    double max = 0.0;
    double range = 0.0;
};

struct GaussianKernel3 {
    Vec3 center;
    double amplitude = 1.0;
    double sigma = 1.0;
};

struct GaussianKernel2 {
    Vec2 center;
    double amplitude = 1.0;
    double sigma = 1.0;
};

// Kernel parameters drawn from the seed when the list is empty: per kernel,
// center coords, amplitude U[0.5,1.5], sigma U[5%,20%] of bounds diagonal,
// consumed in that order.
struct GaussianMixtureSpec2 {
    std::vector<GaussianKernel2> kernels;
    std::uint64_t seed = 0;
    std::size_t draw_count = 0;  // kernels to draw when the list is empty
};

struct GaussianMixtureSpec3 {
    std::vector<GaussianKernel3> kernels;
    std::uint64_t seed = 0;
    std::size_t draw_count = 0;
};

inline std::vector<GaussianKernel2> draw_kernels(const GaussianMixtureSpec2& spec,
                                                 Vec2 lo, Vec2 hi) {
    if (!spec.kernels.empty()) return spec.kernels;
    std::vector<GaussianKernel2> out;
    Rng rng(spec.seed);
    const double diag = (hi - lo).norm();
    for (std::size_t k = 0; k < spec.draw_count; ++k) {
        GaussianKernel2 g;
        g.center = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        g.amplitude = rng.uniform(0.5, 1.5);
        g.sigma = rng.uniform(0.05 * diag, 0.20 * diag);
        out.push_back(g);
    }
    return out;
}

inline std::vector<GaussianKernel3> draw_kernels(const GaussianMixtureSpec3& spec,
                                                 Vec3 lo, Vec3 hi) {
    if (!spec.kernels.empty()) return spec.kernels;
    std::vector<GaussianKernel3> out;
    Rng rng(spec.seed);
    const double diag = (hi - lo).norm();
    for (std::size_t k = 0; k < spec.draw_count; ++k) {
        GaussianKernel3 g;
        g.center = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y),
                    rng.uniform(lo.z, hi.z)};
        g.amplitude = rng.uniform(0.5, 1.5);
        g.sigma = rng.uniform(0.05 * diag, 0.20 * diag);
        out.push_back(g);
    }
    return out;
}

inline Grid2D synth_gaussian_field(const GaussianMixtureSpec2& spec, std::size_t nx,
                                   std::size_t ny, Vec2 lo = {0, 0},
                                   Vec2 hi = {1, 1}) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid dims must be >= 2");
    const auto kernels = draw_kernels(spec, lo, hi);
    Grid2D g(nx, ny, lo,
             {(hi.x - lo.x) / static_cast<double>(nx - 1),
              (hi.y - lo.y) / static_cast<double>(ny - 1)});
    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x < nx; ++x) {
            const Vec2 p = g.position(x, y);
            double v = 0.0;
            for (const GaussianKernel2& k : kernels) {
                const double d2 = (p - k.center).norm2();
                v += k.amplitude * std::exp(-d2 / (2.0 * k.sigma * k.sigma));
            }
            g.at(x, y) = v;
        }
    }
    return g;
}

inline Grid3D synth_gaussian_field(const GaussianMixtureSpec3& spec, std::size_t nx,
                                   std::size_t ny, std::size_t nz,
                                   Vec3 lo = {0, 0, 0}, Vec3 hi = {1, 1, 1}) {
    if (nx < 2 || ny < 2 || nz < 2)
        throw std::invalid_argument("grid dims must be >= 2");
    const auto kernels = draw_kernels(spec, lo, hi);
    Grid3D g(nx, ny, nz, lo,
             {(hi.x - lo.x) / static_cast<double>(nx - 1),
              (hi.y - lo.y) / static_cast<double>(ny - 1),
              (hi.z - lo.z) / static_cast<double>(nz - 1)});
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t y = 0; y < ny; ++y) {
            for (std::size_t x = 0; x < nx; ++x) {
                const Vec3 p = g.position(x, y, z);
                double v = 0.0;
                for (const GaussianKernel3& k : kernels) {
                    const double d2 = (p - k.center).norm2();
                    v += k.amplitude * std::exp(-d2 / (2.0 * k.sigma * k.sigma));
                }
                g.at(x, y, z) = v;
            }
        }
    }
    return g;
}

// Central differences interior, one-sided at the boundary, per-axis spacing.
inline Grid2D gradient_magnitude(const Grid2D& g) {
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("grid dims must be >= 2");
    Grid2D out(g.nx, g.ny, g.origin, g.spacing);
    for (std::size_t y = 0; y < g.ny; ++y) {
        for (std::size_t x = 0; x < g.nx; ++x) {
            double gx, gy;
            if (x == 0) gx = (g.at(1, y) - g.at(0, y)) / g.spacing.x;
            else if (x == g.nx - 1)
                gx = (g.at(g.nx - 1, y) - g.at(g.nx - 2, y)) / g.spacing.x;
            else gx = (g.at(x + 1, y) - g.at(x - 1, y)) / (2.0 * g.spacing.x);
            if (y == 0) gy = (g.at(x, 1) - g.at(x, 0)) / g.spacing.y;
            else if (y == g.ny - 1)
                gy = (g.at(x, g.ny - 1) - g.at(x, g.ny - 2)) / g.spacing.y;
            else gy = (g.at(x, y + 1) - g.at(x, y - 1)) / (2.0 * g.spacing.y);
            out.at(x, y) = std::hypot(gx, gy);
        }
    }
    return out;
}

inline Grid3D gradient_magnitude(const Grid3D& g) {
    if (g.nx < 2 || g.ny < 2 || g.nz < 2)
        throw std::invalid_argument("grid dims must be >= 2");
    Grid3D out(g.nx, g.ny, g.nz, g.origin, g.spacing);
    for (std::size_t z = 0; z < g.nz; ++z) {
        for (std::size_t y = 0; y < g.ny; ++y) {
            for (std::size_t x = 0; x < g.nx; ++x) {
                double gx, gy, gz;
                if (x == 0) gx = (g.at(1, y, z) - g.at(0, y, z)) / g.spacing.x;
                else if (x == g.nx - 1)
                    gx = (g.at(g.nx - 1, y, z) - g.at(g.nx - 2, y, z)) / g.spacing.x;
                else gx = (g.at(x + 1, y, z) - g.at(x - 1, y, z)) / (2.0 * g.spacing.x);
                if (y == 0) gy = (g.at(x, 1, z) - g.at(x, 0, z)) / g.spacing.y;
                else if (y == g.ny - 1)
                    gy = (g.at(x, g.ny - 1, z) - g.at(x, g.ny - 2, z)) / g.spacing.y;
                else gy = (g.at(x, y + 1, z) - g.at(x, y - 1, z)) / (2.0 * g.spacing.y);
                if (z == 0) gz = (g.at(x, y, 1) - g.at(x, y, 0)) / g.spacing.z;
                else if (z == g.nz - 1)
                    gz = (g.at(x, y, g.nz - 1) - g.at(x, y, g.nz - 2)) / g.spacing.z;
                else gz = (g.at(x, y, z + 1) - g.at(x, y, z - 1)) / (2.0 * g.spacing.z);
                out.at(x, y, z) = std::sqrt(gx * gx + gy * gy + gz * gz);
            }
        }
    }
    return out;
}

inline FieldStats stats_of(const std::vector<double>& values) {
    FieldStats s;
    if (values.empty()) return s;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.min = *mn;
    s.max = *mx;
    s.range = s.max - s.min;
    return s;
}

// Affine map of values onto [0,1]; a constant field maps to all 0.5 (carries
// no rank information, and this avoids dividing by zero).
template <class GridT>
inline std::pair<GridT, FieldStats> normalize(const GridT& g) {
    const FieldStats s = stats_of(g.values);
    GridT out = g;
    if (s.range > 0.0) {
        for (double& v : out.values) v = (v - s.min) / s.range;
    } else {
        std::fill(out.values.begin(), out.values.end(), 0.5);
    }
    return {out, s};
}

namespace detail {
inline double l2_of(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l2_error: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}
}  // namespace detail

inline double l2_error(const Grid2D& a, const Grid2D& b) {
    if (a.nx != b.nx || a.ny != b.ny)
        throw std::invalid_argument("l2_error: dimension mismatch");
    return detail::l2_of(a.values, b.values);
}

inline double l2_error(const Grid3D& a, const Grid3D& b) {
    if (a.nx != b.nx || a.ny != b.ny || a.nz != b.nz)
        throw std::invalid_argument("l2_error: dimension mismatch");
    return detail::l2_of(a.values, b.values);
}

template <class GridT>
inline double rmse(const GridT& a, const GridT& b) {
    return l2_error(a, b) / std::sqrt(static_cast<double>(a.size()));
}

// ---- VRGF binary format ----
// magic 'V','R','G','F'; u32 version = 1; u32 ndims (2 or 3); ndims x u32
// dims; ndims x f64 origin; ndims x f64 spacing; dims-product x f64 values,
// x-fastest. All integers and doubles little-endian.

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64(std::ostream& os, double d) {
    std::uint64_t v = 0;
    std::memcpy(&v, &d, sizeof v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("VRGF: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("VRGF: truncated data");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double d = 0;
    std::memcpy(&d, &v, sizeof d);
    return d;
}

}  // namespace detail

inline void save_vrgf(const Grid2D& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("VRGF", 4);
    detail::put_u32(os, 1);
    detail::put_u32(os, 2);
    detail::put_u32(os, static_cast<std::uint32_t>(g.nx));
    detail::put_u32(os, static_cast<std::uint32_t>(g.ny));
    detail::put_f64(os, g.origin.x);
    detail::put_f64(os, g.origin.y);
    detail::put_f64(os, g.spacing.x);
    detail::put_f64(os, g.spacing.y);
    for (double v : g.values) detail::put_f64(os, v);
}

inline void save_vrgf(const Grid3D& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("VRGF", 4);
    detail::put_u32(os, 1);
    detail::put_u32(os, 3);
    detail::put_u32(os, static_cast<std::uint32_t>(g.nx));
    detail::put_u32(os, static_cast<std::uint32_t>(g.ny));
    detail::put_u32(os, static_cast<std::uint32_t>(g.nz));
    detail::put_f64(os, g.origin.x);
    detail::put_f64(os, g.origin.y);
    detail::put_f64(os, g.origin.z);
    detail::put_f64(os, g.spacing.x);
    detail::put_f64(os, g.spacing.y);
    detail::put_f64(os, g.spacing.z);
    for (double v : g.values) detail::put_f64(os, v);
}

namespace detail {
inline std::uint32_t open_vrgf(std::ifstream& is, const std::string& path) {
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "VRGF", 4) != 0)
        throw std::runtime_error(path + ": not a VRGF file");
    const std::uint32_t version = get_u32(is);
    if (version != 1)
        throw std::runtime_error(path + ": unsupported VRGF version " +
                                 std::to_string(version));
    return get_u32(is);  // ndims
}
}  // namespace detail

inline int vrgf_ndims(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    const std::uint32_t nd = detail::open_vrgf(is, path);
    if (nd != 2 && nd != 3)
        throw std::runtime_error(path + ": bad ndims " + std::to_string(nd));
    return static_cast<int>(nd);
}

inline Grid2D load_vrgf_2d(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    const std::uint32_t nd = detail::open_vrgf(is, path);
    if (nd != 2) throw std::runtime_error(path + ": expected 2D grid");
    const std::uint32_t nx = detail::get_u32(is);
    const std::uint32_t ny = detail::get_u32(is);
    if (nx < 2 || ny < 2) throw std::runtime_error(path + ": dims must be >= 2");
    Grid2D g(nx, ny);
    g.origin = {detail::get_f64(is), detail::get_f64(is)};
    g.spacing = {detail::get_f64(is), detail::get_f64(is)};
    if (!(g.spacing.x > 0.0 && g.spacing.y > 0.0))
        throw std::runtime_error(path + ": spacing must be positive");
    for (double& v : g.values) v = detail::get_f64(is);
    return g;
}

inline Grid3D load_vrgf_3d(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    const std::uint32_t nd = detail::open_vrgf(is, path);
    if (nd != 3) throw std::runtime_error(path + ": expected 3D grid");
    const std::uint32_t nx = detail::get_u32(is);
    const std::uint32_t ny = detail::get_u32(is);
    const std::uint32_t nz = detail::get_u32(is);
    if (nx < 2 || ny < 2 || nz < 2)
        throw std::runtime_error(path + ": dims must be >= 2");
    Grid3D g(nx, ny, nz);
    g.origin = {detail::get_f64(is), detail::get_f64(is), detail::get_f64(is)};
    g.spacing = {detail::get_f64(is), detail::get_f64(is), detail::get_f64(is)};
    if (!(g.spacing.x > 0.0 && g.spacing.y > 0.0 && g.spacing.z > 0.0))
        throw std::runtime_error(path + ": spacing must be positive");
    for (double& v : g.values) v = detail::get_f64(is);
    return g;
}

// Headerless CSV, rows = y, columns = x; unit spacing at the origin.
inline Grid2D load_csv_2d(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": bad numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2 || rows.front().size() < 2)
        throw std::runtime_error(path + ": need at least a 2x2 grid");
    Grid2D g(rows.front().size(), rows.size());
    for (std::size_t y = 0; y < g.ny; ++y)
        for (std::size_t x = 0; x < g.nx; ++x) g.at(x, y) = rows[y][x];
    return g;
}

// Trilinear interpolation; positions outside the grid clamp to the bounds.
inline double sample_trilinear(const Grid3D& g, Vec3 p) {
    auto axis = [](double v, double origin, double spacing, std::size_t n) {
        double f = (v - origin) / spacing;
        f = std::clamp(f, 0.0, static_cast<double>(n - 1));
        std::size_t i0 = static_cast<std::size_t>(f);
        if (i0 >= n - 1) i0 = n - 2;
        return std::pair<std::size_t, double>{i0, f - static_cast<double>(i0)};
    };
    const auto [ix, fx] = axis(p.x, g.origin.x, g.spacing.x, g.nx);
    const auto [iy, fy] = axis(p.y, g.origin.y, g.spacing.y, g.ny);
    const auto [iz, fz] = axis(p.z, g.origin.z, g.spacing.z, g.nz);
    auto v = [&](std::size_t dx, std::size_t dy, std::size_t dz) {
        return g.at(ix + dx, iy + dy, iz + dz);
    };
    const double c00 = std::lerp(v(0, 0, 0), v(1, 0, 0), fx);
    const double c10 = std::lerp(v(0, 1, 0), v(1, 1, 0), fx);
    const double c01 = std::lerp(v(0, 0, 1), v(1, 0, 1), fx);
    const double c11 = std::lerp(v(0, 1, 1), v(1, 1, 1), fx);
    return std::lerp(std::lerp(c00, c10, fy), std::lerp(c01, c11, fy), fz);
}

// Central differences of the trilinear interpolant at half-spacing steps.
inline Vec3 field_gradient_at(const Grid3D& g, Vec3 p) {
    const double hx = 0.5 * g.spacing.x;
    const double hy = 0.5 * g.spacing.y;
    const double hz = 0.5 * g.spacing.z;
    return Vec3{(sample_trilinear(g, {p.x + hx, p.y, p.z}) -
                 sample_trilinear(g, {p.x - hx, p.y, p.z})) /
                    (2.0 * hx),
                (sample_trilinear(g, {p.x, p.y + hy, p.z}) -
                 sample_trilinear(g, {p.x, p.y - hy, p.z})) /
                    (2.0 * hy),
                (sample_trilinear(g, {p.x, p.y, p.z + hz}) -
                 sample_trilinear(g, {p.x, p.y, p.z - hz})) /
                    (2.0 * hz)};
}

}  // namespace visrecon
