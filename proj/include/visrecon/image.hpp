// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "visrecon/color.hpp"

namespace visrecon {

// Row-major; row 0 is the top scanline of the stored PNG.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<RGBColor> pixels;

    ImageRGB() = default;
    ImageRGB(int w, int h)
        : width(w),
          height(h),
          pixels(static_cast<std::size_t>(w > 0 && h > 0 ? w * h : 0)) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("image: non-positive dims");
    }

    RGBColor& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    [[nodiscard]] const RGBColor& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

inline std::uint8_t quantize8(double v) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<std::uint8_t>(c * 255.0 + 0.5);
}

namespace detail {
struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
}  // namespace detail

// 8-bit RGB, no alpha, no interlacing.
inline void save_png(const ImageRGB& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0)
        throw std::invalid_argument("save_png: empty image");
    std::unique_ptr<std::FILE, detail::FileCloser> fp(
        std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng error while writing " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const RGBColor& c = img.at(x, y);
            row[3 * static_cast<std::size_t>(x) + 0] = quantize8(c.r);
            row[3 * static_cast<std::size_t>(x) + 1] = quantize8(c.g);
            row[3 * static_cast<std::size_t>(x) + 2] = quantize8(c.b);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Reads 8-bit images; palette/gray/alpha variants are expanded to RGB.
inline ImageRGB load_png(const std::string& path) {
    std::unique_ptr<std::FILE, detail::FileCloser> fp(
        std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": not a readable PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    if (png_get_channels(png, info) != 3 || w <= 0 || h <= 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error(path + ": unsupported channel layout");
    }

    ImageRGB img(w, h);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) {
            const std::size_t i = 3 * static_cast<std::size_t>(x);
            img.at(x, y) = {row[i] / 255.0, row[i + 1] / 255.0, row[i + 2] / 255.0};
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace visrecon
