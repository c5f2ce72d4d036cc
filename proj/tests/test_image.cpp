// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#include "visrecon/image.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace vr = visrecon;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

vr::ImageRGB test_pattern(int w, int h) {
    vr::ImageRGB img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.at(x, y) = vr::RGBColor{static_cast<double>(x) / (w - 1),
                                        static_cast<double>(y) / (h - 1),
                                        static_cast<double>((x + y) % 2)};
        }
    }
    return img;
}

}  // namespace

TEST(Quantize, RoundingAndClamping) {
    EXPECT_EQ(vr::quantize8(0.0), 0);
    EXPECT_EQ(vr::quantize8(1.0), 255);
    EXPECT_EQ(vr::quantize8(0.5), 128);
    EXPECT_EQ(vr::quantize8(-0.3), 0);
    EXPECT_EQ(vr::quantize8(1.7), 255);
    EXPECT_EQ(vr::quantize8(1.0 / 255.0), 1);
    EXPECT_EQ(vr::quantize8(0.4 / 255.0), 0);
    EXPECT_EQ(vr::quantize8(0.6 / 255.0), 1);
}

TEST(ImageRGB, IndexingIsRowMajor) {
    vr::ImageRGB img(3, 2);
    img.at(2, 1) = vr::RGBColor{1, 0, 0};
    EXPECT_DOUBLE_EQ(img.pixels[1 * 3 + 2].r, 1.0);
    EXPECT_EQ(img.pixels.size(), 6u);
}

TEST(Png, SaveLoadRoundTrip) {
    const vr::ImageRGB img = test_pattern(17, 9);
    const std::string path = temp_path("vr_test_roundtrip.png");
    vr::save_png(img, path);
    const vr::ImageRGB back = vr::load_png(path);
    ASSERT_EQ(back.width, img.width);
    ASSERT_EQ(back.height, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            EXPECT_EQ(vr::quantize8(back.at(x, y).r), vr::quantize8(img.at(x, y).r));
            EXPECT_EQ(vr::quantize8(back.at(x, y).g), vr::quantize8(img.at(x, y).g));
            EXPECT_EQ(vr::quantize8(back.at(x, y).b), vr::quantize8(img.at(x, y).b));
        }
    }
    std::remove(path.c_str());
}

TEST(Png, LoadedValuesAreExactEighthBitFractions) {
    vr::ImageRGB img(1, 1);
    img.at(0, 0) = vr::RGBColor{37.0 / 255.0, 0.0, 1.0};
    const std::string path = temp_path("vr_test_exact.png");
    vr::save_png(img, path);
    const vr::ImageRGB back = vr::load_png(path);
    EXPECT_DOUBLE_EQ(back.at(0, 0).r, 37.0 / 255.0);
    EXPECT_DOUBLE_EQ(back.at(0, 0).g, 0.0);
    EXPECT_DOUBLE_EQ(back.at(0, 0).b, 1.0);
    std::remove(path.c_str());
}

TEST(Png, SaveIsByteDeterministic) {
    const vr::ImageRGB img = test_pattern(12, 7);
    const std::string a = temp_path("vr_test_det_a.png");
    const std::string b = temp_path("vr_test_det_b.png");
    vr::save_png(img, a);
    vr::save_png(img, b);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)),
                         std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)),
                         std::istreambuf_iterator<char>());
    EXPECT_FALSE(ca.empty());
    EXPECT_EQ(ca, cb);
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST(Png, RejectsMissingFile) {
    EXPECT_THROW(vr::load_png(temp_path("vr_test_nonexistent.png")),
                 std::runtime_error);
}

TEST(Png, RejectsNonPngContent) {
    const std::string path = temp_path("vr_test_not_a_png.png");
    std::ofstream(path) << "this is not a png";
    EXPECT_THROW(vr::load_png(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST(ImageRGB, RejectsNonPositiveDimensions) {
    EXPECT_THROW(vr::ImageRGB(0, 4), std::invalid_argument);
    EXPECT_THROW(vr::ImageRGB(4, 0), std::invalid_argument);
}
