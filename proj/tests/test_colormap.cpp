// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#include "visrecon/colormap.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "visrecon/rng.hpp"

namespace visrecon {
namespace {

const std::string kDataDir = VISRECON_DATA_DIR;

Colormap bundled(const std::string& name) {
    return load_colormap(kDataDir + "/colormaps/" + name + ".json");
}

Colormap gray_ramp(int n = 256) {
    Colormap cm;
    cm.name = "ramp";
    for (int i = 0; i < n; ++i) {
        const double v = static_cast<double>(i) / (n - 1);
        cm.samples.push_back({v, v, v});
    }
    return cm;
}

Colormap constant_map() {
    Colormap cm;
    cm.name = "const";
    cm.samples = {{0.3, 0.5, 0.7}, {0.3, 0.5, 0.7}, {0.3, 0.5, 0.7}};
    return cm;
}

TEST(ColormapIo, LoadBundledViridis) {
    const Colormap cm = bundled("viridis");
    EXPECT_EQ(cm.name, "viridis");
    EXPECT_EQ(cm.samples.size(), 256u);
}

TEST(ColormapIo, RoundTripSaveLoad) {
    const Colormap cm = bundled("coolwarm");
    const auto tmp = std::filesystem::temp_directory_path() / "vr_cm_roundtrip.json";
    save_colormap(cm, tmp.string());
    const Colormap back = load_colormap(tmp.string());
    std::filesystem::remove(tmp);
    ASSERT_EQ(back.samples.size(), cm.samples.size());
    EXPECT_EQ(back.name, cm.name);
    for (std::size_t i = 0; i < cm.samples.size(); ++i) {
        EXPECT_DOUBLE_EQ(back.samples[i].r, cm.samples[i].r);
        EXPECT_DOUBLE_EQ(back.samples[i].g, cm.samples[i].g);
        EXPECT_DOUBLE_EQ(back.samples[i].b, cm.samples[i].b);
    }
}

TEST(ColormapIo, RejectsMalformedFiles) {
    const auto dir = std::filesystem::temp_directory_path();
    struct Bad {
        const char* fname;
        const char* body;
    };
    const Bad bads[] = {
        {"vr_bad1.json", "not json"},
        {"vr_bad2.json", "{\"name\":\"x\"}"},
        {"vr_bad3.json", "{\"name\":\"x\",\"colors\":[[0,0,0]]}"},          // < 2 samples
        {"vr_bad4.json", "{\"name\":\"x\",\"colors\":[[0,0],[1,1,1]]}"},    // bad row
        {"vr_bad5.json", "{\"name\":\"x\",\"colors\":[[0,0,2],[1,1,1]]}"},  // out of range
    };
    for (const Bad& b : bads) {
        const auto p = dir / b.fname;
        std::FILE* f = std::fopen(p.string().c_str(), "w");
        ASSERT_NE(f, nullptr);
        std::fputs(b.body, f);
        std::fclose(f);
        EXPECT_THROW(load_colormap(p.string()), std::exception) << b.fname;
        std::filesystem::remove(p);
    }
    EXPECT_THROW(load_colormap((dir / "vr_missing.json").string()), std::exception);
}

TEST(SampleColormap, EndpointsAndMidpoints) {
    Colormap cm;
    cm.name = "two";
    cm.samples = {{0, 0, 0}, {1, 1, 1}};
    EXPECT_DOUBLE_EQ(sample_colormap(cm, 0.0).r, 0.0);
    EXPECT_DOUBLE_EQ(sample_colormap(cm, 1.0).r, 1.0);
    EXPECT_DOUBLE_EQ(sample_colormap(cm, 0.5).g, 0.5);
    // clamping
    EXPECT_DOUBLE_EQ(sample_colormap(cm, -1.0).b, 0.0);
    EXPECT_DOUBLE_EQ(sample_colormap(cm, 2.0).b, 1.0);
}

TEST(SampleColormap, HitsGridNodesExactly) {
    const Colormap cm = bundled("viridis");
    const std::size_t n = cm.samples.size();
    for (std::size_t i : {std::size_t{0}, n / 3, n / 2, n - 1}) {
        const double t = static_cast<double>(i) / (n - 1);
        const RGBColor c = sample_colormap(cm, t);
        EXPECT_NEAR(c.r, cm.samples[i].r, 1e-12);
        EXPECT_NEAR(c.g, cm.samples[i].g, 1e-12);
        EXPECT_NEAR(c.b, cm.samples[i].b, 1e-12);
    }
}

TEST(ArcLength, ConstantMapIsZero) { EXPECT_EQ(arc_length(constant_map()), 0.0); }

TEST(ArcLength, TwoSampleMapIsSingleSegment) {
    Colormap cm;
    cm.name = "seg";
    cm.samples = {{0, 0, 0}, {1, 1, 1}};
    EXPECT_DOUBLE_EQ(arc_length(cm),
                     delta_e_2000(srgb_to_lab({0, 0, 0}), srgb_to_lab({1, 1, 1})));
}

// Regression value from an independent scalar summation of the same ramp.
TEST(ArcLength, GrayRampPinned) {
    EXPECT_NEAR(arc_length(bundled("gray")), 75.153250, 1e-3);
}

TEST(DiscriminativePower, Arithmetic) {
    EXPECT_EQ(discriminative_power(constant_map()), 0.0);
    const Colormap g = bundled("gray");
    EXPECT_NEAR(discriminative_power(g), arc_length(g) / 2.9, 1e-12);
}

TEST(DiscriminativePower, InvariantUnderReversal) {
    for (const char* name : {"viridis", "Spectral", "gist_ncar"}) {
        Colormap cm = bundled(name);
        Colormap rev = cm;
        std::reverse(rev.samples.begin(), rev.samples.end());
        EXPECT_NEAR(discriminative_power(cm), discriminative_power(rev), 1e-9) << name;
    }
}

TEST(JndBinning, ConstantMapSingleBin) {
    const JndBinning b = build_jnd_binning(constant_map());
    ASSERT_EQ(b.bins.size(), 1u);
    EXPECT_EQ(b.bins[0].t_lo, 0.0);
    EXPECT_EQ(b.bins[0].t_hi, 1.0);
    EXPECT_EQ(b.bins[0].center_value, 0.5);
    EXPECT_EQ(b.source_arc_length, 0.0);
}

TEST(JndBinning, BinCountIsCeilArcOverJnd) {
    for (const char* name : {"viridis", "gray", "summer", "flag"}) {
        const Colormap cm = bundled(name);
        const JndBinning b = build_jnd_binning(cm);
        const double arc = arc_length(cm);
        EXPECT_EQ(b.bins.size(),
                  std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::ceil(arc / kJnd - 1e-12))))
            << name;
    }
}

// Regression values from the independent scalar oracle.
TEST(JndBinning, BundledMapsPinned) {
    struct Pin {
        const char* name;
        double arc;
        std::size_t bins;
        int inversions;
    };
    const Pin pins[] = {
        {"viridis", 120.547124, 42, 0},   {"plasma", 121.951517, 43, 0},
        {"inferno", 151.712458, 53, 0},   {"cividis", 87.339814, 31, 0},
        {"gray", 75.153250, 26, 0},       {"coolwarm", 121.781339, 42, 0},
        {"Spectral", 174.692182, 61, 0},  {"rainbow", 170.897322, 59, 0},
        {"gist_ncar", 476.965568, 165, 1}, {"cubehelix", 209.593670, 73, 0},
        {"summer", 51.474599, 18, 0},     {"twilight", 178.829600, 62, 1},
        {"prism", 2585.184784, 892, 107}, {"flag", 3842.112563, 1325, 112},
    };
    for (const Pin& p : pins) {
        const Colormap cm = bundled(p.name);
        EXPECT_NEAR(arc_length(cm), p.arc, 1e-3) << p.name;
        EXPECT_EQ(build_jnd_binning(cm).bins.size(), p.bins) << p.name;
        const OrderCheck oc = is_order_preserving(cm);
        EXPECT_EQ(oc.inversions, p.inversions) << p.name;
        EXPECT_EQ(oc.order_preserving, p.inversions == 0) << p.name;
    }
}

TEST(JndBinning, ViridisDetailPinned) {
    const JndBinning b = build_jnd_binning(bundled("viridis"));
    ASSERT_EQ(b.bins.size(), 42u);
    EXPECT_NEAR(b.bins[0].t_lo, 0.0, 0.0);
    EXPECT_NEAR(b.bins[0].t_hi, 0.03496291, 1e-6);
    EXPECT_NEAR(b.bins[0].center_value, 0.01748146, 1e-6);
    EXPECT_NEAR(b.bins[0].representative.L, 16.478968, 1e-3);
    EXPECT_NEAR(b.bins[0].representative.a, 40.251141, 1e-3);
    EXPECT_NEAR(b.bins[0].representative.b, -34.276724, 1e-3);
    EXPECT_NEAR(b.bins[41].t_lo, 0.98701885, 1e-6);
    EXPECT_EQ(b.bins[41].t_hi, 1.0);
}

TEST(JndBinning, IntervalsTileUnitRange) {
    for (const char* name :
         {"viridis", "plasma", "gray", "twilight", "prism", "flag", "summer"}) {
        const JndBinning b = build_jnd_binning(bundled(name));
        EXPECT_EQ(b.bins.front().t_lo, 0.0) << name;
        EXPECT_EQ(b.bins.back().t_hi, 1.0) << name;
        for (std::size_t i = 0; i < b.bins.size(); ++i) {
            EXPECT_LE(b.bins[i].t_lo, b.bins[i].t_hi) << name;
            if (i > 0) {
                EXPECT_EQ(b.bins[i].t_lo, b.bins[i - 1].t_hi) << name;
            }
            EXPECT_NEAR(b.bins[i].center_value,
                        0.5 * (b.bins[i].t_lo + b.bins[i].t_hi), 1e-15)
                << name;
        }
    }
}

TEST(DecodeColor, RepresentativeDecodesToOwnBin) {
    const JndBinning b = build_jnd_binning(bundled("viridis"));
    for (std::size_t i : {std::size_t{0}, std::size_t{7}, b.bins.size() - 1}) {
        EXPECT_EQ(decode_color(b, ColorMetric::DE2000, b.bins[i].representative),
                  b.bins[i].center_value);
    }
}

TEST(DecodeColor, GrayPixelUnderHueTiesToFirstBin) {
    const JndBinning b = build_jnd_binning(bundled("gray"));
    // All representatives are achromatic; every hue distance is 0, so the
    // tie-break must pick bin 0.
    const double got = decode_color(b, ColorMetric::HUE_ABS, srgb_to_lab({0.5, 0.5, 0.5}));
    EXPECT_EQ(got, b.bins[0].center_value);
}

TEST(DecodeColor, RoundTripWithinBinWidth) {
    // |decode(lab(c(t))) - t| <= width of the containing bin, for
    // order-preserving maps under DE2000.
    for (const char* name : {"viridis", "plasma", "gray", "coolwarm", "summer"}) {
        const Colormap cm = bundled(name);
        const JndBinning b = build_jnd_binning(cm);
        Rng rng(101);
        for (int k = 0; k < 200; ++k) {
            const double t = rng.next_double();
            const double dec =
                decode_color(b, ColorMetric::DE2000, srgb_to_lab(sample_colormap(cm, t)));
            double width = 0.0;
            for (const JndBin& bin : b.bins) {
                if (t >= bin.t_lo && t <= bin.t_hi) {
                    width = std::max(width, bin.t_hi - bin.t_lo);
                }
            }
            EXPECT_LE(std::fabs(dec - t), width + 1e-12) << name << " t=" << t;
        }
    }
}

TEST(DecodeColor, PinnedRoundTripAt037) {
    const Colormap cm = bundled("viridis");
    const JndBinning b = build_jnd_binning(cm);
    const double dec =
        decode_color(b, ColorMetric::DE2000, srgb_to_lab(sample_colormap(cm, 0.37)));
    EXPECT_NEAR(dec, 0.3763852418, 1e-6);
}

TEST(IsOrderPreserving, MonotoneRampTrue) {
    const OrderCheck oc = is_order_preserving(gray_ramp());
    EXPECT_TRUE(oc.order_preserving);
    EXPECT_EQ(oc.inversions, 0);
}

TEST(IsOrderPreserving, ConstantMapTrue) {
    const OrderCheck oc = is_order_preserving(constant_map());
    EXPECT_TRUE(oc.order_preserving);
    EXPECT_EQ(oc.inversions, 0);
}

TEST(IsOrderPreserving, PrismLikeViolates) {
    const OrderCheck oc = is_order_preserving(bundled("prism"));
    EXPECT_FALSE(oc.order_preserving);
    EXPECT_GT(oc.inversions, 0);
}

TEST(MeanChroma, GrayNearZeroViridisColorful) {
    EXPECT_LT(mean_chroma(bundled("gray")), 0.1);
    EXPECT_NEAR(mean_chroma(bundled("viridis")), 51.186743, 1e-3);
}

}  // namespace
}  // namespace visrecon
