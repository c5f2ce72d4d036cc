// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "visrecon/color.hpp"

namespace visrecon {

// One just-noticeable difference, in ΔE2000 units.
inline constexpr double kJnd = 2.9;

// Ordered color samples interpreted as c(t) at uniform t in [0,1].
struct Colormap {
    std::string name;
    std::vector<RGBColor> samples;
};

inline void validate(const Colormap& cm) {
    if (cm.samples.size() < 2)
        throw std::invalid_argument("colormap '" + cm.name + "': needs >= 2 samples");
    for (const RGBColor& c : cm.samples) {
        if (!(c.r >= 0.0 && c.r <= 1.0 && c.g >= 0.0 && c.g <= 1.0 &&
              c.b >= 0.0 && c.b <= 1.0))
            throw std::invalid_argument("colormap '" + cm.name +
                                        "': component outside [0,1]");
    }
}

// File format: {"name": string, "colors": [[r,g,b], ...]}, fractions in [0,1].
inline Colormap load_colormap(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open colormap file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("colormap file " + path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("name") || !j.contains("colors"))
        throw std::runtime_error("colormap file " + path +
                                 ": expected {\"name\", \"colors\"}");
    Colormap cm;
    cm.name = j.at("name").get<std::string>();
    for (const auto& row : j.at("colors")) {
        if (!row.is_array() || row.size() != 3)
            throw std::runtime_error("colormap file " + path +
                                     ": each color must be [r,g,b]");
        cm.samples.push_back(
            {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    validate(cm);
    return cm;
}

inline void save_colormap(const Colormap& cm, const std::string& path) {
    nlohmann::json j;
    j["name"] = cm.name;
    auto& colors = j["colors"] = nlohmann::json::array();
    for (const RGBColor& c : cm.samples) colors.push_back({c.r, c.g, c.b});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write colormap file: " + path);
    out << j.dump() << '\n';
}

// Piecewise-linear interpolation in sRGB between adjacent samples; t clamped.
inline RGBColor sample_colormap(const Colormap& cm, double t) {
    const std::size_t n = cm.samples.size();
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * static_cast<double>(n - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
    const double f = pos - static_cast<double>(i);
    const RGBColor& a = cm.samples[i];
    const RGBColor& b = cm.samples[i + 1];
    return {a.r + f * (b.r - a.r), a.g + f * (b.g - a.g), a.b + f * (b.b - a.b)};
}

// Total perceptual arc length: ΔE2000 summed over consecutive samples.
inline double arc_length(const Colormap& cm) {
    double total = 0.0;
    LabColor prev = srgb_to_lab(cm.samples.front());
    for (std::size_t i = 1; i < cm.samples.size(); ++i) {
        const LabColor cur = srgb_to_lab(cm.samples[i]);
        total += delta_e_2000(prev, cur);
        prev = cur;
    }
    return total;
}

// Number of distinguishable steps: arc length in JND units.
inline double discriminative_power(const Colormap& cm) {
    return arc_length(cm) / kJnd;
}

struct JndBin {
    LabColor representative;  // color at the bin's arc-length midpoint
    double center_value = 0.0;  // midpoint of [t_lo, t_hi]
    double t_lo = 0.0;
    double t_hi = 0.0;
};

// Arc length cut at multiples of one JND; bins' t intervals tile [0,1].
struct JndBinning {
    std::vector<JndBin> bins;
    double source_arc_length = 0.0;
};

inline JndBinning build_jnd_binning(const Colormap& cm) {
    const std::size_t n = cm.samples.size();
    std::vector<LabColor> labs(n);
    for (std::size_t i = 0; i < n; ++i) labs[i] = srgb_to_lab(cm.samples[i]);

    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        cum[i] = cum[i - 1] + delta_e_2000(labs[i - 1], labs[i]);
    const double total = cum.back();

    JndBinning out;
    out.source_arc_length = total;

    if (total <= 0.0) {
        out.bins.push_back({srgb_to_lab(sample_colormap(cm, 0.5)), 0.5, 0.0, 1.0});
        return out;
    }

    // Preimage of an arc position under the cumulative map; piecewise linear
    // between sample parameters, constant across zero-length segments.
    auto t_of_arc = [&](double s) {
        s = std::clamp(s, 0.0, total);
        const auto it = std::lower_bound(cum.begin(), cum.end(), s);
        const std::size_t k = static_cast<std::size_t>(it - cum.begin());
        if (k == 0) return 0.0;
        const double t_step = 1.0 / static_cast<double>(n - 1);
        const double lo = cum[k - 1], hi = cum[k];
        if (hi == lo) return static_cast<double>(k) * t_step;
        const double f = (s - lo) / (hi - lo);
        return (static_cast<double>(k - 1) + f) * t_step;
    };

    // Tolerance keeps an exact multiple of kJnd from creating an empty bin.
    const std::size_t nbins = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(total / kJnd - 1e-12)));

    std::vector<double> arc_edges(nbins + 1);
    for (std::size_t j = 0; j <= nbins; ++j)
        arc_edges[j] = std::min(static_cast<double>(j) * kJnd, total);
    arc_edges[nbins] = total;

    std::vector<double> t_edges(nbins + 1);
    for (std::size_t j = 0; j <= nbins; ++j) t_edges[j] = t_of_arc(arc_edges[j]);
    t_edges[0] = 0.0;
    t_edges[nbins] = 1.0;

    out.bins.reserve(nbins);
    for (std::size_t j = 0; j < nbins; ++j) {
        const double arc_mid = 0.5 * (arc_edges[j] + arc_edges[j + 1]);
        JndBin bin;
        bin.t_lo = t_edges[j];
        bin.t_hi = t_edges[j + 1];
        bin.center_value = 0.5 * (bin.t_lo + bin.t_hi);
        bin.representative = srgb_to_lab(sample_colormap(cm, t_of_arc(arc_mid)));
        out.bins.push_back(bin);
    }
    return out;
}

// Index of the bin whose representative is nearest; ties -> lowest index.
inline std::size_t decode_bin_index(const JndBinning& binning, ColorMetric metric,
                                    LabColor pixel) {
    std::size_t best = 0;
    double best_d = color_distance(metric, binning.bins[0].representative, pixel);
    for (std::size_t i = 1; i < binning.bins.size(); ++i) {
        const double d = color_distance(metric, binning.bins[i].representative, pixel);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

inline double decode_color(const JndBinning& binning, ColorMetric metric,
                           LabColor pixel) {
    return binning.bins[decode_bin_index(binning, metric, pixel)].center_value;
}

struct OrderCheck {
    bool order_preserving = true;
    int inversions = 0;
};

// Decode the map's own samples with its DE2000 binning; count strict
// decreases between adjacent decoded values.
inline OrderCheck is_order_preserving(const Colormap& cm) {
    const JndBinning binning = build_jnd_binning(cm);
    OrderCheck res;
    double prev = decode_color(binning, ColorMetric::DE2000, srgb_to_lab(cm.samples[0]));
    for (std::size_t i = 1; i < cm.samples.size(); ++i) {
        const double cur =
            decode_color(binning, ColorMetric::DE2000, srgb_to_lab(cm.samples[i]));
        if (cur < prev) ++res.inversions;
        prev = cur;
    }
    res.order_preserving = res.inversions == 0;
    return res;
}

// Mean chroma of the samples; used to tell colorful maps from near-achromatic.
inline double mean_chroma(const Colormap& cm) {
    double sum = 0.0;
    for (const RGBColor& c : cm.samples) {
        const LabColor lab = srgb_to_lab(c);
        sum += std::hypot(lab.a, lab.b);
    }
    return sum / static_cast<double>(cm.samples.size());
}

}  // namespace visrecon
