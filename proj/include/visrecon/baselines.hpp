// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference isovalue selectors (midpoint, maximum gradient, similarity-map
// representative) and the image-entropy viewpoint baseline.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "visrecon/contour.hpp"
#include "visrecon/field.hpp"
#include "visrecon/image.hpp"
#include "visrecon/sdf.hpp"

namespace visrecon {

inline double carr_isovalue(const FieldStats& stats) {
    return 0.5 * (stats.min + stats.max);
}

namespace detail {

template <typename GridT>
double value_at_max_gradient(const GridT& g) {
    const GridT gm = gradient_magnitude(g);
    std::size_t best = 0;
    for (std::size_t i = 1; i < gm.values.size(); ++i)
        if (gm.values[i] > gm.values[best]) best = i;
    return g.values[best];
}

}  // namespace detail

// Field value at the node of maximal gradient magnitude; ties keep the
// lowest linear index.
inline double kindlmann_isovalue(const Grid2D& g) {
    return detail::value_at_max_gradient(g);
}

inline double kindlmann_isovalue(const Grid3D& g) {
    return detail::value_at_max_gradient(g);
}

struct SimilarityMap {
    std::vector<double> candidates;
    std::vector<std::vector<double>> matrix;  // symmetric, non-negative
};

namespace detail {

inline constexpr std::size_t kSimilarityBins = 32;

// Bin labels of the normalized unsigned distance field to the contour.
inline std::vector<std::uint8_t> distance_bins(const Grid2D& g,
                                               const Contour2D& c) {
    const Grid2D sd = signed_distance(g, c);
    double peak = 0.0;
    for (const double v : sd.values) peak = std::max(peak, std::fabs(v));
    std::vector<std::uint8_t> bins(sd.values.size(), 0);
    if (peak <= 0.0) return bins;
    for (std::size_t i = 0; i < sd.values.size(); ++i) {
        const double u = std::fabs(sd.values[i]) / peak;
        bins[i] = static_cast<std::uint8_t>(std::min<std::size_t>(
            kSimilarityBins - 1,
            static_cast<std::size_t>(u * static_cast<double>(kSimilarityBins))));
    }
    return bins;
}

// Mutual information (bits) of the joint bin distribution.
inline double bin_mutual_information(const std::vector<std::uint8_t>& a,
                                     const std::vector<std::uint8_t>& b) {
    constexpr std::size_t k = kSimilarityBins;
    std::array<double, k * k> joint{};
    std::array<double, k> pa{}, pb{};
    const double w = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<std::size_t>(a[i]) * k + b[i]] += w;
        pa[a[i]] += w;
        pb[b[i]] += w;
    }
    double mi = 0.0;
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) {
            const double p = joint[x * k + y];
            if (p > 0.0) mi += p * std::log2(p / (pa[x] * pb[y]));
        }
    return std::max(mi, 0.0);
}

}  // namespace detail

// Representative isovalue by pairwise similarity of candidate distance
// fields: evenly spaced interior candidates, empty contours dropped, and the
// candidate with the largest similarity row-sum wins (ties to the lowest
// index).
inline std::pair<double, SimilarityMap> bruckner_isovalue(const Grid2D& g,
                                                          std::size_t k) {
    if (k < 2) throw std::invalid_argument("bruckner: need k >= 2");
    const FieldStats stats = stats_of(g.values);
    std::vector<double> survivors;
    std::vector<std::vector<std::uint8_t>> fields;
    for (std::size_t i = 0; i < k; ++i) {
        const double v = stats.min + stats.range * (static_cast<double>(i) + 1.0) /
                                         (static_cast<double>(k) + 1.0);
        const Contour2D c = extract_contour_2d(g, v);
        if (c.empty()) continue;
        survivors.push_back(v);
        fields.push_back(detail::distance_bins(g, c));
    }
    if (survivors.size() < 2)
        throw std::runtime_error("bruckner: fewer than two candidates with contours");

    SimilarityMap map;
    map.candidates = survivors;
    map.matrix.assign(survivors.size(), std::vector<double>(survivors.size(), 0.0));
    for (std::size_t i = 0; i < survivors.size(); ++i)
        for (std::size_t j = i; j < survivors.size(); ++j) {
            const double mi = detail::bin_mutual_information(fields[i], fields[j]);
            map.matrix[i][j] = mi;
            map.matrix[j][i] = mi;
        }

    std::size_t best = 0;
    double best_sum = -1.0;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        double sum = 0.0;
        for (const double v : map.matrix[i]) sum += v;
        if (sum > best_sum) {
            best_sum = sum;
            best = i;
        }
    }
    return {survivors[best], std::move(map)};
}

inline void save_similarity_csv(const SimilarityMap& map, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "isovalue";
    char buf[64];
    for (const double c : map.candidates) {
        std::snprintf(buf, sizeof buf, ",%.17g", c);
        os << buf;
    }
    os << '\n';
    for (std::size_t i = 0; i < map.candidates.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", map.candidates[i]);
        os << buf;
        for (const double v : map.matrix[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            os << buf;
        }
        os << '\n';
    }
}

// Shannon entropy (bits) of the 256-bin Rec. 709 luminance histogram.
inline double image_entropy(const ImageRGB& img) {
    if (img.pixels.empty()) throw std::invalid_argument("entropy: empty image");
    std::array<double, 256> hist{};
    for (const RGBColor& p : img.pixels) {
        const double lum = 0.2126 * p.r + 0.7152 * p.g + 0.0722 * p.b;
        const int level = std::clamp(static_cast<int>(lum * 256.0), 0, 255);
        hist[static_cast<std::size_t>(level)] += 1.0;
    }
    const double n = static_cast<double>(img.pixels.size());
    double h = 0.0;
    for (const double c : hist)
        if (c > 0.0) {
            const double p = c / n;
            h -= p * std::log2(p);
        }
    return h;
}

}  // namespace visrecon
