// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Geometric and statistical scoring: Hausdorff and chamfer distances between
// point samples, log-log correlation, and percentile outlier filtering.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "visrecon/geometry.hpp"

namespace visrecon {

namespace detail {

inline double dist2(Vec3 a, Vec3 b) { return (a - b).norm2(); }

// Uniform-grid nearest-neighbor index. Queries expand outward in Chebyshev
// shells; a point in a cell whose index differs by r on some axis is at
// least (r-1) cell widths away, which gives the exact stopping rule. The
// result is the same minimum a full scan would find, computed with the same
// arithmetic, so brute force and this index agree bitwise.
class PointBuckets {
  public:
    explicit PointBuckets(const std::vector<Vec3>& points) : points_(points) {
        lo_ = hi_ = points.at(0);
        for (const Vec3& p : points) {
            lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
            hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y), std::max(hi_.z, p.z)};
        }
        const Vec3 extent = hi_ - lo_;
        const double diag = extent.norm();
        const double target =
            diag / std::max(1.0, std::cbrt(static_cast<double>(points.size())));
        cell_ = target > 0.0 ? target : 1.0;
        for (int a = 0; a < 3; ++a)
            max_idx_[a] = cell_index(hi_, a);
        for (std::size_t i = 0; i < points.size(); ++i)
            cells_[key_of(points[i])].push_back(static_cast<std::uint32_t>(i));
    }

    // Distance from q to the nearest indexed point.
    double nearest(Vec3 q) const {
        const long long iq[3] = {cell_index(q, 0), cell_index(q, 1), cell_index(q, 2)};
        double best2 = std::numeric_limits<double>::infinity();
        long long reach = 0;
        for (int a = 0; a < 3; ++a)
            reach = std::max(
                reach, std::max(std::llabs(iq[a]), std::llabs(max_idx_[a] - iq[a])));
        for (long long r = 0; r <= reach + 1; ++r) {
            if (std::isfinite(best2)) {
                const double gap = (static_cast<double>(r) - 1.0) * cell_;
                if (gap > 0.0 && gap * gap > best2) break;
            }
            scan_shell(q, iq, r, best2);
        }
        return std::sqrt(best2);
    }

  private:
    long long cell_index(Vec3 p, int axis) const {
        const double c = axis == 0 ? p.x - lo_.x : axis == 1 ? p.y - lo_.y : p.z - lo_.z;
        return static_cast<long long>(std::floor(c / cell_));
    }

    std::uint64_t key_of(Vec3 p) const {
        return pack(cell_index(p, 0), cell_index(p, 1), cell_index(p, 2));
    }

    static std::uint64_t pack(long long x, long long y, long long z) {
        const auto m = [](long long v) {
            return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF;
        };
        return m(x) | (m(y) << 21) | (m(z) << 42);
    }

    void scan_cell(Vec3 q, long long x, long long y, long long z,
                   double& best2) const {
        const auto it = cells_.find(pack(x, y, z));
        if (it == cells_.end()) return;
        for (const std::uint32_t i : it->second)
            best2 = std::min(best2, dist2(q, points_[i]));
    }

    void scan_shell(Vec3 q, const long long iq[3], long long r,
                    double& best2) const {
        const auto in_range = [&](long long v, int a) {
            return v >= 0 && v <= max_idx_[a];
        };
        if (r == 0) {
            if (in_range(iq[0], 0) && in_range(iq[1], 1) && in_range(iq[2], 2))
                scan_cell(q, iq[0], iq[1], iq[2], best2);
            return;
        }
        for (long long dx = -r; dx <= r; ++dx) {
            const long long x = iq[0] + dx;
            if (!in_range(x, 0)) continue;
            for (long long dy = -r; dy <= r; ++dy) {
                const long long y = iq[1] + dy;
                if (!in_range(y, 1)) continue;
                const bool face = std::llabs(dx) == r || std::llabs(dy) == r;
                if (face) {
                    for (long long dz = -r; dz <= r; ++dz) {
                        const long long z = iq[2] + dz;
                        if (in_range(z, 2)) scan_cell(q, x, y, z, best2);
                    }
                } else {
                    if (in_range(iq[2] - r, 2)) scan_cell(q, x, y, iq[2] - r, best2);
                    if (in_range(iq[2] + r, 2)) scan_cell(q, x, y, iq[2] + r, best2);
                }
            }
        }
    }

    const std::vector<Vec3>& points_;
    Vec3 lo_{}, hi_{};
    double cell_ = 1.0;
    long long max_idx_[3] = {0, 0, 0};
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

inline std::vector<Vec3> lift(const std::vector<Vec2>& pts) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const Vec2& p : pts) out.push_back({p.x, p.y, 0.0});
    return out;
}

}  // namespace detail

// Distance from each point of `from` to its nearest neighbor in `to`.
inline std::vector<double> nearest_distances(const std::vector<Vec3>& from,
                                             const std::vector<Vec3>& to) {
    if (from.empty() || to.empty())
        throw std::invalid_argument("metrics: empty point sample");
    const detail::PointBuckets index(to);
    std::vector<double> d;
    d.reserve(from.size());
    for (const Vec3& q : from) d.push_back(index.nearest(q));
    return d;
}

// Reference O(N*M) scan; kept public so tests can pin the index against it.
inline std::vector<double> nearest_distances_brute(const std::vector<Vec3>& from,
                                                   const std::vector<Vec3>& to) {
    if (from.empty() || to.empty())
        throw std::invalid_argument("metrics: empty point sample");
    std::vector<double> d;
    d.reserve(from.size());
    for (const Vec3& q : from) {
        double best2 = std::numeric_limits<double>::infinity();
        for (const Vec3& p : to) best2 = std::min(best2, detail::dist2(q, p));
        d.push_back(std::sqrt(best2));
    }
    return d;
}

inline double hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    const std::vector<double> ab = nearest_distances(a, b);
    const std::vector<double> ba = nearest_distances(b, a);
    return std::max(*std::max_element(ab.begin(), ab.end()),
                    *std::max_element(ba.begin(), ba.end()));
}

inline double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    const std::vector<double> ab = nearest_distances(a, b);
    const std::vector<double> ba = nearest_distances(b, a);
    const double mean_ab =
        std::accumulate(ab.begin(), ab.end(), 0.0) / static_cast<double>(ab.size());
    const double mean_ba =
        std::accumulate(ba.begin(), ba.end(), 0.0) / static_cast<double>(ba.size());
    return 0.5 * (mean_ab + mean_ba);
}

inline double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    return hausdorff(detail::lift(a), detail::lift(b));
}

inline double chamfer(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    return chamfer(detail::lift(a), detail::lift(b));
}

// Pearson correlation of (ln x, ln y); both series must be positive.
inline double loglog_pearson(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("loglog_pearson: need equal lengths >= 3");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw std::invalid_argument("loglog_pearson: non-positive input");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        syy += (ly[i] - my) * (ly[i] - my);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("loglog_pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

// Removes the ceil(fraction*N) entries with the largest value (lower is
// better). Entries tied at the cut are removed from the highest list index
// down; survivors keep their original order.
template <typename Key>
inline std::vector<std::pair<Key, double>> drop_worst_fraction(
    const std::vector<std::pair<Key, double>>& scores, double fraction) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw std::invalid_argument("drop_worst_fraction: fraction must be in [0,1)");
    const std::size_t n = scores.size();
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(n) - 1e-12));
    if (k == 0) return scores;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (scores[i].second != scores[j].second)
            return scores[i].second > scores[j].second;
        return i > j;
    });
    std::vector<bool> dropped(n, false);
    for (std::size_t i = 0; i < k; ++i) dropped[order[i]] = true;
    std::vector<std::pair<Key, double>> out;
    out.reserve(n - k);
    for (std::size_t i = 0; i < n; ++i)
        if (!dropped[i]) out.push_back(scores[i]);
    return out;
}

}  // namespace visrecon
