// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "visrecon/contour.hpp"
#include "visrecon/field.hpp"
#include "visrecon/mesh.hpp"
#include "visrecon/rbf.hpp"
#include "visrecon/sdf.hpp"

namespace visrecon {

// A single contour fixes where the isovalue lies but not which side holds the
// higher values; both readings are reconstructed and compared.
enum class Hypothesis { INSIDE_HIGH, INSIDE_LOW };

constexpr const char* to_string(Hypothesis h) {
    return h == Hypothesis::INSIDE_HIGH ? "InsideHigh" : "InsideLow";
}

inline bool parse_hypothesis(std::string_view name, Hypothesis& out) {
    if (name == "InsideHigh") {
        out = Hypothesis::INSIDE_HIGH;
        return true;
    }
    if (name == "InsideLow") {
        out = Hypothesis::INSIDE_LOW;
        return true;
    }
    return false;
}

inline constexpr std::size_t kDefaultContourSamples = 500;
inline constexpr double kReconstructionRidge = 1e-8;

// Strict maxima of |d| among the 8-connected neighbors of the same sign;
// equal-|d| plateaus keep only the lowest linear index. Nodes with d == 0 sit
// on the contour and are never extrema.
inline std::vector<std::size_t> sdf_local_extrema(const Grid2D& sdf) {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < sdf.ny; ++y) {
        for (std::size_t x = 0; x < sdf.nx; ++x) {
            const std::size_t idx = y * sdf.nx + x;
            const double d = sdf.values[idx];
            if (d == 0.0) continue;
            const double ad = std::fabs(d);
            bool keep = true;
            for (int dy = -1; dy <= 1 && keep; ++dy) {
                for (int dx = -1; dx <= 1 && keep; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const std::ptrdiff_t px = static_cast<std::ptrdiff_t>(x) + dx;
                    const std::ptrdiff_t py = static_cast<std::ptrdiff_t>(y) + dy;
                    if (px < 0 || py < 0 ||
                        px >= static_cast<std::ptrdiff_t>(sdf.nx) ||
                        py >= static_cast<std::ptrdiff_t>(sdf.ny))
                        continue;
                    const std::size_t nidx =
                        static_cast<std::size_t>(py) * sdf.nx +
                        static_cast<std::size_t>(px);
                    const double nd = sdf.values[nidx];
                    if (d * nd <= 0.0) continue;
                    const double and_ = std::fabs(nd);
                    if (and_ > ad || (and_ == ad && nidx < idx)) keep = false;
                }
            }
            if (keep) out.push_back(idx);
        }
    }
    return out;
}

// 26-connected variant.
inline std::vector<std::size_t> sdf_local_extrema(const Grid3D& sdf) {
    std::vector<std::size_t> out;
    const std::size_t slab = sdf.nx * sdf.ny;
    for (std::size_t z = 0; z < sdf.nz; ++z) {
        for (std::size_t y = 0; y < sdf.ny; ++y) {
            for (std::size_t x = 0; x < sdf.nx; ++x) {
                const std::size_t idx = z * slab + y * sdf.nx + x;
                const double d = sdf.values[idx];
                if (d == 0.0) continue;
                const double ad = std::fabs(d);
                bool keep = true;
                for (int dz = -1; dz <= 1 && keep; ++dz) {
                    for (int dy = -1; dy <= 1 && keep; ++dy) {
                        for (int dx = -1; dx <= 1 && keep; ++dx) {
                            if (dx == 0 && dy == 0 && dz == 0) continue;
                            const std::ptrdiff_t px =
                                static_cast<std::ptrdiff_t>(x) + dx;
                            const std::ptrdiff_t py =
                                static_cast<std::ptrdiff_t>(y) + dy;
                            const std::ptrdiff_t pz =
                                static_cast<std::ptrdiff_t>(z) + dz;
                            if (px < 0 || py < 0 || pz < 0 ||
                                px >= static_cast<std::ptrdiff_t>(sdf.nx) ||
                                py >= static_cast<std::ptrdiff_t>(sdf.ny) ||
                                pz >= static_cast<std::ptrdiff_t>(sdf.nz))
                                continue;
                            const std::size_t nidx =
                                static_cast<std::size_t>(pz) * slab +
                                static_cast<std::size_t>(py) * sdf.nx +
                                static_cast<std::size_t>(px);
                            const double nd = sdf.values[nidx];
                            if (d * nd <= 0.0) continue;
                            const double and_ = std::fabs(nd);
                            if (and_ > ad || (and_ == ad && nidx < idx))
                                keep = false;
                        }
                    }
                }
                if (keep) out.push_back(idx);
            }
        }
    }
    return out;
}

namespace detail {

inline Vec2 node_position(const Grid2D& g, std::size_t idx) {
    return g.position(idx % g.nx, idx / g.nx);
}

inline Vec3 node_position(const Grid3D& g, std::size_t idx) {
    const std::size_t slab = g.nx * g.ny;
    return g.position(idx % g.nx, (idx % slab) / g.nx, idx / slab);
}

inline std::vector<Vec2> all_nodes(const Grid2D& g) {
    std::vector<Vec2> nodes;
    nodes.reserve(g.size());
    for (std::size_t y = 0; y < g.ny; ++y)
        for (std::size_t x = 0; x < g.nx; ++x) nodes.push_back(g.position(x, y));
    return nodes;
}

inline std::vector<Vec3> all_nodes(const Grid3D& g) {
    std::vector<Vec3> nodes;
    nodes.reserve(g.size());
    for (std::size_t z = 0; z < g.nz; ++z)
        for (std::size_t y = 0; y < g.ny; ++y)
            for (std::size_t x = 0; x < g.nx; ++x)
                nodes.push_back(g.position(x, y, z));
    return nodes;
}

// Constraint geometry shared by both hypotheses: the sampled boundary points,
// then one point per SDF extremum with its depth ratio and side.
template <class Point>
struct SdfConstraints {
    std::vector<Point> points;
    std::vector<double> ratio;
    std::vector<bool> interior;
    std::size_t samples = 0;
};

template <class GridT, class Point>
SdfConstraints<Point> build_constraints(const GridT& sdf,
                                        std::vector<Point> samples) {
    SdfConstraints<Point> cs;
    cs.samples = samples.size();
    cs.points = std::move(samples);
    const std::vector<std::size_t> extrema = sdf_local_extrema(sdf);
    double deep_in = 0.0;
    double deep_out = 0.0;
    for (const std::size_t idx : extrema) {
        const double d = sdf.values[idx];
        if (d < 0.0) deep_in = std::max(deep_in, -d);
        else deep_out = std::max(deep_out, d);
    }
    for (const std::size_t idx : extrema) {
        const double d = sdf.values[idx];
        const bool inside = d < 0.0;
        cs.points.push_back(node_position(sdf, idx));
        cs.ratio.push_back(std::fabs(d) / (inside ? deep_in : deep_out));
        cs.interior.push_back(inside);
    }
    return cs;
}

// The deepest interior extremum reaches one data bound, the farthest exterior
// one the other; intermediate extrema scale linearly by depth ratio.
template <class Point>
std::vector<double> constraint_values(const SdfConstraints<Point>& cs,
                                      double isovalue, FieldStats stats,
                                      Hypothesis hyp) {
    std::vector<double> v(cs.points.size(), isovalue);
    const double in_bound =
        hyp == Hypothesis::INSIDE_HIGH ? stats.max : stats.min;
    const double out_bound =
        hyp == Hypothesis::INSIDE_HIGH ? stats.min : stats.max;
    for (std::size_t e = 0; e < cs.ratio.size(); ++e) {
        const double bound = cs.interior[e] ? in_bound : out_bound;
        v[cs.samples + e] = isovalue + (bound - isovalue) * cs.ratio[e];
    }
    return v;
}

template <class GridT, class Point>
GridT evaluate_model(const GridT& like, const RbfModel<Point>& model,
                     const std::vector<Point>& nodes) {
    GridT out = like;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out.values[i] = model.evaluate(nodes[i]);
    return out;
}

template <class Point>
struct ReconstructionSetup {
    SdfConstraints<Point> constraints;
    std::vector<Point> nodes;
    double epsilon = 1.0;
};

template <class GridT, class Point>
ReconstructionSetup<Point> reconstruction_setup(const GridT& geometry,
                                                const GridT& sdf,
                                                std::vector<Point> samples) {
    ReconstructionSetup<Point> setup;
    setup.constraints = build_constraints(sdf, std::move(samples));
    setup.nodes = all_nodes(geometry);
    const double fill = fill_distance(setup.constraints.points, setup.nodes);
    if (!(fill > 0.0))
        throw std::runtime_error("reconstruct: degenerate constraint layout");
    setup.epsilon = 1.0 / fill;
    return setup;
}

inline void check_reconstruction_inputs(std::size_t n, FieldStats stats) {
    if (n < 4) throw std::invalid_argument("reconstruct: need n >= 4");
    if (!(stats.range > 0.0))
        throw std::invalid_argument("reconstruct: field range must be positive");
}

}  // namespace detail

inline Grid2D reconstruct_from_contour(const Grid2D& geometry,
                                       const Contour2D& contour, double isovalue,
                                       FieldStats stats, Hypothesis hyp,
                                       std::size_t n = kDefaultContourSamples,
                                       std::uint64_t seed = 0) {
    detail::check_reconstruction_inputs(n, stats);
    const Grid2D sdf = signed_distance(geometry, contour);
    const auto setup = detail::reconstruction_setup(
        geometry, sdf, sample_contour_points(contour, n, seed));
    const RbfSolver<Vec2> solver(setup.constraints.points, setup.epsilon,
                                 kReconstructionRidge);
    const RbfModel<Vec2> model = solver.solve(
        detail::constraint_values(setup.constraints, isovalue, stats, hyp));
    return detail::evaluate_model(geometry, model, setup.nodes);
}

inline Grid3D reconstruct_from_contour(const Grid3D& geometry,
                                       const TriMesh& surface, const MeshBvh& bvh,
                                       double isovalue, FieldStats stats,
                                       Hypothesis hyp,
                                       std::size_t n = kDefaultContourSamples,
                                       std::uint64_t seed = 0) {
    detail::check_reconstruction_inputs(n, stats);
    const Grid3D sdf = signed_distance(geometry, surface, bvh);
    const auto setup = detail::reconstruction_setup(
        geometry, sdf, sample_surface_points(surface, n, seed));
    const RbfSolver<Vec3> solver(setup.constraints.points, setup.epsilon,
                                 kReconstructionRidge);
    const RbfModel<Vec3> model = solver.solve(
        detail::constraint_values(setup.constraints, isovalue, stats, hyp));
    return detail::evaluate_model(geometry, model, setup.nodes);
}

template <class GridT>
struct Reconstructed {
    GridT field;
    Hypothesis hypothesis = Hypothesis::INSIDE_HIGH;
    double error = 0.0;
};

namespace detail {

// One factorization serves both hypotheses; ties keep INSIDE_HIGH.
template <class GridT, class Point>
Reconstructed<GridT> pick_hypothesis(const GridT& original,
                                     const ReconstructionSetup<Point>& setup,
                                     double isovalue, FieldStats stats) {
    const RbfSolver<Point> solver(setup.constraints.points, setup.epsilon,
                                  kReconstructionRidge);
    Reconstructed<GridT> high;
    high.hypothesis = Hypothesis::INSIDE_HIGH;
    high.field = evaluate_model(
        original,
        solver.solve(constraint_values(setup.constraints, isovalue, stats,
                                       Hypothesis::INSIDE_HIGH)),
        setup.nodes);
    high.error = l2_error(original, high.field);

    Reconstructed<GridT> low;
    low.hypothesis = Hypothesis::INSIDE_LOW;
    low.field = evaluate_model(
        original,
        solver.solve(constraint_values(setup.constraints, isovalue, stats,
                                       Hypothesis::INSIDE_LOW)),
        setup.nodes);
    low.error = l2_error(original, low.field);

    return low.error < high.error ? std::move(low) : std::move(high);
}

}  // namespace detail

inline Reconstructed<Grid2D> best_reconstruction(
    const Grid2D& original, const Contour2D& contour, double isovalue,
    std::size_t n = kDefaultContourSamples, std::uint64_t seed = 0) {
    const FieldStats stats = stats_of(original.values);
    detail::check_reconstruction_inputs(n, stats);
    const Grid2D sdf = signed_distance(original, contour);
    const auto setup = detail::reconstruction_setup(
        original, sdf, sample_contour_points(contour, n, seed));
    return detail::pick_hypothesis(original, setup, isovalue, stats);
}

inline Reconstructed<Grid3D> best_reconstruction(
    const Grid3D& original, const TriMesh& surface, const MeshBvh& bvh,
    double isovalue, std::size_t n = kDefaultContourSamples,
    std::uint64_t seed = 0) {
    const FieldStats stats = stats_of(original.values);
    detail::check_reconstruction_inputs(n, stats);
    const Grid3D sdf = signed_distance(original, surface, bvh);
    const auto setup = detail::reconstruction_setup(
        original, sdf, sample_surface_points(surface, n, seed));
    return detail::pick_hypothesis(original, setup, isovalue, stats);
}

struct IsovalueSelection {
    double isovalue = 0.0;
    std::vector<double> errors;  // one per candidate; +inf for empty contours
};

// Argmin of reconstruction error over the candidates; ties keep the earliest
// candidate. Every candidate is scored with the same seed, so appending a
// candidate never changes the others' errors.
inline IsovalueSelection select_isovalue_by_reconstruction(
    const Grid2D& g, const std::vector<double>& candidates,
    std::size_t n = kDefaultContourSamples, std::uint64_t seed = 0) {
    if (candidates.empty())
        throw std::invalid_argument("select_isovalue: no candidates");
    IsovalueSelection out;
    out.errors.assign(candidates.size(),
                      std::numeric_limits<double>::infinity());
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Contour2D contour = extract_contour_2d(g, candidates[i]);
        if (contour.empty()) continue;
        out.errors[i] =
            best_reconstruction(g, contour, candidates[i], n, seed).error;
        if (best == candidates.size() || out.errors[i] < out.errors[best])
            best = i;
    }
    if (best == candidates.size())
        throw std::runtime_error("select_isovalue: every candidate has an empty contour");
    out.isovalue = candidates[best];
    return out;
}

}  // namespace visrecon
