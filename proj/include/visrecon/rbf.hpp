// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "visrecon/geometry.hpp"

namespace visrecon {

namespace detail {

template <class Point>
struct PointDim;
template <>
struct PointDim<Vec2> {
    static constexpr int value = 2;
};
template <>
struct PointDim<Vec3> {
    static constexpr int value = 3;
};

inline double component(Vec2 p, int i) { return i == 0 ? p.x : p.y; }
inline double component(Vec3 p, int i) {
    return i == 0 ? p.x : (i == 1 ? p.y : p.z);
}

}  // namespace detail

// Gaussian kernel exp(-(eps r)^2) plus a linear tail. The tail carries global
// trends so the kernels only model residual structure; without it a plain
// Gaussian expansion decays to zero far from the centers and cannot represent
// ramp-like fields.
template <class Point>
struct RbfModel {
    std::vector<Point> centers;
    std::vector<double> values;
    std::vector<double> weights;  // one per center
    std::vector<double> tail;     // constant coefficient, then one per axis
    double epsilon = 1.0;
    double ridge = 0.0;

    [[nodiscard]] double evaluate(Point p) const {
        constexpr int dim = detail::PointDim<Point>::value;
        double acc = tail[0];
        for (int a = 0; a < dim; ++a) acc += tail[1 + a] * detail::component(p, a);
        const double e2 = epsilon * epsilon;
        for (std::size_t i = 0; i < centers.size(); ++i)
            acc += weights[i] * std::exp(-e2 * (p - centers[i]).norm2());
        return acc;
    }
};

// Largest gap between the evaluation nodes and the constraint set; the kernel
// must bridge this gap, so it sets the shape parameter scale.
template <class Point>
inline double fill_distance(const std::vector<Point>& centers,
                            const std::vector<Point>& nodes) {
    if (centers.empty() || nodes.empty())
        throw std::invalid_argument("fill_distance: empty input");
    double worst = 0.0;
    for (const Point& p : nodes) {
        double best = (p - centers[0]).norm2();
        for (std::size_t i = 1; i < centers.size(); ++i)
            best = std::min(best, (p - centers[i]).norm2());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

// Interpolation with moment conditions sum_i w_i [1, c_i] = 0. The saddle
// system is symmetric indefinite, so it is solved by full-pivot LU, which
// also reports singularity instead of silently regularizing it away. One
// factorization serves any number of value vectors over the same centers.
template <class Point>
class RbfSolver {
public:
    RbfSolver(std::vector<Point> centers, double epsilon, double ridge)
        : centers_(std::move(centers)), epsilon_(epsilon), ridge_(ridge) {
        constexpr int dim = detail::PointDim<Point>::value;
        const std::size_t m = centers_.size();
        if (m < static_cast<std::size_t>(dim) + 1)
            throw std::invalid_argument("rbf: need more centers than tail terms");
        if (!(epsilon_ > 0.0))
            throw std::invalid_argument("rbf: epsilon must be positive");
        if (ridge_ < 0.0) throw std::invalid_argument("rbf: ridge must be >= 0");
        const std::size_t n = m + 1 + dim;
        Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
        const double e2 = epsilon_ * epsilon_;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                const double k = std::exp(-e2 * (centers_[i] - centers_[j]).norm2());
                sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
                sys(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
            }
            sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += ridge_;
            sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = 1.0;
            sys(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) = 1.0;
            for (int a = 0; a < dim; ++a) {
                const double c = detail::component(centers_[i], a);
                sys(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(m + 1 + a)) = c;
                sys(static_cast<Eigen::Index>(m + 1 + a),
                    static_cast<Eigen::Index>(i)) = c;
            }
        }
        lu_.compute(sys);
        if (!lu_.isInvertible())
            throw std::runtime_error("rbf: singular constraint system");
    }

    [[nodiscard]] RbfModel<Point> solve(const std::vector<double>& values) const {
        constexpr int dim = detail::PointDim<Point>::value;
        const std::size_t m = centers_.size();
        if (values.size() != m)
            throw std::invalid_argument("rbf: values/centers size mismatch");
        Eigen::VectorXd rhs =
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m + 1 + dim));
        for (std::size_t i = 0; i < m; ++i)
            rhs(static_cast<Eigen::Index>(i)) = values[i];
        const Eigen::VectorXd sol = lu_.solve(rhs);
        RbfModel<Point> model;
        model.centers = centers_;
        model.values = values;
        model.epsilon = epsilon_;
        model.ridge = ridge_;
        model.weights.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            model.weights[i] = sol(static_cast<Eigen::Index>(i));
        model.tail.resize(1 + dim);
        for (int a = 0; a <= dim; ++a)
            model.tail[static_cast<std::size_t>(a)] =
                sol(static_cast<Eigen::Index>(m) + a);
        return model;
    }

    [[nodiscard]] const std::vector<Point>& centers() const { return centers_; }

private:
    std::vector<Point> centers_;
    double epsilon_;
    double ridge_;
    Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

template <class Point>
inline RbfModel<Point> fit_rbf(std::vector<Point> centers,
                               const std::vector<double>& values, double epsilon,
                               double ridge) {
    return RbfSolver<Point>(std::move(centers), epsilon, ridge).solve(values);
}

}  // namespace visrecon
