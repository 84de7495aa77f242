#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "geodesy/space.hpp"

namespace geodesy {

// Generators for the small menagerie of spaces the test corpus is built on.
// Every generator records the discretization mesh; genuinely finite spaces
// carry mesh 0.

// n-point space with interpoint distance 1.
template <class T>
FiniteMetricSpace<T> simplex_space(std::size_t n) {
    if (n == 0) throw std::invalid_argument("simplex_space: n must be positive");
    FiniteMetricSpace<T> X;
    X.dist = Matrix<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        X.labels.push_back("x" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) X.dist(i, j) = (i == j) ? T(0) : T(1);
    }
    return X;
}

// Simplex with uniform mass.
template <class T>
MetricMeasureSpace<T> simplex_mm(std::size_t n) {
    MetricMeasureSpace<T> M{simplex_space<T>(n), {}};
    M.mass.assign(n, T(1) / T(static_cast<long long>(n)));
    return M;
}

// Cycle graph C_n with unit edges, shortest-path metric.
template <class T>
FiniteMetricSpace<T> cycle_space(std::size_t n) {
    if (n == 0) throw std::invalid_argument("cycle_space: n must be positive");
    FiniteMetricSpace<T> X;
    X.mesh = T(1);
    X.dist = Matrix<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        X.labels.push_back("v" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t k = i > j ? i - j : j - i;
            X.dist(i, j) = T(static_cast<long long>(std::min(k, n - k)));
        }
    }
    return X;
}

// w x l grid with spacing h and Manhattan path metric.
template <class T>
FiniteMetricSpace<T> grid_space(std::size_t w, std::size_t l, const T& h) {
    if (w == 0 || l == 0 || !(h > T(0))) throw std::invalid_argument("grid_space: bad params");
    FiniteMetricSpace<T> X;
    X.mesh = h;
    const std::size_t n = w * l;
    X.dist = Matrix<T>(n, n);
    auto idx = [&](std::size_t i, std::size_t j) { return i * l + j; };
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < l; ++j)
            X.labels.push_back(std::to_string(i) + "," + std::to_string(j));
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t a = 0; a < w; ++a)
                for (std::size_t b = 0; b < l; ++b) {
                    long long dx = i > a ? i - a : a - i;
                    long long dy = j > b ? j - b : b - j;
                    X.dist(idx(i, j), idx(a, b)) = h * T(dx + dy);
                }
    return X;
}

// 1D segment [0, len] sampled at n points (path metric); mesh = spacing.
inline FiniteMetricSpace<double> segment_space(std::size_t n, double len = 1.0) {
    if (n < 2) throw std::invalid_argument("segment_space: need at least 2 points");
    FiniteMetricSpace<double> X;
    const double h = len / static_cast<double>(n - 1);
    X.mesh = h;
    X.dist = Matrix<double>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        X.labels.push_back("t" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j)
            X.dist(i, j) = h * std::abs(static_cast<double>(i) - static_cast<double>(j));
    }
    return X;
}

// N equispaced points on the unit circle with arc-length metric; mesh 2*pi/N.
// Point k sits at angle 2*pi*k/N; "north" is index 0, "south" is index N/2.
inline FiniteMetricSpace<double> circle_space(std::size_t N) {
    if (N == 0) throw std::invalid_argument("circle_space: N must be positive");
    FiniteMetricSpace<double> X;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(N);
    X.mesh = step;
    X.dist = Matrix<double>(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        X.labels.push_back("a" + std::to_string(i));
        for (std::size_t j = 0; j < N; ++j) {
            std::size_t k = i > j ? i - j : j - i;
            X.dist(i, j) = step * static_cast<double>(std::min(k, N - k));
        }
    }
    return X;
}

// The counterexample strip: [0,3] x [0,1] with
//   d~((x,y),(x',y')) = min(x + x', euclidean, 6 - (x + x')),
// sampled on a res-spaced grid. Returned as a pseudometric: all points with
// x = 0 are at zero mutual distance, likewise x = 3; callers quotient next.
struct StripSampling {
    PseudoMetricSpace<double> space;
    std::vector<std::pair<double, double>> coords;
};

inline StripSampling strip_space(double res) {
    if (!(res > 0) || res > 0.1 + 1e-12)
        throw std::invalid_argument("strip_space: res must be in (0, 0.1]");
    StripSampling S;
    const std::size_t nx = static_cast<std::size_t>(std::llround(3.0 / res)) + 1;
    const std::size_t ny = static_cast<std::size_t>(std::llround(1.0 / res)) + 1;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            double x = std::min(3.0, i * res), y = std::min(1.0, j * res);
            S.coords.emplace_back(x, y);
            S.space.labels.push_back(format_sig(x, 6) + "," + format_sig(y, 6));
        }
    const std::size_t n = S.coords.size();
    S.space.mesh = res;
    S.space.dist = Matrix<double>(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto [x1, y1] = S.coords[a];
            auto [x2, y2] = S.coords[b];
            double eu = std::hypot(x1 - x2, y1 - y2);
            S.space.dist(a, b) = std::min({x1 + x2, eu, 6.0 - (x1 + x2)});
        }
    return S;
}

// Euclidean rectangle [-3,3] x [-2,2] sampled on a spacing-spaced grid; the
// convex carrier for the two-squares interpolation example. Labels carry grid
// coordinates so tests can locate named points such as (0,2).
struct PlaneSampling {
    FiniteMetricSpace<double> space;
    std::vector<std::pair<double, double>> coords;

    // nearest sample to a target point
    std::size_t locate(double x, double y) const {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < coords.size(); ++i) {
            double d = std::hypot(coords[i].first - x, coords[i].second - y);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    }

    Subset rect(double x0, double x1, double y0, double y1) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            auto [x, y] = coords[i];
            if (x >= x0 - 1e-9 && x <= x1 + 1e-9 && y >= y0 - 1e-9 && y <= y1 + 1e-9)
                idx.push_back(i);
        }
        return Subset(std::move(idx));
    }
};

inline PlaneSampling plane_rectangle(double x0, double x1, double y0, double y1, double spacing) {
    if (!(spacing > 0)) throw std::invalid_argument("plane_rectangle: spacing must be positive");
    PlaneSampling P;
    const std::size_t nx = static_cast<std::size_t>(std::llround((x1 - x0) / spacing)) + 1;
    const std::size_t ny = static_cast<std::size_t>(std::llround((y1 - y0) / spacing)) + 1;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            double x = std::min(x1, x0 + i * spacing), y = std::min(y1, y0 + j * spacing);
            P.coords.emplace_back(x, y);
            P.space.labels.push_back(format_sig(x, 6) + "," + format_sig(y, 6));
        }
    const std::size_t n = P.coords.size();
    P.space.mesh = spacing;
    P.space.dist = Matrix<double>(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double d = std::hypot(P.coords[a].first - P.coords[b].first,
                                  P.coords[a].second - P.coords[b].second);
            P.space.dist(a, b) = d;
            P.space.dist(b, a) = d;
        }
    return P;
}

inline PlaneSampling square_example_plane(double spacing = 0.1) {
    return plane_rectangle(-3.0, 3.0, -2.0, 2.0, spacing);
}

}  // namespace geodesy
