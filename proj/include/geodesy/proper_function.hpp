#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geodesy/numeric.hpp"

namespace geodesy {

// Monotone piecewise-linear function through (0,0) with a linear tail. One
// representation serves the proper functions f, h and h~ of the boundedness
// machinery; the generalized inverse is exact on this model.
struct ProperFunction {
    // strictly increasing x breakpoints, first must be (0,0); y nondecreasing
    std::vector<std::pair<double, double>> breakpoints;
    double tail_slope = 1.0;  // extends the last segment; must be >= 0
    bool strict = false;      // flags strictly increasing y values

    void check() const {
        if (breakpoints.empty() || breakpoints.front().first != 0.0 ||
            breakpoints.front().second != 0.0)
            throw std::invalid_argument("ProperFunction: first breakpoint must be (0,0)");
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i].first > breakpoints[i - 1].first))
                throw std::invalid_argument("ProperFunction: x breakpoints must increase");
            if (breakpoints[i].second < breakpoints[i - 1].second)
                throw std::invalid_argument("ProperFunction: y values must be nondecreasing");
            if (strict && !(breakpoints[i].second > breakpoints[i - 1].second))
                throw std::invalid_argument("ProperFunction: flagged strict but y repeats");
        }
        if (tail_slope < 0) throw std::invalid_argument("ProperFunction: negative tail slope");
    }

    double operator()(double x) const {
        if (x < 0) throw std::invalid_argument("ProperFunction: negative argument");
        const auto& bp = breakpoints;
        if (x >= bp.back().first) return bp.back().second + tail_slope * (x - bp.back().first);
        std::size_t lo = 0, hi = bp.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (bp[mid].first <= x ? lo : hi) = mid;
        }
        double t = (x - bp[lo].first) / (bp[hi].first - bp[lo].first);
        return bp[lo].second + t * (bp[hi].second - bp[lo].second);
    }

    bool unbounded() const { return tail_slope > 0; }
    double max_breakpoint_value() const { return breakpoints.back().second; }
};

inline ProperFunction identity_function(double upto = 1.0) {
    return ProperFunction{{{0.0, 0.0}, {upto, upto}}, 1.0, true};
}

// Generalized inverse f^{-1}(y) = inf { x >= 0 : f(x) >= y }, with the
// convention inf(empty) = +infinity when f is bounded below y.
inline double generalized_inverse(const ProperFunction& f, double y) {
    if (y < 0) throw std::invalid_argument("generalized_inverse: negative y");
    f.check();
    if (y == 0.0) return 0.0;  // f(0) = 0 >= 0
    const auto& bp = f.breakpoints;
    for (std::size_t i = 1; i < bp.size(); ++i) {
        if (bp[i].second >= y) {
            // crossing happens inside segment i-1 -> i (or exactly at a knot)
            double y0 = bp[i - 1].second, y1 = bp[i].second;
            if (y0 >= y) return bp[i - 1].first;  // flat prefix already at level
            double t = (y - y0) / (y1 - y0);
            return bp[i - 1].first + t * (bp[i].first - bp[i - 1].first);
        }
    }
    if (f.tail_slope > 0) return bp.back().first + (y - bp.back().second) / f.tail_slope;
    return std::numeric_limits<double>::infinity();
}

// Refines a closed-form function onto breakpoints until the piecewise-linear
// model deviates from it by less than max_dev on [0, hi]. Used to house exact
// forms like x^2 or the C-doubling profile in the common representation.
inline ProperFunction refine_to_piecewise(const std::function<double(double)>& g, double hi,
                                          double max_dev = 1e-6, bool strict = true) {
    std::vector<double> xs = {0.0, hi};
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<double> next;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            next.push_back(xs[i]);
            double mid = 0.5 * (xs[i] + xs[i + 1]);
            double lin = 0.5 * (g(xs[i]) + g(xs[i + 1]));
            if (std::abs(lin - g(mid)) > max_dev && xs[i + 1] - xs[i] > 1e-9) {
                next.push_back(mid);
                changed = true;
            }
        }
        next.push_back(xs.back());
        xs.swap(next);
    }
    ProperFunction f;
    f.strict = strict;
    for (double x : xs) f.breakpoints.emplace_back(x, g(x));
    // tail: continue with the final secant slope
    auto& bp = f.breakpoints;
    f.tail_slope = bp.size() >= 2 ? (bp.back().second - bp[bp.size() - 2].second) /
                                        (bp.back().first - bp[bp.size() - 2].first)
                                  : 1.0;
    if (f.tail_slope < 0) f.tail_slope = 0.0;
    f.check();
    return f;
}

}  // namespace geodesy
