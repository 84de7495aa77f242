#pragma once

#include <atomic>
#include <cmath>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodesy/correspondence.hpp"
#include "geodesy/detail/barrier.hpp"
#include "geodesy/numeric.hpp"
#include "geodesy/proper_function.hpp"
#include "geodesy/space.hpp"
#include "geodesy/standard_spaces.hpp"
#include "geodesy/transport.hpp"

namespace geodesy {

// Cross block of a metric coupling between carriers X (rows) and Y (cols).
// Membership in D(d_X, d_Y) is exactly: the block matrix
// [[d_X, cross], [cross^T, d_Y]] satisfies every triangle inequality.
template <class T>
struct MetricCoupling {
    Matrix<T> cross;
};

template <class T>
Matrix<T> coupling_block(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y,
                         const MetricCoupling<T>& D) {
    const std::size_t n = X.size(), m = Y.size();
    if (D.cross.rows() != n || D.cross.cols() != m)
        throw std::invalid_argument("coupling_block: shape mismatch");
    Matrix<T> B(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j) = X.d(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) B(n + i, n + j) = Y.d(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            B(i, n + j) = D.cross(i, j);
            B(n + j, i) = D.cross(i, j);
        }
    return B;
}

template <class T>
ValidationReport validate_metric_coupling(const FiniteMetricSpace<T>& X,
                                          const FiniteMetricSpace<T>& Y,
                                          const MetricCoupling<T>& D, const T& tol) {
    return validate_metric(coupling_block(X, Y, D), tol);
}

template <class T>
ValidationReport validate_metric_coupling(const FiniteMetricSpace<T>& X,
                                          const FiniteMetricSpace<T>& Y,
                                          const MetricCoupling<T>& D) {
    return validate_metric_coupling(X, Y, D, default_metric_tol<T>());
}

// W_p under the glued metric: an upper bound for Sturm's GW distance.
// Integer-p variant returns the p-th power of the cost, exact in T.
template <class T>
struct GwBoundPow {
    T cost_p;
    Matrix<T> plan;
};

template <class T>
GwBoundPow<T> gw_upper_cost_p(const MetricMeasureSpace<T>& Xm, const MetricMeasureSpace<T>& Ym,
                              const MetricCoupling<T>& D, int p) {
    const std::size_t n = Xm.size(), m = Ym.size();
    Matrix<T> cost(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cost(i, j) = pow_int(D.cross(i, j), p);
    auto r = transportation_simplex(cost, Xm.mass, Ym.mass);
    return {r.cost, std::move(r.plan)};
}

struct GwBound {
    double value;
    Matrix<double> plan;
};

inline GwBound gw_upper_bound(const MetricMeasureSpace<double>& Xm,
                              const MetricMeasureSpace<double>& Ym,
                              const MetricCoupling<double>& D, double p) {
    const std::size_t n = Xm.size(), m = Ym.size();
    Matrix<double> cost(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cost(i, j) = std::pow(D.cross(i, j), p);
    auto r = transportation_simplex(cost, Xm.mass, Ym.mass);
    return {std::pow(std::max(0.0, r.cost), 1.0 / p), std::move(r.plan)};
}

// ---------------------------------------------------------------------------
// The Delta-family lower bound: d_GW,p(D~_1, D~_n) >= 1/2 for every n >= 2 and
// p >= 1, by power-mean >= arithmetic mean >= pairwise triangle sum. The chain
// is also exposed as an executable check on any candidate cross matrix.

inline double gw_delta_lower_bound(std::size_t n, double /*p*/ = 1.0) {
    if (n < 2) throw std::invalid_argument("gw_delta_lower_bound: applies to n >= 2");
    return 0.5;
}

// Verifies the proof chain on a feasible cross vector c (distances from the
// point of D~_1 to the n points of D~_n): mean_p(c) >= mean_1(c) >= 1/2.
inline bool gw_delta_chain_check(const std::vector<double>& c, double p, double tol = 1e-12) {
    const std::size_t n = c.size();
    if (n < 2) return false;
    double mean1 = 0.0, meanp = 0.0;
    for (double v : c) {
        mean1 += v;
        meanp += std::pow(v, p);
    }
    mean1 /= static_cast<double>(n);
    meanp = std::pow(meanp / static_cast<double>(n), 1.0 / p);
    double pair_sum = 0.0;  // (1/(n(n-1))) sum_{i<j} (c_i + c_j) = mean1
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pair_sum += c[i] + c[j];
    pair_sum /= static_cast<double>(n * (n - 1));
    // each c_i + c_j >= d(x_i, x_j) = 1, so pair_sum >= 1/2
    bool triangles = true;
    for (std::size_t i = 0; i < n && triangles; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (c[i] + c[j] < 1.0 - tol) triangles = false;
    return triangles && meanp >= mean1 - tol && mean1 >= pair_sum - tol &&
           pair_sum >= 0.5 - tol && meanp >= 0.5 - tol;
}

// Exact GW between a one-point mm-space and a two-point mm-space (masses
// m1, m2 at distance d), for p in {1, 2}:
//   p = 1: min(m1, m2) * d          (optimum at a boundary vertex)
//   p = 2: sqrt(m1 * m2) * d        (interior stationary point of the cone)
inline double one_point_vs_two_point_gw(double m1, double m2, double d, int p) {
    if (p == 1) return std::min(m1, m2) * d;
    if (p == 2) return std::sqrt(m1 * m2) * d;
    throw std::invalid_argument("one_point_vs_two_point_gw: p must be 1 or 2");
}

// ---------------------------------------------------------------------------
// Alternating minimization: a clearly-labeled heuristic UPPER bound for the
// bilinear program behind Sturm's distance. Alternates the transportation LP
// (fixed metric coupling) with a barrier solve over the metric-coupling
// polytope (fixed transport plan; linear objective for p = 1, quadratic for
// p = 2). The objective is nonincreasing along iterations up to solver
// tolerance; restarts run in parallel and the reduction is deterministic.

namespace detail {

struct CrossConstraints {
    Eigen::MatrixXd G;
    Eigen::VectorXd h;  // rows: G x >= h
};

inline CrossConstraints cross_constraints(const FiniteMetricSpace<double>& X,
                                          const FiniteMetricSpace<double>& Y) {
    const std::size_t n = X.size(), m = Y.size();
    const std::size_t nv = n * m;
    auto var = [&](std::size_t i, std::size_t j) { return i * m + j; };
    std::vector<double> rhs;
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse_rows;
    auto add_row = [&](std::initializer_list<std::pair<std::size_t, double>> entries, double b) {
        sparse_rows.emplace_back(entries);
        rhs.push_back(b);
    };
    // D >= 0
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) add_row({{var(i, j), 1.0}}, 0.0);
    // |D_ij - D_kj| <= d_X(i,k)   and   D_ij + D_kj >= d_X(i,k)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t j = 0; j < m; ++j) {
                double dx = X.d(i, k);
                add_row({{var(i, j), -1.0}, {var(k, j), 1.0}}, -dx);
                add_row({{var(i, j), 1.0}, {var(k, j), -1.0}}, -dx);
                add_row({{var(i, j), 1.0}, {var(k, j), 1.0}}, dx);
            }
    // |D_ij - D_il| <= d_Y(l,j)   and   D_ij + D_il >= d_Y(l,j)
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = j + 1; l < m; ++l)
            for (std::size_t i = 0; i < n; ++i) {
                double dy = Y.d(j, l);
                add_row({{var(i, j), -1.0}, {var(i, l), 1.0}}, -dy);
                add_row({{var(i, j), 1.0}, {var(i, l), -1.0}}, -dy);
                add_row({{var(i, j), 1.0}, {var(i, l), 1.0}}, dy);
            }
    CrossConstraints cc;
    cc.G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sparse_rows.size()),
                                 static_cast<Eigen::Index>(nv));
    cc.h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sparse_rows.size()));
    for (std::size_t r = 0; r < sparse_rows.size(); ++r) {
        for (auto& [c, v] : sparse_rows[r]) cc.G(static_cast<Eigen::Index>(r),
                                                 static_cast<Eigen::Index>(c)) = v;
        cc.h(static_cast<Eigen::Index>(r)) = rhs[r];
    }
    return cc;
}

// random function-pair correspondence; its Lemma-2.16 gluing always yields a
// feasible cross matrix
inline Matrix<double> random_glue_cross(const FiniteMetricSpace<double>& X,
                                        const FiniteMetricSpace<double>& Y, Rng& rng) {
    const std::size_t n = X.size(), m = Y.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        pairs.emplace_back(i, static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m) - 1)));
    for (std::size_t j = 0; j < m; ++j)
        pairs.emplace_back(static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1)), j);
    Correspondence R(std::move(pairs));
    double half = to_double(distortion(X, Y, R)) / 2.0;
    Matrix<double> cr(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (auto& [x2, y2] : R.pairs) best = std::min(best, X.d(i, x2) + Y.d(j, y2) + half);
            cr(i, j) = best;
        }
    return cr;
}

}  // namespace detail

struct GwAltResult {
    double bound = std::numeric_limits<double>::infinity();
    Matrix<double> cross;
    Matrix<double> plan;
    std::vector<double> trace;  // objective after every half-step
    std::size_t best_restart = 0;
};

inline GwAltResult gw_alternating_min(const MetricMeasureSpace<double>& Xm,
                                      const MetricMeasureSpace<double>& Ym, int p,
                                      std::size_t restarts, std::size_t iters,
                                      std::uint64_t seed) {
    if (p != 1 && p != 2) throw std::invalid_argument("gw_alternating_min: p must be 1 or 2");
    const std::size_t n = Xm.size(), m = Ym.size();
    const auto cc = detail::cross_constraints(Xm.space, Ym.space);
    const double big = to_double(diameter(Xm.space)) + to_double(diameter(Ym.space)) + 1.0;

    auto run_restart = [&](std::size_t r) {
        Rng rng(seed + 1000003ull * r);
        Matrix<double> D = detail::random_glue_cross(Xm.space, Ym.space, rng);
        GwAltResult res;
        res.best_restart = r;
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < iters; ++it) {
            MetricCoupling<double> mc{D};
            auto bound = gw_upper_bound(Xm, Ym, mc, p);
            res.trace.push_back(bound.value);
            if (bound.value < res.bound) {
                res.bound = bound.value;
                res.cross = D;
                res.plan = bound.plan;
            }
            if (prev - bound.value < 1e-13 && it > 0) break;
            prev = bound.value;

            // metric-coupling half-step at fixed plan
            Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * m));
            Eigen::VectorXd lin = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * m));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    double w = bound.plan(i, j);
                    if (p == 1)
                        lin(static_cast<Eigen::Index>(i * m + j)) = w;
                    else
                        q(static_cast<Eigen::Index>(i * m + j)) = 2.0 * w;
                }
            detail::BarrierProblem prob{q, lin, cc.G, cc.h};
            Eigen::VectorXd x0(static_cast<Eigen::Index>(n * m));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    x0(static_cast<Eigen::Index>(i * m + j)) = 0.9 * D(i, j) + 0.1 * big;
            Eigen::VectorXd x = detail::barrier_minimize(prob, x0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    D(i, j) = x(static_cast<Eigen::Index>(i * m + j));
            // record the half-step objective under the fixed plan
            double half_obj = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    half_obj += bound.plan(i, j) * std::pow(D(i, j), p);
            res.trace.push_back(std::pow(std::max(0.0, half_obj), 1.0 / p));
        }
        {
            MetricCoupling<double> mc{D};
            auto bound = gw_upper_bound(Xm, Ym, mc, p);
            res.trace.push_back(bound.value);
            if (bound.value < res.bound) {
                res.bound = bound.value;
                res.cross = D;
                res.plan = bound.plan;
            }
        }
        return res;
    };

    const std::size_t workers = std::min(worker_cap(), std::max<std::size_t>(restarts, 1));
    std::vector<GwAltResult> all(restarts);
    if (workers <= 1 || restarts <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) all[r] = run_restart(r);
    } else {
        std::vector<std::future<void>> fut;
        std::atomic<std::size_t> next{0};
        for (std::size_t w = 0; w < workers; ++w)
            fut.push_back(std::async(std::launch::async, [&]() {
                while (true) {
                    std::size_t r = next.fetch_add(1);
                    if (r >= restarts) return;
                    all[r] = run_restart(r);
                }
            }));
        for (auto& f : fut) f.get();
    }
    // deterministic reduction: best value, ties to the smallest restart index
    GwAltResult best;
    for (std::size_t r = 0; r < restarts; ++r)
        if (all[r].bound < best.bound) best = all[r];
    return best;
}

// ---------------------------------------------------------------------------
// Straight-line GW geodesics (support of an optimal plan with interpolated
// metric) and their upper-bound certificates via the gateway coupling
//   cross(a, b) = min_c [ d_s(a,c) + |t-s| D(c) + d_t(c,b) ],
// whose identity-coupling cost is at most |t-s| * rho.

template <class T>
struct GwPair {
    MetricMeasureSpace<T> at_s, at_t;
    Matrix<T> cross;  // |at_s| x |at_t| metric-coupling block
    Matrix<T> plan;   // coupling between the masses
};

namespace detail {

// Quotients a two-sided pseudometric block (sides sized ns, nt) and extracts
// the per-side mm-spaces, the quotiented cross block, and the quotiented plan.
template <class T>
GwPair<T> quotient_pair(const PseudoMetricSpace<T>& block, std::size_t ns, std::size_t nt,
                        const std::vector<T>& mass_s, const std::vector<T>& mass_t,
                        const Matrix<T>& plan_pre) {
    auto q = quotient_pseudometric(block);
    std::vector<std::size_t> side_s, side_t;  // class ids in first-seen order
    std::vector<long long> slot_s(q.space.size(), -1), slot_t(q.space.size(), -1);
    for (std::size_t i = 0; i < ns; ++i) {
        std::size_t c = q.class_of[i];
        if (slot_s[c] < 0) {
            slot_s[c] = static_cast<long long>(side_s.size());
            side_s.push_back(c);
        }
    }
    for (std::size_t j = 0; j < nt; ++j) {
        std::size_t c = q.class_of[ns + j];
        if (slot_t[c] < 0) {
            slot_t[c] = static_cast<long long>(side_t.size());
            side_t.push_back(c);
        }
    }
    GwPair<T> out;
    auto build_side = [&](const std::vector<std::size_t>& side) {
        FiniteMetricSpace<T> S;
        S.mesh = block.mesh;
        S.dist = Matrix<T>(side.size(), side.size());
        for (std::size_t a = 0; a < side.size(); ++a) {
            S.labels.push_back(q.space.labels[side[a]]);
            for (std::size_t b = 0; b < side.size(); ++b)
                S.dist(a, b) = q.space.d(side[a], side[b]);
        }
        return S;
    };
    out.at_s.space = build_side(side_s);
    out.at_t.space = build_side(side_t);
    out.at_s.mass.assign(side_s.size(), T(0));
    out.at_t.mass.assign(side_t.size(), T(0));
    for (std::size_t i = 0; i < ns; ++i)
        out.at_s.mass[static_cast<std::size_t>(slot_s[q.class_of[i]])] =
            out.at_s.mass[static_cast<std::size_t>(slot_s[q.class_of[i]])] + mass_s[i];
    for (std::size_t j = 0; j < nt; ++j)
        out.at_t.mass[static_cast<std::size_t>(slot_t[q.class_of[ns + j]])] =
            out.at_t.mass[static_cast<std::size_t>(slot_t[q.class_of[ns + j]])] + mass_t[j];
    out.cross = Matrix<T>(side_s.size(), side_t.size());
    for (std::size_t a = 0; a < side_s.size(); ++a)
        for (std::size_t b = 0; b < side_t.size(); ++b)
            out.cross(a, b) = q.space.d(side_s[a], side_t[b]);
    out.plan = Matrix<T>(side_s.size(), side_t.size(), T(0));
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            if (plan_pre(i, j) > T(0)) {
                auto a = static_cast<std::size_t>(slot_s[q.class_of[i]]);
                auto b = static_cast<std::size_t>(slot_t[q.class_of[ns + j]]);
                out.plan(a, b) = out.plan(a, b) + plan_pre(i, j);
            }
    return out;
}

}  // namespace detail

// Support of a plan as a list of (i, j) pairs with positive mass.
template <class T>
std::vector<std::pair<std::size_t, std::size_t>> plan_support(const Matrix<T>& plan) {
    std::vector<std::pair<std::size_t, std::size_t>> S;
    for (std::size_t i = 0; i < plan.rows(); ++i)
        for (std::size_t j = 0; j < plan.cols(); ++j)
            if (plan(i, j) > T(0)) S.emplace_back(i, j);
    return S;
}

// Pre-quotient slice of the straight-line GW curve: support points of the
// plan with d_t = (1-t) d_X + t d_Y, carrying the plan masses. Degenerate at
// the endpoints; quotienting recovers Xm / Ym exactly.
template <class T>
PseudoMetricSpace<T> gw_line_preslice(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& S,
                                      const T& t) {
    PseudoMetricSpace<T> P;
    P.dist = Matrix<T>(S.size(), S.size());
    for (std::size_t a = 0; a < S.size(); ++a) {
        P.labels.push_back("(" + X.labels[S[a].first] + "|" + Y.labels[S[a].second] + ")");
        for (std::size_t b = 0; b < S.size(); ++b)
            P.dist(a, b) = (T(1) - t) * X.d(S[a].first, S[b].first) +
                           t * Y.d(S[a].second, S[b].second);
    }
    return P;
}

template <class T>
MetricMeasureSpace<T> gw_line_slice(const MetricMeasureSpace<T>& Xm,
                                    const MetricMeasureSpace<T>& Ym, const Matrix<T>& plan,
                                    const T& t) {
    auto S = plan_support(plan);
    auto pre = gw_line_preslice(Xm.space, Ym.space, S, t);
    std::vector<T> mass;
    for (auto& [i, j] : S) mass.push_back(plan(i, j));
    auto q = quotient_pseudometric(pre);
    MetricMeasureSpace<T> out;
    out.space = std::move(q.space);
    out.mass.assign(out.space.size(), T(0));
    for (std::size_t a = 0; a < S.size(); ++a)
        out.mass[q.class_of[a]] = out.mass[q.class_of[a]] + mass[a];
    return out;
}

template <class T>
GeodesicSampling<T> straight_line_gw_geodesic(const MetricMeasureSpace<T>& Xm,
                                              const MetricMeasureSpace<T>& Ym,
                                              const MetricCoupling<T>& D, const Matrix<T>& plan,
                                              const std::vector<T>& times, bool d_certified) {
    if (plan_support(plan).empty())
        throw std::invalid_argument("straight_line_gw_geodesic: empty support");
    GeodesicSampling<T> g;
    g.times = times;
    g.certified_optimal = d_certified;
    for (const T& t : times) {
        auto slice = gw_line_slice(Xm, Ym, plan, t);
        g.spaces.push_back(slice.space);
        g.masses.push_back(slice.mass);
    }
    (void)D;
    g.check_shape();
    return g;
}

// Gateway certificate pair between the curve slices at s and t.
template <class T>
GwPair<T> gw_line_pair(const MetricMeasureSpace<T>& Xm, const MetricMeasureSpace<T>& Ym,
                       const MetricCoupling<T>& D, const Matrix<T>& plan, const T& s, const T& t) {
    auto S = plan_support(plan);
    const std::size_t r = S.size();
    auto pre_s = gw_line_preslice(Xm.space, Ym.space, S, s);
    auto pre_t = gw_line_preslice(Xm.space, Ym.space, S, t);
    std::vector<T> gate(r);
    for (std::size_t c = 0; c < r; ++c) gate[c] = D.cross(S[c].first, S[c].second);
    const T span = scalar_abs(t - s);
    PseudoMetricSpace<T> block;
    block.dist = Matrix<T>(2 * r, 2 * r);
    block.labels.reserve(2 * r);
    for (std::size_t a = 0; a < r; ++a) block.labels.push_back(pre_s.labels[a] + "@s");
    for (std::size_t a = 0; a < r; ++a) block.labels.push_back(pre_t.labels[a] + "@t");
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            block.dist(a, b) = pre_s.dist(a, b);
            block.dist(r + a, r + b) = pre_t.dist(a, b);
        }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            bool first = true;
            T best(0);
            for (std::size_t c = 0; c < r; ++c) {
                T v = pre_s.dist(a, c) + span * gate[c] + pre_t.dist(c, b);
                if (first || v < best) {
                    best = v;
                    first = false;
                }
            }
            block.dist(a, r + b) = best;
            block.dist(r + b, a) = best;
        }
    std::vector<T> mass;
    for (auto& [i, j] : S) mass.push_back(plan(i, j));
    Matrix<T> ident(r, r, T(0));
    for (std::size_t a = 0; a < r; ++a) ident(a, a) = mass[a];
    return detail::quotient_pair(block, r, r, mass, mass, ident);
}

// ---------------------------------------------------------------------------
// The deviant family (slices with n+m points) and the branching family
// (slices growing an extra point after the branch time), with their explicit
// metric couplings. All identities are exact over rationals.

template <class T>
T deviant_f(const T& sigma, const T& t) {
    return (t <= T(1) / T(2)) ? t * sigma : sigma - t * sigma;
}

namespace detail {

template <class T>
void check_deviant_params(std::size_t n, std::size_t m, const T& sigma) {
    if (n < 1 || m < 1 || m > n)
        throw std::invalid_argument("deviant family: need 1 <= m <= n");
    if (!(sigma > T(0)) || sigma > T(1))
        throw std::invalid_argument("deviant family: sigma must lie in (0, 1]");
}

// pre-quotient deviant slice data (n+m points; degenerate at t = 0 and t = 1)
template <class T>
PseudoMetricSpace<T> deviant_preslice(std::size_t n, std::size_t m, const T& sigma, const T& t) {
    const std::size_t N = n + m;
    PseudoMetricSpace<T> P;
    P.dist = Matrix<T>(N, N);
    const T f = deviant_f(sigma, t);
    for (std::size_t i = 0; i < N; ++i) {
        P.labels.push_back("x" + std::to_string(i + 1));
        for (std::size_t j = 0; j < N; ++j) {
            std::size_t gap = i > j ? i - j : j - i;
            P.dist(i, j) = (i == j) ? T(0) : (gap == n ? f : t);
        }
    }
    return P;
}

template <class T>
std::vector<T> deviant_mass(std::size_t n, std::size_t m) {
    std::vector<T> nu(n + m);
    const T half = T(1) / T(static_cast<long long>(2 * n));
    const T full = T(1) / T(static_cast<long long>(n));
    for (std::size_t i = 0; i < n + m; ++i) nu[i] = (i < m || i >= n) ? half : full;
    return nu;
}

}  // namespace detail

template <class T>
MetricMeasureSpace<T> deviant_slice(std::size_t n, std::size_t m, const T& sigma, const T& t) {
    detail::check_deviant_params(n, m, sigma);
    if (t < T(0) || t > T(1)) throw std::invalid_argument("deviant_slice: t outside [0,1]");
    auto pre = detail::deviant_preslice(n, m, sigma, t);
    auto nu = detail::deviant_mass<T>(n, m);
    auto q = quotient_pseudometric(pre);
    MetricMeasureSpace<T> out;
    out.space = std::move(q.space);
    out.mass.assign(out.space.size(), T(0));
    for (std::size_t i = 0; i < nu.size(); ++i)
        out.mass[q.class_of[i]] = out.mass[q.class_of[i]] + nu[i];
    return out;
}

// Explicit metric coupling + identity coupling between deviant slices at s, t.
// Cross terms: |t-s|/2 on the diagonal, |t-s|/2 + min(f(sigma,s), f(sigma,t))
// on the paired offsets, (s+t)/2 otherwise. Identity-coupling cost is exactly
// (|t-s|/2)^p per unit mass.
template <class T>
GwPair<T> deviant_coupling(std::size_t n, std::size_t m, const T& sigma, const T& s, const T& t) {
    detail::check_deviant_params(n, m, sigma);
    if (!(T(0) <= s && s < t && t <= T(1)))
        throw std::invalid_argument("deviant_coupling: need 0 <= s < t <= 1");
    const std::size_t N = n + m;
    auto pre_s = detail::deviant_preslice(n, m, sigma, s);
    auto pre_t = detail::deviant_preslice(n, m, sigma, t);
    auto nu = detail::deviant_mass<T>(n, m);
    const T fs = deviant_f(sigma, s), ft = deviant_f(sigma, t);
    const T fmin = fs < ft ? fs : ft;
    PseudoMetricSpace<T> block;
    block.dist = Matrix<T>(2 * N, 2 * N);
    for (std::size_t i = 0; i < N; ++i) block.labels.push_back(pre_s.labels[i] + "@s");
    for (std::size_t i = 0; i < N; ++i) block.labels.push_back(pre_t.labels[i] + "@t");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            block.dist(i, j) = pre_s.dist(i, j);
            block.dist(N + i, N + j) = pre_t.dist(i, j);
        }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            std::size_t gap = i > j ? i - j : j - i;
            T v;
            if (i == j)
                v = (t - s) / T(2);
            else if (gap == n)
                v = (t - s) / T(2) + fmin;
            else
                v = (s + t) / T(2);
            block.dist(i, N + j) = v;
            block.dist(N + j, i) = v;
        }
    Matrix<T> ident(N, N, T(0));
    for (std::size_t i = 0; i < N; ++i) ident(i, i) = nu[i];
    return detail::quotient_pair(block, N, N, nu, nu, ident);
}

namespace detail {

// pre-quotient branching slice for t in [a, 1] on n+1 points; the extra point
// sits at distance t - a from point n-1 (degenerate at t = a)
template <class T>
PseudoMetricSpace<T> branching_preslice(std::size_t n, const T& a, const T& t) {
    PseudoMetricSpace<T> P;
    P.dist = Matrix<T>(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i) P.labels.push_back("x" + std::to_string(i + 1));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) {
            if (i == j) {
                P.dist(i, j) = T(0);
            } else if ((i == n - 1 && j == n) || (i == n && j == n - 1)) {
                P.dist(i, j) = t - a;
            } else {
                P.dist(i, j) = t;
            }
        }
    return P;
}

template <class T>
std::vector<T> branching_mass(std::size_t n) {
    std::vector<T> nu(n + 1, T(1) / T(static_cast<long long>(n)));
    nu[n - 1] = T(1) / T(static_cast<long long>(2 * n));
    nu[n] = T(1) / T(static_cast<long long>(2 * n));
    return nu;
}

// pre-quotient straight-line slice (n points at mutual distance t)
template <class T>
PseudoMetricSpace<T> straight_preslice(std::size_t n, const T& t) {
    PseudoMetricSpace<T> P;
    P.dist = Matrix<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        P.labels.push_back("x" + std::to_string(i + 1));
        for (std::size_t j = 0; j < n; ++j) P.dist(i, j) = (i == j) ? T(0) : t;
    }
    return P;
}

}  // namespace detail

template <class T>
MetricMeasureSpace<T> branching_slice(std::size_t n, const T& a, const T& t) {
    if (!(a > T(0)) || !(a < T(1)))
        throw std::invalid_argument("branching_slice: a must lie in (0,1)");
    if (t < T(0) || t > T(1)) throw std::invalid_argument("branching_slice: t outside [0,1]");
    if (n < 1) throw std::invalid_argument("branching_slice: n must be positive");
    MetricMeasureSpace<T> out;
    if (t <= a) {
        auto pre = detail::straight_preslice(n, t);
        auto q = quotient_pseudometric(pre);
        out.space = std::move(q.space);
        out.mass.assign(out.space.size(), T(0));
        const T u = T(1) / T(static_cast<long long>(n));
        for (std::size_t i = 0; i < n; ++i)
            out.mass[q.class_of[i]] = out.mass[q.class_of[i]] + u;
    } else {
        auto pre = detail::branching_preslice(n, a, t);
        auto nu = detail::branching_mass<T>(n);
        auto q = quotient_pseudometric(pre);
        out.space = std::move(q.space);
        out.mass.assign(out.space.size(), T(0));
        for (std::size_t i = 0; i <= n; ++i)
            out.mass[q.class_of[i]] = out.mass[q.class_of[i]] + nu[i];
    }
    return out;
}

namespace detail {

// straight-line pair on n points: diagonal |t-s|/2, off-diagonal (s+t)/2
template <class T>
GwPair<T> straight_pair(std::size_t n, const T& s, const T& t) {
    auto pre_s = straight_preslice(n, s);
    auto pre_t = straight_preslice(n, t);
    std::vector<T> nu(n, T(1) / T(static_cast<long long>(n)));
    PseudoMetricSpace<T> block;
    block.dist = Matrix<T>(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) block.labels.push_back(pre_s.labels[i] + "@s");
    for (std::size_t i = 0; i < n; ++i) block.labels.push_back(pre_t.labels[i] + "@t");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            block.dist(i, j) = pre_s.dist(i, j);
            block.dist(n + i, n + j) = pre_t.dist(i, j);
            T v = (i == j) ? (t - s) / T(2) : (s + t) / T(2);
            block.dist(i, n + j) = v;
            block.dist(n + j, i) = v;
        }
    Matrix<T> ident(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) ident(i, i) = nu[i];
    return quotient_pair(block, n, n, nu, nu, ident);
}

// branching pair with a <= s < t <= 1 (degenerate side at s = a allowed)
template <class T>
GwPair<T> branching_pair_late(std::size_t n, const T& a, const T& s, const T& t) {
    auto pre_s = branching_preslice(n, a, s);
    auto pre_t = branching_preslice(n, a, t);
    auto nu = branching_mass<T>(n);
    const std::size_t N = n + 1;
    PseudoMetricSpace<T> block;
    block.dist = Matrix<T>(2 * N, 2 * N);
    for (std::size_t i = 0; i < N; ++i) block.labels.push_back(pre_s.labels[i] + "@s");
    for (std::size_t i = 0; i < N; ++i) block.labels.push_back(pre_t.labels[i] + "@t");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            block.dist(i, j) = pre_s.dist(i, j);
            block.dist(N + i, N + j) = pre_t.dist(i, j);
            T v;
            if (i == j)
                v = (t - s) / T(2);
            else if ((i == n - 1 && j == n) || (i == n && j == n - 1))
                v = (s + t) / T(2) - a;
            else
                v = (s + t) / T(2);
            block.dist(i, N + j) = v;
            block.dist(N + j, i) = v;
        }
    Matrix<T> ident(N, N, T(0));
    for (std::size_t i = 0; i < N; ++i) ident(i, i) = nu[i];
    return quotient_pair(block, N, N, nu, nu, ident);
}

}  // namespace detail

// Composition of two pairs sharing the middle space: the min-sum gluing of
// the metric couplings with the plan product. Costs add along the middle.
template <class T>
GwPair<T> compose_pairs(const GwPair<T>& P1, const GwPair<T>& P2) {
    const std::size_t k = P1.at_t.size();
    if (P2.at_s.size() != k || !(P1.at_t.space.dist == P2.at_s.space.dist))
        throw std::invalid_argument("compose_pairs: middle spaces differ");
    GwPair<T> out;
    out.at_s = P1.at_s;
    out.at_t = P2.at_t;
    const std::size_t ns = P1.at_s.size(), nt = P2.at_t.size();
    out.cross = Matrix<T>(ns, nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            bool first = true;
            T best(0);
            for (std::size_t v = 0; v < k; ++v) {
                T val = P1.cross(i, v) + P2.cross(v, j);
                if (first || val < best) {
                    best = val;
                    first = false;
                }
            }
            out.cross(i, j) = best;
        }
    out.plan = Matrix<T>(ns, nt, T(0));
    for (std::size_t v = 0; v < k; ++v) {
        const T& mid = P1.at_t.mass[v];
        for (std::size_t i = 0; i < ns; ++i) {
            if (!(P1.plan(i, v) > T(0))) continue;
            for (std::size_t j = 0; j < nt; ++j) {
                if (!(P2.plan(v, j) > T(0))) continue;
                out.plan(i, j) = out.plan(i, j) + P1.plan(i, v) * P2.plan(v, j) / mid;
            }
        }
    }
    return out;
}

// Metric coupling + transport plan between branching slices at s < t, valid
// for every position of s, t relative to the branch time a (composition
// through the branch point when s < a < t).
template <class T>
GwPair<T> branching_coupling(std::size_t n, const T& a, const T& s, const T& t) {
    if (!(a > T(0)) || !(a < T(1)))
        throw std::invalid_argument("branching_coupling: a must lie in (0,1)");
    if (!(T(0) <= s && s < t && t <= T(1)))
        throw std::invalid_argument("branching_coupling: need 0 <= s < t <= 1");
    if (t <= a) return detail::straight_pair(n, s, t);
    if (s >= a) return detail::branching_pair_late(n, a, s, t);
    return compose_pairs(detail::straight_pair(n, s, a),
                         detail::branching_pair_late(n, a, a, t));
}

// Sampled deviant / branching curves as mm geodesic samplings.
template <class T>
GeodesicSampling<T> deviant_curve(std::size_t n, std::size_t m, const T& sigma,
                                  const std::vector<T>& times) {
    GeodesicSampling<T> g;
    g.times = times;
    g.endpoint_value = T(1) / T(2);
    for (const T& t : times) {
        auto s = deviant_slice(n, m, sigma, t);
        g.spaces.push_back(s.space);
        g.masses.push_back(s.mass);
    }
    g.check_shape();
    return g;
}

template <class T>
GeodesicSampling<T> branching_curve(std::size_t n, const T& a, const std::vector<T>& times) {
    GeodesicSampling<T> g;
    g.times = times;
    g.endpoint_value = T(1) / T(2);
    for (const T& t : times) {
        auto s = branching_slice(n, a, t);
        g.spaces.push_back(s.space);
        g.masses.push_back(s.mass);
    }
    g.check_shape();
    return g;
}

// ---------------------------------------------------------------------------
// GW geodesic certification: per sampled pair a metric coupling and a plan
// whose cost is at most (|s-t| rho)^p; the exact endpoint value plus the
// triangle inequality forces equality along the curve.

template <class T>
struct GwPairCert {
    std::size_t si, ti;
    Matrix<T> cross;
    Matrix<T> plan;
};

template <class T>
struct GwCurveCertificate {
    int p = 1;
    T rho{};
    std::vector<GwPairCert<T>> pairs;
};

struct GwCertPairReport {
    std::size_t si, ti;
    double cost;    // certified upper bound (cost^{1/p})
    double target;  // |s-t| rho
    bool coupling_valid;
    bool plan_valid;
    bool ok;
};

struct GwCertReport {
    bool certified = true;
    std::string note;
    std::vector<GwCertPairReport> pairs;
};

template <class T>
GwCertReport certify_gw_geodesic(const GeodesicSampling<T>& curve,
                                 const GwCurveCertificate<T>& cert,
                                 std::optional<T> tol_opt = {}) {
    curve.check_shape();
    if (curve.masses.size() != curve.spaces.size())
        throw std::invalid_argument("certify_gw_geodesic: curve carries no masses");
    T tol = tol_opt ? *tol_opt : default_metric_tol<T>();
    GwCertReport rep;
    for (const auto& pc : cert.pairs) {
        GwCertPairReport r{pc.si, pc.ti, 0, 0, false, false, false};
        const auto& Xs = curve.spaces[pc.si];
        const auto& Xt = curve.spaces[pc.ti];
        const auto& ms = curve.masses[pc.si];
        const auto& mt = curve.masses[pc.ti];
        MetricCoupling<T> D{pc.cross};
        r.coupling_valid = validate_metric_coupling(Xs, Xt, D, tol).ok;
        // plan marginals must reproduce the slice masses
        bool plan_ok = pc.plan.rows() == Xs.size() && pc.plan.cols() == Xt.size();
        if (plan_ok) {
            for (std::size_t i = 0; i < Xs.size() && plan_ok; ++i) {
                T row(0);
                for (std::size_t j = 0; j < Xt.size(); ++j) row = row + pc.plan(i, j);
                plan_ok = scalar_abs(row - ms[i]) <= tol;
            }
            for (std::size_t j = 0; j < Xt.size() && plan_ok; ++j) {
                T col(0);
                for (std::size_t i = 0; i < Xs.size(); ++i) col = col + pc.plan(i, j);
                plan_ok = scalar_abs(col - mt[j]) <= tol;
            }
        }
        r.plan_valid = plan_ok;
        T span = scalar_abs(curve.times[pc.ti] - curve.times[pc.si]);
        T target = span * cert.rho;
        r.target = to_double(target);
        T cost_p(0);
        for (std::size_t i = 0; i < pc.plan.rows(); ++i)
            for (std::size_t j = 0; j < pc.plan.cols(); ++j)
                if (pc.plan(i, j) > T(0))
                    cost_p = cost_p + pc.plan(i, j) * pow_int(pc.cross(i, j), cert.p);
        r.cost = std::pow(std::max(0.0, to_double(cost_p)), 1.0 / cert.p);
        bool cost_ok = cost_p <= pow_int(target, cert.p) + tol;
        r.ok = r.coupling_valid && r.plan_valid && cost_ok;
        rep.certified = rep.certified && r.ok;
        rep.pairs.push_back(r);
    }
    rep.note = rep.certified
                   ? "certificate couplings valid; costs within |s-t|*rho; exact endpoint value "
                     "plus the triangle inequality forces equality"
                   : "certificate failed; see failing pairs";
    return rep;
}

// Builds the full pairwise certificate for a deviant or branching curve.
template <class T>
GwCurveCertificate<T> deviant_certificates(std::size_t n, std::size_t m, const T& sigma,
                                           const std::vector<T>& times, int p) {
    GwCurveCertificate<T> cert;
    cert.p = p;
    cert.rho = T(1) / T(2);
    for (std::size_t a = 0; a < times.size(); ++a)
        for (std::size_t b = a + 1; b < times.size(); ++b) {
            auto pair = deviant_coupling(n, m, sigma, times[a], times[b]);
            cert.pairs.push_back({a, b, pair.cross, pair.plan});
        }
    return cert;
}

template <class T>
GwCurveCertificate<T> branching_certificates(std::size_t n, const T& a_param,
                                             const std::vector<T>& times, int p) {
    GwCurveCertificate<T> cert;
    cert.p = p;
    cert.rho = T(1) / T(2);
    for (std::size_t a = 0; a < times.size(); ++a)
        for (std::size_t b = a + 1; b < times.size(); ++b) {
            auto pair = branching_coupling(n, a_param, times[a], times[b]);
            cert.pairs.push_back({a, b, pair.cross, pair.plan});
        }
    return cert;
}

template <class T>
GwCurveCertificate<T> gw_line_certificates(const MetricMeasureSpace<T>& Xm,
                                           const MetricMeasureSpace<T>& Ym,
                                           const MetricCoupling<T>& D, const Matrix<T>& plan,
                                           const std::vector<T>& times, int p, const T& rho) {
    GwCurveCertificate<T> cert;
    cert.p = p;
    cert.rho = rho;
    for (std::size_t a = 0; a < times.size(); ++a)
        for (std::size_t b = a + 1; b < times.size(); ++b) {
            auto pair = gw_line_pair(Xm, Ym, D, plan, times[a], times[b]);
            cert.pairs.push_back({a, b, pair.cross, pair.plan});
        }
    return cert;
}

// ---------------------------------------------------------------------------
// h-profiles and Hausdorff-boundedness.

// Step function eps -> min_x mu(B_eps(x)), stored at the distinct distance
// values (right-continuous; closed balls).
struct HProfile {
    std::vector<std::pair<double, double>> steps;  // (eps threshold, value)

    double eval(double eps) const {
        double v = 0.0;
        for (auto& [x, y] : steps) {
            if (x <= eps) v = y;
            else break;
        }
        return v;
    }
};

inline HProfile h_profile(const MetricMeasureSpace<double>& Xm) {
    const std::size_t n = Xm.size();
    std::vector<double> vals;
    vals.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vals.push_back(Xm.space.d(i, j));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    HProfile prof;
    for (double eps : vals) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
            double ball = 0.0;
            for (std::size_t y = 0; y < n; ++y)
                if (Xm.space.d(x, y) <= eps) ball += Xm.mass[y];
            worst = std::min(worst, ball);
        }
        prof.steps.emplace_back(eps, worst);
    }
    return prof;
}

// Strictly increasing proper minorant of a profile (any h the space is
// h-bounded under must lie below the profile; this constructs one).
inline ProperFunction profile_minorant(const HProfile& prof, double diam) {
    double delta0 = prof.steps.front().second;  // min point mass
    double eps1 = diam > 0 ? diam : 1.0;
    for (auto& [x, y] : prof.steps)
        if (x > 0) {
            eps1 = x;
            break;
        }
    ProperFunction h;
    h.strict = true;
    h.breakpoints = {{0.0, 0.0}, {eps1, delta0 / 2.0}};
    double span = std::max(diam - eps1, 0.0) + 1.0;
    h.tail_slope = (delta0 / 2.0) / (2.0 * span);
    h.check();
    return h;
}

// Joint minorant for a pair of mm-spaces.
inline ProperFunction joint_profile_minorant(const MetricMeasureSpace<double>& Xm,
                                             const MetricMeasureSpace<double>& Ym) {
    auto hx = h_profile(Xm);
    auto hy = h_profile(Ym);
    double diam = std::max(to_double(diameter(Xm.space)), to_double(diameter(Ym.space)));
    HProfile joint;
    // pointwise min over the merged thresholds
    std::vector<double> xs;
    for (auto& [x, y] : hx.steps) xs.push_back(x);
    for (auto& [x, y] : hy.steps) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) joint.steps.emplace_back(x, std::min(hx.eval(x), hy.eval(x)));
    return profile_minorant(joint, diam);
}

// h~^{-1} where h~(t) = (t/2) h(t/2)^{1/p}: the Hausdorff-bound function of an
// h-bounded family. h must be strictly increasing and proper with range [0,1].
inline ProperFunction hausdorff_bound_function(const ProperFunction& h, double p,
                                               double hi = 0.0) {
    h.check();
    if (!h.strict) throw std::invalid_argument("hausdorff_bound_function: h must be strict");
    if (hi <= 0.0) hi = 4.0 * h.breakpoints.back().first + 4.0;
    auto htilde = [&](double t) { return (t / 2.0) * std::pow(h(t / 2.0), 1.0 / p); };
    ProperFunction ht = refine_to_piecewise(htilde, hi, 1e-9, true);
    // invert the piecewise-linear model by swapping coordinates
    ProperFunction inv;
    inv.strict = true;
    double last_y = -1.0;
    for (auto& [x, y] : ht.breakpoints) {
        if (y <= last_y) continue;  // drop numerically flat steps
        inv.breakpoints.emplace_back(y, x);
        last_y = y;
    }
    inv.tail_slope = ht.tail_slope > 0 ? 1.0 / ht.tail_slope : 0.0;
    inv.check();
    return inv;
}

struct HausdorffBoundedCheck {
    double eta;    // block-metric Hausdorff distance between the copies
    double delta;  // W_p cost under the coupling
    double bound;  // f(delta)
    bool ok;       // eta <= f(delta) + tol
};

template <class T>
HausdorffBoundedCheck check_pair_hausdorff_bounded(const MetricMeasureSpace<T>& Xm,
                                                   const MetricMeasureSpace<T>& Ym,
                                                   const MetricCoupling<T>& D,
                                                   const ProperFunction& f, double p,
                                                   double tol = 1e-9) {
    auto block = coupling_block(Xm.space, Ym.space, D);
    PseudoMetricSpace<T> P;
    P.dist = block;
    for (std::size_t i = 0; i < Xm.size(); ++i) P.labels.push_back("X" + std::to_string(i));
    for (std::size_t j = 0; j < Ym.size(); ++j) P.labels.push_back("Y" + std::to_string(j));
    auto q = quotient_pseudometric(P);
    std::vector<std::size_t> cx, cy;
    for (std::size_t i = 0; i < Xm.size(); ++i) cx.push_back(q.class_of[i]);
    for (std::size_t j = 0; j < Ym.size(); ++j) cy.push_back(q.class_of[Xm.size() + j]);
    HausdorffBoundedCheck out{};
    out.eta = to_double(hausdorff_distance(q.space, Subset(std::move(cx)), Subset(std::move(cy))));
    if constexpr (is_rational_v<T>) {
        auto b = gw_upper_cost_p(Xm, Ym, D, static_cast<int>(p));
        out.delta = std::pow(to_double(b.cost_p), 1.0 / p);
    } else {
        out.delta = gw_upper_bound(Xm, Ym, D, p).value;
    }
    out.bound = f(out.delta);
    out.ok = out.eta <= out.bound + tol;
    return out;
}

// ---------------------------------------------------------------------------
// The non-Hausdorff-bounded example: linear interpolation from a point mass
// toward the uniform measure on a two-point space. eta stays at the GH value
// 1/2 in every embedding while delta = t/2 -> 0, so no proper f can validate
// the whole family.

inline MetricMeasureSpace<double> ex430_slice(double t) {
    if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("ex430_slice: t must lie in (0,1]");
    MetricMeasureSpace<double> M;
    M.space = simplex_space<double>(2);
    M.mass = {1.0 - t / 2.0, t / 2.0};
    return M;
}

struct Ex430Row {
    double t;
    double eta;    // d_GH(point, slice underlying space) = 1/2, embedding-forced
    double delta;  // exact d_GW,1 = t/2 (one-point-vs-two-point closed form)
};

inline std::vector<Ex430Row> ex430_witness(const std::vector<double>& ts) {
    std::vector<Ex430Row> rows;
    auto point = simplex_space<double>(1);
    for (double t : ts) {
        auto slice = ex430_slice(t);
        double eta = to_double(gh_exact(point, slice.space).value);
        double delta = one_point_vs_two_point_gw(slice.mass[0], slice.mass[1], 1.0, 1);
        rows.push_back({t, eta, delta});
    }
    return rows;
}

}  // namespace geodesy
