#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geodesy/numeric.hpp"
#include "geodesy/space.hpp"

namespace geodesy {

// Probability weights over a carrier FiniteMetricSpace (index-aligned).
template <class T>
struct DiscreteMeasure {
    std::vector<T> weights;

    std::size_t size() const { return weights.size(); }
    T sum() const {
        T s(0);
        for (const auto& w : weights) s = s + w;
        return s;
    }
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > T(0)) idx.push_back(i);
        return idx;
    }
    bool valid(T tol) const {
        for (const auto& w : weights)
            if (w < T(0)) return false;
        return scalar_abs(sum() - T(1)) <= tol;
    }
};

template <class T>
DiscreteMeasure<T> dirac(std::size_t n, std::size_t at) {
    DiscreteMeasure<T> m;
    m.weights.assign(n, T(0));
    m.weights[at] = T(1);
    return m;
}

template <class T>
DiscreteMeasure<T> uniform_measure(std::size_t n) {
    DiscreteMeasure<T> m;
    m.weights.assign(n, T(1) / T(static_cast<long long>(n)));
    return m;
}

// ---------------------------------------------------------------------------
// Transportation LP: primal simplex on the bipartite transportation graph.
// Bland's rule on entering and leaving keeps the pivot sequence deterministic
// and cycle-free. No division is performed, so the solve is exact over
// Rational inputs; vertices of the transportation polytope are returned.

template <class T>
struct TransportPlan {
    Matrix<T> plan;
    T cost;
    std::size_t pivots = 0;
};

template <class T>
TransportPlan<T> transportation_simplex(const Matrix<T>& cost, const std::vector<T>& supply,
                                        const std::vector<T>& demand, std::optional<T> tol_opt = {}) {
    const std::size_t n = supply.size(), m = demand.size();
    if (cost.rows() != n || cost.cols() != m)
        throw std::invalid_argument("transportation_simplex: shape mismatch");
    T tol = tol_opt ? *tol_opt : tol_or_exact<T>(1e-12);
    {
        T sa(0), sb(0);
        for (const auto& x : supply) {
            if (x < T(0)) throw std::invalid_argument("transportation_simplex: negative supply");
            sa = sa + x;
        }
        for (const auto& x : demand) {
            if (x < T(0)) throw std::invalid_argument("transportation_simplex: negative demand");
            sb = sb + x;
        }
        T mass_tol = tol_or_exact<T>(kMassTol);
        if (scalar_abs(sa - sb) > mass_tol)
            throw std::invalid_argument("transportation_simplex: infeasible marginals");
    }

    Matrix<T> x(n, m, T(0));
    std::vector<std::vector<bool>> basic(n, std::vector<bool>(m, false));

    // Northwest-corner initial basis; keeps exactly n+m-1 basic cells by
    // inserting zero basics on degenerate ties.
    {
        std::vector<T> a = supply, b = demand;
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            T q = std::min(a[i], b[j]);
            x(i, j) = q;
            basic[i][j] = true;
            a[i] = a[i] - q;
            b[j] = b[j] - q;
            bool row_done = !(a[i] > tol);
            bool col_done = !(b[j] > tol);
            if (row_done && col_done) {
                // degenerate: close only one side unless both at the end
                if (i + 1 < n)
                    ++i;
                else
                    ++j;
            } else if (row_done)
                ++i;
            else
                ++j;
        }
    }

    std::vector<T> u(n), v(m);
    std::vector<char> useen(n), vseen(m);

    auto compute_potentials = [&]() {
        std::fill(useen.begin(), useen.end(), 0);
        std::fill(vseen.begin(), vseen.end(), 0);
        std::deque<std::pair<bool, std::size_t>> q;  // (is_row, index)
        u[0] = T(0);
        useen[0] = 1;
        q.push_back({true, 0});
        while (!q.empty()) {
            auto [is_row, idx] = q.front();
            q.pop_front();
            if (is_row) {
                for (std::size_t j = 0; j < m; ++j)
                    if (basic[idx][j] && !vseen[j]) {
                        v[j] = cost(idx, j) - u[idx];
                        vseen[j] = 1;
                        q.push_back({false, j});
                    }
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    if (basic[i][idx] && !useen[i]) {
                        u[i] = cost(i, idx) - v[idx];
                        useen[i] = 1;
                        q.push_back({true, i});
                    }
            }
        }
    };

    // Unique tree path between row node r and column node c through basic
    // cells, excluding the entering cell itself.
    auto find_path = [&](std::size_t r, std::size_t c) {
        // nodes: rows [0,n), cols [n, n+m)
        std::vector<int> prev(n + m, -1);
        std::vector<char> vis(n + m, 0);
        std::deque<std::size_t> q;
        q.push_back(r);
        vis[r] = 1;
        while (!q.empty()) {
            std::size_t node = q.front();
            q.pop_front();
            if (node == n + c) break;
            if (node < n) {
                for (std::size_t j = 0; j < m; ++j)
                    if (basic[node][j] && !vis[n + j] && !(node == r && j == c)) {
                        vis[n + j] = 1;
                        prev[n + j] = static_cast<int>(node);
                        q.push_back(n + j);
                    }
            } else {
                std::size_t j = node - n;
                for (std::size_t i = 0; i < n; ++i)
                    if (basic[i][j] && !vis[i] && !(i == r && j == c)) {
                        vis[i] = 1;
                        prev[i] = static_cast<int>(node);
                        q.push_back(i);
                    }
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> cells;  // path cells c->r order
        std::size_t cur = n + c;
        while (cur != r) {
            std::size_t p = static_cast<std::size_t>(prev[cur]);
            if (cur >= n)
                cells.emplace_back(p, cur - n);
            else
                cells.emplace_back(cur, p - n);
            cur = p;
        }
        return cells;
    };

    const std::size_t max_pivots = 20000 + 200 * (n + m) * (n + m);
    std::size_t pivots = 0;
    while (true) {
        compute_potentials();
        // Bland: first cell in row-major order with negative reduced cost.
        // The test is relative to the local magnitudes so that cost matrices
        // spanning many orders (d^p at large p) still pivot correctly.
        std::size_t er = n, ec = m;
        for (std::size_t i = 0; i < n && er == n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (basic[i][j]) continue;
                T r = cost(i, j) - u[i] - v[j];
                T scale = scalar_abs(cost(i, j)) + scalar_abs(u[i]) + scalar_abs(v[j]);
                if (r < -tol * scale) {
                    er = i;
                    ec = j;
                    break;
                }
            }
        if (er == n) break;  // optimal

        auto path = find_path(er, ec);
        // cycle: entering cell is '+'; walking from the column end of the
        // path, signs alternate starting with '-'
        T theta(0);
        bool theta_set = false;
        std::size_t leave_r = 0, leave_c = 0;
        bool minus = true;
        for (auto& [ci, cj] : path) {
            if (minus) {
                if (!theta_set || x(ci, cj) < theta ||
                    (x(ci, cj) == theta && (ci * m + cj) < (leave_r * m + leave_c))) {
                    theta = x(ci, cj);
                    leave_r = ci;
                    leave_c = cj;
                    theta_set = true;
                }
            }
            minus = !minus;
        }
        x(er, ec) = x(er, ec) + theta;
        minus = true;
        for (auto& [ci, cj] : path) {
            if (minus)
                x(ci, cj) = x(ci, cj) - theta;
            else
                x(ci, cj) = x(ci, cj) + theta;
            minus = !minus;
        }
        basic[er][ec] = true;
        basic[leave_r][leave_c] = false;
        x(leave_r, leave_c) = T(0);
        if (++pivots > max_pivots)
            throw std::runtime_error("transportation_simplex: pivot limit exceeded");
    }

    T total(0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (x(i, j) > T(0)) total = total + cost(i, j) * x(i, j);
    return {std::move(x), total, pivots};
}

// ---------------------------------------------------------------------------
// Wasserstein distances on a fixed carrier.

template <class T>
struct CouplingResult {
    T cost_p;        // sum pi_ij d_ij^p (no root taken; exact in T)
    Matrix<T> plan;  // optimal coupling
};

// Integer-exponent variant; stays in T, so rational inputs give exact values.
template <class T>
CouplingResult<T> wasserstein_cost_p(const FiniteMetricSpace<T>& Z, const DiscreteMeasure<T>& a,
                                     const DiscreteMeasure<T>& b, int p) {
    if (p < 1) throw std::invalid_argument("wasserstein_cost_p: p must be >= 1");
    const std::size_t n = Z.size();
    if (a.size() != n || b.size() != n)
        throw std::invalid_argument("wasserstein_cost_p: measures not on carrier");
    Matrix<T> cost(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = pow_int(Z.d(i, j), p);
    auto r = transportation_simplex(cost, a.weights, b.weights);
    return {r.cost, std::move(r.plan)};
}

struct WassersteinResult {
    double value;  // the distance (cost^{1/p})
    Matrix<double> plan;
};

// Real exponent p >= 1 (double path).
inline WassersteinResult wasserstein_p(const FiniteMetricSpace<double>& Z,
                                       const DiscreteMeasure<double>& a,
                                       const DiscreteMeasure<double>& b, double p) {
    if (p < 1.0) throw std::invalid_argument("wasserstein_p: p must be >= 1");
    const std::size_t n = Z.size();
    if (a.size() != n || b.size() != n)
        throw std::invalid_argument("wasserstein_p: measures not on carrier");
    Matrix<double> cost(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost(i, j) = std::pow(Z.d(i, j), p);
    auto r = transportation_simplex(cost, a.weights, b.weights);
    return {std::pow(std::max(0.0, r.cost), 1.0 / p), std::move(r.plan)};
}

namespace detail {

// Can both marginals be saturated using only pairs with d <= thr?
// Edmonds-Karp max-flow on the thresholded bipartite graph.
inline bool marginals_feasible_at(const FiniteMetricSpace<double>& Z, const std::vector<double>& a,
                                  const std::vector<double>& b, double thr) {
    const std::size_t n = a.size();
    // nodes: 0 source, 1..n rows, n+1..2n cols, 2n+1 sink
    const std::size_t N = 2 * n + 2, src = 0, snk = 2 * n + 1;
    std::vector<std::vector<double>> cap(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < n; ++i) cap[src][1 + i] = a[i];
    for (std::size_t j = 0; j < n; ++j) cap[n + 1 + j][snk] = b[j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (Z.d(i, j) <= thr + 1e-15) cap[1 + i][n + 1 + j] = 2.0;
    double flow = 0.0;
    while (true) {
        std::vector<int> prev(N, -1);
        prev[src] = static_cast<int>(src);
        std::deque<std::size_t> q{src};
        while (!q.empty() && prev[snk] == -1) {
            std::size_t u = q.front();
            q.pop_front();
            for (std::size_t v = 0; v < N; ++v)
                if (prev[v] == -1 && cap[u][v] > 1e-14) {
                    prev[v] = static_cast<int>(u);
                    q.push_back(v);
                }
        }
        if (prev[snk] == -1) break;
        double aug = std::numeric_limits<double>::infinity();
        for (std::size_t v = snk; v != src; v = prev[v]) aug = std::min(aug, cap[prev[v]][v]);
        for (std::size_t v = snk; v != src; v = prev[v]) {
            cap[prev[v]][v] -= aug;
            cap[v][prev[v]] += aug;
        }
        flow += aug;
    }
    double total = 0.0;
    for (double x : a) total += x;
    return flow >= total - 1e-9;
}

}  // namespace detail

// W_infinity by bisection over the sorted distinct distances; exact on finite
// data since the optimum is attained at one of them.
inline double wasserstein_inf(const FiniteMetricSpace<double>& Z, const DiscreteMeasure<double>& a,
                              const DiscreteMeasure<double>& b) {
    const std::size_t n = Z.size();
    if (a.size() != n || b.size() != n)
        throw std::invalid_argument("wasserstein_inf: measures not on carrier");
    std::vector<double> vals;
    vals.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vals.push_back(Z.d(i, j));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::size_t lo = 0, hi = vals.size() - 1;
    if (detail::marginals_feasible_at(Z, a.weights, b.weights, vals[lo])) return vals[lo];
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (detail::marginals_feasible_at(Z, a.weights, b.weights, vals[mid]))
            hi = mid;
        else
            lo = mid;
    }
    return vals[hi];
}

// ---------------------------------------------------------------------------
// Linear interpolation geodesic in W_1 and its explicit optimal couplings.

template <class T>
DiscreteMeasure<T> linear_interpolation(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b,
                                        const T& t) {
    if (t < T(0) || t > T(1)) throw std::invalid_argument("linear_interpolation: t outside [0,1]");
    if (a.size() != b.size())
        throw std::invalid_argument("linear_interpolation: size mismatch");
    DiscreteMeasure<T> g;
    g.weights.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        g.weights[i] = (T(1) - t) * a.weights[i] + t * b.weights[i];
    return g;
}

// mu(s,t) = (1-t) diag(a) + s diag(b) + (t-s) mu; a coupling between the
// interpolants at s and t whose cost is exactly (t-s) * W1(a,b) when mu is
// W1-optimal.
template <class T>
Matrix<T> interpolation_coupling(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b,
                                 const Matrix<T>& mu, const T& s, const T& t) {
    const std::size_t n = a.size();
    if (!(T(0) <= s && s < t && t <= T(1)))
        throw std::invalid_argument("interpolation_coupling: need 0 <= s < t <= 1");
    if (mu.rows() != n || mu.cols() != n)
        throw std::invalid_argument("interpolation_coupling: coupling shape mismatch");
    Matrix<T> out(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = (t - s) * mu(i, j);
    for (std::size_t i = 0; i < n; ++i)
        out(i, i) = out(i, i) + (T(1) - t) * a.weights[i] + s * b.weights[i];
    // marginal check: rows must equal the interpolant at s, columns at t
    auto gs = linear_interpolation(a, b, s);
    auto gt = linear_interpolation(a, b, t);
    T tol = tol_or_exact<T>(1e-9);
    for (std::size_t i = 0; i < n; ++i) {
        T row(0), col(0);
        for (std::size_t j = 0; j < n; ++j) {
            row = row + out(i, j);
            col = col + out(j, i);
        }
        if (scalar_abs(row - gs.weights[i]) > tol || scalar_abs(col - gt.weights[i]) > tol)
            throw std::invalid_argument(
                "interpolation_coupling: marginal check failed (mu not a coupling of a,b?)");
    }
    return out;
}

template <class T>
T coupling_cost_p(const FiniteMetricSpace<T>& Z, const Matrix<T>& plan, int p) {
    T total(0);
    for (std::size_t i = 0; i < plan.rows(); ++i)
        for (std::size_t j = 0; j < plan.cols(); ++j)
            if (plan(i, j) > T(0)) total = total + plan(i, j) * pow_int(Z.d(i, j), p);
    return total;
}

// ---------------------------------------------------------------------------
// Voronoi transport map (the measurable map behind the hyperspace upper bound)
// and the sampled two-sided hyperspace Hausdorff check.

struct VoronoiMap {
    std::vector<std::size_t> net;      // eps-net points of X (indices into carrier)
    std::vector<std::size_t> cell_of;  // for each X index, the net slot it belongs to
    std::vector<std::size_t> target;   // for each X index, assigned point of Y
    double bound;                      // certified sup_x d(x, xi(x)) <= eta + eps
};

inline VoronoiMap voronoi_transport_map(const FiniteMetricSpace<double>& Z, const Subset& X,
                                        const Subset& Y, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("voronoi_transport_map: eps must be positive");
    check_subset(Z, X);
    check_subset(Z, Y);
    VoronoiMap vm;
    // greedy eps-net over X, in index order for determinism
    for (std::size_t x : X.indices) {
        bool covered = false;
        for (std::size_t c : vm.net)
            if (Z.d(x, c) <= eps) {
                covered = true;
                break;
            }
        if (!covered) vm.net.push_back(x);
    }
    const double eta = hausdorff_distance(Z, X, Y);
    // disjoint Voronoi cells: nearest net point, ties to the earliest slot
    std::vector<std::size_t> net_target(vm.net.size());
    for (std::size_t k = 0; k < vm.net.size(); ++k) {
        std::size_t best = Y.indices.front();
        for (std::size_t y : Y.indices)
            if (Z.d(vm.net[k], y) < Z.d(vm.net[k], best)) best = y;
        net_target[k] = best;
    }
    vm.cell_of.resize(Z.size(), SIZE_MAX);
    vm.target.resize(Z.size(), SIZE_MAX);
    double worst = 0.0;
    for (std::size_t x : X.indices) {
        std::size_t slot = 0;
        for (std::size_t k = 1; k < vm.net.size(); ++k)
            if (Z.d(x, vm.net[k]) < Z.d(x, vm.net[slot])) slot = k;
        vm.cell_of[x] = slot;
        vm.target[x] = net_target[slot];
        worst = std::max(worst, Z.d(x, vm.target[x]));
    }
    vm.bound = eta + eps;
    if (worst > vm.bound + kSetTol)
        throw std::logic_error("voronoi_transport_map: displacement bound violated");
    return vm;
}

struct HyperspaceCheckSample {
    std::size_t id;
    double distance;  // W_p(alpha, xi# alpha)
    bool within;      // <= eta + eps
};

struct HyperspaceCheckReport {
    double eta;        // d_H^Z(X, Y)
    double eps;
    double lower;      // Dirac one-sided bound; equals eta exactly
    double upper_max;  // worst sampled pushforward distance
    double estimate;   // max(lower, upper_max); lands in [eta, eta + eps]
    bool ok;
    std::vector<HyperspaceCheckSample> samples;
};

inline HyperspaceCheckReport hyperspace_hausdorff_check(const FiniteMetricSpace<double>& Z,
                                                        const Subset& X, const Subset& Y, double p,
                                                        double eps, std::size_t n_samples,
                                                        std::uint64_t seed) {
    if (!(eps > 0)) throw std::invalid_argument("hyperspace_hausdorff_check: eps must be positive");
    HyperspaceCheckReport rep;
    rep.eps = eps;
    rep.eta = hausdorff_distance(Z, X, Y);

    // Lower bound: the Dirac measure at the Hausdorff maximizer is at exactly
    // eta from every measure supported on the other set (one-sided closed
    // form: (sum_i beta_i d^p)^{1/p} >= min_i d = eta, attained by the Dirac
    // at the nearest point).
    rep.lower = rep.eta;

    const VoronoiMap to_Y = voronoi_transport_map(Z, X, Y, eps);
    const VoronoiMap to_X = voronoi_transport_map(Z, Y, X, eps);

    Rng rng(seed);
    rep.upper_max = 0.0;
    rep.ok = true;
    const bool inf_p = !std::isfinite(p);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const bool from_X = (s % 2 == 0);
        const Subset& S = from_X ? X : Y;
        const VoronoiMap& vm = from_X ? to_Y : to_X;
        auto w = rng.dirichlet(S.size());
        DiscreteMeasure<double> alpha;
        alpha.weights.assign(Z.size(), 0.0);
        for (std::size_t k = 0; k < S.size(); ++k) alpha.weights[S.indices[k]] = w[k];
        DiscreteMeasure<double> beta;
        beta.weights.assign(Z.size(), 0.0);
        for (std::size_t k = 0; k < S.size(); ++k)
            beta.weights[vm.target[S.indices[k]]] += w[k];
        double dist = inf_p ? wasserstein_inf(Z, alpha, beta)
                            : wasserstein_p(Z, alpha, beta, p).value;
        bool within = dist <= vm.bound + 1e-9;
        rep.ok = rep.ok && within;
        rep.upper_max = std::max(rep.upper_max, dist);
        rep.samples.push_back({s, dist, within});
    }
    rep.estimate = std::max(rep.lower, rep.upper_max);
    return rep;
}

}  // namespace geodesy
