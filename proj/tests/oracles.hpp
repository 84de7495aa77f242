#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <limits>
#include <optional>
#include <vector>

#include "geodesy/correspondence.hpp"
#include "geodesy/space.hpp"

namespace geodesy::oracle {

// Brute-force transportation optimum by enumerating the basic solutions of
// the transportation polytope: every spanning tree of K_{n,m} yields at most
// one basic solution; feasible ones are vertices. n, m <= 4.
inline std::optional<double> transport_vertex_enumeration(const Matrix<double>& cost,
                                                          const std::vector<double>& a,
                                                          const std::vector<double>& b) {
    const std::size_t n = a.size(), m = b.size();
    const std::size_t E = n * m, need = n + m - 1;
    std::vector<std::size_t> edges(E);
    for (std::size_t e = 0; e < E; ++e) edges[e] = e;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<std::size_t> pick;
    auto solve_tree = [&](const std::vector<std::size_t>& tree) {
        // leaf-stripping solve of sum_j x_ij = a_i, sum_i x_ij = b_j on the tree
        std::vector<double> ra = a, rb = b;
        std::vector<double> flow(tree.size(), 0.0);
        std::vector<bool> done(tree.size(), false);
        std::size_t remaining = tree.size();
        while (remaining > 0) {
            bool progress = false;
            for (std::size_t t = 0; t < tree.size(); ++t) {
                if (done[t]) continue;
                std::size_t i = tree[t] / m, j = tree[t] % m;
                // count open edges at row i and col j
                int deg_i = 0, deg_j = 0;
                for (std::size_t u = 0; u < tree.size(); ++u) {
                    if (done[u]) continue;
                    if (tree[u] / m == i) ++deg_i;
                    if (tree[u] % m == j) ++deg_j;
                }
                if (deg_i == 1) {
                    flow[t] = ra[i];
                    ra[i] = 0;
                    rb[j] -= flow[t];
                    done[t] = true;
                    --remaining;
                    progress = true;
                } else if (deg_j == 1) {
                    flow[t] = rb[j];
                    rb[j] = 0;
                    ra[i] -= flow[t];
                    done[t] = true;
                    --remaining;
                    progress = true;
                }
            }
            if (!progress) return;  // not a spanning tree
        }
        for (double f : flow)
            if (f < -1e-10) return;  // infeasible basis
        for (double r : ra)
            if (std::abs(r) > 1e-9) return;
        for (double r : rb)
            if (std::abs(r) > 1e-9) return;
        double c = 0;
        for (std::size_t t = 0; t < tree.size(); ++t) c += flow[t] * cost(tree[t] / m, tree[t] % m);
        if (c < best) best = c;
        found = true;
    };

    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (pick.size() == need) {
            solve_tree(pick);
            return;
        }
        for (std::size_t e = from; e < E; ++e) {
            pick.push_back(edges[e]);
            self(self, e + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    if (!found) return std::nullopt;
    return best;
}

// Exhaustive minimum distortion over every correspondence between X and Y,
// encoded as subsets of the (n*m)-cell grid that cover all rows and columns.
// n*m <= 20 or so.
inline double gh_exhaustive_distortion(const FiniteMetricSpace<double>& X,
                                       const FiniteMetricSpace<double>& Y) {
    const std::size_t n = X.size(), m = Y.size(), E = n * m;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << E); ++mask) {
        std::uint64_t rows = 0, cols = 0;
        for (std::size_t e = 0; e < E; ++e)
            if (mask & (std::uint64_t(1) << e)) {
                rows |= std::uint64_t(1) << (e / m);
                cols |= std::uint64_t(1) << (e % m);
            }
        if (rows != (std::uint64_t(1) << n) - 1 || cols != (std::uint64_t(1) << m) - 1) continue;
        double dis = 0;
        for (std::size_t e1 = 0; e1 < E; ++e1) {
            if (!(mask & (std::uint64_t(1) << e1))) continue;
            for (std::size_t e2 = e1; e2 < E; ++e2) {
                if (!(mask & (std::uint64_t(1) << e2))) continue;
                dis = std::max(dis, std::abs(X.d(e1 / m, e2 / m) - Y.d(e1 % m, e2 % m)));
                if (dis >= best) break;
            }
            if (dis >= best) break;
        }
        best = std::min(best, dis);
    }
    return best;
}

// Exact Sturm GW for p = 1 at toy sizes: the objective min_pi sum pi_ij c_ij
// is bilinear, so the minimum over (cross, coupling) is attained at a vertex
// pair. Enumerates the vertices of the metric-coupling polytope by active-set
// bases and, for each, takes the exact transportation minimum by spanning-tree
// enumeration. Independent of the library's LP and barrier paths.
inline double gw_bilinear_vertex_oracle_p1(const FiniteMetricSpace<double>& X,
                                           const FiniteMetricSpace<double>& Y,
                                           const std::vector<double>& mx,
                                           const std::vector<double>& my) {
    const std::size_t n = X.size(), m = Y.size(), nv = n * m;
    // rows: a . c >= b
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    auto var = [&](std::size_t i, std::size_t j) { return i * m + j; };
    auto add = [&](std::initializer_list<std::pair<std::size_t, double>> entries, double rhs) {
        std::vector<double> row(nv, 0.0);
        for (auto& [c, v] : entries) row[c] = v;
        A.push_back(std::move(row));
        b.push_back(rhs);
    };
    const double box = to_double(diameter(X)) + to_double(diameter(Y)) + 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            add({{var(i, j), 1.0}}, 0.0);
            add({{var(i, j), -1.0}}, -box);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t j = 0; j < m; ++j) {
                add({{var(i, j), -1.0}, {var(k, j), 1.0}}, -X.d(i, k));
                add({{var(i, j), 1.0}, {var(k, j), -1.0}}, -X.d(i, k));
                add({{var(i, j), 1.0}, {var(k, j), 1.0}}, X.d(i, k));
            }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = j + 1; l < m; ++l)
            for (std::size_t i = 0; i < n; ++i) {
                add({{var(i, j), -1.0}, {var(i, l), 1.0}}, -Y.d(j, l));
                add({{var(i, j), 1.0}, {var(i, l), -1.0}}, -Y.d(j, l));
                add({{var(i, j), 1.0}, {var(i, l), 1.0}}, Y.d(j, l));
            }

    const std::size_t R = A.size();
    std::vector<std::size_t> pick;
    double best = std::numeric_limits<double>::infinity();

    auto try_vertex = [&]() {
        // solve the active equalities by Gaussian elimination
        std::vector<std::vector<double>> M(nv, std::vector<double>(nv + 1, 0.0));
        for (std::size_t r = 0; r < nv; ++r) {
            for (std::size_t c = 0; c < nv; ++c) M[r][c] = A[pick[r]][c];
            M[r][nv] = b[pick[r]];
        }
        for (std::size_t col = 0; col < nv; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < nv; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            if (std::abs(M[piv][col]) < 1e-9) return;  // singular basis
            std::swap(M[col], M[piv]);
            for (std::size_t r = 0; r < nv; ++r) {
                if (r == col) continue;
                double f = M[r][col] / M[col][col];
                for (std::size_t c = col; c <= nv; ++c) M[r][c] -= f * M[col][c];
            }
        }
        std::vector<double> c(nv);
        for (std::size_t r = 0; r < nv; ++r) c[r] = M[r][nv] / M[r][r];
        for (std::size_t r = 0; r < R; ++r) {
            double lhs = 0;
            for (std::size_t k = 0; k < nv; ++k) lhs += A[r][k] * c[k];
            if (lhs < b[r] - 1e-9) return;  // infeasible vertex
        }
        Matrix<double> cost(n, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) cost(i, j) = c[var(i, j)];
        auto v = transport_vertex_enumeration(cost, mx, my);
        if (v && *v < best) best = *v;
    };

    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (pick.size() == nv) {
            try_vertex();
            return;
        }
        for (std::size_t r = from; r < R; ++r) {
            pick.push_back(r);
            self(self, r + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return best;
}

// Direct ball-counting h-profile evaluation.
inline double h_profile_direct(const FiniteMetricSpace<double>& X, const std::vector<double>& mass,
                               double eps) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < X.size(); ++x) {
        double ball = 0;
        for (std::size_t y = 0; y < X.size(); ++y)
            if (X.d(x, y) <= eps) ball += mass[y];
        worst = std::min(worst, ball);
    }
    return worst;
}

// Random metric space with dyadic entries: perturbed shortest-path closure of
// a random symmetric matrix, so that all triangle inequalities hold exactly.
inline FiniteMetricSpace<double> random_metric_space(std::size_t n, Rng& rng,
                                                     int denom_pow = 10) {
    FiniteMetricSpace<double> X;
    X.dist = Matrix<double>(n, n);
    const double q = std::pow(2.0, denom_pow);
    for (std::size_t i = 0; i < n; ++i) {
        X.labels.push_back("r" + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = std::round(rng.uniform(0.25, 1.0) * q) / q;
            X.dist(i, j) = v;
            X.dist(j, i) = v;
        }
    }
    // Floyd-Warshall closure keeps entries dyadic and enforces the triangles
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) X.dist(i, j) = std::min(X.dist(i, j), X.dist(i, k) + X.dist(k, j));
    return X;
}

inline std::vector<double> random_simplex_weights(std::size_t n, Rng& rng) {
    return rng.dirichlet(n);
}

}  // namespace geodesy::oracle
