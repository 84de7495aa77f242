#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodesy/numeric.hpp"
#include "geodesy/space.hpp"

namespace geodesy {

// Relation between two index sets, surjective onto both sides. Pairs are kept
// sorted so downstream constructions are deterministic.
struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    Correspondence() = default;
    explicit Correspondence(std::vector<std::pair<std::size_t, std::size_t>> p)
        : pairs(std::move(p)) {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }

    std::size_t size() const { return pairs.size(); }

    bool valid(std::size_t nx, std::size_t ny) const {
        std::vector<char> cx(nx, 0), cy(ny, 0);
        for (auto& [x, y] : pairs) {
            if (x >= nx || y >= ny) return false;
            cx[x] = 1;
            cy[y] = 1;
        }
        for (char c : cx)
            if (!c) return false;
        for (char c : cy)
            if (!c) return false;
        return true;
    }

    bool operator==(const Correspondence&) const = default;
};

inline Correspondence diagonal_correspondence(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, i);
    return Correspondence(std::move(p));
}

inline Correspondence full_correspondence(std::size_t n, std::size_t m) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) p.emplace_back(i, j);
    return Correspondence(std::move(p));
}

// dis(R) = sup over pairs of pairs of |d_X(x,x') - d_Y(y,y')|. (The paper's
// displayed formula reads "inf" but every use requires the sup; we implement
// the sup.)
template <class T>
T distortion(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y,
             const Correspondence& R) {
    if (!R.valid(X.size(), Y.size()))
        throw std::invalid_argument("distortion: invalid correspondence");
    T best(0);
    for (std::size_t a = 0; a < R.pairs.size(); ++a)
        for (std::size_t b = a; b < R.pairs.size(); ++b) {
            T gap = scalar_abs(X.d(R.pairs[a].first, R.pairs[b].first) -
                               Y.d(R.pairs[a].second, R.pairs[b].second));
            if (gap > best) best = gap;
        }
    return best;
}

// ---------------------------------------------------------------------------
// Exact GH distance: d_GH = (1/2) min_R dis(R), by branch and bound over the
// function-pair encoding (phi: X->Y, psi: Y->X). Every correspondence contains
// graph(phi) u graph(psi)^T for some such pair, and the union itself is a
// correspondence, so the minimum over pairs equals the minimum over all
// correspondences.

template <class T>
struct GHResult {
    T value;  // d_GH
    Correspondence witness;
};

namespace detail {

template <class T>
class GHSearch {
public:
    GHSearch(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y) : X_(X), Y_(Y) {
        n_ = X.size();
        m_ = Y.size();
        slots_ = n_ + m_;
        assign_.assign(slots_, SIZE_MAX);
        lower_ = scalar_abs(diameter(X) - diameter(Y));
    }

    // optimal distortion value
    T solve_value() {
        have_best_ = false;
        // greedy warm start: identity-ish assignment
        {
            std::vector<std::size_t> a(slots_);
            for (std::size_t i = 0; i < n_; ++i) a[i] = i % m_;
            for (std::size_t j = 0; j < m_; ++j) a[n_ + j] = j % n_;
            T v = full_value(a);
            best_ = v;
            have_best_ = true;
        }
        dfs_value(0, T(0));
        return best_;
    }

    // lexicographically-smallest assignment achieving value v (slot order,
    // then value order); deterministic canonical witness
    std::vector<std::size_t> canonical_witness(const T& v) {
        std::vector<std::size_t> fixed;
        for (std::size_t s = 0; s < slots_; ++s) {
            std::size_t limit = (s < n_) ? m_ : n_;
            bool placed = false;
            for (std::size_t val = 0; val < limit; ++val) {
                fixed.push_back(val);
                if (extendable(fixed, v)) {
                    placed = true;
                    break;
                }
                fixed.pop_back();
            }
            if (!placed) throw std::logic_error("gh_exact: witness reconstruction failed");
        }
        return fixed;
    }

private:
    T pair_gap(std::size_t s1, std::size_t v1, std::size_t s2, std::size_t v2) const {
        // slot s < n_: pair (s, v) in X x Y; slot s >= n_: pair (v, s - n_)
        std::size_t x1 = s1 < n_ ? s1 : v1, y1 = s1 < n_ ? v1 : s1 - n_;
        std::size_t x2 = s2 < n_ ? s2 : v2, y2 = s2 < n_ ? v2 : s2 - n_;
        return scalar_abs(X_.d(x1, x2) - Y_.d(y1, y2));
    }

    T full_value(const std::vector<std::size_t>& a) const {
        T v(0);
        for (std::size_t s1 = 0; s1 < slots_; ++s1)
            for (std::size_t s2 = s1; s2 < slots_; ++s2) {
                T g = pair_gap(s1, a[s1], s2, a[s2]);
                if (g > v) v = g;
            }
        return v;
    }

    void dfs_value(std::size_t s, T partial) {
        if (have_best_ && !(partial < best_)) return;
        if (have_best_ && !(lower_ < best_) ) {
            // best already matches the diameter lower bound; cannot improve
            return;
        }
        if (s == slots_) {
            best_ = partial;
            have_best_ = true;
            return;
        }
        std::size_t limit = (s < n_) ? m_ : n_;
        for (std::size_t val = 0; val < limit; ++val) {
            T p = partial;
            bool ok = true;
            for (std::size_t s2 = 0; s2 < s && ok; ++s2) {
                T g = pair_gap(s, val, s2, assign_[s2]);
                if (g > p) p = g;
                if (have_best_ && !(p < best_)) ok = false;
            }
            if (!ok) continue;
            assign_[s] = val;
            dfs_value(s + 1, p);
            assign_[s] = SIZE_MAX;
        }
    }

    // can `fixed` extend to a full assignment with max gap <= v?
    bool extendable(const std::vector<std::size_t>& fixed, const T& v) {
        for (std::size_t s1 = 0; s1 < fixed.size(); ++s1)
            for (std::size_t s2 = s1; s2 < fixed.size(); ++s2)
                if (pair_gap(s1, fixed[s1], s2, fixed[s2]) > v) return false;
        std::vector<std::size_t> a = fixed;
        return extend_rec(a, v);
    }

    bool extend_rec(std::vector<std::size_t>& a, const T& v) {
        std::size_t s = a.size();
        if (s == slots_) return true;
        std::size_t limit = (s < n_) ? m_ : n_;
        for (std::size_t val = 0; val < limit; ++val) {
            bool ok = true;
            for (std::size_t s2 = 0; s2 < s && ok; ++s2)
                if (pair_gap(s, val, s2, a[s2]) > v) ok = false;
            if (!ok) continue;
            a.push_back(val);
            if (extend_rec(a, v)) {
                a.pop_back();
                return true;
            }
            a.pop_back();
        }
        return false;
    }

    const FiniteMetricSpace<T>& X_;
    const FiniteMetricSpace<T>& Y_;
    std::size_t n_, m_, slots_;
    std::vector<std::size_t> assign_;
    T best_{};
    bool have_best_ = false;
    T lower_{};
};

}  // namespace detail

template <class T>
GHResult<T> gh_exact(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y,
                     std::size_t guard = 7) {
    if (std::max(X.size(), Y.size()) > guard)
        throw std::invalid_argument("gh_exact: size guard exceeded (use bounds instead)");
    detail::GHSearch<T> search(X, Y);
    T dis = search.solve_value();
    auto a = search.canonical_witness(dis);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < X.size(); ++i) pairs.emplace_back(i, a[i]);
    for (std::size_t j = 0; j < Y.size(); ++j) pairs.emplace_back(a[X.size() + j], j);
    return {dis / T(2), Correspondence(std::move(pairs))};
}

// Diameter lower bound d_GH >= |diam X - diam Y| / 2; valid for any sizes.
template <class T>
T gh_diameter_lower_bound(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y) {
    return scalar_abs(diameter(X) - diameter(Y)) / T(2);
}

// ---------------------------------------------------------------------------
// Geodesic samplings. A curve is stored by its sampled slices; optional extras
// record how the slices were produced (straight-line data, ambient
// realization, masses for mm-curves) so certifiers can pick witnesses.

template <class T>
struct LineData {
    FiniteMetricSpace<T> X, Y;
    Correspondence R;
};

template <class T>
struct GeodesicSampling {
    std::vector<T> times;
    std::vector<FiniteMetricSpace<T>> spaces;
    std::vector<std::vector<T>> masses;  // empty unless an mm-curve
    T endpoint_value{};                  // rho
    bool certified_optimal = false;

    std::optional<LineData<T>> line;  // set by straight-line constructions
    std::optional<FiniteMetricSpace<T>> ambient;
    std::vector<Subset> ambient_slices;

    std::size_t steps() const { return times.size(); }

    void check_shape() const {
        if (times.empty() || spaces.size() != times.size())
            throw std::invalid_argument("GeodesicSampling: shape mismatch");
        if (!(times.front() == T(0)) || !(times.back() == T(1)))
            throw std::invalid_argument("GeodesicSampling: times must start at 0 and end at 1");
        for (std::size_t k = 1; k < times.size(); ++k)
            if (!(times[k] > times[k - 1]))
                throw std::invalid_argument("GeodesicSampling: times must increase");
    }
};

template <class T>
std::vector<T> dyadic_times(std::size_t K) {
    std::vector<T> ts;
    for (std::size_t k = 0; k <= K; ++k) ts.push_back(T(static_cast<long long>(k)) / T(static_cast<long long>(K)));
    return ts;
}

// Straight-line GH geodesic: gamma(0)=X, gamma(1)=Y, gamma(t)=(R, d_{R_t})
// with d_{R_t} = (1-t) d_X + t d_Y evaluated on pairs.
template <class T>
FiniteMetricSpace<T> straight_line_slice(const FiniteMetricSpace<T>& X,
                                         const FiniteMetricSpace<T>& Y, const Correspondence& R,
                                         const T& t) {
    const auto& P = R.pairs;
    FiniteMetricSpace<T> S;
    S.dist = Matrix<T>(P.size(), P.size());
    for (std::size_t a = 0; a < P.size(); ++a) {
        S.labels.push_back("(" + X.labels[P[a].first] + "|" + Y.labels[P[a].second] + ")");
        for (std::size_t b = 0; b < P.size(); ++b)
            S.dist(a, b) = (T(1) - t) * X.d(P[a].first, P[b].first) +
                           t * Y.d(P[a].second, P[b].second);
    }
    return S;
}

template <class T>
GeodesicSampling<T> straight_line_gh_geodesic(const FiniteMetricSpace<T>& X,
                                              const FiniteMetricSpace<T>& Y,
                                              const Correspondence& R, std::vector<T> times,
                                              bool r_certified_optimal) {
    if (!R.valid(X.size(), Y.size()))
        throw std::invalid_argument("straight_line_gh_geodesic: invalid correspondence");
    GeodesicSampling<T> g;
    g.times = std::move(times);
    g.endpoint_value = distortion(X, Y, R) / T(2);
    g.certified_optimal = r_certified_optimal;
    g.line = LineData<T>{X, Y, R};
    for (const T& t : g.times) {
        if (t == T(0))
            g.spaces.push_back(X);
        else if (t == T(1))
            g.spaces.push_back(Y);
        else
            g.spaces.push_back(straight_line_slice(X, Y, R, t));
    }
    g.check_shape();
    return g;
}

// ---------------------------------------------------------------------------
// Gluings.

template <class T>
struct GlueResult {
    FiniteMetricSpace<T> space;
    std::vector<std::size_t> embed_x, embed_y;  // index maps into the quotient
    T half_distortion;
};

// Z = X u Y with cross distance min over (x',y') in R of
// d_X(x,x') + d_Y(y,y') + dis(R)/2, then the zero-distance quotient.
// Guarantees d_H^Z(X, Y) = dis(R)/2.
template <class T>
GlueResult<T> glue_via_correspondence(const FiniteMetricSpace<T>& X,
                                      const FiniteMetricSpace<T>& Y, const Correspondence& R) {
    if (!R.valid(X.size(), Y.size()))
        throw std::invalid_argument("glue_via_correspondence: invalid correspondence");
    const std::size_t n = X.size(), m = Y.size();
    const T half = distortion(X, Y, R) / T(2);
    PseudoMetricSpace<T> P;
    P.mesh = std::max(X.mesh, Y.mesh);
    P.dist = Matrix<T>(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i) P.labels.push_back("X:" + X.labels[i]);
    for (std::size_t j = 0; j < m; ++j) P.labels.push_back("Y:" + Y.labels[j]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) P.dist(i, j) = X.d(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) P.dist(n + i, n + j) = Y.d(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            bool first = true;
            T best(0);
            for (auto& [x2, y2] : R.pairs) {
                T v = X.d(i, x2) + Y.d(j, y2) + half;
                if (first || v < best) {
                    best = v;
                    first = false;
                }
            }
            P.dist(i, n + j) = best;
            P.dist(n + j, i) = best;
        }
    auto q = quotient_pseudometric(P);
    GlueResult<T> out;
    out.space = std::move(q.space);
    out.half_distortion = half;
    out.embed_x.assign(n, 0);
    out.embed_y.assign(m, 0);
    for (std::size_t i = 0; i < n; ++i) out.embed_x[i] = q.class_of[i];
    for (std::size_t j = 0; j < m; ++j) out.embed_y[j] = q.class_of[n + j];

    Subset cx(std::vector<std::size_t>(out.embed_x.begin(), out.embed_x.end()));
    Subset cy(std::vector<std::size_t>(out.embed_y.begin(), out.embed_y.end()));
    T dh = hausdorff_distance(out.space, cx, cy);
    T tol = tol_or_exact<T>(kMetricTol);
    if (scalar_abs(dh - half) > tol)
        throw std::logic_error("glue_via_correspondence: d_H != dis(R)/2");
    return out;
}

// Sampled cylinder over a straight-line geodesic (the Hausdorff realization):
// Z = R x times with
//   d(((x,y),t), ((x',y'),t')) =
//     min over (x'',y'') in R of [d_{R_t}((x,y),(x'',y'')) + d_{R_{t'}}((x'',y''),(x',y'))]
//     + rho |t - t'|,
// quotiented at zero distance. d_H^Z(R_s, R_t) = |s-t| rho for all sampled s,t.
template <class T>
struct CylinderResult {
    FiniteMetricSpace<T> space;
    std::vector<Subset> slice;  // embedded copy of R_t per time
    std::vector<T> times;
    T rho;
};

template <class T>
CylinderResult<T> glue_cylinder(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y,
                                const Correspondence& R, const std::vector<T>& times) {
    if (!R.valid(X.size(), Y.size()))
        throw std::invalid_argument("glue_cylinder: invalid correspondence");
    const auto& P = R.pairs;
    const std::size_t r = P.size(), K = times.size();
    const T rho = distortion(X, Y, R) / T(2);
    // d_{R_t} evaluated lazily
    auto drt = [&](const T& t, std::size_t a, std::size_t b) {
        return (T(1) - t) * X.d(P[a].first, P[b].first) + t * Y.d(P[a].second, P[b].second);
    };
    PseudoMetricSpace<T> Pre;
    Pre.mesh = std::max(X.mesh, Y.mesh);
    Pre.dist = Matrix<T>(r * K, r * K);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t a = 0; a < r; ++a)
            Pre.labels.push_back("(" + X.labels[P[a].first] + "|" + Y.labels[P[a].second] + ")@" +
                                 std::to_string(k));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = k; l < K; ++l) {
            T gap = scalar_abs(times[k] - times[l]) * rho;
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = 0; b < r; ++b) {
                    bool first = true;
                    T best(0);
                    for (std::size_t c = 0; c < r; ++c) {
                        T v = drt(times[k], a, c) + drt(times[l], c, b);
                        if (first || v < best) {
                            best = v;
                            first = false;
                        }
                    }
                    T v = best + gap;
                    Pre.dist(k * r + a, l * r + b) = v;
                    Pre.dist(l * r + b, k * r + a) = v;
                }
        }
    auto q = quotient_pseudometric(Pre);
    CylinderResult<T> out;
    out.space = std::move(q.space);
    out.times = times;
    out.rho = rho;
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::size_t> idx;
        for (std::size_t a = 0; a < r; ++a) idx.push_back(q.class_of[k * r + a]);
        out.slice.emplace_back(std::move(idx));
    }
    return out;
}

// Sequential gluing of a finite chain of spaces along certified-optimal
// consecutive correspondences. The pairwise Hausdorff equalities
// |t_i - t_j| * rho are forced by the triangle inequality once each
// consecutive gluing realizes its GH distance; the report lists every pair.
template <class T>
struct ChainGlueResult {
    FiniteMetricSpace<T> space;
    std::vector<std::vector<std::size_t>> embed;  // per input space
    Matrix<T> pairwise_dh;
    bool geodesic_equalities_ok = true;           // set when times/rho supplied
    std::vector<std::array<std::size_t, 2>> failing_pairs;
};

template <class T>
ChainGlueResult<T> chain_glue(const std::vector<FiniteMetricSpace<T>>& spaces,
                              const std::vector<Correspondence>& corrs,
                              const std::vector<T>* times = nullptr, const T* rho = nullptr,
                              std::optional<T> tol_opt = {}) {
    if (spaces.empty() || corrs.size() + 1 != spaces.size())
        throw std::invalid_argument("chain_glue: need k spaces and k-1 correspondences");
    T tol = tol_opt ? *tol_opt : (tol_or_exact<T>(kMetricTol));

    ChainGlueResult<T> out;
    out.space = spaces[0];
    out.embed.resize(spaces.size());
    out.embed[0].resize(spaces[0].size());
    for (std::size_t i = 0; i < spaces[0].size(); ++i) out.embed[0][i] = i;

    for (std::size_t step = 0; step < corrs.size(); ++step) {
        const auto& Xi = spaces[step];
        const auto& Yi = spaces[step + 1];
        const auto& R = corrs[step];
        if (!R.valid(Xi.size(), Yi.size()))
            throw std::invalid_argument("chain_glue: invalid correspondence at step " +
                                        std::to_string(step));
        const T half = distortion(Xi, Yi, R) / T(2);
        const std::size_t nz = out.space.size(), m = Yi.size();
        PseudoMetricSpace<T> P;
        P.mesh = std::max(out.space.mesh, Yi.mesh);
        P.dist = Matrix<T>(nz + m, nz + m);
        P.labels = out.space.labels;
        for (std::size_t j = 0; j < m; ++j)
            P.labels.push_back("s" + std::to_string(step + 1) + ":" + Yi.labels[j]);
        for (std::size_t i = 0; i < nz; ++i)
            for (std::size_t j = 0; j < nz; ++j) P.dist(i, j) = out.space.d(i, j);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) P.dist(nz + i, nz + j) = Yi.d(i, j);
        for (std::size_t z = 0; z < nz; ++z)
            for (std::size_t j = 0; j < m; ++j) {
                bool first = true;
                T best(0);
                for (auto& [x2, y2] : R.pairs) {
                    T v = out.space.d(z, out.embed[step][x2]) + Yi.d(j, y2) + half;
                    if (first || v < best) {
                        best = v;
                        first = false;
                    }
                }
                P.dist(z, nz + j) = best;
                P.dist(nz + j, z) = best;
            }
        auto q = quotient_pseudometric(P);
        for (std::size_t s = 0; s <= step; ++s)
            for (auto& e : out.embed[s]) e = q.class_of[e];
        out.embed[step + 1].resize(m);
        for (std::size_t j = 0; j < m; ++j) out.embed[step + 1][j] = q.class_of[nz + j];
        out.space = std::move(q.space);
    }

    const std::size_t k = spaces.size();
    out.pairwise_dh = Matrix<T>(k, k);
    std::vector<Subset> copies;
    for (std::size_t s = 0; s < k; ++s)
        copies.emplace_back(std::vector<std::size_t>(out.embed[s].begin(), out.embed[s].end()));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            T dh = hausdorff_distance(out.space, copies[i], copies[j]);
            out.pairwise_dh(i, j) = dh;
            out.pairwise_dh(j, i) = dh;
            if (times && rho) {
                T target = scalar_abs((*times)[i] - (*times)[j]) * (*rho);
                if (scalar_abs(dh - target) > tol) {
                    out.geodesic_equalities_ok = false;
                    out.failing_pairs.push_back({i, j});
                }
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Geodesic certification.

template <class T>
struct PairCertificate {
    std::size_t si, ti;
    T target;    // |s-t| rho + tol budget target
    T achieved;  // certified upper bound on d_GH(slice_s, slice_t)
    std::string method;
    bool ok;
};

template <class T>
struct CertificateReport {
    bool certified = false;
    T rho{};
    std::vector<PairCertificate<T>> pairs;
    std::string note;
};

// Proximity correspondence between two subsets of a common ambient space:
// R = {(a,b) : d(a,b) <= d_H(A,B) + tau}. Its distortion is at most 2 d_H.
template <class T>
Correspondence proximity_correspondence(const FiniteMetricSpace<T>& Z, const Subset& A,
                                        const Subset& B, std::optional<T> tau_opt = {}) {
    T tau = tau_opt ? *tau_opt : tol_or_exact<T>(kSetTol);
    T dh = hausdorff_distance(Z, A, B);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = 0; b < B.size(); ++b)
            if (Z.d(A.indices[a], B.indices[b]) <= dh + tau) pairs.emplace_back(a, b);
    return Correspondence(std::move(pairs));
}

// Certifies that a sampled curve is a GH geodesic: for every sampled pair a
// witness correspondence shows d_GH(gamma(s), gamma(t)) <= |s-t| rho + tol;
// combined with the exact endpoint value rho, the triangle inequality forces
// the reverse inequalities, hence equality along the whole chain.
template <class T>
CertificateReport<T> certify_gh_geodesic(const GeodesicSampling<T>& g, std::optional<T> tol_opt = {},
                                         std::size_t gh_guard = 7) {
    g.check_shape();
    T tol = tol_opt ? *tol_opt : (tol_or_exact<T>(kMetricTol));
    CertificateReport<T> rep;
    rep.rho = g.endpoint_value;
    rep.certified = true;

    const std::size_t K = g.steps();
    for (std::size_t si = 0; si < K; ++si)
        for (std::size_t ti = si + 1; ti < K; ++ti) {
            const T span = scalar_abs(g.times[ti] - g.times[si]);
            const T target = span * rep.rho;
            PairCertificate<T> pc{si, ti, target, T(0), "none", false};

            if (rep.rho == T(0)) {
                // constant curve: witness is any optimal correspondence; slices equal
                pc.achieved = T(0);
                pc.method = "constant";
                pc.ok = true;
            } else if (g.ambient && g.ambient_slices.size() == K) {
                T dh = hausdorff_distance(*g.ambient, g.ambient_slices[si], g.ambient_slices[ti]);
                pc.achieved = dh;
                pc.method = "ambient-hausdorff";
                pc.ok = dh <= target + tol;
            } else if (g.line) {
                // identity / projection witness on the underlying relation
                T dis_r = distortion(g.line->X, g.line->Y, g.line->R);
                pc.achieved = span * dis_r / T(2);
                pc.method = "line-witness";
                pc.ok = pc.achieved <= target + tol;
            } else if (std::max(g.spaces[si].size(), g.spaces[ti].size()) <= gh_guard) {
                auto r = gh_exact(g.spaces[si], g.spaces[ti], gh_guard);
                pc.achieved = r.value;
                pc.method = "gh-exact";
                pc.ok = r.value <= target + tol;
            } else {
                pc.method = "no-witness";
                pc.ok = false;
            }
            rep.certified = rep.certified && pc.ok;
            rep.pairs.push_back(pc);
        }
    rep.note = rep.certified
                   ? "all sampled pairs admit witnesses at |s-t|*rho; with the exact endpoint "
                     "value the triangle inequality forces equality"
                   : "certificate failed; see failing pairs";
    return rep;
}

// ---------------------------------------------------------------------------
// Dynamic correspondences.

struct DynamicCorrespondence {
    // one index per sampled time, into the slice spaces of a GeodesicSampling
    std::vector<std::vector<std::size_t>> tuples;
};

// The quotient construction of the straight-line dynamic correspondence: one
// tuple per (x,y) in R, evaluating to x at t=0, (x,y) at interior times, y at
// t=1.
template <class T>
DynamicCorrespondence dynamic_correspondence_from_straight_line(const FiniteMetricSpace<T>& X,
                                                                const FiniteMetricSpace<T>& Y,
                                                                const Correspondence& R,
                                                                const std::vector<T>& times) {
    DynamicCorrespondence dc;
    for (std::size_t a = 0; a < R.pairs.size(); ++a) {
        std::vector<std::size_t> tup;
        for (const T& t : times) {
            if (t == T(0))
                tup.push_back(R.pairs[a].first);
            else if (t == T(1))
                tup.push_back(R.pairs[a].second);
            else
                tup.push_back(a);
        }
        dc.tuples.push_back(std::move(tup));
    }
    return dc;
}

struct DynamicCheckPair {
    std::size_t si, ti;
    bool surjective;
    double dis;
    double target;  // 2 |s-t| rho
    bool ok;
};

struct DynamicCheckReport {
    bool ok = true;
    std::vector<DynamicCheckPair> pairs;
};

// True iff every two-time evaluation e_st is a surjective correspondence whose
// distortion equals 2 |s-t| rho within tol.
template <class T>
DynamicCheckReport check_dynamic(const DynamicCorrespondence& dc, const GeodesicSampling<T>& g,
                                 std::optional<T> tol_opt = {}) {
    g.check_shape();
    T tol = tol_opt ? *tol_opt : (tol_or_exact<T>(kMetricTol));
    const std::size_t K = g.steps();
    for (const auto& tup : dc.tuples)
        if (tup.size() != K) throw std::invalid_argument("check_dynamic: tuple shape mismatch");
    DynamicCheckReport rep;
    for (std::size_t si = 0; si < K; ++si)
        for (std::size_t ti = si + 1; ti < K; ++ti) {
            std::vector<std::pair<std::size_t, std::size_t>> pr;
            for (const auto& tup : dc.tuples) pr.emplace_back(tup[si], tup[ti]);
            Correspondence est(std::move(pr));
            DynamicCheckPair p{si, ti, false, 0.0, 0.0, false};
            p.surjective = est.valid(g.spaces[si].size(), g.spaces[ti].size());
            p.target = to_double(T(2) * scalar_abs(g.times[ti] - g.times[si]) * g.endpoint_value);
            if (p.surjective) {
                T dis = distortion(g.spaces[si], g.spaces[ti], est);
                p.dis = to_double(dis);
                p.ok = scalar_abs(dis - T(2) * scalar_abs(g.times[ti] - g.times[si]) *
                                            g.endpoint_value) <= tol;
            }
            rep.ok = rep.ok && p.ok;
            rep.pairs.push_back(p);
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Exploratory search for a triple correspondence whose three pairwise
// projections are each optimal (the finite analogue of the paper's open
// three-space question). Exhaustive at sizes <= 4; reports a witness or
// exhaustion, asserting nothing either way.

struct TripleSearchResult {
    bool found = false;
    bool exhausted = false;
    std::vector<std::array<std::size_t, 3>> witness;
    double gh12 = 0, gh13 = 0, gh23 = 0;
};

template <class T>
TripleSearchResult triple_correspondence_search(const FiniteMetricSpace<T>& X1,
                                                const FiniteMetricSpace<T>& X2,
                                                const FiniteMetricSpace<T>& X3,
                                                std::size_t guard = 4,
                                                std::optional<T> tol_opt = {}) {
    if (X1.size() > guard || X2.size() > guard || X3.size() > guard)
        throw std::invalid_argument("triple_correspondence_search: size guard exceeded");
    T tol = tol_opt ? *tol_opt : (tol_or_exact<T>(kMetricTol));
    TripleSearchResult out;
    const T v12 = gh_exact(X1, X2).value * T(2);
    const T v13 = gh_exact(X1, X3).value * T(2);
    const T v23 = gh_exact(X2, X3).value * T(2);
    out.gh12 = to_double(v12 / T(2));
    out.gh13 = to_double(v13 / T(2));
    out.gh23 = to_double(v23 / T(2));

    const std::size_t n1 = X1.size(), n2 = X2.size(), n3 = X3.size();
    std::vector<std::array<std::size_t, 3>> cells;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            for (std::size_t c = 0; c < n3; ++c) cells.push_back({a, b, c});

    auto compatible = [&](const std::array<std::size_t, 3>& u,
                          const std::array<std::size_t, 3>& v) {
        if (scalar_abs(X1.d(u[0], v[0]) - X2.d(u[1], v[1])) > v12 + tol) return false;
        if (scalar_abs(X1.d(u[0], v[0]) - X3.d(u[2], v[2])) > v13 + tol) return false;
        if (scalar_abs(X2.d(u[1], v[1]) - X3.d(u[2], v[2])) > v23 + tol) return false;
        return true;
    };

    // Depth-first cover search over pairwise-compatible triples: any set whose
    // projections cover all three coordinate sets has projection distortions
    // <= 2 d_GH in each pair, i.e. all three projections are optimal.
    std::vector<std::size_t> chosen;
    std::vector<char> cov1(n1, 0), cov2(n2, 0), cov3(n3, 0);
    std::size_t need = n1 + n2 + n3;
    std::size_t covered = 0;

    auto rec = [&](auto&& self) -> bool {
        if (covered == need) return true;
        // first uncovered coordinate element, fail-first over X1 then X2, X3
        int axis = -1;
        std::size_t elem = 0;
        for (std::size_t i = 0; i < n1 && axis < 0; ++i)
            if (!cov1[i]) {
                axis = 0;
                elem = i;
            }
        for (std::size_t i = 0; i < n2 && axis < 0; ++i)
            if (!cov2[i]) {
                axis = 1;
                elem = i;
            }
        for (std::size_t i = 0; i < n3 && axis < 0; ++i)
            if (!cov3[i]) {
                axis = 2;
                elem = i;
            }
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            const auto& cell = cells[ci];
            if (cell[static_cast<std::size_t>(axis)] != elem) continue;
            bool ok = true;
            for (std::size_t pick : chosen)
                if (!compatible(cells[pick], cell)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            std::size_t delta = 0;
            if (!cov1[cell[0]]) ++delta;
            if (!cov2[cell[1]]) ++delta;
            if (!cov3[cell[2]]) ++delta;
            cov1[cell[0]]++;
            cov2[cell[1]]++;
            cov3[cell[2]]++;
            covered += delta;
            chosen.push_back(ci);
            if (self(self)) return true;
            chosen.pop_back();
            covered -= delta;
            cov1[cell[0]]--;
            cov2[cell[1]]--;
            cov3[cell[2]]--;
        }
        return false;
    };

    if (rec(rec)) {
        out.found = true;
        for (std::size_t pick : chosen) out.witness.push_back(cells[pick]);
    } else {
        out.exhausted = true;
    }
    return out;
}

}  // namespace geodesy
