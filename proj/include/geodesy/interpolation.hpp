#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodesy/space.hpp"
#include "geodesy/standard_spaces.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// Layered reachability: the discrete avatar of the set of rho-Lipschitz
// curves from A to B and its time evaluations. Layers are plain sorted index
// vectors since intermediate sets may come out empty when the slack is too
// small for the carrier.

using IndexSet = std::vector<std::size_t>;

namespace detail {

inline IndexSet thicken_ids(const FiniteMetricSpace<double>& X, const IndexSet& A, double r) {
    IndexSet out;
    for (std::size_t x = 0; x < X.size(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a : A) best = std::min(best, X.d(x, a));
        if (best <= r + kSetTol) out.push_back(x);
    }
    return out;
}

inline IndexSet intersect_ids(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool contains_id(const IndexSet& s, std::size_t x) {
    return std::binary_search(s.begin(), s.end(), x);
}

inline double dist_to_ids(const FiniteMetricSpace<double>& X, std::size_t x, const IndexSet& s) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : s) best = std::min(best, X.d(x, a));
    return best;
}

}  // namespace detail

struct LayeredReachSet {
    std::vector<double> times;  // k/K
    std::vector<IndexSet> forward, backward, evaluation;
    double rho = 0, slack = 0, step = 0;

    bool all_layers_nonempty() const {
        for (const auto& e : evaluation)
            if (e.empty()) return false;
        return true;
    }
};

// forward[k] grows from A under the per-step budget rho/K + slack; backward
// symmetrically from B; evaluation is the intersection. When rho = d_H(A,B),
// evaluation[0] = A and evaluation[K] = B by construction.
inline LayeredReachSet lipschitz_reach(const FiniteMetricSpace<double>& X, const Subset& A,
                                       const Subset& B, double rho, std::size_t K, double slack) {
    if (!(rho > 0)) throw std::invalid_argument("lipschitz_reach: rho must be positive");
    if (K < 1) throw std::invalid_argument("lipschitz_reach: K must be >= 1");
    check_subset(X, A);
    check_subset(X, B);
    LayeredReachSet L;
    L.rho = rho;
    L.slack = slack;
    L.step = rho / static_cast<double>(K) + slack;
    L.forward.resize(K + 1);
    L.backward.resize(K + 1);
    L.evaluation.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        L.times.push_back(static_cast<double>(k) / static_cast<double>(K));
    L.forward[0] = A.indices;
    for (std::size_t k = 1; k <= K; ++k)
        L.forward[k] = detail::thicken_ids(X, L.forward[k - 1], L.step);
    L.backward[K] = B.indices;
    for (std::size_t k = K; k-- > 0;)
        L.backward[k] = detail::thicken_ids(X, L.backward[k + 1], L.step);
    for (std::size_t k = 0; k <= K; ++k)
        L.evaluation[k] = detail::intersect_ids(L.forward[k], L.backward[k]);
    return L;
}

// The thickening Hausdorff geodesic slice A^{t rho} n B^{(1-t) rho}. Empty
// output signals that the carrier is not approximately geodesic at this mesh.
inline Subset thickening_geodesic(const FiniteMetricSpace<double>& X, const Subset& A,
                                  const Subset& B, double t) {
    if (t < 0 || t > 1) throw std::invalid_argument("thickening_geodesic: t outside [0,1]");
    double rho = hausdorff_distance(X, A, B);
    IndexSet fa = detail::thicken_ids(X, A.indices, t * rho);
    IndexSet fb = detail::thicken_ids(X, B.indices, (1.0 - t) * rho);
    IndexSet both = detail::intersect_ids(fa, fb);
    if (both.empty())
        throw std::runtime_error("thickening_geodesic: empty slice (carrier not geodesic at this mesh)");
    return Subset(std::move(both));
}

// ---------------------------------------------------------------------------
// Equality of the interpolation layers with the thickening intersections, up
// to points within cmp_slack of the other set.

struct LayerComparison {
    std::size_t k;
    std::size_t layer_size, thickening_size;
    bool ok;
    std::vector<std::size_t> witnesses;  // points breaking the equality
};

struct InterpolationEqualityReport {
    bool ok = true;
    bool all_nonempty = true;
    std::vector<LayerComparison> layers;
};

inline InterpolationEqualityReport interpolation_equals_thickening(
    const FiniteMetricSpace<double>& X, const Subset& A, const Subset& B, std::size_t K,
    double slack, std::optional<double> cmp_slack_opt = {}) {
    double rho = hausdorff_distance(X, A, B);
    double cmp = cmp_slack_opt ? *cmp_slack_opt : std::max(to_double(X.mesh), slack);
    auto L = lipschitz_reach(X, A, B, rho, K, slack);
    InterpolationEqualityReport rep;
    for (std::size_t k = 0; k < L.times.size(); ++k) {
        double t = L.times[k];
        IndexSet thick = detail::intersect_ids(detail::thicken_ids(X, A.indices, t * rho),
                                               detail::thicken_ids(X, B.indices, (1.0 - t) * rho));
        LayerComparison cmp_row{k, L.evaluation[k].size(), thick.size(), true, {}};
        for (std::size_t x : L.evaluation[k])
            if (!detail::contains_id(thick, x) && detail::dist_to_ids(X, x, thick) > cmp + kSetTol) {
                cmp_row.ok = false;
                cmp_row.witnesses.push_back(x);
            }
        for (std::size_t x : thick)
            if (!detail::contains_id(L.evaluation[k], x) &&
                detail::dist_to_ids(X, x, L.evaluation[k]) > cmp + kSetTol) {
                cmp_row.ok = false;
                cmp_row.witnesses.push_back(x);
            }
        if (L.evaluation[k].empty() || thick.empty()) rep.all_nonempty = false;
        rep.ok = rep.ok && cmp_row.ok;
        rep.layers.push_back(std::move(cmp_row));
    }
    rep.ok = rep.ok && rep.all_nonempty;
    return rep;
}

// ---------------------------------------------------------------------------
// Curve extraction (the discrete analogue of the Lipschitz selection lemma):
// nearest admissible point layer by layer, bidirectionally from (t*, x*), with
// lexicographic tie-break. Admissibility enforces the per-step budget plus the
// pairwise accumulation bound against all points chosen so far.

struct DiscreteCurve {
    std::vector<std::size_t> points;  // one index per layer
};

struct CurveCheck {
    bool ok = true;
    std::size_t bad_i = 0, bad_j = 0;
    double excess = 0;
};

// d(x_i, x_j) <= |t_i - t_j| rho + min(|i-j|, 2) * slack
inline CurveCheck check_discrete_curve(const FiniteMetricSpace<double>& X,
                                       const DiscreteCurve& c, const std::vector<double>& times,
                                       double rho, double slack) {
    CurveCheck r;
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j) {
            double budget = std::abs(times[i] - times[j]) * rho +
                            static_cast<double>(std::min<std::size_t>(j - i, 2)) * slack;
            double d = X.d(c.points[i], c.points[j]);
            if (d > budget + kSetTol) {
                r.ok = false;
                r.bad_i = i;
                r.bad_j = j;
                r.excess = d - budget;
                return r;
            }
        }
    return r;
}

inline DiscreteCurve extract_curve(const FiniteMetricSpace<double>& X, const LayeredReachSet& L,
                                   std::size_t t_star, std::size_t x_star) {
    const std::size_t K = L.times.size() - 1;
    if (t_star > K) throw std::invalid_argument("extract_curve: t_star out of range");
    if (!detail::contains_id(L.evaluation[t_star], x_star))
        throw std::invalid_argument("extract_curve: x_star not in evaluation layer");
    std::vector<std::size_t> pts(K + 1, SIZE_MAX);
    pts[t_star] = x_star;

    auto admissible_next = [&](std::size_t from_k, std::size_t to_k) -> std::size_t {
        // nearest point of evaluation[to_k] within the step budget that also
        // respects the pairwise bound against everything already placed
        std::size_t best = SIZE_MAX;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t y : L.evaluation[to_k]) {
            double d = X.d(pts[from_k], y);
            if (d > L.step + kSetTol) continue;
            bool ok = true;
            for (std::size_t j = 0; j <= K && ok; ++j) {
                if (pts[j] == SIZE_MAX || j == from_k) continue;
                double budget = std::abs(L.times[to_k] - L.times[j]) * L.rho +
                                2.0 * L.slack;
                if (X.d(y, pts[j]) > budget + kSetTol) ok = false;
            }
            if (!ok) continue;
            if (d < best_d - kSetTol || (std::abs(d - best_d) <= kSetTol && y < best)) {
                best_d = d;
                best = y;
            }
        }
        return best;
    };

    for (std::size_t k = t_star; k < K; ++k) {
        std::size_t y = admissible_next(k, k + 1);
        if (y == SIZE_MAX)
            throw std::runtime_error("extract_curve: no admissible point at layer " +
                                     std::to_string(k + 1) + " (slack too small)");
        pts[k + 1] = y;
    }
    for (std::size_t k = t_star; k-- > 0;) {
        std::size_t y = admissible_next(k + 1, k);
        if (y == SIZE_MAX)
            throw std::runtime_error("extract_curve: no admissible point at layer " +
                                     std::to_string(k) + " (slack too small)");
        pts[k] = y;
    }
    return DiscreteCurve{std::move(pts)};
}

// ---------------------------------------------------------------------------
// Geodesic-restricted reachability. A point survives at time t when some
// endpoint pair (a, b) witnesses near-geodesic time consistency:
//   |d(a,x) - t d(a,b)| <= c*slack  and  |d(x,b) - (1-t) d(a,b)| <= c*slack.
// Used to exhibit evaluation sets strictly smaller than the Lipschitz ones.

inline bool geodesic_only_membership(const FiniteMetricSpace<double>& X, const Subset& A,
                                     const Subset& B, double t, std::size_t x, double slack,
                                     double slack_factor = 2.0) {
    const double budget = slack_factor * slack;
    for (std::size_t a : A.indices)
        for (std::size_t b : B.indices) {
            double dab = X.d(a, b);
            if (std::abs(X.d(a, x) - t * dab) <= budget + kSetTol &&
                std::abs(X.d(x, b) - (1.0 - t) * dab) <= budget + kSetTol)
                return true;
        }
    return false;
}

inline LayeredReachSet geodesic_only_reach(const FiniteMetricSpace<double>& X, const Subset& A,
                                           const Subset& B, std::size_t K, double slack,
                                           double slack_factor = 2.0) {
    double rho = hausdorff_distance(X, A, B);
    LayeredReachSet L = lipschitz_reach(X, A, B, rho, K, slack);
    for (std::size_t k = 0; k < L.times.size(); ++k) {
        IndexSet filtered;
        for (std::size_t x : L.evaluation[k])
            if (geodesic_only_membership(X, A, B, L.times[k], x, slack, slack_factor))
                filtered.push_back(x);
        L.evaluation[k] = std::move(filtered);
    }
    return L;
}

// ---------------------------------------------------------------------------
// Hausdorff geodesic certification at discrete scale: pairwise Hausdorff
// equalities plus reconstruction of the interpolation layers.

struct HausdorffGeodesicPair {
    std::size_t si, ti;
    double dh, target;
    bool ok;
};

struct HausdorffGeodesicReport {
    bool certified = true;
    double rho = 0;
    std::vector<HausdorffGeodesicPair> pairs;
    bool layers_checked = false;
    bool layers_ok = true;
    std::string note;
};

inline HausdorffGeodesicReport certify_hausdorff_geodesic(const FiniteMetricSpace<double>& X,
                                                          const std::vector<Subset>& slices,
                                                          const std::vector<double>& times,
                                                          std::optional<double> tol_opt = {}) {
    if (slices.size() != times.size() || slices.size() < 2)
        throw std::invalid_argument("certify_hausdorff_geodesic: shape mismatch");
    HausdorffGeodesicReport rep;
    rep.rho = hausdorff_distance(X, slices.front(), slices.back());
    double tol = tol_opt ? *tol_opt : 2.0 * to_double(X.mesh) + kSetTol;
    for (std::size_t i = 0; i < slices.size(); ++i)
        for (std::size_t j = i + 1; j < slices.size(); ++j) {
            double dh = hausdorff_distance(X, slices[i], slices[j]);
            double target = std::abs(times[i] - times[j]) * rep.rho;
            bool ok = std::abs(dh - target) <= tol;
            rep.certified = rep.certified && ok;
            rep.pairs.push_back({i, j, dh, target, ok});
        }
    if (rep.rho == 0) {
        rep.note = "constant curve; certified trivially";
        return rep;
    }
    // independent reconstruction through the Lipschitz interpolation when the
    // grid is uniform
    const std::size_t K = times.size() - 1;
    bool uniform = true;
    for (std::size_t k = 0; k <= K; ++k)
        if (std::abs(times[k] - static_cast<double>(k) / static_cast<double>(K)) > 1e-12)
            uniform = false;
    if (uniform) {
        rep.layers_checked = true;
        double slack = std::max(to_double(X.mesh), kSetTol);
        auto L = lipschitz_reach(X, slices.front(), slices.back(), rep.rho, K, slack);
        double cmp = 2.0 * to_double(X.mesh) + slack;
        for (std::size_t k = 0; k <= K; ++k) {
            for (std::size_t x : slices[k].indices)
                if (detail::dist_to_ids(X, x, L.evaluation[k]) > cmp + kSetTol)
                    rep.layers_ok = false;
            for (std::size_t x : L.evaluation[k])
                if (set_distance(X, x, slices[k]) > cmp + kSetTol) rep.layers_ok = false;
        }
        rep.certified = rep.certified && rep.layers_ok;
    }
    rep.note = rep.certified ? "pairwise Hausdorff equalities hold and slices match the "
                               "interpolation evaluation layers"
                             : "certification failed";
    return rep;
}

// ---------------------------------------------------------------------------
// The quotient-strip counterexample: the curve t -> (3t, |sin 3 pi t|)
// satisfies both endpoint distance conditions yet is not a geodesic; the flat
// curve t -> (3t, 0) is one.

struct StripReport {
    double rho = 3.0;
    bool endpoint_conditions_ok = true;  // d([0], g(t)) = 3t and d(g(t), [3]) = 3(1-t)
    double witness_s = 0, witness_t = 0;
    double witness_distance = 0;  // d(g(s), g(t))
    double witness_bound = 0;     // 3 |t - s|
    bool violation_found = false;
    bool flat_curve_geodesic = false;
    std::vector<std::size_t> curve;  // sampled class indices
};

inline StripReport strip_counterexample(double res) {
    auto S = strip_space(res);
    auto Q = quotient_pseudometric(S.space);
    const auto& X = Q.space;

    // locate a grid point and its class
    auto class_at = [&](double x, double y) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < S.coords.size(); ++i) {
            double d = std::hypot(S.coords[i].first - x, S.coords[i].second - y);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return Q.class_of[best];
    };
    const std::size_t cls0 = class_at(0.0, 0.5);
    const std::size_t cls3 = class_at(3.0, 0.5);

    StripReport rep;
    const std::size_t nt = static_cast<std::size_t>(std::llround(3.0 / res));
    std::vector<double> ts;
    for (std::size_t i = 0; i <= nt; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(nt);
        ts.push_back(t);
        rep.curve.push_back(class_at(3.0 * t, std::abs(std::sin(3.0 * std::numbers::pi * t))));
    }
    for (std::size_t i = 0; i <= nt; ++i) {
        double t = ts[i];
        if (std::abs(X.d(cls0, rep.curve[i]) - 3.0 * t) > res + kSetTol ||
            std::abs(X.d(rep.curve[i], cls3) - 3.0 * (1.0 - t)) > res + kSetTol)
            rep.endpoint_conditions_ok = false;
    }
    // violation witness s = 1/3, t = 1/2 (grid-exact when 1/(3 res) is integral)
    {
        std::size_t is = 0, it = 0;
        for (std::size_t i = 0; i <= nt; ++i) {
            if (std::abs(ts[i] - 1.0 / 3.0) < std::abs(ts[is] - 1.0 / 3.0)) is = i;
            if (std::abs(ts[i] - 0.5) < std::abs(ts[it] - 0.5)) it = i;
        }
        rep.witness_s = ts[is];
        rep.witness_t = ts[it];
        rep.witness_distance = X.d(rep.curve[is], rep.curve[it]);
        rep.witness_bound = 3.0 * std::abs(rep.witness_t - rep.witness_s);
        rep.violation_found = rep.witness_distance > rep.witness_bound + res;
    }
    // the flat companion curve is a genuine geodesic
    {
        bool ok = true;
        std::vector<std::size_t> flat;
        for (double t : ts) flat.push_back(class_at(3.0 * t, 0.0));
        for (std::size_t i = 0; i < flat.size() && ok; ++i)
            for (std::size_t j = i + 1; j < flat.size(); ++j)
                if (std::abs(X.d(flat[i], flat[j]) - 3.0 * std::abs(ts[i] - ts[j])) >
                    2.0 * res + kSetTol) {
                    ok = false;
                    break;
                }
        rep.flat_curve_geodesic = ok;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Concatenation with arc-length reparametrization. Works over any sampled
// curve type given a distance functor; the result is (sum rho_i)-Lipschitz and
// a geodesic when the total equals the endpoint distance.

template <class Elem>
struct SampledCurve {
    std::vector<double> times;  // increasing, 0 to 1
    std::vector<Elem> points;
};

template <class Elem, class DistFn>
SampledCurve<Elem> concatenate_curves(const std::vector<SampledCurve<Elem>>& segments,
                                      const std::vector<double>& lengths, DistFn dist,
                                      double match_tol = kSetTol) {
    if (segments.empty() || segments.size() != lengths.size())
        throw std::invalid_argument("concatenate_curves: shape mismatch");
    double rho = 0;
    for (double r : lengths) {
        if (!(r > 0)) throw std::invalid_argument("concatenate_curves: zero segment length");
        rho += r;
    }
    for (std::size_t i = 0; i + 1 < segments.size(); ++i)
        if (dist(segments[i].points.back(), segments[i + 1].points.front()) > match_tol)
            throw std::invalid_argument("concatenate_curves: endpoint mismatch at segment " +
                                        std::to_string(i));
    SampledCurve<Elem> out;
    double offset = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        for (std::size_t k = 0; k < seg.times.size(); ++k) {
            if (i > 0 && k == 0) continue;  // junction point already present
            out.times.push_back((offset + seg.times[k] * lengths[i]) / rho);
            out.points.push_back(seg.points[k]);
        }
        offset += lengths[i];
    }
    return out;
}

template <class Elem, class DistFn>
bool curve_is_lipschitz(const SampledCurve<Elem>& c, double rho, DistFn dist, double tol) {
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j)
            if (dist(c.points[i], c.points[j]) > rho * std::abs(c.times[i] - c.times[j]) + tol)
                return false;
    return true;
}

template <class Elem, class DistFn>
bool curve_is_geodesic(const SampledCurve<Elem>& c, DistFn dist, double tol) {
    double rho = dist(c.points.front(), c.points.back());
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j)
            if (std::abs(dist(c.points[i], c.points[j]) -
                         rho * std::abs(c.times[i] - c.times[j])) > tol)
                return false;
    return true;
}

}  // namespace geodesy
