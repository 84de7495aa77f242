#pragma once

#include <algorithm>
#include <bit>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodesy/numeric.hpp"

namespace geodesy {

// Absolute tolerances for float-valued spaces. Rational-valued spaces compare
// exactly (tolerance 0).
inline constexpr double kMetricTol = 1e-9;
inline constexpr double kSetTol = 1e-9;
inline constexpr double kMassTol = 1e-9;

template <class T>
T default_metric_tol() {
    if constexpr (is_rational_v<T>) return T(0);
    else return T(kMetricTol);
}

// The named float tolerance, or exact comparison for rational-valued spaces.
template <class T>
T tol_or_exact(double v) {
    if constexpr (is_rational_v<T>) return T(0);
    else return T(v);
}

// Dense row-major square/rectangular matrix. All metric data in this library
// is small and dense by design.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T init = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, init) {}

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

struct MetricViolation {
    enum Kind { NonSquare, Diagonal, Symmetry, Positivity, Triangle };
    Kind kind;
    std::size_t i = 0, j = 0, k = 0;
    double lhs = 0, rhs = 0;  // lhs > rhs is the violated relation

    std::string describe() const;
};

struct ValidationReport {
    bool ok = true;
    std::vector<MetricViolation> violations;
};

inline std::string MetricViolation::describe() const {
    switch (kind) {
        case NonSquare: return "matrix is not square";
        case Diagonal:
            return "nonzero diagonal at " + std::to_string(i);
        case Symmetry:
            return "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Positivity:
            return "nonpositive off-diagonal at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Triangle:
            return "triangle violation at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                   std::to_string(k) + "): " + format_sig(lhs) + " > " + format_sig(rhs);
    }
    return "";
}

namespace detail {

// Checks symmetry, diagonal, triangle inequality; positivity check optional so
// the same routine serves metric and pseudo-metric inputs.
template <class T>
ValidationReport validate_matrix(const Matrix<T>& d, T tol, bool require_positive) {
    ValidationReport rep;
    const std::size_t n = d.rows();
    if (d.cols() != n) {
        rep.ok = false;
        rep.violations.push_back({MetricViolation::NonSquare});
        return rep;
    }
    auto flag = [&](MetricViolation v) {
        rep.ok = false;
        rep.violations.push_back(v);
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (scalar_abs(d(i, i)) > tol)
            flag({MetricViolation::Diagonal, i, i, 0, to_double(d(i, i)), 0.0});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (scalar_abs(d(i, j) - d(j, i)) > tol)
                flag({MetricViolation::Symmetry, i, j, 0, to_double(d(i, j)), to_double(d(j, i))});
            if (require_positive && !(d(i, j) > T(0)))
                flag({MetricViolation::Positivity, i, j, 0, to_double(d(i, j)), 0.0});
            else if (!require_positive && d(i, j) < T(0) && scalar_abs(d(i, j)) > tol)
                flag({MetricViolation::Positivity, i, j, 0, to_double(d(i, j)), 0.0});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (k == i) continue;
                // d(j,k) <= d(j,i) + d(i,k)
                if (d(j, k) > d(j, i) + d(i, k) + tol)
                    flag({MetricViolation::Triangle, j, k, i, to_double(d(j, k)),
                          to_double(d(j, i) + d(i, k))});
            }
        }
    return rep;
}

}  // namespace detail

template <class T>
ValidationReport validate_metric(const Matrix<T>& d, T tol) {
    return detail::validate_matrix(d, tol, /*require_positive=*/true);
}

template <class T>
ValidationReport validate_metric(const Matrix<T>& d) {
    return validate_metric(d, default_metric_tol<T>());
}

template <class T>
ValidationReport validate_pseudometric(const Matrix<T>& d, T tol) {
    return detail::validate_matrix(d, tol, /*require_positive=*/false);
}

// Finite metric space: labeled points, dense distance matrix, and an optional
// discretization scale. mesh == 0 means the space is genuinely finite; a
// positive mesh records the scale h at which a continuous geodesic space was
// sampled, and every geodesic-space statement is asserted with additive slack
// proportional to it.
template <class T>
struct FiniteMetricSpace {
    std::vector<std::string> labels;
    Matrix<T> dist;
    T mesh = T(0);

    std::size_t size() const { return dist.rows(); }
    const T& d(std::size_t i, std::size_t j) const { return dist(i, j); }

    ValidationReport validate(T tol) const { return validate_metric(dist, tol); }
    ValidationReport validate() const { return validate_metric(dist); }
};

// Same data but zero off-diagonal distances allowed; the pre-quotient carrier.
template <class T>
struct PseudoMetricSpace {
    std::vector<std::string> labels;
    Matrix<T> dist;
    T mesh = T(0);

    std::size_t size() const { return dist.rows(); }
    ValidationReport validate(T tol) const { return validate_pseudometric(dist, tol); }
    ValidationReport validate() const { return validate_pseudometric(dist, default_metric_tol<T>()); }
};

// Fully supported probability mass on a finite metric space.
template <class T>
struct MetricMeasureSpace {
    FiniteMetricSpace<T> space;
    std::vector<T> mass;

    std::size_t size() const { return space.size(); }

    bool mass_ok(T tol) const {
        if (mass.size() != space.size()) return false;
        T s(0);
        for (const auto& m : mass) {
            if (!(m > T(0))) return false;
            s = s + m;
        }
        return scalar_abs(s - T(1)) <= tol;
    }
    bool mass_ok() const {
        if constexpr (is_rational_v<T>) return mass_ok(T(0));
        else return mass_ok(T(kMassTol));
    }
};

// Nonempty set of point indices into a carrier space. Kept sorted so that all
// derived objects are deterministic.
struct Subset {
    std::vector<std::size_t> indices;

    Subset() = default;
    explicit Subset(std::vector<std::size_t> idx) : indices(std::move(idx)) {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        if (indices.empty()) throw std::invalid_argument("Subset: empty index set");
    }

    std::size_t size() const { return indices.size(); }
    bool contains(std::size_t i) const {
        return std::binary_search(indices.begin(), indices.end(), i);
    }
    bool operator==(const Subset&) const = default;
};

template <class T>
void check_subset(const FiniteMetricSpace<T>& X, const Subset& A) {
    if (A.indices.empty()) throw std::invalid_argument("empty subset");
    if (A.indices.back() >= X.size()) throw std::out_of_range("subset index out of range");
}

template <class T>
T diameter(const FiniteMetricSpace<T>& X) {
    T best(0);
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j)
            if (X.d(i, j) > best) best = X.d(i, j);
    return best;
}

// d(x, A) = min over a in A.
template <class T>
T set_distance(const FiniteMetricSpace<T>& X, std::size_t x, const Subset& A) {
    T best = X.d(x, A.indices.front());
    for (std::size_t a : A.indices)
        if (X.d(x, a) < best) best = X.d(x, a);
    return best;
}

// Closed r-thickening A^r = { x : d(x, A) <= r + tau }. Outward rounding at
// the boundary; tau defaults to the set tolerance (0 for rationals).
template <class T>
Subset thicken(const FiniteMetricSpace<T>& X, const Subset& A, const T& r, std::optional<T> tau = {}) {
    if (r < T(0)) throw std::invalid_argument("thicken: negative radius");
    check_subset(X, A);
    T slack = tau ? *tau : tol_or_exact<T>(kSetTol);
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < X.size(); ++x)
        if (set_distance(X, x, A) <= r + slack) out.push_back(x);
    return Subset(std::move(out));
}

// d_H(A,B) = max(sup_{a} d(a,B), sup_{b} d(b,A)).
template <class T>
T hausdorff_distance(const FiniteMetricSpace<T>& X, const Subset& A, const Subset& B) {
    check_subset(X, A);
    check_subset(X, B);
    T best(0);
    for (std::size_t a : A.indices) {
        T d = set_distance(X, a, B);
        if (d > best) best = d;
    }
    for (std::size_t b : B.indices) {
        T d = set_distance(X, b, A);
        if (d > best) best = d;
    }
    return best;
}

// Quotient by the zero-distance equivalence relation. Returns the quotient
// space plus the class map (input index -> class index). The induced distance
// is well-defined by the triangle inequality.
template <class T>
struct QuotientResult {
    FiniteMetricSpace<T> space;
    std::vector<std::size_t> class_of;
};

template <class T>
QuotientResult<T> quotient_pseudometric(const PseudoMetricSpace<T>& P, std::optional<T> tol = {}) {
    const std::size_t n = P.size();
    T eps = tol ? *tol : tol_or_exact<T>(kSetTol);
    std::vector<std::size_t> cls(n, SIZE_MAX);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < reps.size(); ++c) {
            if (scalar_abs(P.dist(i, reps[c])) <= eps) {
                cls[i] = c;
                break;
            }
        }
        if (cls[i] == SIZE_MAX) {
            cls[i] = reps.size();
            reps.push_back(i);
        }
    }
    FiniteMetricSpace<T> Q;
    Q.mesh = P.mesh;
    Q.dist = Matrix<T>(reps.size(), reps.size());
    Q.labels.reserve(reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) Q.labels.push_back(P.labels[reps[c]]);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < reps.size(); ++b) Q.dist(a, b) = P.dist(reps[a], reps[b]);
    return {std::move(Q), std::move(cls)};
}

// Worst approximate-midpoint error:
//   max_{x,y} min_z max(|d(x,z) - d(x,y)/2|, |d(y,z) - d(x,y)/2|).
// A discretized geodesic space with mesh h must report a defect <= h.
inline double midpoint_defect(const FiniteMetricSpace<double>& X) {
    const std::size_t n = X.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double half = X.d(i, j) / 2.0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t z = 0; z < n; ++z) {
                double e = std::max(std::abs(X.d(i, z) - half), std::abs(X.d(j, z) - half));
                if (e < best) best = e;
            }
            if (best > worst) worst = best;
        }
    return worst;
}

// Least number of closed eps-balls (centered at points) covering X.
// Exact mode runs a branch-and-bound set cover and refuses n > 20; greedy
// mode returns the standard ln(n)-approximate upper bound.
enum class CoverMode { Greedy, Exact };

namespace detail {

inline std::size_t greedy_cover(const std::vector<std::uint64_t>& balls, std::uint64_t all) {
    std::uint64_t covered = 0;
    std::size_t used = 0;
    while (covered != all) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < balls.size(); ++c) {
            int gain = std::popcount(balls[c] & ~covered);
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        covered |= balls[best];
        ++used;
    }
    return used;
}

inline void exact_cover_rec(const std::vector<std::uint64_t>& balls, std::uint64_t all,
                            std::uint64_t covered, std::size_t used, std::size_t& best) {
    if (used >= best) return;
    if (covered == all) {
        best = used;
        return;
    }
    // branch on the lowest uncovered point; some ball must contain it
    std::uint64_t uncovered = all & ~covered;
    int p = std::countr_zero(uncovered);
    for (std::size_t c = 0; c < balls.size(); ++c) {
        if (balls[c] & (std::uint64_t(1) << p))
            exact_cover_rec(balls, all, covered | balls[c], used + 1, best);
    }
}

}  // namespace detail

template <class T>
std::size_t covering_number(const FiniteMetricSpace<T>& X, const T& eps, CoverMode mode) {
    if (!(eps > T(0))) throw std::invalid_argument("covering_number: eps must be positive");
    const std::size_t n = X.size();
    if (mode == CoverMode::Exact && n > 20)
        throw std::invalid_argument("covering_number: exact mode refused for n > 20");
    if (n > 64) throw std::invalid_argument("covering_number: n > 64 unsupported");
    std::vector<std::uint64_t> balls(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t x = 0; x < n; ++x)
            if (X.d(c, x) <= eps) balls[c] |= std::uint64_t(1) << x;
    const std::uint64_t all = (n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
    std::size_t greedy = detail::greedy_cover(balls, all);
    if (mode == CoverMode::Greedy) return greedy;
    std::size_t best = greedy;
    detail::exact_cover_rec(balls, all, 0, 0, best);
    return best;
}

// ---------------------------------------------------------------------------
// Restriction and relabeling helpers shared by the geodesic constructions.

template <class T>
FiniteMetricSpace<T> restrict_space(const FiniteMetricSpace<T>& X, const Subset& A) {
    check_subset(X, A);
    FiniteMetricSpace<T> S;
    S.mesh = X.mesh;
    S.dist = Matrix<T>(A.size(), A.size());
    for (std::size_t a = 0; a < A.size(); ++a) {
        S.labels.push_back(X.labels[A.indices[a]]);
        for (std::size_t b = 0; b < A.size(); ++b) S.dist(a, b) = X.d(A.indices[a], A.indices[b]);
    }
    return S;
}

// Relabel-isometry test by backtracking over label-consistent permutations.
// Used only at small n to certify gh == 0 cases.
template <class T>
bool relabel_isometric(const FiniteMetricSpace<T>& X, const FiniteMetricSpace<T>& Y, T tol) {
    const std::size_t n = X.size();
    if (Y.size() != n) return false;
    std::vector<std::size_t> perm(n, SIZE_MAX);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) return true;
        for (std::size_t y = 0; y < n; ++y) {
            if (used[y]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                if (scalar_abs(X.d(i, j) - Y.d(y, perm[j])) > tol) ok = false;
            if (!ok) continue;
            perm[i] = y;
            used[y] = true;
            if (self(self, i + 1)) return true;
            used[y] = false;
            perm[i] = SIZE_MAX;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace geodesy
