#pragma once

#include <boost/rational.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace geodesy {

// Exact scalar used when a space is flagged rational. All slice/coupling
// identities of the deviant and branching families hold with zero tolerance
// over this type.
using Rational = boost::rational<long long>;

template <class T>
inline constexpr bool is_rational_v = std::is_same_v<T, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) {
    return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

template <class T>
T scalar_abs(const T& x) { return x < T(0) ? T(-x) : x; }

// x^k for small nonnegative integer k; stays in T.
template <class T>
T pow_int(T x, int k) {
    T r(1);
    while (k > 0) {
        if (k & 1) r = r * x;
        x = x * x;
        k >>= 1;
    }
    return r;
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("not a p/q rational: " + s);
    long long p = std::stoll(s.substr(0, slash));
    long long q = std::stoll(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rational(p, q);
}

inline std::string format_rational(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Fixed 12-significant-digit rendering used by every report so that equal
// configs produce byte-identical output.
inline std::string format_sig(double x, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

// Deterministic RNG. mt19937_64's output sequence is pinned by the standard;
// the distribution transforms below are hand-rolled because std::*_distribution
// sequences are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(std::floor(uniform() * (hi - lo + 1)));
    }

    double exponential() {
        double u = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return -std::log(u);
    }

    // Dirichlet(1,...,1): normalized iid Exp(1) draws; full support.
    std::vector<double> dirichlet(std::size_t n) {
        std::vector<double> w(n);
        double s = 0.0;
        for (auto& x : w) {
            x = exponential() + 1e-12;
            s += x;
        }
        for (auto& x : w) x /= s;
        return w;
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// Worker count for the few parallel-across-instances code paths; capped by
// METRIC_GEODESY_THREADS when set.
inline std::size_t worker_cap() {
    if (const char* env = std::getenv("METRIC_GEODESY_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

}  // namespace geodesy
