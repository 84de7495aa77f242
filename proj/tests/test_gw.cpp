#include <catch2/catch_amalgamated.hpp>

#include "geodesy/gromov_wasserstein.hpp"
#include "geodesy/standard_spaces.hpp"
#include "oracles.hpp"

using namespace geodesy;

namespace {

MetricMeasureSpace<double> random_mm(std::size_t n, Rng& rng) {
    MetricMeasureSpace<double> M;
    M.space = oracle::random_metric_space(n, rng);
    M.mass = rng.dirichlet(n);
    return M;
}

}  // namespace

TEST_CASE("validate_metric_coupling") {
    auto d1 = simplex_space<double>(1);
    MetricCoupling<double> half{Matrix<double>(1, 1, 0.5)};
    CHECK(validate_metric_coupling(d1, d1, half).ok);

    for (std::size_t n : {2, 4, 6}) {
        auto dn = simplex_space<double>(n);
        MetricCoupling<double> D{Matrix<double>(1, n, 0.5)};
        CHECK(validate_metric_coupling(d1, dn, D).ok);
    }

    auto d2 = simplex_space<double>(2);
    MetricCoupling<double> edge{Matrix<double>(1, 2)};
    edge.cross(0, 0) = 0.1;
    edge.cross(0, 1) = 0.9;
    CHECK(validate_metric_coupling(d1, d2, edge).ok);  // 1 <= 0.1 + 0.9 exactly
    edge.cross(0, 1) = 0.8;
    CHECK_FALSE(validate_metric_coupling(d1, d2, edge).ok);  // 1 > 0.1 + 0.8
}

TEST_CASE("gw upper bound") {
    auto x = simplex_mm<double>(3);
    MetricCoupling<double> D{Matrix<double>(3, 3)};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) D.cross(i, j) = (i == j) ? 1e-12 : 1.0;
    CHECK(gw_upper_bound(x, x, D, 1.0).value <= 1e-9);

    auto d1 = simplex_mm<double>(1);
    for (std::size_t n : {2, 5}) {
        auto dn = simplex_mm<double>(n);
        MetricCoupling<double> half{Matrix<double>(1, n, 0.5)};
        for (double p : {1.0, 2.0, 3.0})
            CHECK(gw_upper_bound(d1, dn, half, p).value == Catch::Approx(0.5));
    }
}

TEST_CASE("delta lower bound and proof chain") {
    CHECK(gw_delta_lower_bound(2) == 0.5);
    CHECK(gw_delta_lower_bound(5, 2.0) == 0.5);
    CHECK_THROWS_AS(gw_delta_lower_bound(1), std::invalid_argument);

    // every feasible cross vector obeys the chain (rejection-sampled)
    Rng rng(5555);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 5));
        std::vector<double> c(n);
        bool feasible = false;
        while (!feasible) {
            for (auto& v : c) v = rng.uniform(0.0, 1.5);
            feasible = true;
            for (std::size_t i = 0; i < n && feasible; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (c[i] + c[j] < 1.0 || std::abs(c[i] - c[j]) > 1.0) {
                        feasible = false;
                        break;
                    }
        }
        double p = rng.uniform() < 0.5 ? 1.0 : 2.0;
        CHECK(gw_delta_chain_check(c, p));
        // and consequently the W_p cost of the forced coupling is >= 1/2
        double cost = 0;
        for (double v : c) cost += std::pow(v, p) / static_cast<double>(n);
        CHECK(std::pow(cost, 1.0 / p) >= 0.5 - 1e-12);
    }
}

TEST_CASE("alternating minimization reaches the Delta values") {
    auto d1 = simplex_mm<double>(1);
    for (int p : {1, 2}) {
        for (std::size_t n = 2; n <= 6; ++n) {
            auto dn = simplex_mm<double>(n);
            auto r = gw_alternating_min(d1, dn, p, 4, 25, 99);
            CHECK(std::abs(r.bound - 0.5) <= 1e-9);
            CHECK(r.bound >= gw_delta_lower_bound(n) - 1e-12);
        }
    }
}

TEST_CASE("alternating minimization: isomorphic inputs and monotonicity") {
    Rng rng(303);
    auto M = random_mm(4, rng);
    auto N = M;  // relabeled copy (reverse order)
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) N.space.dist(i, j) = M.space.d(3 - i, 3 - j);
    for (std::size_t i = 0; i < 4; ++i) N.mass[i] = M.mass[3 - i];
    auto r = gw_alternating_min(M, N, 1, 6, 40, 7);
    CHECK(r.bound <= 1e-6);

    // objective trace never increases (up to solver tolerance)
    auto other = random_mm(3, rng);
    auto s = gw_alternating_min(M, other, 2, 1, 15, 11);
    for (std::size_t k = 1; k < s.trace.size(); ++k) CHECK(s.trace[k] <= s.trace[k - 1] + 1e-9);
    // the returned cross matrix is a valid metric coupling
    MetricCoupling<double> D{s.cross};
    CHECK(validate_metric_coupling(M.space, other.space, D).ok);
}

TEST_CASE("alternating minimization matches the bilinear vertex oracle") {
    auto a = simplex_mm<double>(2);
    auto b = simplex_mm<double>(3);
    double oracle_val = oracle::gw_bilinear_vertex_oracle_p1(a.space, b.space, a.mass, b.mass);
    auto r = gw_alternating_min(a, b, 1, 6, 30, 2024);
    CHECK(r.bound >= oracle_val - 1e-9);  // never below the exact value
    CHECK(r.bound <= oracle_val + 0.02);
}

TEST_CASE("deviant family slices") {
    using R = Rational;
    CHECK(deviant_f(R(1, 2), R(1, 2)) == R(1, 4));

    // n = 3, m = 2, sigma = 1/2, t = 1/2
    auto slice = deviant_slice<R>(3, 2, R(1, 2), R(1, 2));
    REQUIRE(slice.size() == 5);
    CHECK(slice.space.d(0, 3) == R(1, 4));  // |i-j| = n pair
    CHECK(slice.space.d(0, 1) == R(1, 2));
    CHECK(slice.space.validate(R(0)).ok);
    CHECK(slice.mass == std::vector<R>{R(1, 6), R(1, 6), R(1, 3), R(1, 6), R(1, 6)});

    // endpoints degenerate to the Delta spaces
    auto at0 = deviant_slice<R>(3, 2, R(1, 2), R(0));
    CHECK(at0.size() == 1);
    auto at1 = deviant_slice<R>(3, 2, R(1, 2), R(1));
    CHECK(at1.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(at1.space.d(i, j) == (i == j ? R(0) : R(1)));
    CHECK(at1.mass == std::vector<R>(3, R(1, 3)));

    CHECK_THROWS_AS(deviant_slice<R>(2, 3, R(1, 2), R(1, 2)), std::invalid_argument);
}

TEST_CASE("deviant coupling cost is exactly |t-s|/2") {
    using R = Rational;
    // paper-quoted instance: (s,t) = (1/4, 3/4), p = 2 -> cost 1/4
    auto pair = deviant_coupling<R>(3, 2, R(1, 2), R(1, 4), R(3, 4));
    R cost2(0);
    for (std::size_t i = 0; i < pair.plan.rows(); ++i)
        for (std::size_t j = 0; j < pair.plan.cols(); ++j)
            if (pair.plan(i, j) > R(0)) cost2 += pair.plan(i, j) * pow_int(pair.cross(i, j), 2);
    CHECK(cost2 == pow_int(R(1, 4), 2));

    // sweep: slices and blocks validate exactly; identity cost = (|t-s|/2)^p
    for (long long sig = 1; sig <= 3; ++sig) {
        R sigma(sig, 4);
        for (long long si = 0; si <= 8; ++si)
            for (long long ti = si + 1; ti <= 8; ++ti) {
                R s(si, 8), t(ti, 8);
                auto pr = deviant_coupling<R>(3, 2, sigma, s, t);
                CHECK(pr.at_s.space.validate(R(0)).ok);
                CHECK(pr.at_t.space.validate(R(0)).ok);
                MetricCoupling<R> D{pr.cross};
                CHECK(validate_metric_coupling(pr.at_s.space, pr.at_t.space, D, R(0)).ok);
                for (int p : {1, 2}) {
                    R cost(0);
                    for (std::size_t i = 0; i < pr.plan.rows(); ++i)
                        for (std::size_t j = 0; j < pr.plan.cols(); ++j)
                            if (pr.plan(i, j) > R(0))
                                cost += pr.plan(i, j) * pow_int(pr.cross(i, j), p);
                    CHECK(cost == pow_int((t - s) / R(2), p));
                }
            }
    }
}

TEST_CASE("deviant certificates certify the curve") {
    using R = Rational;
    auto times = dyadic_times<R>(8);
    for (long long sig : {1, 2, 4}) {
        auto curve = deviant_curve<R>(3, 2, R(sig, 4), times);
        for (int p : {1, 2}) {
            auto cert = deviant_certificates<R>(3, 2, R(sig, 4), times, p);
            auto rep = certify_gw_geodesic(curve, cert);
            CHECK(rep.certified);
        }
    }
    // non-isomorphism bookkeeping: interior slices have n+m points, the
    // straight-line slice has n; different sigmas give different distance sets
    auto a = deviant_slice<R>(3, 2, R(1, 4), R(3, 8));
    auto b = deviant_slice<R>(3, 2, R(3, 4), R(3, 8));
    CHECK(a.size() == 5);
    CHECK(deviant_f(R(1, 4), R(3, 8)) != deviant_f(R(3, 4), R(3, 8)));
    CHECK(a.space.d(0, 3) != b.space.d(0, 3));
}

TEST_CASE("branching family") {
    using R = Rational;
    // d_t^a(x_n, x_{n+1}) = t - a for t > a (0-based indices n-1, n)
    auto slice = branching_slice<R>(3, R(1, 2), R(3, 4));
    REQUIRE(slice.size() == 4);
    CHECK(slice.space.d(2, 3) == R(1, 4));
    CHECK(slice.space.d(0, 3) == R(3, 4));
    CHECK(slice.space.validate(R(0)).ok);
    CHECK(slice.mass == std::vector<R>{R(1, 3), R(1, 3), R(1, 6), R(1, 6)});

    // t <= a slices equal the straight-line slices exactly
    for (long long ti = 0; ti <= 4; ++ti) {
        R t(ti, 8);
        auto br = branching_slice<R>(3, R(1, 2), t);
        if (ti == 0) {
            CHECK(br.size() == 1);
        } else {
            REQUIRE(br.size() == 3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    CHECK(br.space.d(i, j) == (i == j ? R(0) : t));
            CHECK(br.mass == std::vector<R>(3, R(1, 3)));
        }
    }

    // coupling cost (s,t) = (a,1) -> (1-a)/2, any p
    for (long long ai : {1, 2, 3}) {
        R a(ai, 4);
        auto pr = branching_coupling<R>(3, a, a, R(1));
        for (int p : {1, 2}) {
            R cost(0);
            for (std::size_t i = 0; i < pr.plan.rows(); ++i)
                for (std::size_t j = 0; j < pr.plan.cols(); ++j)
                    if (pr.plan(i, j) > R(0)) cost += pr.plan(i, j) * pow_int(pr.cross(i, j), p);
            CHECK(cost == pow_int((R(1) - a) / R(2), p));
        }
    }

    // full sweep incl. composition through the branch point
    for (long long ai : {2, 4, 6}) {
        R a(ai, 8);
        for (long long si = 0; si <= 8; ++si)
            for (long long ti = si + 1; ti <= 8; ++ti) {
                R s(si, 8), t(ti, 8);
                auto pr = branching_coupling<R>(3, a, s, t);
                CHECK(pr.at_s.space.validate(R(0)).ok);
                CHECK(pr.at_t.space.validate(R(0)).ok);
                MetricCoupling<R> D{pr.cross};
                CHECK(validate_metric_coupling(pr.at_s.space, pr.at_t.space, D, R(0)).ok);
                for (int p : {1, 2}) {
                    R cost(0);
                    for (std::size_t i = 0; i < pr.plan.rows(); ++i)
                        for (std::size_t j = 0; j < pr.plan.cols(); ++j)
                            if (pr.plan(i, j) > R(0))
                                cost += pr.plan(i, j) * pow_int(pr.cross(i, j), p);
                    CHECK(cost == pow_int((t - s) / R(2), p));
                }
            }
        auto curve = branching_curve<R>(3, a, dyadic_times<R>(8));
        auto cert = branching_certificates<R>(3, a, dyadic_times<R>(8), 1);
        CHECK(certify_gw_geodesic(curve, cert).certified);
    }
}

TEST_CASE("straight-line GW geodesic and gateway certificates") {
    using R = Rational;
    auto d1 = simplex_mm<R>(1);
    auto d2 = simplex_mm<R>(2);
    MetricCoupling<R> D{Matrix<R>(1, 2, R(1, 2))};
    auto bound = gw_upper_cost_p(d1, d2, D, 1);
    CHECK(bound.cost_p == R(1, 2));

    auto times = dyadic_times<R>(4);
    auto curve = straight_line_gw_geodesic(d1, d2, D, bound.plan, times, true);
    curve.endpoint_value = R(1, 2);
    // t = 1/2 slice: 2 points at distance 1/2, uniform mass
    auto mid = curve.spaces[2];
    REQUIRE(mid.size() == 2);
    CHECK(mid.d(0, 1) == R(1, 2));
    CHECK(curve.masses[2] == std::vector<R>{R(1, 2), R(1, 2)});
    // slice masses are t-independent
    for (std::size_t k = 1; k + 1 < curve.masses.size(); ++k)
        CHECK(curve.masses[k] == curve.masses[1]);

    auto cert = gw_line_certificates(d1, d2, D, bound.plan, times, 1, R(1, 2));
    CHECK(certify_gw_geodesic(curve, cert).certified);
}

TEST_CASE("gateway certificates on random instances (double)") {
    Rng rng(777);
    for (int trial = 0; trial < 6; ++trial) {
        auto Xm = random_mm(static_cast<std::size_t>(rng.uniform_int(2, 4)), rng);
        auto Ym = random_mm(static_cast<std::size_t>(rng.uniform_int(2, 4)), rng);
        // any valid coupling gives a curve certified against its own cost
        MetricCoupling<double> D{detail::random_glue_cross(Xm.space, Ym.space, rng)};
        REQUIRE(validate_metric_coupling(Xm.space, Ym.space, D).ok);
        auto bound = gw_upper_bound(Xm, Ym, D, 1.0);
        Matrix<double> plan = bound.plan;
        auto times = dyadic_times<double>(4);
        auto curve = straight_line_gw_geodesic(Xm, Ym, D, plan, times, false);
        curve.endpoint_value = bound.value;
        for (const auto& s : curve.spaces) CHECK(s.validate().ok);
        auto cert = gw_line_certificates(Xm, Ym, D, plan, times, 1, bound.value);
        auto rep = certify_gw_geodesic(curve, cert, std::optional<double>(1e-9));
        CHECK(rep.certified);
    }
}

TEST_CASE("h profiles") {
    auto d4 = simplex_mm<double>(4);
    auto prof = h_profile(d4);
    CHECK(prof.eval(0.0) == Catch::Approx(0.25));
    CHECK(prof.eval(0.99) == Catch::Approx(0.25));
    CHECK(prof.eval(1.0) == 1.0);

    MetricMeasureSpace<double> c8{cycle_space<double>(8), std::vector<double>(8, 0.125)};
    auto pc8 = h_profile(c8);
    CHECK(pc8.eval(0.5) == Catch::Approx(1.0 / 8));
    CHECK(pc8.eval(1.0) == Catch::Approx(3.0 / 8));
    CHECK(pc8.eval(1.5) == Catch::Approx(3.0 / 8));
    CHECK(pc8.eval(2.0) == Catch::Approx(5.0 / 8));

    // profile oracle: direct ball counting at every breakpoint
    Rng rng(987);
    for (int trial = 0; trial < 10; ++trial) {
        auto M = random_mm(static_cast<std::size_t>(rng.uniform_int(2, 8)), rng);
        auto p = h_profile(M);
        for (auto& [eps, val] : p.steps)
            CHECK(val == oracle::h_profile_direct(M.space, M.mass, eps));
    }

    // C-doubling bound on a uniform grid mm-space (measured C)
    auto G = grid_space<double>(4, 4, 1.0);
    MetricMeasureSpace<double> gm{G, std::vector<double>(16, 1.0 / 16)};
    auto pg = h_profile(gm);
    double D = to_double(diameter(G));
    double C = 1.0;
    for (std::size_t x = 0; x < 16; ++x)
        for (double eps = 0.5; eps <= D; eps += 0.5) {
            double b1 = 0, b2 = 0;
            for (std::size_t y = 0; y < 16; ++y) {
                if (G.d(x, y) <= eps) b1 += gm.mass[y];
                if (G.d(x, y) <= 2 * eps) b2 += gm.mass[y];
            }
            C = std::max(C, b2 / b1);
        }
    for (double eps = 0.5; eps <= D; eps += 0.5)
        CHECK(pg.eval(eps) >= std::pow(C, -std::log2(D / eps) - 1.0) - 1e-12);
}

TEST_CASE("hausdorff bound function") {
    // h = identity capped at 1 (strictly increasing with a tiny tail), p = 1:
    // h~(t) = t^2/4 for t <= 2, so h~^{-1}(y) = 2 sqrt(y) there
    ProperFunction h{{{0.0, 0.0}, {1.0, 1.0}}, 1e-9, true};
    auto inv = hausdorff_bound_function(h, 1.0);
    CHECK(inv(0.0) == 0.0);
    for (double y : {0.04, 0.25, 0.5, 0.9})
        CHECK(inv(y) == Catch::Approx(2.0 * std::sqrt(y)).margin(1e-4));

    ProperFunction loose{{{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.5}}, 0.0, false};
    CHECK_THROWS_AS(hausdorff_bound_function(loose, 1.0), std::invalid_argument);

    // Rmk-style two-sided check on the Delta pairs: d_GH <= h~^{-1}(d_GW)
    for (std::size_t n : {2, 4, 6}) {
        auto d1m = simplex_mm<double>(1);
        auto dnm = simplex_mm<double>(n);
        auto hb = joint_profile_minorant(d1m, dnm);
        auto f = hausdorff_bound_function(hb, 1.0);
        double dgh = 0.5, dgw = 0.5;
        CHECK(dgh <= f(dgw) + 1e-9);
    }
}

TEST_CASE("hausdorff-bounded pairs validate; the linear-interpolation family does not") {
    Rng rng(246);
    for (int trial = 0; trial < 12; ++trial) {
        auto Xm = random_mm(static_cast<std::size_t>(rng.uniform_int(2, 5)), rng);
        auto Ym = random_mm(static_cast<std::size_t>(rng.uniform_int(2, 5)), rng);
        MetricCoupling<double> D{detail::random_glue_cross(Xm.space, Ym.space, rng)};
        auto h = joint_profile_minorant(Xm, Ym);
        for (double p : {1.0, 2.0}) {
            auto f = hausdorff_bound_function(h, p);
            auto chk = check_pair_hausdorff_bounded(Xm, Ym, D, f, p);
            CHECK(chk.ok);
        }
    }

    // identical spaces with a vanishing-diagonal coupling: 0 <= f(0)
    auto M = random_mm(3, rng);
    MetricCoupling<double> D0{Matrix<double>(3, 3)};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) D0.cross(i, j) = (i == j) ? 1e-12 : M.space.d(i, j);
    auto h = joint_profile_minorant(M, M);
    auto f = hausdorff_bound_function(h, 1.0);
    auto chk = check_pair_hausdorff_bounded(M, M, D0, f, 1.0);
    CHECK(chk.ok);
    CHECK(chk.eta <= 1e-9);

    // the example family: eta fixed at 1/2 while delta -> 0
    auto rows = ex430_witness({0.5, 0.1, 0.01});
    for (auto& r : rows) {
        CHECK(r.eta == Catch::Approx(0.5).margin(1e-9));
        CHECK(r.delta == Catch::Approx(r.t / 2).margin(1e-9));
    }
    // a single fixed f cannot validate the whole family: the copies stay
    // d_GH = 1/2 apart in every embedding while delta -> 0, so f(delta) drops
    // below 1/2 for small t. The natural candidate calibrated on the t = 1/2
    // pair already breaks at t = 0.01.
    auto point = simplex_mm<double>(1);
    auto f_fixed = hausdorff_bound_function(joint_profile_minorant(point, ex430_slice(0.5)), 1.0);
    CHECK(0.5 <= f_fixed(0.25) + 1e-12);   // calibrating pair validates
    CHECK(0.5 > f_fixed(0.005) + 1e-12);   // fails at t = 0.01
    {
        auto slice = ex430_slice(0.01);
        MetricCoupling<double> Dt{Matrix<double>(1, 2)};
        Dt.cross(0, 0) = 1e-12;
        Dt.cross(0, 1) = 1.0;
        REQUIRE(validate_metric_coupling(point.space, slice.space, Dt).ok);
        auto chk = check_pair_hausdorff_bounded(point, slice, Dt, f_fixed, 1.0);
        CHECK(chk.delta == Catch::Approx(0.005).margin(1e-9));
        CHECK_FALSE(chk.ok);
    }
}

TEST_CASE("one point vs two point closed forms") {
    CHECK(one_point_vs_two_point_gw(0.5, 0.5, 1.0, 1) == 0.5);
    CHECK(one_point_vs_two_point_gw(0.75, 0.25, 1.0, 1) == 0.25);
    CHECK(one_point_vs_two_point_gw(0.5, 0.5, 1.0, 2) == 0.5);
    // alternating minimization agrees on the asymmetric two-point target
    auto point = simplex_mm<double>(1);
    auto slice = ex430_slice(0.5);  // masses (0.75, 0.25)
    auto r = gw_alternating_min(point, slice, 1, 4, 25, 5);
    CHECK(r.bound == Catch::Approx(0.25).margin(1e-8));
}
