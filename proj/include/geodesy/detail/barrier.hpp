#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace geodesy::detail {

// Log-barrier minimizer for  min 1/2 x'Qx + c'x  s.t.  G x >= h,
// with Q diagonal PSD. Requires a strictly feasible start. The suboptimality
// after the final centering is bounded by (#constraints) * mu_final, which the
// default schedule drives below 1e-10 on the desk-scale problems this library
// solves. Used for the metric-coupling half-step of the GW alternating
// minimization (linear objective for p=1, quadratic for p=2).
struct BarrierProblem {
    Eigen::VectorXd q_diag;  // diagonal of Q (may be zero)
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
};

inline double barrier_objective(const BarrierProblem& P, const Eigen::VectorXd& x) {
    return 0.5 * x.dot(P.q_diag.cwiseProduct(x)) + P.c.dot(x);
}

inline bool strictly_feasible(const BarrierProblem& P, const Eigen::VectorXd& x, double margin) {
    Eigen::VectorXd s = P.G * x - P.h;
    return (s.array() > margin).all();
}

inline Eigen::VectorXd barrier_minimize(const BarrierProblem& P, Eigen::VectorXd x,
                                        double mu_final = 1e-13) {
    const auto m = P.G.rows();
    const auto n = P.G.cols();
    if (x.size() != n) throw std::invalid_argument("barrier_minimize: start size mismatch");
    if (!strictly_feasible(P, x, 0.0))
        throw std::invalid_argument("barrier_minimize: start not strictly feasible");

    double scale = std::max(1.0, std::max(P.c.cwiseAbs().maxCoeff(),
                                          P.q_diag.cwiseAbs().maxCoeff()));
    double mu = scale;
    while (true) {
        // centering: damped Newton on f(x) - mu sum log(slack)
        for (int it = 0; it < 60; ++it) {
            Eigen::VectorXd s = P.G * x - P.h;
            Eigen::VectorXd inv_s = s.cwiseInverse();
            Eigen::VectorXd grad =
                P.q_diag.cwiseProduct(x) + P.c - mu * (P.G.transpose() * inv_s);
            Eigen::MatrixXd H = (P.q_diag.array() + 1e-14 * scale).matrix().asDiagonal();
            // H += mu * G' diag(1/s^2) G
            Eigen::MatrixXd Gs = P.G.array().colwise() * inv_s.array();
            H.noalias() += mu * (Gs.transpose() * Gs);
            Eigen::VectorXd step = H.ldlt().solve(-grad);
            double decrement = -grad.dot(step);
            if (!(decrement > 1e-16 * scale)) break;
            // backtrack to stay strictly feasible and decrease the barrier obj
            double t = 1.0;
            auto barrier_val = [&](const Eigen::VectorXd& y) {
                Eigen::VectorXd sy = P.G * y - P.h;
                if (!(sy.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
                return barrier_objective(P, y) - mu * sy.array().log().sum();
            };
            double f0 = barrier_val(x);
            for (int bt = 0; bt < 60; ++bt) {
                Eigen::VectorXd y = x + t * step;
                if (barrier_val(y) <= f0 - 0.25 * t * decrement) {
                    x = y;
                    break;
                }
                t *= 0.5;
                if (bt == 59) t = 0.0;
            }
            if (t == 0.0) break;
        }
        if (mu <= mu_final) break;
        mu = std::max(mu_final, mu * 0.12);
    }
    (void)m;
    return x;
}

}  // namespace geodesy::detail
