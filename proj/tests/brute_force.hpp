#pragma once

// Test-only brute-force oracle for P(thetahat_T <= c), independent of the CGF
// machinery: discretize the OU covariance on a grid, diagonalize the quadratic
// form Z = x'Ax - T/2, and invert its characteristic function with the
// Gil-Pelaez formula. Only usable where Z is O(1)-scaled (theta <= 0); the
// explosive case oscillates on the e^{2 theta T} scale.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "ousldp/quadrature.hpp"

namespace ousldp::testing {

inline double brute_force_lower_tail(double theta, double c, double T, int n = 600) {
    Eigen::MatrixXd cov(n, n);
    const double dt = T / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double ti = (i + 1) * dt;
            const double tj = (j + 1) * dt;
            double v;
            if (theta == 0.0) {
                v = tj;  // min(ti, tj), j <= i
            } else {
                v = std::exp(theta * (ti + tj)) * (1.0 - std::exp(-2.0 * theta * tj)) /
                    (2.0 * theta);
            }
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, dt);  // trapezoid; X_0 = 0 drops out
    w(n - 1) = 0.5 * dt;
    Eigen::MatrixXd a = (-c) * w.asDiagonal().toDenseMatrix();
    a(n - 1, n - 1) += 0.5;

    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd m = l.transpose() * a * l;
    const Eigen::VectorXd lam =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (m + m.transpose())).eigenvalues();

    auto cf = [&](double u) {
        std::complex<double> s(0.0, -u * T / 2.0);
        for (int i = 0; i < n; ++i) s -= 0.5 * std::log(std::complex<double>(1.0, -2.0 * u * lam(i)));
        return std::exp(s);
    };
    auto integrand = [&](double u) { return cf(u).imag() / u; };
    const QuadratureResult q1 = integrate_real(integrand, 1e-10, 50.0, 1e-10, 1e-14, 8000);
    const QuadratureResult q2 = integrate_real(integrand, 50.0, 2000.0, 1e-8, 1e-14, 8000);
    return 0.5 - (q1.value.real() + q2.value.real()) / std::numbers::pi;
}

}  // namespace ousldp::testing
