#pragma once

#include <vector>

#include "ousldp/model.hpp"

namespace ousldp {

enum class SeriesScale {
    InverseT,      // a_T = sum a_k / T^k
    InverseSqrtT,  // a_T = sum a_k / T^{k/2} (change of regime at c = -theta)
};

// Asymptotic series of the saddle a_T and of phi(a_T).
struct SeriesCoeffs {
    SeriesScale scale;
    std::vector<double> a_coeffs;
    std::vector<double> phi_coeffs;

    double a_truncated(double T, int terms) const;
    double phi_truncated(double T, int terms) const;
};

// Solution of L'(a) + H'(a)/T = 0 in the polynomial form
//   T phi(a)(phi(a) - c)(phi(a) + a + theta) - c(a + theta) + phi^2(a) = 0.
struct SaddleSolution {
    double a_T;
    double phi_at;
    double residual;  // normalized residual of the polynomial form
    int iterations;
    RegimeCase regime;
};

// Closed-form leading coefficients for the saddle regimes; derivative-based
// two-term series for StableInner/StableCritical.
SeriesCoeffs series_coeffs(double theta, double c);

SaddleSolution solve_saddle(double theta, double c, double T);

// True when solve_saddle supports the regime (the remaining regimes use the
// fixed tilt a_c or the exact Gaussian route).
bool has_saddle(RegimeCase regime);

}  // namespace ousldp
