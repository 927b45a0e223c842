#pragma once

#include <complex>
#include <functional>

namespace ousldp {

struct QuadratureResult {
    std::complex<double> value;
    double error;  // accumulated embedded-rule estimate
    int evaluations;
    bool converged;
    double worst_interval_lo;  // reported on non-convergence
    double worst_interval_hi;
};

// Globally adaptive Gauss7/Kronrod15 bisection: repeatedly split the interval
// with the largest embedded-rule error until the total satisfies the target.
QuadratureResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                   double a, double b, double rel_tol, double abs_tol = 1e-300,
                                   int max_intervals = 4000);

QuadratureResult integrate_real(const std::function<double(double)>& f, double a, double b,
                                double rel_tol, double abs_tol = 1e-300,
                                int max_intervals = 4000);

}  // namespace ousldp
