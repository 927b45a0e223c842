#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ousldp/model.hpp"

namespace ousldp {

// Closed-form constants of the expansion branch that applies to (theta, c).
// Fields not meaningful for the regime are absent.
struct ExpansionConstants {
    RegimeCase regime;
    std::optional<double> a_c;
    std::optional<double> sigma_c_sq;
    std::optional<double> h_of_ac;  // H(a_c)
    std::optional<double> k_of_c;   // K(c)
    std::optional<double> j_of_c;   // J(c)
    std::optional<double> p_of_c;   // P(c)
    std::optional<double> gamma1;
    std::optional<double> delta1;
    std::optional<double> beta0;
};

struct TailApproximation {
    RegimeCase regime;
    TailSide side;
    double rate;           // I(c)
    double prefactor_log;  // H(a_c), K(c), J(c), or the critical-case constant
    std::vector<double> corrections;  // coefficients actually applied
    int order;
    double probability;  // clamped to [0, 1]
    double raw_value;    // pre-clamp expansion value
    std::optional<double> exact_value;  // exact Gaussian value where one exists (c = 0)
};

ExpansionConstants expansion_constants(double theta, double c);

// Sharp tail approximation at the stated order. Order 0 is the leading term;
// order 1 composes the closed-form gamma_1 with a numerically estimated B_T
// correction; the c = 0 branches support arbitrary order through their series.
TailApproximation tail_probability(double theta, double c, double T, int order);

// Exact Gaussian computation at c = 0 in the explosive case: sigma_T^2 and
// d_T = sqrt(T)/sigma_T exactly, the exact value 2(Phi(d_T) - 1/2), and the
// order-p Taylor series of 2F at d_T.
TailApproximation zero_threshold_exact(double theta, double T, int order);

// Hermite numbers H_n = H_n(0) via H_n = -2(n-1) H_{n-2}, H_0 = 1, H_1 = 0.
// Exact in 64 bits up to n = 28; larger even n overflow and raise.
std::int64_t hermite_number(int n);

// Coefficient of (theta T e^{-2 theta T})^k in the c = 0 explosive series,
// (-1)^k / ((2k+1) k!), assembled from the Hermite numbers.
double zero_series_coefficient(int k);

// Maximum supported expansion order for the regime.
int max_order(RegimeCase regime);

}  // namespace ousldp
