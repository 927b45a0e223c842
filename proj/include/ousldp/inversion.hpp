#pragma once

#include "ousldp/model.hpp"

namespace ousldp {

// Exact tail probability through the factorization P = A_T * B_T, with A_T
// from the exact CGF and B_T = C_T + D_T from the Parseval quadrature of the
// tilted characteristic function; |D_T| is bounded, not computed.
struct InversionResult {
    RegimeCase regime;
    TailSide side;
    double a_t_used;           // alpha_T: fixed a_c or the saddle a_T
    double beta_used;          // beta_T per the four-case table
    double s_t_used;           // truncation point
    double a_factor;           // A_T = exp(T L_T(alpha_T))
    double b_factor;           // C_T
    double d_bound;            // bound on the truncated tail |D_T|
    double probability;        // A_T * C_T
    double quadrature_error;   // A_T * (quad error + imag residue + d_bound)
};

struct ParsevalResult {
    double c_factor;     // real part of the truncated integral
    double imag_residue; // |imag part| (B_T is a real expectation)
    double d_bound;      // Cauchy-Schwarz bound on |D_T| via the L^2 majorant
    double quad_error;   // embedded-rule estimate on c_factor
    int evaluations;
};

struct OracleConfig {
    double s_sqrt = 30.0;    // s in s_T = s T^{1/6} for the sqrt(T) scalings
    double s_linear = 25.0;  // s in s_T = s T^{2/3} for the T scalings
    double rel_tol = 1e-10;
};

// C_T = -(1/(2 pi alpha beta)) \int_{|u|<=s_T} (1 + iu/(alpha beta))^{-1} Phi_T(u) du,
// plus a numerical Cauchy-Schwarz bound on the truncated tail |D_T|.
// Requires alpha strictly inside the finite-T domain and alpha*beta < 0.
ParsevalResult b_t_parseval(double theta, double c, double T, double alpha, double beta,
                            double s_T, double rel_tol = 1e-10);

// Full oracle. c = 0 delegates to the exact Gaussian route; c = theta
// explosive has no route and raises no_expansion_error.
InversionResult oracle_tail(double theta, double c, double T, const OracleConfig& cfg = {});

// Exact Gaussian tail at c = 0 for any theta:
//   P(thetahat_T <= 0) = 2 Phi(d_T) - 1 with d_T = sqrt(T)/sigma_T.
double zero_threshold_probability(double theta, double T, TailSide side);

// alpha_T / beta_T the oracle uses for a regime (exposed for tests and for the
// correction-fitting in the expansion module).
struct TiltChoice {
    double alpha;
    double beta;
    double s_T;
};
TiltChoice oracle_tilt(double theta, double c, double T, const OracleConfig& cfg = {});

}  // namespace ousldp
