#pragma once

#include <complex>
#include <optional>

#include "ousldp/model.hpp"

namespace ousldp {

// phi(a) = -sqrt(theta^2 + 2ac), tau(a) = a + theta - phi(a), h(a) = (a + theta)/phi(a).
struct CgfParts {
    double phi;
    double tau;
    double h_ratio;
};

// The keystone decomposition L_T = L + H/T + R_T/T at a point of the domain.
struct CgfDecomposition {
    double phi;
    double tau;
    double h_ratio;
    double big_l;      // L(a)   = -(a + theta + sqrt(theta^2+2ac))/2
    double big_h;      // H(a)   = -log((1 + h(a))/2)/2
    double remainder;  // R_T(a) = -log(1 + (1-h)/(1+h) exp(2 phi T))/2
    double assembled;  // L + (H + R_T)/T
};

struct ComplexCgfPoint {
    std::complex<double> z;
    std::complex<double> value;
    bool branch_ok;  // no log/sqrt argument touched the cut ]-inf, 0]
};

CgfParts cgf_parts(double theta, double c, double a);

CgfDecomposition decompose(double theta, double c, double a, double T);

// Exact closed form -tau/2 - log(1 + (tau/2phi)(1 - e^{2 phi T}))/(2T); equals
// decompose(...).assembled up to rounding.
double cgf_exact(double theta, double c, double a, double T);

struct CgfDerivatives {
    double dL;   // L'(a)  = -(1 + c/sqrt(theta^2+2ac))/2
    double d2L;  // L''(a) = (c^2/2)(theta^2+2ac)^{-3/2}
    std::optional<double> dH;  // H'(a); absent outside Delta_c where H is singular
};

// dL, d2L need theta^2 + 2ac > 0; dH additionally needs a in Delta_c.
CgfDerivatives cgf_derivatives(double theta, double c, double a);

// L_T at complex argument with the principal determinations of log and sqrt.
ComplexCgfPoint complex_cgf(double theta, double c, std::complex<double> z, double T);

// Characteristic function of U_T = Z_T(c)/beta under the alpha-tilted measure:
//   Phi_T(u) = exp(T L_T(alpha + iu/beta) - T L_T(alpha)).
// Anchored ratio evaluation, continuous in u; |Phi_T| <= 1, Phi_T(0) = 1.
class CharFn {
public:
    CharFn(double theta, double c, double T, double alpha, double beta);

    std::complex<double> operator()(double u) const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    double theta_, c_, T_, alpha_, beta_;
    double phi_a_, gh_a_, gr_a_, anchor_;  // anchor = sqrt(gh_a * gr_a)
};

std::complex<double> char_fn(double theta, double c, double T, double alpha, double beta,
                             double u);

// Right side of the L^2 bound on |Phi_T|^2 at z = a + iu:
//   4 l(a,c,theta) (1 + 4c^2u^2/phi^4)^{1/4} exp(T c^2 u^2/(2 phi^3) (1 + 4c^2u^2/phi^4)^{-3/4})
// with l(a,c,theta) = max(1,|phi+theta|/|phi|) max(1,|phi+2c-theta|/|phi|) >= 1.
double char_bound(double theta, double c, double a, double u, double T);

double ell_constant(double theta, double c, double a);

// Var(X_T) under drift theta with X_0 = 0: (e^{2 theta T} - 1)/(2 theta), = T at theta = 0.
double ou_variance(double theta, double T);

namespace detail {
// Unguarded closed forms used on hot paths; caller ensures theta^2 + 2ac > 0.
CgfParts cgf_parts_unchecked(double theta, double c, double a);
double big_l(double theta, double c, double a);
}  // namespace detail

}  // namespace ousldp
