#include "ousldp/inversion.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "ousldp/cgf.hpp"
#include "ousldp/errors.hpp"
#include "ousldp/quadrature.hpp"
#include "ousldp/saddle.hpp"

namespace ousldp {

namespace {

constexpr double kPi = std::numbers::pi;

// \int_{|u|>s} (1 + u^2/(alpha beta)^2)^{-1} du = 2|alpha beta| (pi/2 - atan(s/|alpha beta|))
double lorentz_tail(double ab, double s) {
    const double m = std::abs(ab);
    return 2.0 * m * (0.5 * kPi - std::atan(s / m));
}

// \int_{|u|>s_T} |Phi_T(u)|^2 du bounded with the char_bound L^2 majorant,
// in the v = u/|beta| variable: 2|beta| \int_{s_T/|beta|}^inf bound(v) dv.
double phi_tail_l2_impl(double theta, double c, double T, double alpha, double beta,
                        double s_T, double rel_tol) {
    const double v0 = s_T / std::abs(beta);
    auto f = [&](double v) { return char_bound(theta, c, alpha, v, T); };
    // The majorant decays like exp(-T k sqrt(v)); integrate geometric segments
    // until they stop contributing.
    double total = 0.0;
    double lo = v0;
    double len = std::max(v0, 1.0);
    for (int seg = 0; seg < 200; ++seg) {
        const double hi = lo + len;
        const QuadratureResult q = integrate_real(f, lo, hi, rel_tol, 1e-280, 2000);
        total += q.value.real();
        if (std::abs(q.value.real()) < 1e-14 * std::abs(total) + 1e-290) break;
        lo = hi;
        len *= 2.0;
    }
    return 2.0 * std::abs(beta) * total;
}

}  // namespace

ParsevalResult b_t_parseval(double theta, double c, double T, double alpha, double beta,
                            double s_T, double rel_tol) {
    if (!(s_T > 0.0)) throw domain_error("s_T must be positive");
    if (!(alpha * beta < 0.0)) {
        std::ostringstream os;
        os << "sign convention violated: alpha*beta = " << alpha * beta << " must be negative";
        throw domain_error(os.str());
    }
    // truncation rule: min(T s^2/beta^2, T sqrt(s)/sqrt(|beta|)) >= C T^{1/3}
    const double r1 = T * s_T * s_T / (beta * beta);
    const double r2 = T * std::sqrt(s_T) / std::sqrt(std::abs(beta));
    if (std::min(r1, r2) < 0.5 * std::cbrt(T)) {
        std::ostringstream os;
        os << "s_T = " << s_T << " violates the truncation rule: min(" << r1 << ", " << r2
           << ") < 0.5 T^{1/3}";
        throw domain_error(os.str());
    }

    const CharFn phi_fn(theta, c, T, alpha, beta);
    const double ab = alpha * beta;
    auto integrand = [&](double u) -> std::complex<double> {
        return phi_fn(u) / std::complex<double>(1.0, u / ab);
    };
    const QuadratureResult q = integrate_complex(integrand, -s_T, s_T, rel_tol);
    if (!q.converged) {
        std::ostringstream os;
        os << "Parseval quadrature did not converge; worst subinterval [" << q.worst_interval_lo
           << ", " << q.worst_interval_hi << "], error " << q.error;
        throw solver_error(os.str());
    }
    const double scale = -1.0 / (2.0 * kPi * ab);
    const double c_factor = scale * q.value.real();
    const double imag_res = std::abs(scale * q.value.imag());

    // |D_T|^2 <= (2 pi alpha beta)^{-2} * I_lorentz * I_phi2  (Cauchy-Schwarz route)
    const double i1 = lorentz_tail(ab, s_T);
    const double i2 = phi_tail_l2_impl(theta, c, T, alpha, beta, s_T, 1e-6);
    const double d_bound = std::sqrt(i1 * std::max(i2, 0.0)) / (2.0 * kPi * std::abs(ab));

    return {c_factor, imag_res, d_bound, std::abs(scale) * q.error, q.evaluations};
}

double zero_threshold_probability(double theta, double T, TailSide side) {
    if (!(T > 0.0)) throw domain_error("T must satisfy T > 0");
    const double d_T = std::sqrt(T / ou_variance(theta, T));
    // P(thetahat <= 0) = P(|X_T| <= sqrt(T)) = 2 Phi(d_T) - 1 = erf(d_T/sqrt(2));
    // erf/erfc directly keep full relative precision in both deep-tail limits
    return side == TailSide::LowerTail ? std::erf(d_T / std::numbers::sqrt2)
                                       : std::erfc(d_T / std::numbers::sqrt2);
}

TiltChoice oracle_tilt(double theta, double c, double T, const OracleConfig& cfg) {
    const RegimeCase regime = classify_case(theta, c);
    const double s_sqrt_T = cfg.s_sqrt * std::pow(T, 1.0 / 6.0);
    const double s_lin_T = cfg.s_linear * std::pow(T, 2.0 / 3.0);

    switch (regime) {
        case RegimeCase::StableLeft:
        case RegimeCase::ExplosiveLeft:
        case RegimeCase::UnstableLeft: {
            const double a_c = (c * c - theta * theta) / (2.0 * c);
            const double sigma_c = std::sqrt(-1.0 / (2.0 * c));
            return {a_c, sigma_c * std::sqrt(T), s_sqrt_T};
        }
        case RegimeCase::StableInner: {
            const double sigma_c = std::sqrt(-1.0 / (2.0 * c));
            return {solve_saddle(theta, c, T).a_T, -sigma_c * std::sqrt(T), s_sqrt_T};
        }
        case RegimeCase::StableCritical:
            return {solve_saddle(theta, c, T).a_T, -std::sqrt(T), s_sqrt_T};
        case RegimeCase::ExplosiveCritical:
            return {solve_saddle(theta, c, T).a_T, std::sqrt(T), s_sqrt_T};
        case RegimeCase::ExplosiveValley:
            return {solve_saddle(theta, c, T).a_T, T, s_lin_T};
        case RegimeCase::ExplosiveRight:
        case RegimeCase::StableRight:
        case RegimeCase::UnstableRight:
            return {solve_saddle(theta, c, T).a_T, -T, s_lin_T};
        case RegimeCase::StableZero:
        case RegimeCase::ExplosiveZero:
        case RegimeCase::UnstableZero:
            throw domain_error("c = 0 uses the exact Gaussian route, not the CGF route");
        case RegimeCase::ExplosiveAtTheta:
            throw no_expansion_error("c = theta with theta > 0: no CGF route exists");
    }
    throw domain_error("unreachable regime");
}

InversionResult oracle_tail(double theta, double c, double T, const OracleConfig& cfg) {
    const RegimeCase regime = classify_case(theta, c);
    const TailSide side = side_for(regime);

    switch (regime) {
        case RegimeCase::StableZero:
        case RegimeCase::ExplosiveZero:
        case RegimeCase::UnstableZero: {
            const double p = zero_threshold_probability(theta, T, side);
            return {regime, side, 0.0, 0.0, 0.0, p, 1.0, 0.0, p, 0.0};
        }
        default:
            break;
    }

    const TiltChoice tilt = oracle_tilt(theta, c, T, cfg);
    const ParsevalResult pr =
        b_t_parseval(theta, c, T, tilt.alpha, tilt.beta, tilt.s_T, cfg.rel_tol);
    const double a_factor = std::exp(T * cgf_exact(theta, c, tilt.alpha, T));
    const double probability = a_factor * pr.c_factor;
    const double err = a_factor * (pr.quad_error + pr.imag_residue + pr.d_bound);
    return {regime, side,      tilt.alpha, tilt.beta,   tilt.s_T,
            a_factor, pr.c_factor, pr.d_bound, probability, err};
}

}  // namespace ousldp
