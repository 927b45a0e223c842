#include "ousldp/cgf.hpp"

#include <cmath>
#include <sstream>

#include "ousldp/errors.hpp"

namespace ousldp {

namespace {

constexpr double kGuard = 1e-10;  // near-boundary guard band

void check_positive_q(double theta, double c, double a) {
    const double q = theta * theta + 2.0 * a * c;
    if (!(q > 0.0)) {
        std::ostringstream os;
        os << "a outside domain: theta^2 + 2ac = " << q << " <= 0 at a = " << a;
        throw domain_error(os.str());
    }
}

void check_guard_band(double a, const EffectiveDomain& dom, const char* which) {
    if ((std::isfinite(dom.lower) && a - dom.lower < kGuard) || dom.upper - a < kGuard) {
        std::ostringstream os;
        os << "a = " << a << " within " << kGuard << " of the " << which << " boundary ("
           << dom.lower << ", " << dom.upper << ")";
        throw boundary_error(os.str());
    }
}

void check_in_finite_domain(double theta, double c, double a, double T) {
    check_positive_q(theta, c, a);
    if (!in_finite_T_domain(theta, c, T, a)) {
        std::ostringstream os;
        os << "a outside finite-T domain: a + theta >= sqrt(theta^2+2ac) coth(T sqrt(theta^2+2ac))"
           << " at a = " << a;
        throw domain_error(os.str());
    }
    check_guard_band(a, finite_T_domain(theta, c, T), "finite-T domain");
}

// The three-term decomposition needs a in Delta_c, which is strictly smaller
// than the finite-T domain; H alone is singular between the two.
void check_in_limit_domain_guarded(double theta, double c, double a) {
    check_positive_q(theta, c, a);
    if (!in_limit_domain(theta, c, a)) {
        std::ostringstream os;
        os << "a outside Delta_c: a + theta >= sqrt(theta^2+2ac) at a = " << a;
        throw domain_error(os.str());
    }
    check_guard_band(a, effective_domain(theta, c), "Delta_c");
}

}  // namespace

namespace detail {

CgfParts cgf_parts_unchecked(double theta, double c, double a) {
    const double phi = -std::sqrt(theta * theta + 2.0 * a * c);
    return {phi, a + theta - phi, (a + theta) / phi};
}

double big_l(double theta, double c, double a) {
    return -0.5 * (a + theta + std::sqrt(theta * theta + 2.0 * a * c));
}

}  // namespace detail

CgfParts cgf_parts(double theta, double c, double a) {
    const double q = theta * theta + 2.0 * a * c;
    if (!(q > 0.0)) {
        std::ostringstream os;
        os << "theta^2 + 2ac = " << q << " <= 0 at a = " << a;
        throw domain_error(os.str());
    }
    return detail::cgf_parts_unchecked(theta, c, a);
}

CgfDecomposition decompose(double theta, double c, double a, double T) {
    if (!(T > 0.0)) throw domain_error("T must satisfy T > 0");
    check_in_limit_domain_guarded(theta, c, a);
    const CgfParts p = detail::cgf_parts_unchecked(theta, c, a);
    const double one_plus_h = 1.0 + p.h_ratio;
    if (!(one_plus_h > 0.0)) {
        throw domain_error("1 + h(a) <= 0: a outside Delta_c");
    }
    const double r = (1.0 - p.h_ratio) / one_plus_h;
    const double big_l = -0.5 * p.tau;
    const double big_h = -0.5 * std::log(0.5 * one_plus_h);
    const double rem = -0.5 * std::log1p(r * std::exp(2.0 * p.phi * T));
    return {p.phi, p.tau, p.h_ratio, big_l, big_h, rem, big_l + (big_h + rem) / T};
}

double cgf_exact(double theta, double c, double a, double T) {
    check_in_finite_domain(theta, c, a, T);
    const CgfParts p = detail::cgf_parts_unchecked(theta, c, a);
    // 1 - e^{2 phi T} via expm1; the log argument equals 1 - tau(a) sigma_T^2(phi)
    const double w = (p.tau / (2.0 * p.phi)) * (-std::expm1(2.0 * p.phi * T));
    if (!(1.0 + w > 0.0)) {
        throw domain_error("log argument <= 0: a outside Delta_{T,c}");
    }
    return -0.5 * p.tau - std::log1p(w) / (2.0 * T);
}

CgfDerivatives cgf_derivatives(double theta, double c, double a) {
    check_positive_q(theta, c, a);
    const double q = theta * theta + 2.0 * a * c;
    const double s = std::sqrt(q);
    const double dL = -0.5 * (1.0 + c / s);
    const double d2L = 0.5 * c * c / (q * s);
    const double phi = -s;
    const double one_plus_h = 1.0 + (a + theta) / phi;
    std::optional<double> dH;
    if (one_plus_h > 0.0) {
        const double hp = (phi * phi - c * (a + theta)) / (phi * phi * phi);
        dH = -hp / (2.0 * one_plus_h);
    }
    return {dL, d2L, dH};
}

namespace {

bool on_cut(std::complex<double> w) {
    return w.real() <= 0.0 && w.imag() == 0.0;
}

}  // namespace

ComplexCgfPoint complex_cgf(double theta, double c, std::complex<double> z, double T) {
    check_in_finite_domain(theta, c, z.real(), T);
    const double phi_a = -std::sqrt(theta * theta + 2.0 * z.real() * c);

    bool ok = true;
    // phi(z) = phi(a) sqrt(1 + 2ic Im(z)/phi(a)^2); the sqrt argument has Re = 1 > 0
    const std::complex<double> w(1.0, 2.0 * c * z.imag() / (phi_a * phi_a));
    ok = ok && w.real() > 0.0;
    const std::complex<double> phi_z = phi_a * std::sqrt(w);

    const std::complex<double> tau_z = z + theta - phi_z;
    const std::complex<double> h_z = (z + theta) / phi_z;
    const std::complex<double> g_h = 0.5 * (1.0 + h_z);
    const std::complex<double> g_r =
        1.0 + (1.0 - h_z) / (1.0 + h_z) * std::exp(2.0 * phi_z * T);
    ok = ok && !on_cut(g_h) && !on_cut(g_r) && !on_cut(1.0 + h_z);

    const std::complex<double> value = -0.5 * tau_z + (-0.5 * std::log(g_h) - 0.5 * std::log(g_r)) / T;
    return {z, value, ok};
}

CharFn::CharFn(double theta, double c, double T, double alpha, double beta)
    : theta_(theta), c_(c), T_(T), alpha_(alpha), beta_(beta) {
    if (beta == 0.0) throw domain_error("beta must be nonzero");
    const double q = theta * theta + 2.0 * alpha * c;
    if (!(q > 0.0) || !in_finite_T_domain(theta, c, T, alpha)) {
        throw domain_error("alpha outside the finite-T domain");
    }
    phi_a_ = -std::sqrt(q);
    const double h_a = (alpha + theta) / phi_a_;
    gh_a_ = 0.5 * (1.0 + h_a);
    gr_a_ = 1.0 + (1.0 - h_a) / (1.0 + h_a) * std::exp(2.0 * phi_a_ * T);
    if (!(gh_a_ > 0.0) || !(gr_a_ > 0.0)) {
        throw domain_error("alpha outside Delta_{T,c}: nonpositive log argument");
    }
    anchor_ = std::sqrt(gh_a_ * gr_a_);
}

std::complex<double> CharFn::operator()(double u) const {
    if (u == 0.0) return {1.0, 0.0};
    const double v = u / beta_;
    const std::complex<double> iv(0.0, v);

    // phi(z) - phi(a) = phi(a) (sqrt(1+w) - 1) = phi(a) w / (sqrt(1+w) + 1)
    const std::complex<double> w(0.0, 2.0 * c_ * v / (phi_a_ * phi_a_));
    const std::complex<double> root = std::sqrt(1.0 + w);
    const std::complex<double> dphi = phi_a_ * (w / (root + 1.0));
    const std::complex<double> phi_z = phi_a_ + dphi;

    // T (L(z) - L(a)) = -T (iv - dphi)/2
    const std::complex<double> tdl = -0.5 * T_ * (iv - dphi);

    const std::complex<double> z(alpha_ + theta_, u / beta_);  // z + theta
    const std::complex<double> h_z = z / phi_z;
    const std::complex<double> g_h = 0.5 * (1.0 + h_z);
    const std::complex<double> g_r =
        1.0 + (1.0 - h_z) / (1.0 + h_z) * std::exp(2.0 * phi_z * T_);

    return std::exp(tdl) * (anchor_ / (std::sqrt(g_h) * std::sqrt(g_r)));
}

std::complex<double> char_fn(double theta, double c, double T, double alpha, double beta,
                             double u) {
    return CharFn(theta, c, T, alpha, beta)(u);
}

double ell_constant(double theta, double c, double a) {
    const CgfParts p = cgf_parts(theta, c, a);
    const double abs_phi = -p.phi;
    return std::max(1.0, std::abs(p.phi + theta) / abs_phi) *
           std::max(1.0, std::abs(p.phi + 2.0 * c - theta) / abs_phi);
}

double char_bound(double theta, double c, double a, double u, double T) {
    const CgfParts p = cgf_parts(theta, c, a);
    const double phi2 = p.phi * p.phi;
    const double g = 1.0 + 4.0 * c * c * u * u / (phi2 * phi2);
    const double expo = T * c * c * u * u / (2.0 * phi2 * p.phi) * std::pow(g, -0.75);
    return 4.0 * ell_constant(theta, c, a) * std::pow(g, 0.25) * std::exp(expo);
}

double ou_variance(double theta, double T) {
    if (theta == 0.0) return T;
    return std::expm1(2.0 * theta * T) / (2.0 * theta);
}

}  // namespace ousldp
