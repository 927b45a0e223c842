#include "ousldp/saddle.hpp"

#include <cmath>
#include <sstream>

#include "ousldp/cgf.hpp"
#include "ousldp/errors.hpp"

namespace ousldp {

namespace {

double scale_power(SeriesScale scale, double T, int k) {
    return scale == SeriesScale::InverseT ? std::pow(T, -k) : std::pow(T, -0.5 * k);
}

// F(a) = T phi (phi - c)(phi + a + theta) - c(a + theta) + phi^2
struct Implicit {
    double theta, c, T;

    bool in_q(double a) const { return theta * theta + 2.0 * a * c > 0.0; }

    double value(double a) const {
        const double phi = -std::sqrt(theta * theta + 2.0 * a * c);
        return T * phi * (phi - c) * (phi + a + theta) - c * (a + theta) + phi * phi;
    }

    double derivative(double a) const {
        const double phi = -std::sqrt(theta * theta + 2.0 * a * c);
        const double dphi = c / phi;
        return T * (dphi * (phi - c) * (phi + a + theta) + phi * dphi * (phi + a + theta) +
                    phi * (phi - c) * (dphi + 1.0)) -
               c + 2.0 * phi * dphi;
    }

    double normalized(double a) const {
        const double phi = -std::sqrt(theta * theta + 2.0 * a * c);
        const double t1 = T * phi * (phi - c) * (phi + a + theta);
        const double t2 = c * (a + theta) - phi * phi;
        const double scale = std::max(1.0, std::max(std::abs(t1), std::abs(t2)));
        return (t1 - t2) / scale;
    }
};

}  // namespace

double SeriesCoeffs::a_truncated(double T, int terms) const {
    double v = 0.0;
    for (int k = 0; k < terms && k < static_cast<int>(a_coeffs.size()); ++k) {
        v += a_coeffs[k] * scale_power(scale, T, k);
    }
    return v;
}

double SeriesCoeffs::phi_truncated(double T, int terms) const {
    double v = 0.0;
    for (int k = 0; k < terms && k < static_cast<int>(phi_coeffs.size()); ++k) {
        v += phi_coeffs[k] * scale_power(scale, T, k);
    }
    return v;
}

bool has_saddle(RegimeCase regime) {
    switch (regime) {
        case RegimeCase::ExplosiveRight:
        case RegimeCase::ExplosiveValley:
        case RegimeCase::ExplosiveCritical:
        case RegimeCase::StableInner:
        case RegimeCase::StableRight:
        case RegimeCase::StableCritical:
        case RegimeCase::UnstableRight:
            return true;
        default:
            return false;
    }
}

SeriesCoeffs series_coeffs(double theta, double c) {
    const RegimeCase regime = classify_case(theta, c);
    switch (regime) {
        case RegimeCase::ExplosiveRight:
        case RegimeCase::StableRight:
        case RegimeCase::UnstableRight: {
            // a_c = 2(c - theta) border
            const double a0 = 2.0 * (c - theta);
            const double a1 = (theta - 2.0 * c) / (3.0 * c - theta);
            const double a2 = -c * (c * c - 5.0 * theta * c + 2.0 * theta * theta) /
                              (2.0 * (c - theta) * std::pow(3.0 * c - theta, 3));
            const double p0 = theta - 2.0 * c;
            const double p1 = c / (3.0 * c - theta);
            const double p2 = c * c * (4.0 * c * c - 9.0 * theta * c + 3.0 * theta * theta) /
                              (2.0 * (c - theta) * (2.0 * c - theta) * std::pow(3.0 * c - theta, 3));
            return {SeriesScale::InverseT, {a0, a1, a2}, {p0, p1, p2}};
        }
        case RegimeCase::ExplosiveValley: {
            const double a1 = -theta / (c + theta);
            const double a2 = -c * (c * c + 3.0 * theta * c - 2.0 * theta * theta) /
                              (2.0 * (c - theta) * std::pow(c + theta, 3));
            const double p1 = c / (c + theta);
            const double p2 = c * c * (2.0 * c * c + 3.0 * theta * c - 3.0 * theta * theta) /
                              (2.0 * theta * (c - theta) * std::pow(c + theta, 3));
            return {SeriesScale::InverseT, {0.0, a1, a2}, {-theta, p1, p2}};
        }
        case RegimeCase::ExplosiveCritical: {
            const double rt = std::sqrt(theta);
            return {SeriesScale::InverseSqrtT, {0.0, -rt, -0.125}, {-theta, -rt, 0.375}};
        }
        case RegimeCase::StableInner: {
            // interior critical point of L; first correction from the implicit
            // function theorem, a_1 = -H'(a_c)/L''(a_c)
            const double a0 = (c * c - theta * theta) / (2.0 * c);
            const CgfDerivatives d = cgf_derivatives(theta, c, a0);
            const double a1 = -*d.dH / d.d2L;
            const double p0 = -std::sqrt(theta * theta + 2.0 * a0 * c);
            return {SeriesScale::InverseT, {a0, a1}, {p0, c / p0 * a1}};
        }
        case RegimeCase::StableCritical: {
            // merge of the interior critical point with the border; half-power regime
            const double a0 = -4.0 * theta / 3.0;
            const double a1 = -std::sqrt(-theta / 3.0);
            return {SeriesScale::InverseSqrtT, {a0, a1}, {theta / 3.0, a1}};
        }
        default: {
            std::ostringstream os;
            os << "no saddle series for regime " << to_string(regime);
            throw no_expansion_error(os.str());
        }
    }
}

SaddleSolution solve_saddle(double theta, double c, double T) {
    const RegimeCase regime = classify_case(theta, c);
    if (!has_saddle(regime)) {
        std::ostringstream os;
        os << "regime " << to_string(regime) << " admits no time-varying saddle";
        throw no_expansion_error(os.str());
    }
    if (!(T > 0.0)) throw domain_error("T must satisfy T > 0");

    const SeriesCoeffs series = series_coeffs(theta, c);
    const Implicit f{theta, c, T};
    const double border = series.a_coeffs[0];

    // Initializer: two-term series; if it leaves the domain (small T), start
    // from a fixed fraction of the way to the border instead.
    double init = series.a_truncated(T, 2);
    const EffectiveDomain dom = effective_domain(theta, c);
    const bool inward_negative = series.a_coeffs.size() > 1 && series.a_coeffs[1] < 0.0;
    if (!dom.contains(init) || !f.in_q(init)) {
        const double anchor = std::isfinite(dom.lower) ? dom.lower : border - std::max(1.0, std::abs(border));
        init = border + 0.25 * ((regime == RegimeCase::StableInner ? anchor : anchor) - border);
        if (regime == RegimeCase::StableInner) init = border;  // interior point is always valid
    }

    // Bracket the root. For border regimes walk inward from the border until
    // the sign of F flips; F is continuous on the closed domain (no logs).
    double lo = 0.0, hi = 0.0;
    const double f_border = f.value(border);
    if (regime == RegimeCase::StableInner) {
        double step = std::max(std::abs(init - border), 1e-3 * std::max(1.0, std::abs(border))) + 1.0 / T;
        lo = init;
        double fl = f.value(lo);
        double a = init, b = init;
        bool found = false;
        for (int i = 0; i < 60 && !found; ++i) {
            a = init - step;
            b = init + step;
            if (f.in_q(a) && f.value(a) * fl <= 0.0) { lo = a; hi = init; found = true; }
            else if (f.in_q(b) && dom.contains(b) && f.value(b) * fl <= 0.0) { lo = init; hi = b; found = true; }
            step *= 2.0;
        }
        if (!found) {
            throw solver_error("saddle-unresolved: no sign change around the interior initializer");
        }
    } else {
        const double inward = inward_negative ? -1.0 : 1.0;
        const double other_end = inward < 0 ? dom.lower : dom.upper;
        const double max_d =
            std::isfinite(other_end) ? 0.999 * std::abs(other_end - border)
                                     : 64.0 * (std::abs(init - border) + 1.0);
        double d = std::abs(init - border);
        if (d <= 0.0) d = 0.5 / T;
        bool found = false;
        double x = border;
        while (d <= max_d) {
            x = border + inward * d;
            if (f.in_q(x) && dom.contains(x) && f.value(x) * f_border < 0.0) {
                found = true;
                break;
            }
            d *= 2.0;
        }
        if (!found) {
            // geometric walk missed it; scan outward from the border
            for (int k = 1; k <= 256 && !found; ++k) {
                x = border + inward * max_d * k / 256.0;
                if (f.in_q(x) && dom.contains(x) && f.value(x) * f_border < 0.0) found = true;
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "saddle-unresolved: no sign change inward of the border " << border
               << " (theta=" << theta << ", c=" << c << ", T=" << T
               << "; T may be too small for the saddle to exist)";
            throw solver_error(os.str());
        }
        lo = x;
        hi = border;
    }

    if (lo > hi) std::swap(lo, hi);
    double flo = f.value(lo);

    // Safeguarded Newton: bisect whenever the step leaves the bracket.
    double a = std::clamp(init, lo, hi);
    if (!(a > lo && a < hi)) a = 0.5 * (lo + hi);
    int iterations = 0;
    for (; iterations < 200; ++iterations) {
        const double fa = f.value(a);
        if (fa == 0.0) break;
        if ((fa < 0.0) == (flo < 0.0)) lo = a; else hi = a;
        const double da = fa / f.derivative(a);
        double next = a - da;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::abs(next - a) <= 1e-16 * std::max(1.0, std::abs(a))) { a = next; break; }
        a = next;
        if (std::abs(f.normalized(a)) < 1e-15 && hi - lo < 1e-9 * std::max(1.0, std::abs(a))) break;
    }

    const double residual = f.normalized(a);
    if (!(std::abs(residual) < 1e-12)) {
        std::ostringstream os;
        os << "saddle-unresolved: residual " << residual << " at a = " << a << " (theta=" << theta
           << ", c=" << c << ", T=" << T << ", iterations=" << iterations << ")";
        throw solver_error(os.str());
    }
    const double phi_at = -std::sqrt(theta * theta + 2.0 * a * c);
    return {a, phi_at, residual, iterations, regime};
}

}  // namespace ousldp
