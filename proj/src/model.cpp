#include "ousldp/model.hpp"

#include <cmath>
#include <string>

#include "ousldp/errors.hpp"

namespace ousldp {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw domain_error(std::string(name) + " must be finite");
    }
}

double coth_scaled(double s, double T) {
    // s * coth(s*T); -> 1/T as s -> 0.
    return s / std::tanh(s * T);
}

}  // namespace

ModelSpec::ModelSpec(double theta_, double horizon_) : theta(theta_), horizon(horizon_) {
    require_finite(theta, "theta");
    require_finite(horizon, "horizon");
    if (horizon <= 0.0) throw domain_error("horizon must satisfy T > 0");
}

std::string_view to_string(RegimeCase regime) {
    switch (regime) {
        case RegimeCase::StableLeft: return "StableLeft";
        case RegimeCase::StableInner: return "StableInner";
        case RegimeCase::StableRight: return "StableRight";
        case RegimeCase::StableCritical: return "StableCritical";
        case RegimeCase::StableZero: return "StableZero";
        case RegimeCase::ExplosiveLeft: return "ExplosiveLeft";
        case RegimeCase::ExplosiveRight: return "ExplosiveRight";
        case RegimeCase::ExplosiveValley: return "ExplosiveValley";
        case RegimeCase::ExplosiveCritical: return "ExplosiveCritical";
        case RegimeCase::ExplosiveZero: return "ExplosiveZero";
        case RegimeCase::ExplosiveAtTheta: return "ExplosiveAtTheta";
        case RegimeCase::UnstableLeft: return "UnstableLeft";
        case RegimeCase::UnstableRight: return "UnstableRight";
        case RegimeCase::UnstableZero: return "UnstableZero";
    }
    return "?";
}

std::string_view to_string(TailSide side) {
    return side == TailSide::LowerTail ? "LowerTail" : "UpperTail";
}

TailSide side_for(RegimeCase regime) {
    switch (regime) {
        case RegimeCase::StableLeft:
        case RegimeCase::ExplosiveLeft:
        case RegimeCase::ExplosiveValley:
        case RegimeCase::ExplosiveCritical:
        case RegimeCase::ExplosiveZero:
        case RegimeCase::UnstableLeft:
        case RegimeCase::UnstableZero:
            return TailSide::LowerTail;
        case RegimeCase::StableInner:
        case RegimeCase::StableRight:
        case RegimeCase::StableCritical:
        case RegimeCase::StableZero:
        case RegimeCase::ExplosiveRight:
        case RegimeCase::UnstableRight:
        case RegimeCase::ExplosiveAtTheta:
            return TailSide::UpperTail;
    }
    throw domain_error("unreachable regime");
}

RegimeCase classify_case(double theta, double c) {
    require_finite(theta, "theta");
    require_finite(c, "c");

    if (std::abs(theta) <= kBoundaryTol) {
        if (std::abs(c) <= kBoundaryTol) return RegimeCase::UnstableZero;
        return c < 0.0 ? RegimeCase::UnstableLeft : RegimeCase::UnstableRight;
    }
    if (theta > 0.0) {
        if (std::abs(c) <= kBoundaryTol) return RegimeCase::ExplosiveZero;
        if (std::abs(c - theta) <= kBoundaryTol) return RegimeCase::ExplosiveAtTheta;
        if (std::abs(c + theta) <= kBoundaryTol) return RegimeCase::ExplosiveCritical;
        if (c < -theta) return RegimeCase::ExplosiveLeft;
        if (c > theta) return RegimeCase::ExplosiveRight;
        return RegimeCase::ExplosiveValley;
    }
    // theta < 0
    if (std::abs(c) <= kBoundaryTol) return RegimeCase::StableZero;
    if (std::abs(c - theta / 3.0) <= kBoundaryTol) return RegimeCase::StableCritical;
    if (c < theta) return RegimeCase::StableLeft;
    if (c < theta / 3.0) return RegimeCase::StableInner;
    return RegimeCase::StableRight;
}

double rate_function(double theta, double c) {
    switch (classify_case(theta, c)) {
        case RegimeCase::StableLeft:
        case RegimeCase::StableInner:
        case RegimeCase::ExplosiveLeft:
            return -(c - theta) * (c - theta) / (4.0 * c);
        case RegimeCase::StableRight:
        case RegimeCase::StableCritical:
        case RegimeCase::ExplosiveRight:
            return 2.0 * c - theta;
        case RegimeCase::StableZero:
            return -theta;
        case RegimeCase::ExplosiveValley:
        case RegimeCase::ExplosiveCritical:
        case RegimeCase::ExplosiveZero:
            return theta;
        case RegimeCase::ExplosiveAtTheta:
        case RegimeCase::UnstableZero:
            return 0.0;
        case RegimeCase::UnstableLeft:
            return -c / 4.0;
        case RegimeCase::UnstableRight:
            return 2.0 * c;
    }
    throw domain_error("unreachable regime");
}

EffectiveDomain effective_domain(double theta, double c) {
    const RegimeCase regime = classify_case(theta, c);
    constexpr double inf = std::numeric_limits<double>::infinity();

    switch (regime) {
        case RegimeCase::StableZero:
        case RegimeCase::ExplosiveZero:
        case RegimeCase::UnstableZero:
            throw domain_error(
                "c = 0: the effective domain degenerates; the tail is handled by the "
                "exact Gaussian path, not the CGF path");
        case RegimeCase::ExplosiveAtTheta:
            throw no_expansion_error("c = theta with theta > 0: effective domain is empty");
        default:
            break;
    }

    if (std::abs(theta) <= kBoundaryTol) {
        // theta = 0: ]-inf, 0[ for c < 0, ]0, 2c[ for c > 0
        if (c < 0.0) return {-inf, 0.0};
        return {0.0, 2.0 * c};
    }
    if (theta > 0.0) {
        if (c < 0.0) return {-inf, 0.0};
        if (c > theta) return {0.0, 2.0 * (c - theta)};
        // 0 < c < theta
        if (c <= theta / 2.0) return {-theta * theta / (2.0 * c), 0.0};
        return {2.0 * (c - theta), 0.0};
    }
    // theta < 0: same set formula extended below theta >= 0 (see Open Questions);
    // endpoints derived from the defining inequalities and property-tested.
    if (c < 0.0) {
        if (c < theta / 2.0) return {-inf, -theta * theta / (2.0 * c)};
        return {-inf, 2.0 * (c - theta)};
    }
    return {-theta * theta / (2.0 * c), 2.0 * (c - theta)};
}

bool in_limit_domain(double theta, double c, double a) {
    const double q = theta * theta + 2.0 * a * c;
    if (!(q > 0.0)) return false;
    return a + theta < std::sqrt(q);
}

bool in_finite_T_domain(double theta, double c, double T, double a) {
    const double q = theta * theta + 2.0 * a * c;
    if (!(q > 0.0)) return false;
    return a + theta < coth_scaled(std::sqrt(q), T);
}

EffectiveDomain finite_T_domain(double theta, double c, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw domain_error("T must satisfy 0 < T < inf");
    const EffectiveDomain base = effective_domain(theta, c);

    auto pred = [&](double a) { return in_finite_T_domain(theta, c, T, a); };

    // Push a finite endpoint of Delta_c outward to the finite-T boundary. The
    // slack beyond Delta_c shrinks like exp(-2 s(e) T), so the first probe
    // distance is found by geometric shrinking; `wall` caps the expansion at
    // the theta^2 + 2ac = 0 line when it lies on that side.
    auto push = [&](double e, double direction, double wall) -> double {
        const double scale = std::max(1.0, std::abs(e));
        double step = scale * 1e-3;
        if (std::isfinite(wall)) step = std::min(step, 0.45 * std::abs(wall - e));
        while (step > scale * 1e-18 && !pred(e + direction * step)) step *= 0.25;
        if (step <= scale * 1e-18) {
            // hard sqrt wall, or slack below double resolution
            return e;
        }
        double inside = e + direction * step;
        double probe = inside;
        for (int i = 0; i < 200; ++i) {
            probe = inside + direction * step;
            if (std::isfinite(wall) &&
                (direction > 0 ? probe >= wall : probe <= wall)) {
                probe = wall;
                break;
            }
            if (!pred(probe)) break;
            inside = probe;
            step *= 2.0;
        }
        double lo = inside, hi = probe;  // pred(lo) true, pred(hi) false (or hi == wall)
        for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
            const double mid = 0.5 * (lo + hi);
            (pred(mid) ? lo : hi) = mid;
        }
        return lo;
    };

    // Position of the theta^2 + 2ac = 0 wall relative to each endpoint.
    const double q_wall = -theta * theta / (2.0 * c);  // s = 0 line
    constexpr double inf = std::numeric_limits<double>::infinity();

    double lower = base.lower;
    if (std::isfinite(base.lower)) {
        const double wall = (c > 0.0) ? q_wall : -inf;  // for c > 0, q > 0 requires a > q_wall
        lower = push(base.lower, -1.0, wall);
    }
    const double wall_up = (c < 0.0) ? q_wall : inf;  // for c < 0, q > 0 requires a < q_wall
    double upper = push(base.upper, +1.0, wall_up);

    return {lower, upper};
}

}  // namespace ousldp
