#pragma once

#include <limits>
#include <string_view>

namespace ousldp {

// Absolute tolerance used to snap a threshold onto the regime boundaries
// c = theta, c = -theta, c = theta/3, c = 0 (and theta onto 0). The branch
// formulas are singular exactly at these points, so a documented snap rule
// beats silent cancellation.
inline constexpr double kBoundaryTol = 1e-12;

// Ornstein-Uhlenbeck model dX_t = theta X_t dt + dB_t, X_0 = 0, observed on [0, T].
struct ModelSpec {
    double theta;
    double horizon;

    ModelSpec(double theta_, double horizon_);
};

// Which asymptotic branch applies to a pair (theta, c). Drives all dispatch.
enum class RegimeCase {
    StableLeft,         // theta < 0, c < theta
    StableInner,        // theta < 0, theta < c < theta/3
    StableRight,        // theta < 0, c > theta/3, c != 0
    StableCritical,     // theta < 0, c = theta/3
    StableZero,         // theta < 0, c = 0
    ExplosiveLeft,      // theta > 0, c < -theta
    ExplosiveRight,     // theta > 0, c > theta
    ExplosiveValley,    // theta > 0, |c| < theta, c != 0
    ExplosiveCritical,  // theta > 0, c = -theta
    ExplosiveZero,      // theta > 0, c = 0
    ExplosiveAtTheta,   // theta > 0, c = theta (rate 0, no expansion)
    UnstableLeft,       // theta = 0, c < 0
    UnstableRight,      // theta = 0, c > 0
    UnstableZero,       // theta = 0, c = 0
};

std::string_view to_string(RegimeCase regime);

// The tail each branch estimates: LowerTail for P(thetahat_T <= c) branches,
// UpperTail for P(thetahat_T >= c) branches.
enum class TailSide { LowerTail, UpperTail };

std::string_view to_string(TailSide side);

TailSide side_for(RegimeCase regime);

// Open interval; `lower` may be -infinity, `upper` is finite.
struct EffectiveDomain {
    double lower;
    double upper;

    bool contains(double a) const { return a > lower && a < upper; }
};

// Unique tag whose defining inequalities hold, boundaries resolved within
// kBoundaryTol. Total over finite inputs.
RegimeCase classify_case(double theta, double c);

// Large-deviation rate function I(c), piecewise per regime. I(theta) = 0;
// for theta > 0 the function has a jump of size exactly theta at c = theta.
double rate_function(double theta, double c);

// Effective domain Delta_c = { a : theta^2 + 2ac > 0, a + theta < sqrt(theta^2 + 2ac) }
// of the limit CGF, as closed-form endpoints. c = 0 has no CGF route and is
// reported as a domain error (the tail is handled by the exact Gaussian path).
EffectiveDomain effective_domain(double theta, double c);

// Conservative finite-T domain
//   Delta~_{T,c} = { a : theta^2 + 2ac > 0, a + theta < sqrt(theta^2+2ac) coth(T sqrt(theta^2+2ac)) },
// bracketing the transcendental boundary by bisection to 1e-12. Always
// contains Delta_c.
EffectiveDomain finite_T_domain(double theta, double c, double T);

// Defining inequalities, directly assertable on sampled points.
bool in_limit_domain(double theta, double c, double a);
bool in_finite_T_domain(double theta, double c, double T, double a);

}  // namespace ousldp
