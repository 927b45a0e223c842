#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ousldp/cgf.hpp"
#include "ousldp/errors.hpp"
#include "ousldp/model.hpp"
#include "ousldp/saddle.hpp"

using namespace ousldp;

namespace {

double loglog_slope(const std::vector<double>& T, const std::vector<double>& err) {
    // least-squares slope of log err against log T
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(T.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(T[i]);
        const double y = std::log(err[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("closed-form series coefficients") {
    const SeriesCoeffs r = series_coeffs(1.0, 2.0);
    CHECK(r.scale == SeriesScale::InverseT);
    CHECK(r.a_coeffs[0] == 2.0);
    CHECK(r.a_coeffs[1] == doctest::Approx(-3.0 / 5.0).epsilon(1e-15));
    CHECK(r.a_coeffs[2] == doctest::Approx(-2.0 * (4.0 - 10.0 + 2.0) / (2.0 * 1.0 * 125.0)).epsilon(1e-15));
    CHECK(r.phi_coeffs[0] == -3.0);
    CHECK(r.phi_coeffs[1] == doctest::Approx(0.4).epsilon(1e-15));

    const SeriesCoeffs v = series_coeffs(1.0, 0.5);
    CHECK(v.a_coeffs[0] == 0.0);
    CHECK(v.a_coeffs[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(v.phi_coeffs[0] == -1.0);
    CHECK(v.phi_coeffs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const SeriesCoeffs k = series_coeffs(4.0, -4.0);
    CHECK(k.scale == SeriesScale::InverseSqrtT);
    CHECK(k.a_coeffs[1] == -2.0);
    CHECK(k.a_coeffs[2] == -0.125);
    CHECK(k.phi_coeffs[2] == 0.375);

    CHECK_THROWS_AS(series_coeffs(1.0, -2.0), no_expansion_error);  // fixed-tilt regime
    CHECK_THROWS_AS(series_coeffs(1.0, 0.0), no_expansion_error);
}

TEST_CASE("link relations between a_k and phi_k") {
    // a_0 = (phi_0^2 - theta^2)/(2c), a_1 = phi_0 phi_1 / c,
    // a_2 = (2 phi_0 phi_2 + phi_1^2)/(2c)
    for (double theta : {-1.0, 0.0, 0.7, 1.0}) {
        for (double c : {0.4, 2.0, 3.5}) {
            if (!has_saddle(classify_case(theta, c))) continue;
            const SeriesCoeffs s = series_coeffs(theta, c);
            if (s.scale != SeriesScale::InverseT) continue;
            const auto& a = s.a_coeffs;
            const auto& p = s.phi_coeffs;
            CHECK(a[0] == doctest::Approx((p[0] * p[0] - theta * theta) / (2 * c)).epsilon(1e-13));
            CHECK(a[1] == doctest::Approx(p[0] * p[1] / c).epsilon(1e-13));
            if (a.size() > 2) {
                CHECK(a[2] ==
                      doctest::Approx((2 * p[0] * p[2] + p[1] * p[1]) / (2 * c)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("solver contract: residual, domain membership, phi sign") {
    for (double theta : {-1.0, 0.0, 1.0}) {
        for (double c : {-1.0, -0.6, 0.5, 2.0}) {
            const RegimeCase regime = classify_case(theta, c);
            if (!has_saddle(regime)) continue;
            for (double T : {5.0, 20.0, 100.0}) {
                const SaddleSolution s = solve_saddle(theta, c, T);
                CAPTURE(theta); CAPTURE(c); CAPTURE(T);
                CHECK(std::abs(s.residual) < 1e-12);
                CHECK(in_finite_T_domain(theta, c, T, s.a_T));
                CHECK(s.phi_at < 0.0);
                CHECK(s.phi_at ==
                      doctest::Approx(-std::sqrt(theta * theta + 2 * s.a_T * c)).epsilon(1e-14));
                // solving the original form L' + H'/T = 0 as well
                const CgfDerivatives d = cgf_derivatives(theta, c, s.a_T);
                CHECK(std::abs(d.dL + *d.dH / T) < 1e-9 * std::max(1.0, std::abs(d.dL)));
            }
        }
    }
}

TEST_CASE("no saddle outside the supported regimes") {
    CHECK_THROWS_AS(solve_saddle(1.0, -2.0, 10.0), no_expansion_error);
    CHECK_THROWS_AS(solve_saddle(-1.0, -2.0, 10.0), no_expansion_error);
    CHECK_THROWS_AS(solve_saddle(1.0, 1.0, 10.0), no_expansion_error);
}

TEST_CASE("solver matches the series at the nominal rates") {
    // |T(a_T - 2) + 3/5| = O(1/T) at (1,2): slope -1 +- 0.15
    {
        std::vector<double> Ts{50, 100, 200, 400}, errs;
        for (double T : Ts) {
            const SaddleSolution s = solve_saddle(1.0, 2.0, T);
            errs.push_back(std::abs(T * (s.a_T - 2.0) + 3.0 / 5.0));
        }
        CHECK(loglog_slope(Ts, errs) == doctest::Approx(-1.0).epsilon(0.15));
    }
    // sqrt(T) a_T -> -1 at (1,-1): slope -1/2 +- 0.15
    {
        std::vector<double> Ts{50, 100, 200, 400}, errs;
        for (double T : Ts) {
            const SaddleSolution s = solve_saddle(1.0, -1.0, T);
            errs.push_back(std::abs(std::sqrt(T) * s.a_T + 1.0));
        }
        CHECK(loglog_slope(Ts, errs) == doctest::Approx(-0.5).epsilon(0.15));
    }
}

TEST_CASE("series truncation error orders") {
    // with p kept terms in the InverseT scale, a_T - series = O(T^{-(p+1)})
    const SeriesCoeffs s = series_coeffs(1.0, 2.0);
    std::vector<double> Ts{50, 100, 200, 400};
    for (int terms : {2, 3}) {
        std::vector<double> errs;
        for (double T : Ts) {
            errs.push_back(std::abs(solve_saddle(1.0, 2.0, T).a_T - s.a_truncated(T, terms)));
        }
        CHECK(loglog_slope(Ts, errs) == doctest::Approx(-terms).epsilon(0.15));
    }
}

TEST_CASE("limit of T(phi(a_T) + a_T + theta)") {
    // T (phi(a_T) + a_T + theta) -> (c - theta)/(theta - 3c)
    const double theta = 1.0, c = 2.0;
    const double limit = (c - theta) / (theta - 3.0 * c);
    double prev = 1e9;
    for (double T : {50.0, 200.0, 800.0}) {
        const SaddleSolution s = solve_saddle(theta, c, T);
        const double v = T * (s.phi_at + s.a_T + theta);
        CHECK(std::abs(v - limit) < prev);
        prev = std::abs(v - limit);
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("stable-inner saddle sits near the interior critical point") {
    const double theta = -1.0, c = -0.5;
    const double a_c = (c * c - theta * theta) / (2.0 * c);
    for (double T : {10.0, 100.0}) {
        const SaddleSolution s = solve_saddle(theta, c, T);
        CHECK(std::abs(s.a_T - a_c) < 2.0 / T);
    }
    const SeriesCoeffs sc = series_coeffs(theta, c);
    CHECK(sc.a_coeffs[0] == doctest::Approx(a_c).epsilon(1e-15));
    // first-order agreement with the implicit-function coefficient
    const SaddleSolution s = solve_saddle(theta, c, 400.0);
    CHECK(400.0 * (s.a_T - a_c) == doctest::Approx(sc.a_coeffs[1]).epsilon(0.02));
}
