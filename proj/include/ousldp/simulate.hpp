#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ousldp/model.hpp"

namespace ousldp {

// One simulated trajectory on a uniform grid 0 = t_0 < ... < t_n = T.
struct Path {
    std::vector<double> times;
    std::vector<double> values;
    double theta_used;
};

enum class McMethod { Plain, Tilted };

struct McEstimate {
    double estimate;
    double std_error;
    std::int64_t n_paths;
    McMethod method;
    std::optional<double> tilt_a;
    std::optional<double> proposal_drift;  // phi(a)
    double mean_weight = 1.0;              // importance weights average (~1)
};

struct McConfig {
    int threads = 0;             // 0: OUSLDP_THREADS env var, else hardware
    bool deterministic = true;   // fixed chunked reduction order
};

// Exact transition sampling X_{t+dt} = e^{theta dt} X_t + eps,
// eps ~ N(0, (e^{2 theta dt}-1)/(2 theta)); no discretization bias in the
// marginal law of the grid values.
Path simulate_path(double theta, double T, int n_steps, std::uint64_t seed);

// (X_T^2 - T) / (2 \int X^2 dt): exact Ito numerator, trapezoid integral.
double mle_estimate(const Path& path);

// Z_T(c) = (X_T^2 - T)/2 - c \int X^2 dt on the path's grid.
double z_statistic(const Path& path, double c);

int default_n_steps(double T);

// Default tilt of the change of measure: a_c for the fixed-tilt regimes,
// the saddle a_T otherwise.
double default_tilt(double theta, double c, double T);

McEstimate plain_mc_tail(double theta, double c, double T, std::int64_t n_paths, int n_steps,
                         std::uint64_t seed, TailSide side, const McConfig& cfg = {});

// Importance sampling under the exact tilted measure P_T: OU(phi(a)) bridge
// with endpoint X_T ~ N(0, sigma_T^2/(1 - tau sigma_T^2)), weights
// exp(-a Z_T(c) + T L_T(a)). Falls back to plain MC when phi(a) ~= theta.
McEstimate tilted_mc_tail(double theta, double c, double T, double a_tilt,
                          std::int64_t n_paths, int n_steps, std::uint64_t seed, TailSide side,
                          const McConfig& cfg = {});

struct LimitLawReport {
    double theta;
    double T;
    std::int64_t n_paths;
    // stable: KS distance of sqrt(T)(thetahat - theta) against N(0, -2 theta)
    std::optional<double> ks_distance;
    // explosive: quartiles of e^{theta T}(thetahat - theta)/(2 theta) vs +-1
    std::optional<double> quartile_low;
    std::optional<double> quartile_high;
    // unstable: two-sample KS of T thetahat_T against the simulated limit
    std::optional<double> two_sample_ks;
    std::optional<double> two_sample_threshold_1pct;
};

LimitLawReport limit_law_diagnostics(double theta, double T, std::int64_t n_paths, int n_steps,
                                     std::uint64_t seed, const McConfig& cfg = {});

// One CSV per run: comment header with theta, T, seed, then time,value rows.
void dump_path_csv(const Path& path, std::uint64_t seed, const std::string& filename);

}  // namespace ousldp
