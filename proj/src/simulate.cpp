#include "ousldp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "ousldp/cgf.hpp"
#include "ousldp/errors.hpp"
#include "ousldp/rng.hpp"
#include "ousldp/saddle.hpp"

namespace ousldp {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

int resolve_threads(const McConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("OUSLDP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void validate_mc_args(double T, std::int64_t n_paths, int n_steps) {
    if (!(T > 0.0)) throw domain_error("T must satisfy T > 0");
    if (n_paths < 1) throw domain_error("n_paths must be >= 1");
    if (n_steps < 1) throw domain_error("n_steps must be >= 1");
}

// Per-path accumulator (x_i = w_i * indicator) reduced chunk by chunk in a
// fixed order so results are bit-identical for any thread count.
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_weight = 0.0;

    void add(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        sum_weight += o.sum_weight;
    }
};

template <class PathFn>
Moments run_chunked(std::int64_t n_paths, const McConfig& cfg, const PathFn& one_path) {
    const int threads = resolve_threads(cfg);
    const std::int64_t chunk =
        cfg.deterministic ? std::max<std::int64_t>(1, (n_paths + 1023) / 1024)
                          : std::max<std::int64_t>(1, n_paths / (4 * threads) + 1);
    const std::int64_t n_chunks = (n_paths + chunk - 1) / chunk;

    std::vector<Moments> partial(static_cast<size_t>(n_chunks));
    std::atomic<std::int64_t> next_chunk{0};

    auto worker = [&] {
        for (;;) {
            const std::int64_t k = next_chunk.fetch_add(1);
            if (k >= n_chunks) break;
            Moments m;
            const std::int64_t lo = k * chunk;
            const std::int64_t hi = std::min(n_paths, lo + chunk);
            for (std::int64_t i = lo; i < hi; ++i) {
                const double x = one_path(static_cast<std::uint64_t>(i), m);
                m.sum += x;
                m.sum_sq += x * x;
            }
            partial[static_cast<size_t>(k)] = m;
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    Moments total;
    for (const Moments& m : partial) total.add(m);  // fixed chunk order
    return total;
}

McEstimate finalize(const Moments& m, std::int64_t n, McMethod method,
                    std::optional<double> tilt_a, std::optional<double> drift) {
    const double mean = m.sum / static_cast<double>(n);
    double var = 0.0;
    if (n > 1) {
        var = (m.sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        var = std::max(var, 0.0);
    }
    const double se = std::sqrt(var / static_cast<double>(n));
    return {mean, se, n, method, tilt_a, drift, m.sum_weight / static_cast<double>(n)};
}

bool on_side(double z, TailSide side) {
    return side == TailSide::UpperTail ? z >= 0.0 : z <= 0.0;
}

}  // namespace

int default_n_steps(double T) { return std::max(1000, static_cast<int>(200.0 * T)); }

Path simulate_path(double theta, double T, int n_steps, std::uint64_t seed) {
    const ModelSpec model(theta, T);  // validates theta finite, T > 0
    validate_mc_args(model.horizon, 1, n_steps);
    const double dt = T / n_steps;
    const double decay = std::exp(theta * dt);
    const double sd = std::sqrt(ou_variance(theta, dt));

    Path path;
    path.theta_used = theta;
    path.times.resize(static_cast<size_t>(n_steps) + 1);
    path.values.resize(static_cast<size_t>(n_steps) + 1);
    Rng rng = Rng::for_path(seed, 0);

    path.times[0] = 0.0;
    path.values[0] = 0.0;
    double x = 0.0;
    for (int k = 1; k <= n_steps; ++k) {
        x = decay * x + sd * rng.normal();
        path.times[static_cast<size_t>(k)] = k == n_steps ? T : k * dt;
        path.values[static_cast<size_t>(k)] = x;
    }
    return path;
}

double mle_estimate(const Path& path) {
    const size_t n = path.values.size();
    if (n < 2 || path.times.size() != n) throw domain_error("path must hold at least two points");
    double integral = 0.0;
    for (size_t k = 1; k < n; ++k) {
        const double dt = path.times[k] - path.times[k - 1];
        integral += 0.5 * (path.values[k - 1] * path.values[k - 1] +
                           path.values[k] * path.values[k]) * dt;
    }
    if (!(integral > 0.0)) throw domain_error("integral of X^2 must be positive");
    const double T = path.times.back();
    const double x_T = path.values.back();
    return (x_T * x_T - T) / (2.0 * integral);
}

double z_statistic(const Path& path, double c) {
    const size_t n = path.values.size();
    if (n < 2 || path.times.size() != n) throw domain_error("path must hold at least two points");
    double integral = 0.0;
    for (size_t k = 1; k < n; ++k) {
        const double dt = path.times[k] - path.times[k - 1];
        integral += 0.5 * (path.values[k - 1] * path.values[k - 1] +
                           path.values[k] * path.values[k]) * dt;
    }
    const double T = path.times.back();
    const double x_T = path.values.back();
    return 0.5 * (x_T * x_T - T) - c * integral;
}

double default_tilt(double theta, double c, double T) {
    const RegimeCase regime = classify_case(theta, c);
    switch (regime) {
        case RegimeCase::StableLeft:
        case RegimeCase::ExplosiveLeft:
        case RegimeCase::UnstableLeft:
            return (c * c - theta * theta) / (2.0 * c);
        default:
            if (has_saddle(regime)) return solve_saddle(theta, c, T).a_T;
            throw no_expansion_error("no default tilt for this regime (c = 0 or c = theta)");
    }
}

McEstimate plain_mc_tail(double theta, double c, double T, std::int64_t n_paths, int n_steps,
                         std::uint64_t seed, TailSide side, const McConfig& cfg) {
    validate_mc_args(T, n_paths, n_steps);
    const double dt = T / n_steps;
    const double decay = std::exp(theta * dt);
    const double sd = std::sqrt(ou_variance(theta, dt));

    auto one_path = [&](std::uint64_t i, Moments& m) -> double {
        Rng rng = Rng::for_path(seed, i);
        double x = 0.0;
        double integral = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            const double x2 = x * x;
            x = decay * x + sd * rng.normal();
            integral += 0.5 * (x2 + x * x) * dt;
        }
        const double z = 0.5 * (x * x - T) - c * integral;
        m.sum_weight += 1.0;
        return on_side(z, side) ? 1.0 : 0.0;
    };

    const Moments m = run_chunked(n_paths, cfg, one_path);
    McEstimate est = finalize(m, n_paths, McMethod::Plain, std::nullopt, std::nullopt);
    // binomial standard error for the plain estimator
    est.std_error = std::sqrt(std::max(est.estimate * (1.0 - est.estimate), 0.0) /
                              static_cast<double>(n_paths));
    return est;
}

McEstimate tilted_mc_tail(double theta, double c, double T, double a_tilt,
                          std::int64_t n_paths, int n_steps, std::uint64_t seed, TailSide side,
                          const McConfig& cfg) {
    validate_mc_args(T, n_paths, n_steps);
    const CgfParts parts = cgf_parts(theta, c, a_tilt);
    const double phi = parts.phi;
    if (std::abs(phi - theta) < 1e-8) {
        // degenerate tilt: the proposal law coincides with the model
        McEstimate est = plain_mc_tail(theta, c, T, n_paths, n_steps, seed, side, cfg);
        est.method = McMethod::Tilted;
        est.tilt_a = a_tilt;
        est.proposal_drift = phi;
        return est;
    }

    const double log_at = T * cgf_exact(theta, c, a_tilt, T);  // T L_T(a)
    const double sigma_sq = ou_variance(phi, T);
    const double denom = 1.0 - parts.tau * sigma_sq;
    if (!(denom > 0.0)) {
        throw domain_error("1 - tau(a) sigma_T^2(phi) <= 0: a_tilt outside the finite-T domain");
    }
    const double endpoint_sd = std::sqrt(sigma_sq / denom);

    // Bridge coefficients per step: X_{k+1} | X_k = x, X_T = y is Gaussian with
    // mean coef_x * x + coef_y * y and deviation sdev (OU(phi) pinned at T).
    const double dt = T / n_steps;
    const double a1 = std::exp(phi * dt);
    const double v1 = ou_variance(phi, dt);
    std::vector<double> coef_x(static_cast<size_t>(n_steps)), coef_y(static_cast<size_t>(n_steps)),
        sdev(static_cast<size_t>(n_steps));
    for (int k = 0; k < n_steps; ++k) {
        const double rem = T - (k + 1) * dt;  // time left after the step
        if (k == n_steps - 1) {
            coef_x[static_cast<size_t>(k)] = 0.0;
            coef_y[static_cast<size_t>(k)] = 1.0;
            sdev[static_cast<size_t>(k)] = 0.0;
            continue;
        }
        const double a2 = std::exp(phi * rem);
        const double v2 = ou_variance(phi, rem);
        const double den = v2 + a2 * a2 * v1;
        coef_x[static_cast<size_t>(k)] = a1 * v2 / den;
        coef_y[static_cast<size_t>(k)] = a2 * v1 / den;
        sdev[static_cast<size_t>(k)] = std::sqrt(v1 * v2 / den);
    }

    auto one_path = [&](std::uint64_t i, Moments& m) -> double {
        Rng rng = Rng::for_path(seed, i);
        const double y = endpoint_sd * rng.normal();
        double x = 0.0;
        double integral = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            const double x2 = x * x;
            x = coef_x[static_cast<size_t>(k)] * x + coef_y[static_cast<size_t>(k)] * y +
                sdev[static_cast<size_t>(k)] * rng.normal();
            integral += 0.5 * (x2 + x * x) * dt;
        }
        const double z = 0.5 * (y * y - T) - c * integral;
        const double log_w = -a_tilt * z + log_at;
        if (std::isnan(log_w)) throw solver_error("NaN importance weight");
        const double w = std::exp(std::min(log_w, 700.0));
        m.sum_weight += w;
        return on_side(z, side) ? w : 0.0;
    };

    const Moments m = run_chunked(n_paths, cfg, one_path);
    return finalize(m, n_paths, McMethod::Tilted, a_tilt, phi);
}

namespace {

// thetahat over n_paths independent paths, one value per path
std::vector<double> sample_mle(double theta, double T, std::int64_t n_paths, int n_steps,
                               std::uint64_t seed, const McConfig& cfg) {
    const double dt = T / n_steps;
    const double decay = std::exp(theta * dt);
    const double sd = std::sqrt(ou_variance(theta, dt));
    std::vector<double> out(static_cast<size_t>(n_paths));

    const int threads = resolve_threads(cfg);
    std::atomic<std::int64_t> next{0};
    const std::int64_t chunk = std::max<std::int64_t>(1, n_paths / (8 * threads) + 1);
    auto worker = [&] {
        for (;;) {
            const std::int64_t lo = next.fetch_add(chunk);
            if (lo >= n_paths) break;
            const std::int64_t hi = std::min(n_paths, lo + chunk);
            for (std::int64_t i = lo; i < hi; ++i) {
                Rng rng = Rng::for_path(seed, static_cast<std::uint64_t>(i));
                double x = 0.0, integral = 0.0;
                for (int k = 0; k < n_steps; ++k) {
                    const double x2 = x * x;
                    x = decay * x + sd * rng.normal();
                    integral += 0.5 * (x2 + x * x) * dt;
                }
                out[static_cast<size_t>(i)] = (x * x - T) / (2.0 * integral);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

double ks_against_normal(std::vector<double> sample, double sd) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i] / sd);
        ks = std::max(ks, std::max((i + 1) / n - f, f - i / n));
    }
    return ks;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double ks = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        ks = std::max(ks, std::abs(fa - fb));
    }
    return ks;
}

double quantile(std::vector<double>& sorted, double p) {
    const double idx = p * (sorted.size() - 1);
    const size_t lo = static_cast<size_t>(idx);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = idx - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

LimitLawReport limit_law_diagnostics(double theta, double T, std::int64_t n_paths, int n_steps,
                                     std::uint64_t seed, const McConfig& cfg) {
    validate_mc_args(T, n_paths, n_steps);
    LimitLawReport report{theta, T, n_paths, {}, {}, {}, {}, {}};

    if (theta < -kBoundaryTol) {
        // sqrt(T)(thetahat - theta) against N(0, -2 theta)
        std::vector<double> s = sample_mle(theta, T, n_paths, n_steps, seed, cfg);
        for (double& v : s) v = std::sqrt(T) * (v - theta);
        report.ks_distance = ks_against_normal(std::move(s), std::sqrt(-2.0 * theta));
    } else if (theta > kBoundaryTol) {
        // e^{theta T}(thetahat - theta)/(2 theta) against the standard Cauchy
        std::vector<double> s = sample_mle(theta, T, n_paths, n_steps, seed, cfg);
        for (double& v : s) v = std::exp(theta * T) * (v - theta) / (2.0 * theta);
        std::sort(s.begin(), s.end());
        report.quartile_low = quantile(s, 0.25);
        report.quartile_high = quantile(s, 0.75);
    } else {
        // T thetahat_T against the T = 1 fine-grid simulation of the limit law
        std::vector<double> s = sample_mle(0.0, T, n_paths, n_steps, seed, cfg);
        for (double& v : s) v *= T;
        std::vector<double> ref =
            sample_mle(0.0, 1.0, n_paths, std::max(2000, n_steps), seed ^ 0x5bf0'3ea5ULL, cfg);
        report.two_sample_ks = two_sample_ks(std::move(s), std::move(ref));
        report.two_sample_threshold_1pct =
            1.628 * std::sqrt(2.0 / static_cast<double>(n_paths));
    }
    return report;
}

void dump_path_csv(const Path& path, std::uint64_t seed, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw solver_error("cannot open " + filename + " for writing");
    out << "# theta=" << path.theta_used << ",T=" << path.times.back() << ",seed=" << seed
        << "\n";
    out << "time,value\n";
    char buf[64];
    for (size_t i = 0; i < path.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.times[i], path.values[i]);
        out << buf;
    }
}

}  // namespace ousldp
