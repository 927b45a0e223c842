// Command-line surface: every computation in the library with machine-readable
// JSON/CSV output for tables and validation sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ousldp/cgf.hpp"
#include "ousldp/errors.hpp"
#include "ousldp/inversion.hpp"
#include "ousldp/model.hpp"
#include "ousldp/saddle.hpp"
#include "ousldp/simulate.hpp"
#include "ousldp/sldp.hpp"

using json = nlohmann::ordered_json;
using namespace ousldp;

namespace {

constexpr const char* kTool = "ousldp";
constexpr const char* kVersion = "1.0.0";

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// RFC-style CSV quoting
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

struct Output {
    std::string format = "json";
    std::string path;  // empty: stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
        } else {
            std::ofstream f(path);
            if (!f) throw solver_error("cannot open output file " + path);
            f << text;
            if (!text.empty() && text.back() != '\n') f << '\n';
        }
    }
};

json stamp() { return json{{"tool", kTool}, {"version", kVersion}}; }

// one-object report as a two-line CSV: flattened keys, then values at full
// precision
std::string object_to_csv(const json& j) {
    std::vector<std::pair<std::string, json>> flat;
    std::function<void(const std::string&, const json&)> walk =
        [&](const std::string& prefix, const json& node) {
            for (const auto& [key, value] : node.items()) {
                const std::string name = prefix.empty() ? key : prefix + "." + key;
                if (value.is_object()) {
                    walk(name, value);
                } else {
                    flat.emplace_back(name, value);
                }
            }
        };
    walk("", j);
    std::string header, row;
    for (size_t i = 0; i < flat.size(); ++i) {
        if (i) { header += ','; row += ','; }
        header += csv_field(flat[i].first);
        const json& v = flat[i].second;
        if (v.is_number_float()) row += g17(v.get<double>());
        else if (v.is_string()) row += csv_field(v.get<std::string>());
        else row += csv_field(v.dump());
    }
    return "# " + std::string(kTool) + " " + kVersion + "\n" + header + "\n" + row + "\n";
}

void emit(const Output& out, json report) {
    report["provenance"] = stamp();
    if (out.format == "csv") {
        out.write(object_to_csv(report));
    } else {
        out.write(report.dump(2));
    }
}

int emit_error(const Output& out, const std::string& reason, const std::string& message) {
    json report{{"error", message}, {"reason", reason}};
    report["provenance"] = stamp();
    out.write(report.dump(2));
    return 1;
}

json tail_to_json(const TailApproximation& t) {
    json j{{"regime", std::string(to_string(t.regime))},
           {"side", std::string(to_string(t.side))},
           {"rate", t.rate},
           {"prefactor_log", t.prefactor_log},
           {"corrections", t.corrections},
           {"order", t.order},
           {"probability", t.probability},
           {"raw_value", t.raw_value}};
    if (t.exact_value) j["exact_value"] = *t.exact_value;
    return j;
}

json inversion_to_json(const InversionResult& r) {
    return json{{"regime", std::string(to_string(r.regime))},
                {"side", std::string(to_string(r.side))},
                {"a_t_used", r.a_t_used},
                {"beta_used", r.beta_used},
                {"s_t_used", r.s_t_used},
                {"a_factor", r.a_factor},
                {"b_factor", r.b_factor},
                {"d_bound", r.d_bound},
                {"probability", r.probability},
                {"quadrature_error", r.quadrature_error}};
}

json mc_to_json(const McEstimate& e) {
    json j{{"estimate", e.estimate},
           {"std_error", e.std_error},
           {"n_paths", e.n_paths},
           {"method", e.method == McMethod::Plain ? "plain" : "tilted"},
           {"mean_weight", e.mean_weight}};
    if (e.tilt_a) j["tilt_a"] = *e.tilt_a;
    if (e.proposal_drift) j["proposal_drift"] = *e.proposal_drift;
    return j;
}

TailSide parse_side(const std::string& s, double theta, double c) {
    if (s == "lower") return TailSide::LowerTail;
    if (s == "upper") return TailSide::UpperTail;
    return side_for(classify_case(theta, c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharp large-deviation tails of the Ornstein-Uhlenbeck drift MLE"};
    app.require_subcommand(1);
    app.fallthrough();  // --format/--output may follow the subcommand arguments

    Output out;
    app.add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", out.path, "output file (default: stdout)");

    double theta = 0.0, c = 0.0, T = 10.0, a = 0.0, tilt_a = 0.0, s_sqrt = 30.0, s_linear = 25.0;
    int order = 0, n_steps = 0;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    std::string method = "tilted", side_str = "auto", dump_file;
    std::vector<double> theta_list, c_list, T_list;
    std::vector<std::string> method_list{"sldp", "oracle"};
    bool have_tilt = false;

    auto add_theta_c = [&](CLI::App* cmd, bool with_T) {
        cmd->add_option("--theta", theta, "drift parameter")->required();
        cmd->add_option("--c", c, "threshold")->required();
        if (with_T) cmd->add_option("--T", T, "horizon")->required();
    };

    CLI::App* rate = app.add_subcommand("rate", "regime and rate function I(c)");
    add_theta_c(rate, false);

    CLI::App* domain = app.add_subcommand("domain", "effective domain endpoints");
    add_theta_c(domain, false);
    domain->add_option("--T", T, "also report the finite-T domain");

    CLI::App* cgf = app.add_subcommand("cgf", "CGF decomposition at a point");
    add_theta_c(cgf, true);
    cgf->add_option("--a", a, "evaluation point")->required();

    CLI::App* saddle = app.add_subcommand("saddle", "time-varying saddle and its series");
    add_theta_c(saddle, true);

    CLI::App* tail = app.add_subcommand("tail", "sharp tail approximation");
    add_theta_c(tail, true);
    tail->add_option("--order", order, "expansion order (default 0)");

    CLI::App* invert = app.add_subcommand("invert", "exact Fourier-inversion oracle");
    add_theta_c(invert, true);
    invert->add_option("--s-sqrt", s_sqrt, "s in s_T = s T^{1/6}");
    invert->add_option("--s-linear", s_linear, "s in s_T = s T^{2/3}");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo tail estimate");
    add_theta_c(simulate, true);
    simulate->add_option("--n-paths", n_paths, "number of paths");
    simulate->add_option("--n-steps", n_steps, "grid steps (default max(1000, 200 T))");
    simulate->add_option("--seed", seed, "root seed");
    simulate->add_option("--method", method, "plain or tilted")
        ->check(CLI::IsMember({"plain", "tilted"}));
    simulate->add_option("--side", side_str, "lower, upper, or auto")
        ->check(CLI::IsMember({"lower", "upper", "auto"}));
    simulate->add_option("--tilt-a", tilt_a, "tilt parameter (default: regime tilt)")
        ->each([&](const std::string&) { have_tilt = true; });
    simulate->add_option("--dump-paths", dump_file, "write the first path as CSV");

    CLI::App* validate = app.add_subcommand("validate", "sldp vs oracle vs tilted MC");
    add_theta_c(validate, true);
    validate->add_option("--order", order, "sldp order (default 1)")->default_val(1);
    validate->add_option("--n-paths", n_paths, "number of paths");
    validate->add_option("--n-steps", n_steps, "grid steps");
    validate->add_option("--seed", seed, "root seed");

    CLI::App* table = app.add_subcommand("table", "sweep over theta/c/T grids");
    table->add_option("--theta-list", theta_list, "drift values")->required();
    table->add_option("--c-list", c_list, "thresholds")->required();
    table->add_option("--T-list", T_list, "horizons")->required();
    table->add_option("--order", order, "sldp order");
    table->add_option("--methods", method_list, "subset of {sldp, oracle}")
        ->check(CLI::IsMember({"sldp", "oracle"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        app.exit(e);
        return 2;  // usage error, offending flag named by CLI11 on stderr
    }

    try {
        if (*rate) {
            emit(out, json{{"theta", theta},
                           {"c", c},
                           {"regime", std::string(to_string(classify_case(theta, c)))},
                           {"rate", rate_function(theta, c)}});
        } else if (*domain) {
            const EffectiveDomain d = effective_domain(theta, c);
            json j{{"theta", theta}, {"c", c}, {"lower", d.lower}, {"upper", d.upper}};
            if (domain->count("--T") > 0) {
                const EffectiveDomain f = finite_T_domain(theta, c, T);
                j["T"] = T;
                j["finite_T_lower"] = f.lower;
                j["finite_T_upper"] = f.upper;
            }
            emit(out, j);
        } else if (*cgf) {
            const CgfDecomposition d = decompose(theta, c, a, T);
            const CgfDerivatives dv = cgf_derivatives(theta, c, a);
            emit(out, json{{"theta", theta}, {"c", c}, {"a", a}, {"T", T},
                           {"phi", d.phi}, {"tau", d.tau}, {"h", d.h_ratio},
                           {"L", d.big_l}, {"H", d.big_h}, {"R_T", d.remainder},
                           {"assembled", d.assembled},
                           {"exact", cgf_exact(theta, c, a, T)},
                           {"dL", dv.dL}, {"d2L", dv.d2L},
                           {"dH", dv.dH ? json(*dv.dH) : json()}});
        } else if (*saddle) {
            const SaddleSolution s = solve_saddle(theta, c, T);
            const SeriesCoeffs sc = series_coeffs(theta, c);
            emit(out, json{{"theta", theta}, {"c", c}, {"T", T},
                           {"a_T", s.a_T}, {"phi_at", s.phi_at},
                           {"residual", s.residual}, {"iterations", s.iterations},
                           {"regime", std::string(to_string(s.regime))},
                           {"series_scale",
                            sc.scale == SeriesScale::InverseT ? "InverseT" : "InverseSqrtT"},
                           {"a_coeffs", sc.a_coeffs}, {"phi_coeffs", sc.phi_coeffs}});
        } else if (*tail) {
            json j = tail_to_json(tail_probability(theta, c, T, order));
            j["theta"] = theta; j["c"] = c; j["T"] = T;
            emit(out, j);
        } else if (*invert) {
            OracleConfig cfg;
            cfg.s_sqrt = s_sqrt;
            cfg.s_linear = s_linear;
            json j = inversion_to_json(oracle_tail(theta, c, T, cfg));
            j["theta"] = theta; j["c"] = c; j["T"] = T;
            emit(out, j);
        } else if (*simulate) {
            if (n_steps <= 0) n_steps = default_n_steps(T);
            const TailSide side = parse_side(side_str, theta, c);
            McEstimate est;
            if (method == "plain") {
                est = plain_mc_tail(theta, c, T, n_paths, n_steps, seed, side);
            } else {
                const double at = have_tilt ? tilt_a : default_tilt(theta, c, T);
                est = tilted_mc_tail(theta, c, T, at, n_paths, n_steps, seed, side);
            }
            if (!dump_file.empty()) {
                dump_path_csv(simulate_path(theta, T, n_steps, seed), seed, dump_file);
            }
            json j = mc_to_json(est);
            j["theta"] = theta; j["c"] = c; j["T"] = T;
            j["n_steps"] = n_steps; j["seed"] = seed;
            j["side"] = std::string(to_string(side));
            emit(out, j);
        } else if (*validate) {
            if (n_steps <= 0) n_steps = default_n_steps(T);
            const TailApproximation t = tail_probability(theta, c, T, order);
            const InversionResult r = oracle_tail(theta, c, T);
            const McEstimate mc = tilted_mc_tail(theta, c, T, default_tilt(theta, c, T), n_paths,
                                                 n_steps, seed, r.side);
            json j{{"theta", theta}, {"c", c}, {"T", T}, {"order", order},
                   {"n_paths", n_paths}, {"n_steps", n_steps}, {"seed", seed},
                   {"sldp", tail_to_json(t)},
                   {"oracle", inversion_to_json(r)},
                   {"mc", mc_to_json(mc)},
                   {"sldp_vs_oracle_rel", t.probability / r.probability - 1.0},
                   {"oracle_vs_mc_se",
                    (mc.estimate - r.probability) / std::max(mc.std_error, 1e-300)}};
            emit(out, j);
        } else if (*table) {
            // one row per (theta, c, T, method); plot-ready reproduction of the
            // regime landscape
            std::vector<std::string> lines;
            lines.push_back("theta,c,T,method,regime,rate,probability,log_probability,error_estimate");
            json rows = json::array();
            for (double th : theta_list) {
                for (double cc : c_list) {
                    for (double tt : T_list) {
                        for (const std::string& m : method_list) {
                            std::string regime = std::string(to_string(classify_case(th, cc)));
                            double rate_v = rate_function(th, cc);
                            double p = std::nan("");
                            double err = std::nan("");
                            try {
                                if (m == "sldp") {
                                    p = tail_probability(th, cc, tt, order).probability;
                                } else if (m == "oracle") {
                                    const InversionResult r = oracle_tail(th, cc, tt);
                                    p = r.probability;
                                    err = r.quadrature_error;
                                }
                            } catch (const domain_error&) {
                                // regime without this route: row keeps NaN values
                            }
                            const double logp = p > 0 ? std::log(p) : std::nan("");
                            lines.push_back(
                                csv_field(g17(th)) + "," + csv_field(g17(cc)) + "," +
                                csv_field(g17(tt)) + "," + csv_field(m) + "," + csv_field(regime) +
                                "," + g17(rate_v) + "," + (std::isnan(p) ? "" : g17(p)) + "," +
                                (std::isnan(logp) ? "" : g17(logp)) + "," +
                                (std::isnan(err) ? "" : g17(err)));
                            json row{{"theta", th}, {"c", cc}, {"T", tt}, {"method", m},
                                     {"regime", regime}, {"rate", rate_v}};
                            if (!std::isnan(p)) { row["probability"] = p; row["log_probability"] = logp; }
                            if (!std::isnan(err)) row["error_estimate"] = err;
                            rows.push_back(row);
                        }
                    }
                }
            }
            if (out.format == "csv") {
                std::string text = "# " + std::string(kTool) + " " + kVersion + "\n";
                for (const std::string& l : lines) text += l + "\n";
                out.write(text);
            } else {
                emit(out, json{{"rows", rows}});
            }
        }
    } catch (const no_expansion_error& e) {
        return emit_error(out, "no_expansion", e.what());
    } catch (const boundary_error& e) {
        return emit_error(out, "boundary", e.what());
    } catch (const domain_error& e) {
        return emit_error(out, "domain_error", e.what());
    } catch (const solver_error& e) {
        return emit_error(out, "solver_error", e.what());
    }
    return 0;
}
