// Command-line front end for the eternal self-similar solution toolkit.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eternal/io.hpp"
#include "eternal/phaseplane.hpp"
#include "eternal/shooting.hpp"
#include "eternal/solution.hpp"

using namespace eternal;
using nlohmann::ordered_json;

namespace {

constexpr int kFlagError = 2;
constexpr int kNumericalError = 3;

struct FlagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    double m = 0;
    double p = 0;
    int N = 0;
    std::optional<double> sigma;
    std::optional<double> K;
    std::optional<double> alpha;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<double> x_big;
    double tol_k = 1e-6;
    double k_min = 1e-3;
    double k_max = 1e3;
    int points = 13;
    int tw_points = 2001;
    std::string out;
};

ModelParams model(const Config& c) {
    try {
        ModelParams P(c.m, c.p, c.N);
        if (c.sigma && std::abs(*c.sigma - P.sigma()) > 1e-12 * std::max(1.0, P.sigma())) {
            throw FlagError("--sigma " + io::format_number(*c.sigma) + " differs from 2(1-p)/(m-1) = " +
                            io::format_number(P.sigma()));
        }
        return P;
    } catch (const std::domain_error& e) {
        throw FlagError(e.what());
    }
}

double shooting_k(const Config& c, const ModelParams& P) {
    if (c.K) {
        if (!(*c.K > 0.0)) throw FlagError("--K must be positive");
        return *c.K;
    }
    if (c.alpha) {
        if (!(*c.alpha > 0.0)) throw FlagError("--alpha must be positive");
        return k_from_alpha(P, *c.alpha);
    }
    throw FlagError("one of --K or --alpha is required");
}

IntegratorOptions integrator_options(const Config& c) {
    IntegratorOptions o;
    if (c.rel_tol) o.rel_tol = *c.rel_tol;
    if (c.abs_tol) o.abs_tol = *c.abs_tol;
    if (c.x_big) o.X_big = *c.x_big;
    try {
        o.validate();
    } catch (const std::domain_error& e) {
        throw FlagError(e.what());
    }
    return o;
}

ProfileOptions profile_options(const Config& c) {
    ProfileOptions o;
    if (c.rel_tol) o.rel_tol = *c.rel_tol;
    if (c.abs_tol) o.abs_tol = *c.abs_tol;
    if (!(o.rel_tol > 0.0 && o.abs_tol > 0.0)) throw FlagError("tolerances must be positive");
    return o;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

template <class Writer>
void write_csv(const std::string& path, Writer&& writer) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    writer(f);
}

// JSON goes to <out>.json, or to standard output without --out.
void emit(const Config& c, const std::string& command, const ordered_json& payload) {
    const std::string text = io::document(command, payload).dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        write_file(c.out + ".json", text);
    }
}

ordered_json shooting_json(const ModelParams& P, double K) {
    const ShootingParam sp = alpha_beta_from_k(P, K);
    return {{"K", sp.K}, {"alpha", sp.alpha}, {"beta", sp.beta}};
}

int run_classify(const Config& c) {
    const ModelParams P = model(c);
    const double K = shooting_k(c, P);
    const OrbitEnd end = classify(P, K, integrator_options(c));
    ordered_json payload{{"model", io::model_json(P)}, {"shooting", shooting_json(P, K)}};
    const ordered_json fate = io::to_json(end);
    for (const auto& [key, value] : fate.items()) payload[key] = value;
    emit(c, "classify", payload);
    return end.tag == EndTag::Unresolved ? kNumericalError : 0;
}

int run_find_kstar(const Config& c) {
    const ModelParams P = model(c);
    if (P.regime() == Regime::Subcritical) throw FlagError("find-kstar needs m + p >= 2; use sweep");
    if (!(c.tol_k > 0.0)) throw FlagError("--tol-k must be positive");
    const ClassificationReport report = find_k_star(P, c.tol_k, integrator_options(c));
    emit(c, "find-kstar", io::to_json(report));
    return 0;
}

int run_sweep(const Config& c) {
    const ModelParams P = model(c);
    if (!(c.k_min > 0.0 && c.k_max >= c.k_min) || c.points < 1) throw FlagError("bad K grid");
    const auto Ks = log_grid(c.k_min, c.k_max, c.points);
    const IntegratorOptions opts = integrator_options(c);
    ClassificationReport report{P, P.regime(), {}, {}, {}, {}, {}, {}, 0, 0, {}};
    if (P.regime() == Regime::Subcritical) {
        report = nonexistence_sweep(P, Ks, opts);
    } else {
        report.K_grid = classify_grid(P, Ks, opts);
        report.probes = static_cast<int>(Ks.size());
        for (const auto& e : report.K_grid) report.unresolved += e.tag == EndTag::Unresolved;
    }
    if (!c.out.empty()) write_csv(c.out + ".csv", [&](std::ostream& os) { io::write_grid_csv(os, report); });
    emit(c, "sweep", io::to_json(report));
    return report.unresolved > 0 ? kNumericalError : 0;
}

int run_profile(const Config& c) {
    const ModelParams P = model(c);
    if (P.regime() == Regime::Subcritical) throw FlagError("profile needs m + p >= 2");
    const double K = shooting_k(c, P);
    const Profile pr = reconstruct(P, K, profile_options(c));
    if (!c.out.empty()) write_csv(c.out + ".csv", [&](std::ostream& os) { io::write_profile_csv(os, pr); });
    emit(c, "profile", io::to_json(pr));
    return 0;
}

int run_tw(const Config& c) {
    const ModelParams P = model(c);
    if (P.regime() == Regime::Subcritical) throw FlagError("tw needs m + p >= 2");
    if (c.tw_points < 2) throw FlagError("--points must be at least 2");
    const double K = shooting_k(c, P);
    const Profile pr = reconstruct(P, K, profile_options(c));
    if (!pr.xi0) throw NumericalError("profile has no interface; no traveling wave");
    const TravelingWave tw = to_traveling_wave(make_solution(pr), c.tw_points);

    constexpr double h = 1e-3;
    double worst = 0.0;
    for (double z : tw.z_grid) {
        if (z - tw.z_grid.front() > 5 * h && tw.z_edge - z > 5 * h) worst = std::max(worst, tw_residual(tw, z, h));
    }
    if (!c.out.empty()) write_csv(c.out + ".csv", [&](std::ostream& os) { io::write_traveling_wave_csv(os, tw); });
    ordered_json payload = io::to_json(tw);
    payload["K"] = K;
    payload["residual_step"] = h;
    payload["max_scaled_residual"] = worst;
    emit(c, "tw", payload);
    return 0;
}

int run_portrait(const Config& c) {
    const ModelParams P = model(c);
    const double K = shooting_k(c, P);
    if (c.out.empty()) throw FlagError("portrait writes several files and needs --out");
    const IntegratorOptions opts = integrator_options(c);

    ordered_json critical = ordered_json::array();
    auto add_points = [&](const std::vector<CriticalPoint>& pts) {
        for (const auto& cp : pts) {
            ordered_json j{{"label", to_string(cp.label)},
                           {"kind", to_string(cp.kind)},
                           {"at_infinity", cp.at_infinity}};
            if (cp.at_infinity) {
                j["slope"] = cp.chart.slope;
            } else {
                j["X"] = cp.location.X;
                j["Y"] = cp.location.Y;
            }
            critical.push_back(j);
        }
    };
    add_points(finite_critical_points(P));
    add_points(infinity_critical_points(P, K));

    ordered_json orbits = ordered_json::array();
    auto trace = [&](const std::string& name, const PhasePoint& start) {
        const Orbit orbit = integrate(start, P, K, opts);
        const std::string path = c.out + "_" + name + ".csv";
        write_csv(path, [&](std::ostream& os) { io::write_orbit_csv(os, orbit, P, K); });
        orbits.push_back({{"name", name},
                          {"file", path},
                          {"X0", start.X},
                          {"Y0", start.Y},
                          {"tag", to_string(orbit.termination.tag)},
                          {"samples", orbit.samples.size()}});
    };
    trace("p0", launch_from_p0(P, K, opts));
    // Generic starts on a small grid in the half-plane X > 0.
    int k = 0;
    for (double X : {0.25, 1.0, 4.0}) {
        for (double Y : {-1.0, -0.25, 0.25, 1.0}) trace("start" + std::to_string(k++), {X, Y});
    }
    emit(c, "portrait",
         {{"model", io::model_json(P)}, {"shooting", shooting_json(P, K)}, {"critical_points", critical},
          {"orbits", orbits}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eternal self-similar solutions of u_t = Lap(u^m) + |x|^sigma u^p"};
    app.require_subcommand(1);
    Config c;

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--m", c.m, "diffusion exponent, m > 1")->required();
        sub->add_option("--p", c.p, "reaction exponent, 0 < p < 1")->required();
        sub->add_option("--N", c.N, "space dimension")->required();
        sub->add_option("--sigma", c.sigma, "optional check against 2(1-p)/(m-1)");
        sub->add_option("--rel-tol", c.rel_tol);
        sub->add_option("--abs-tol", c.abs_tol);
        sub->add_option("--x-big", c.x_big, "escape radius of the phase plane");
        sub->add_option("--out", c.out, "output base path");
    };
    auto add_k = [&](CLI::App* sub) {
        auto* k = sub->add_option("--K", c.K, "shooting parameter");
        auto* a = sub->add_option("--alpha", c.alpha, "growth exponent (sets K)");
        k->excludes(a);
        a->excludes(k);
    };

    auto* classify_cmd = app.add_subcommand("classify", "fate of the P0 orbit for one K");
    add_model(classify_cmd);
    add_k(classify_cmd);
    auto* kstar_cmd = app.add_subcommand("find-kstar", "bisect the ToQ1/ToQ3 threshold");
    add_model(kstar_cmd);
    kstar_cmd->add_option("--tol-k", c.tol_k, "relative bracket width");
    auto* sweep_cmd = app.add_subcommand("sweep", "classify a logarithmic K grid");
    add_model(sweep_cmd);
    sweep_cmd->add_option("--k-min", c.k_min);
    sweep_cmd->add_option("--k-max", c.k_max);
    sweep_cmd->add_option("--points", c.points);
    auto* profile_cmd = app.add_subcommand("profile", "reconstruct f and fit its interface");
    add_model(profile_cmd);
    add_k(profile_cmd);
    auto* portrait_cmd = app.add_subcommand("portrait", "orbit data for a phase portrait");
    add_model(portrait_cmd);
    add_k(portrait_cmd);
    auto* tw_cmd = app.add_subcommand("tw", "traveling wave profile");
    add_model(tw_cmd);
    add_k(tw_cmd);
    tw_cmd->add_option("--points", c.tw_points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kFlagError;
    }

    try {
        if (classify_cmd->parsed()) return run_classify(c);
        if (kstar_cmd->parsed()) return run_find_kstar(c);
        if (sweep_cmd->parsed()) return run_sweep(c);
        if (profile_cmd->parsed()) return run_profile(c);
        if (portrait_cmd->parsed()) return run_portrait(c);
        if (tw_cmd->parsed()) return run_tw(c);
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFlagError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFlagError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kFlagError;
}
