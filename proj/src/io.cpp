#include "eternal/io.hpp"

#include <charconv>
#include <cmath>

namespace eternal::io {

using nlohmann::ordered_json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os, const Metadata& meta, const std::vector<std::string>& columns) {
    for (const auto& [key, value] : meta) os << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_number(values[i]);
    os << '\n';
}

Metadata model_metadata(const ModelParams& params) {
    return {{"m", format_number(params.m())},
            {"p", format_number(params.p())},
            {"N", std::to_string(params.N())},
            {"sigma", format_number(params.sigma())},
            {"regime", std::string(to_string(params.regime()))}};
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit, const ModelParams& params, double K) {
    Metadata meta = model_metadata(params);
    meta.emplace_back("K", format_number(K));
    meta.emplace_back("tag", std::string(to_string(orbit.termination.tag)));
    meta.emplace_back("final_slope", format_number(orbit.termination.final_slope));
    write_csv_header(os, meta, {"eta", "X", "Y"});
    for (const auto& s : orbit.samples) write_csv_row(os, {s.eta, s.X, s.Y});
}

void write_profile_csv(std::ostream& os, const Profile& pr) {
    Metadata meta = model_metadata(pr.params);
    meta.emplace_back("K", format_number(pr.K));
    meta.emplace_back("alpha", format_number(pr.alpha));
    meta.emplace_back("beta", format_number(pr.beta));
    meta.emplace_back("xi0", pr.xi0 ? format_number(*pr.xi0) : "none");
    meta.emplace_back("stop_reason", pr.stop_reason);
    write_csv_header(os, meta, {"xi", "f"});
    for (std::size_t i = 0; i < pr.xi.size(); ++i) write_csv_row(os, {pr.xi[i], pr.f[i]});
}

void write_traveling_wave_csv(std::ostream& os, const TravelingWave& tw) {
    Metadata meta = model_metadata(tw.params);
    meta.emplace_back("c", format_number(tw.c));
    meta.emplace_back("convection", format_number(tw.convection));
    meta.emplace_back("reaction", format_number(tw.reaction));
    meta.emplace_back("z_edge", format_number(tw.z_edge));
    meta.emplace_back("convention", std::string(kTravelingWaveConvention));
    write_csv_header(os, meta, {"z", "F"});
    for (std::size_t i = 0; i < tw.z_grid.size(); ++i) write_csv_row(os, {tw.z_grid[i], tw.F[i]});
}

void write_grid_csv(std::ostream& os, const ClassificationReport& report) {
    Metadata meta = model_metadata(report.params);
    write_csv_header(os, meta, {"K", "tag", "final_slope"});
    for (const auto& e : report.K_grid) {
        os << format_number(e.K) << ',' << to_string(e.tag) << ',' << format_number(e.final_slope) << '\n';
    }
}

ordered_json model_json(const ModelParams& params) {
    return {{"m", params.m()},
            {"p", params.p()},
            {"N", params.N()},
            {"sigma", params.sigma()},
            {"regime", to_string(params.regime())}};
}

ordered_json to_json(const OrbitEnd& end) {
    return {{"tag", to_string(end.tag)}, {"final_slope", end.final_slope}, {"diagnostics", end.diagnostics}};
}

namespace {

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

ordered_json to_json(const ClassificationReport& r) {
    ordered_json grid = ordered_json::array();
    for (const auto& e : r.K_grid) {
        grid.push_back({{"K", e.K}, {"tag", to_string(e.tag)}, {"final_slope", e.final_slope}});
    }
    ordered_json out{{"model", model_json(r.params)}, {"regime", to_string(r.regime)}};
    out["k_star"] = optional_json(r.K_star);
    out["k_star_bracket"] =
        r.K_star_bracket ? ordered_json::array({r.K_star_bracket->first, r.K_star_bracket->second}) : nullptr;
    out["alpha_star"] = optional_json(r.alpha_star);
    out["k_star_exact"] = optional_json(r.K_star_exact);
    out["k_star_rel_error"] = optional_json(r.K_star_rel_error);
    out["probes"] = r.probes;
    out["unresolved"] = r.unresolved;
    out["all_to_q3"] = optional_json(r.all_to_q3);
    out["k_grid"] = std::move(grid);
    return out;
}

ordered_json to_json(const InterfaceFit& fit) {
    return {{"xi0", fit.xi0},
            {"exponent", fit.exponent},
            {"constant", fit.constant},
            {"type_label", to_string(fit.type_label)},
            {"rms_residual", fit.rms_residual},
            {"samples_used", fit.samples_used}};
}

ordered_json to_json(const Profile& pr) {
    ordered_json out{{"model", model_json(pr.params)},
                     {"K", pr.K},
                     {"alpha", pr.alpha},
                     {"beta", pr.beta},
                     {"nodes", pr.xi.size()},
                     {"xi_last", pr.xi.back()},
                     {"f_last", pr.f.back()},
                     {"stop_reason", pr.stop_reason}};
    out["xi0"] = optional_json(pr.xi0);
    out["interface_fit"] = pr.interface_fit ? to_json(*pr.interface_fit) : ordered_json(nullptr);
    return out;
}

ordered_json to_json(const TravelingWave& tw) {
    return {{"model", model_json(tw.params)},
            {"c", tw.c},
            {"convection", tw.convection},
            {"reaction", tw.reaction},
            {"z_edge", tw.z_edge},
            {"z_min", tw.z_grid.front()},
            {"points", tw.z_grid.size()},
            {"convention", kTravelingWaveConvention}};
}

ordered_json document(const std::string& command, const ordered_json& payload) {
    ordered_json out{{"schema_version", kSchemaVersion}, {"command", command}};
    for (const auto& [key, value] : payload.items()) out[key] = value;
    return out;
}

}  // namespace eternal::io
