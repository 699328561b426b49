#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eternal/integrator.hpp"
#include "eternal/profile.hpp"
#include "eternal/shooting.hpp"
#include "eternal/solution.hpp"

namespace eternal::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// "# key: value" lines, then a header row.
void write_csv_header(std::ostream& os, const Metadata& meta, const std::vector<std::string>& columns);
void write_csv_row(std::ostream& os, const std::vector<double>& values);

Metadata model_metadata(const ModelParams& params);

void write_orbit_csv(std::ostream& os, const Orbit& orbit, const ModelParams& params, double K);
void write_profile_csv(std::ostream& os, const Profile& profile);
void write_traveling_wave_csv(std::ostream& os, const TravelingWave& tw);
void write_grid_csv(std::ostream& os, const ClassificationReport& report);

nlohmann::ordered_json model_json(const ModelParams& params);
nlohmann::ordered_json to_json(const OrbitEnd& end);
nlohmann::ordered_json to_json(const ClassificationReport& report);
nlohmann::ordered_json to_json(const InterfaceFit& fit);
nlohmann::ordered_json to_json(const Profile& profile);
nlohmann::ordered_json to_json(const TravelingWave& tw);

/// Wraps a payload as {"schema_version", "command", ...payload}.
nlohmann::ordered_json document(const std::string& command, const nlohmann::ordered_json& payload);

}  // namespace eternal::io
