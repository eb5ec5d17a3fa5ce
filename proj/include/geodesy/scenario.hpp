#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geodesy/measurement.hpp"
#include "geodesy/solve.hpp"

namespace geodesy {

using Json = nlohmann::ordered_json;

inline constexpr const char* kScenarioSchema = "planar-geodesy/scenario";
inline constexpr const char* kMatricesSchema = "planar-geodesy/matrices";
inline constexpr const char* kReportSchema = "planar-geodesy/report";
inline constexpr const char* kCensusSchema = "planar-geodesy/census";
inline constexpr int kSchemaVersion = 1;

struct Scenario {
    Configuration config;
    std::optional<std::uint64_t> seed;
    std::string generator;
    /// Standard deviation (radians) of noise added to directed angles by measure.
    double jitter = 0.0;
};

struct MatricesFile {
    DoubleAngleMatrix double_angles;
    std::optional<DirectedAngleMatrix> directed;
};

/// The parts of a solve report needed to plot it.
struct ReportFile {
    SolutionKind kind = SolutionKind::Infinite;
    std::string branch;
    std::vector<Configuration> solutions;
};

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json to_json(const MatricesFile& f);
MatricesFile matrices_from_json(const Json& j);

Json report_to_json(const SolveResult& r);
ReportFile report_from_json(const Json& j);

/// Reads the "schema" field; throws InvalidInput for anything not an object.
std::string schema_of(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geodesy
