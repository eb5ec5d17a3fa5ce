#include "geodesy/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace geodesy {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

void check_header(const Json& j, const char* schema) {
    if (schema_of(j) != schema) bad(std::string("expected schema ") + schema + ", got " + schema_of(j));
    const Json& v = field(j, "version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) bad("unsupported schema version");
}

double number(const Json& j) {
    if (!j.is_number()) bad("expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad("non-finite number");
    return v;
}

std::size_t count(const Json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) bad("expected a count");
    return j.get<std::size_t>();
}

Json points_json(const std::vector<PlanarPoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

std::vector<PlanarPoint> points_from(const Json& j) {
    if (!j.is_array()) bad("expected an array of points");
    std::vector<PlanarPoint> pts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) bad("a point is an [x, y] pair");
        pts.push_back({number(p[0]), number(p[1])});
    }
    return pts;
}

template <typename Angle>
Json matrix_json(const AngleMatrix<Angle>& M) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < M.m(); ++j) {
        Json row = Json::array();
        for (std::size_t i = 1; i < M.t(); ++i) row.push_back({M.at(j, i).value().real(), M.at(j, i).value().imag()});
        rows.push_back(row);
    }
    return rows;
}

template <typename Angle>
AngleMatrix<Angle> matrix_from(const Json& j, std::size_t t, std::size_t m) {
    if (t < 2 || m < 1) fail(ErrorCode::InvalidShape, "matrix needs t >= 2 and m >= 1");
    if (!j.is_array() || j.size() != m) bad("matrix must have m rows");
    AngleMatrix<Angle> M(t, m);
    for (std::size_t r = 0; r < m; ++r) {
        if (!j[r].is_array() || j[r].size() != t - 1) bad("matrix rows must have t-1 entries");
        for (std::size_t i = 1; i < t; ++i) {
            const Json& e = j[r][i - 1];
            if (!e.is_array() || e.size() != 2) bad("an angle is a [re, im] pair");
            try {
                M.at(r, i) = Angle(Complex{number(e[0]), number(e[1])});
            } catch (const GeodesyError& err) {
                bad(std::string("matrix entry is not a unit complex number: ") + err.what());
            }
        }
    }
    return M;
}

Json configuration_json(const Configuration& c) {
    return {{"targets", points_json(c.targets())}, {"measures", points_json(c.measures())}};
}

Configuration configuration_from(const Json& j) {
    return Configuration(points_from(field(j, "targets")), points_from(field(j, "measures")));
}

}  // namespace

std::string schema_of(const Json& j) {
    if (!j.is_object()) bad("top-level JSON value must be an object");
    const Json& s = field(j, "schema");
    if (!s.is_string()) bad("schema must be a string");
    return s.get<std::string>();
}

Json to_json(const Scenario& s) {
    Json j;
    j["schema"] = kScenarioSchema;
    j["version"] = kSchemaVersion;
    j["generator"] = s.generator;
    j["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
    j["jitter"] = s.jitter;
    j["t"] = s.config.t();
    j["m"] = s.config.m();
    j["targets"] = points_json(s.config.targets());
    j["measures"] = points_json(s.config.measures());
    return j;
}

Scenario scenario_from_json(const Json& j) {
    check_header(j, kScenarioSchema);
    Scenario s;
    s.config = configuration_from(j);
    if (s.config.t() != count(field(j, "t")) || s.config.m() != count(field(j, "m")))
        fail(ErrorCode::InvalidShape, "t/m do not match the point lists");
    if (j.contains("generator") && j["generator"].is_string()) s.generator = j["generator"].get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) {
        if (!j["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("jitter")) {
        s.jitter = number(j["jitter"]);
        if (s.jitter < 0.0) bad("jitter must be non-negative");
    }
    return s;
}

Json to_json(const MatricesFile& f) {
    Json j;
    j["schema"] = kMatricesSchema;
    j["version"] = kSchemaVersion;
    j["t"] = f.double_angles.t();
    j["m"] = f.double_angles.m();
    j["double"] = matrix_json(f.double_angles);
    j["directed"] = f.directed ? matrix_json(*f.directed) : Json(nullptr);
    return j;
}

MatricesFile matrices_from_json(const Json& j) {
    check_header(j, kMatricesSchema);
    const std::size_t t = count(field(j, "t")), m = count(field(j, "m"));
    MatricesFile f;
    f.double_angles = matrix_from<DoubleAngle>(field(j, "double"), t, m);
    if (j.contains("directed") && !j["directed"].is_null())
        f.directed = matrix_from<DirectedAngle>(j["directed"], t, m);
    return f;
}

Json report_to_json(const SolveResult& r) {
    Json j;
    j["schema"] = kReportSchema;
    j["version"] = kSchemaVersion;
    j["kind"] = to_string(r.set.kind);
    j["branch"] = r.report.branch;
    j["t"] = r.report.t;
    j["m"] = r.report.m;
    j["dimension_count"] = r.report.dimension_count;
    Json sols = Json::array();
    for (std::size_t k = 0; k < r.set.solutions.size(); ++k) {
        Json s = configuration_json(r.set.solutions[k]);
        if (k < r.set.diagnostics.residuals.size()) s["residual"] = r.set.diagnostics.residuals[k];
        sols.push_back(s);
    }
    j["solutions"] = sols;
    Json stages = Json::array();
    for (const auto& s : r.report.stages) stages.push_back({{"stage", s.stage}, {"residual", s.value}});
    j["stages"] = stages;
    Json flags = Json::array();
    for (const auto& f : r.set.diagnostics.flags.flags) flags.push_back({{"kind", to_string(f.kind)}, {"indices", f.indices}});
    j["flags"] = flags;
    j["reasons"] = r.set.diagnostics.reasons;
    j["direction_filter"] = r.report.direction.applied
                                ? Json{{"applied", true},
                                       {"before", r.report.direction.before},
                                       {"after", r.report.direction.after}}
                                : Json{{"applied", false}};
    return j;
}

ReportFile report_from_json(const Json& j) {
    check_header(j, kReportSchema);
    ReportFile r;
    const Json& kind = field(j, "kind");
    if (!kind.is_string()) bad("kind must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "Unique")
        r.kind = SolutionKind::Unique;
    else if (k == "TwinPair")
        r.kind = SolutionKind::TwinPair;
    else if (k == "Infinite")
        r.kind = SolutionKind::Infinite;
    else if (k == "DegenerateAmbiguous")
        r.kind = SolutionKind::DegenerateAmbiguous;
    else
        bad("unknown solution kind " + k);
    if (j.contains("branch") && j["branch"].is_string()) r.branch = j["branch"].get<std::string>();
    const Json& sols = field(j, "solutions");
    if (!sols.is_array()) bad("solutions must be an array");
    for (const auto& s : sols) r.solutions.push_back(configuration_from(s));
    return r;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot write " + path);
    out << text;
    if (!out) bad("write failed for " + path);
}

}  // namespace geodesy
