#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "geodesy/commands.hpp"

using namespace geodesy;

namespace {

enum Exit { kOk = 0, kDegenerate = 2, kNoSolution = 3, kInvalid = 4 };

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::InvalidShape:
        case ErrorCode::InvalidArgument:
        case ErrorCode::CoincidentPoints:
        case ErrorCode::UnplottableReport:
            return kInvalid;
        case ErrorCode::DegenerateSubset:
        case ErrorCode::NonUniqueProfile:
        case ErrorCode::Cocircular:
        case ErrorCode::CollinearTriple:
            return kDegenerate;
        default:
            return kNoSolution;
    }
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file(out, text);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_shapes(const std::vector<std::string>& specs) {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (const auto& s : specs) {
        const auto comma = s.find_first_of(",x");
        try {
            if (comma == std::string::npos) throw std::invalid_argument(s);
            shapes.emplace_back(std::stoul(s.substr(0, comma)), std::stoul(s.substr(comma + 1)));
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidInput, "shape '" + s + "' is not of the form t,m");
        }
    }
    return shapes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar point reconstruction from double angle measurements"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::size_t restarts = 64;
    double tol = 1e-6;
    bool use_directed = false;
    std::string out;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a scenario");
    std::string family = "generic";
    std::size_t t = 5, m = 4;
    double jitter = 0.0;
    gen->add_option("family", family,
                    "generic | cocircular-targets | cocircular-measures | cyclic-cubic | collinear-targets | fig2")
        ->required();
    gen->add_option("t", t, "Number of target points")->required();
    gen->add_option("m", m, "Number of measure points")->required();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--jitter", jitter, "Angular noise (radians) applied by measure");
    gen->add_option("--out", out, "Output file (default stdout)");

    // measure
    auto* measure = app.add_subcommand("measure", "Double and directed angle matrices of a scenario");
    std::string scenario_path;
    measure->add_option("scenario", scenario_path, "Scenario file")->required();
    measure->add_option("--out", out, "Output file (default stdout)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Reconstruct configurations from a matrices file");
    std::string matrices_path;
    solve_cmd->add_option("matrices", matrices_path, "Matrices file")->required();
    solve_cmd->add_flag("--directed", use_directed, "Filter candidates with the directed angles");
    solve_cmd->add_option("--restarts", restarts, "Numeric restarts");
    solve_cmd->add_option("--seed", seed, "Numeric seed");
    solve_cmd->add_option("--tol", tol, "Entrywise agreement required of solutions");
    solve_cmd->add_option("--out", out, "Output file (default stdout)");

    // census
    auto* census = app.add_subcommand("census", "Empirical solution counts per shape");
    std::vector<std::string> shape_specs{"4,3", "4,4", "5,3", "5,4", "6,4"};
    std::size_t instances = 20;
    std::string census_family = "generic";
    bool census_json = false;
    census->add_option("--shapes", shape_specs, "Shapes as t,m");
    census->add_option("-n,--instances", instances, "Instances per shape");
    census->add_option("--family", census_family, "Scenario family");
    census->add_option("--seed", seed, "Base seed (instance k uses seed + k)");
    census->add_option("--restarts", restarts, "Numeric restarts");
    census->add_flag("--json", census_json, "Write JSON instead of a text table");
    census->add_option("--out", out, "Output file (default stdout)");

    // plot
    auto* plot = app.add_subcommand("plot", "SVG figure of a scenario or report");
    std::string plot_input, what = "config";
    plot->add_option("input", plot_input, "Scenario or report file")->required();
    plot->add_option("what", what, "config | twin | circles-regions");
    plot->add_option("--out", out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const Scenario s = cmd_gen({family_from_string(family), t, m, seed, jitter});
            emit(to_json(s).dump(2) + "\n", out);
        } else if (*measure) {
            const Scenario s = scenario_from_json(read_json_file(scenario_path));
            emit(to_json(cmd_measure(s)).dump(2) + "\n", out);
        } else if (*solve_cmd) {
            const MatricesFile f = matrices_from_json(read_json_file(matrices_path));
            SolveOptions options;
            options.restarts = restarts;
            options.seed = seed;
            options.tol = tol;
            const SolveResult r = cmd_solve(f, options, use_directed);
            emit(report_to_json(r).dump(2) + "\n", out);
            if (r.set.kind == SolutionKind::DegenerateAmbiguous) return kDegenerate;
        } else if (*census) {
            CensusOptions options;
            options.family = family_from_string(census_family);
            options.shapes = parse_shapes(shape_specs);
            options.instances = instances;
            options.seed = seed;
            options.restarts = restarts;
            const auto rows = cmd_census(options);
            emit(census_json ? census_to_json(rows, options).dump(2) + "\n" : census_to_text(rows), out);
        } else if (*plot) {
            const Json j = read_json_file(plot_input);
            const PlotKind kind = plot_kind_from_string(what);
            const std::string schema = schema_of(j);
            std::string svg;
            if (schema == kScenarioSchema)
                svg = cmd_plot(scenario_from_json(j).config, kind);
            else if (schema == kReportSchema)
                svg = cmd_plot(report_from_json(j), kind);
            else
                fail(ErrorCode::InvalidInput, "cannot plot a file of schema " + schema);
            emit(svg, out);
        }
    } catch (const GeodesyError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_code_for(err.code());
    }
    return kOk;
}
