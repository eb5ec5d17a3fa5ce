#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geodesy/scenario.hpp"
#include "geodesy/solve.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// gen

enum class Family { Generic, CocircularTargets, CocircularMeasures, CyclicCubic, CollinearTargets, Fig2 };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

struct GenOptions {
    Family family = Family::Generic;
    std::size_t t = 5;
    std::size_t m = 4;
    std::uint64_t seed = 0;
    double jitter = 0.0;
};

/// Minimum pairwise distance of generated points (unit-square scale).
inline constexpr double kMinSeparation = 0.05;

/// Deterministic scenario for the given family. Generic scenarios are
/// redrawn until no degeneracy flag is raised. The fig2 family is always
/// t = 4, m = 4.
Scenario cmd_gen(const GenOptions& options);

// ---------------------------------------------------------------------------
// measure / solve

/// Double and directed matrices of the scenario; with jitter > 0 every
/// directed angle is rotated by a normal deviate (seeded by the scenario seed).
MatricesFile cmd_measure(const Scenario& scenario);

SolveResult cmd_solve(const MatricesFile& matrices, const SolveOptions& options, bool use_directed);

// ---------------------------------------------------------------------------
// census

struct CensusOptions {
    Family family = Family::Generic;
    std::vector<std::pair<std::size_t, std::size_t>> shapes;  // (t, m)
    std::size_t instances = 20;
    std::uint64_t seed = 0;
    std::size_t restarts = 64;
};

struct CensusRow {
    std::size_t t = 0;
    std::size_t m = 0;
    /// "inf", "1", "2", or "flagged" for degenerate families.
    std::string expected;
    /// Observed outcome ("inf", solution count, "flagged", "error") -> instances.
    std::map<std::string, std::size_t> observed;
    std::size_t agree = 0;
    std::size_t instances = 0;
};

/// Expected solution count of a generic instance: "inf" when (m-2)(t-3) < 2,
/// "2" for t = 4 or m = 3, otherwise "1".
std::string expected_count(std::size_t t, std::size_t m);

/// Instance k of a shape uses seed + k.
std::vector<CensusRow> cmd_census(const CensusOptions& options);

Json census_to_json(const std::vector<CensusRow>& rows, const CensusOptions& options);
std::string census_to_text(const std::vector<CensusRow>& rows);

// ---------------------------------------------------------------------------
// plot

enum class PlotKind { Config, Twin, CirclesRegions };

std::string to_string(PlotKind k);
PlotKind plot_kind_from_string(const std::string& name);

/// SVG for a configuration. Twin and circles-regions use the first four targets.
std::string cmd_plot(const Configuration& config, PlotKind what);

/// SVG for a report's first solution; UnplottableReport when there is none.
std::string cmd_plot(const ReportFile& report, PlotKind what);

}  // namespace geodesy
