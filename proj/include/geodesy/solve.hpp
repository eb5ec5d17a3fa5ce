#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geodesy/ambiguity.hpp"
#include "geodesy/measurement.hpp"
#include "geodesy/profile.hpp"

namespace geodesy {

enum class SolutionKind { Unique, TwinPair, Infinite, DegenerateAmbiguous };

std::string to_string(SolutionKind kind);

struct Diagnostics {
    std::vector<std::string> reasons;
    DegeneracyFlags flags;
    /// Max entrywise residual of each solution against the input matrix.
    std::vector<double> residuals;
};

/// Solutions in the canonical frame (target 0 at (0,0), target 1 at (1,0)).
/// A twin pair lists the positively oriented solution first.
struct SolutionSet {
    SolutionKind kind = SolutionKind::Infinite;
    std::vector<Configuration> solutions;
    Diagnostics diagnostics;
};

struct StageResidual {
    std::string stage;
    double value = 0.0;
};

struct DirectionFilterOutcome {
    bool applied = false;
    std::size_t before = 0;
    std::size_t after = 0;
};

struct ReconstructionReport {
    std::size_t t = 0;
    std::size_t m = 0;
    /// (m-2)(t-3) - 2: equations minus unknowns after removing the similarity gauge.
    long dimension_count = 0;
    /// One of: underdetermined, degenerate-profile, degenerate-coprofile,
    /// unique-profile, twin-quadrilateral, dual-twin.
    std::string branch;
    std::vector<StageResidual> stages;
    DirectionFilterOutcome direction;
};

struct SolveResult {
    SolutionSet set;
    ReconstructionReport report;
};

struct SolveOptions {
    std::size_t restarts = 64;
    std::uint64_t seed = 0;
    /// Entrywise agreement required of every returned solution.
    double tol = 1e-6;
    double rank_tol = kRankTol;
    /// Relative tolerance of the cocircularity and cyclic-cubic checks.
    double degeneracy_tol = 1e-7;
};

/// Branch names reported by solve.
inline constexpr const char* kBranchUnderdetermined = "underdetermined";
inline constexpr const char* kBranchDegenerateProfile = "degenerate-profile";
inline constexpr const char* kBranchDegenerateCoprofile = "degenerate-coprofile";
inline constexpr const char* kBranchUniqueProfile = "unique-profile";
inline constexpr const char* kBranchTwinQuadrilateral = "twin-quadrilateral";
inline constexpr const char* kBranchDualTwin = "dual-twin";

/// Both solutions of a t = 4, m >= 4 matrix: one found numerically, the other
/// its twin. Unique when the targets are cocircular. Throws NoSolutionFound.
SolutionSet identify_quadrilateral(const DoubleAngleMatrix& M, const SolveOptions& options = {});

/// Reconstruction of every configuration compatible with M, following the
/// case analysis on the shape and on degeneracies. When `directed` is given,
/// candidates not reproducing the directed angles are dropped.
SolveResult solve(const DoubleAngleMatrix& M, const std::optional<DirectedAngleMatrix>& directed = std::nullopt,
                  const SolveOptions& options = {});

}  // namespace geodesy
