#include "geodesy/solve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geodesy/numeric.hpp"
#include "geodesy/reconstruct.hpp"

namespace geodesy {

std::string to_string(SolutionKind kind) {
    switch (kind) {
        case SolutionKind::Unique: return "Unique";
        case SolutionKind::TwinPair: return "TwinPair";
        case SolutionKind::Infinite: return "Infinite";
        case SolutionKind::DegenerateAmbiguous: return "DegenerateAmbiguous";
    }
    return "unknown";
}

namespace {

EnumerateOptions enumerate_options(const SolveOptions& options) {
    EnumerateOptions e;
    e.restarts = options.restarts;
    e.seed = options.seed;
    return e;
}

std::vector<NumericSolution> numeric_or_fail(const DoubleAngleMatrix& M, const SolveOptions& options) {
    EnumerateStats stats;
    auto found = enumerate_numeric(M, enumerate_options(options), &stats);
    if (found.empty())
        fail(ErrorCode::NoSolutionFound, std::to_string(stats.restarts) + " restarts, " +
                                             std::to_string(stats.converged) + " converged, best residual " +
                                             std::to_string(stats.best_residual));
    return found;
}

bool similar(const Configuration& a, const Configuration& b) {
    const auto pa = a.all_points(), pb = b.all_points();
    return align_similarity(pa, pb, false).rms_residual < 1e-3;
}

double orientation_of(const Configuration& c) {
    return orientation(c.targets()[0], c.targets()[1], c.targets()[2]);
}

/// Smallest pairwise distance over the diameter.
double spread(const Configuration& c) {
    const auto pts = c.all_points();
    double nearest = 1e300;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) nearest = std::min(nearest, distance(pts[a], pts[b]));
    return nearest / diameter(pts);
}

/// Degeneracy is a property of M; it is read off the best-conditioned
/// solution, since a squeezed twin makes the predicates lose precision.
DegeneracyFlags solution_flags(const std::vector<Configuration>& sols, double tol) {
    const auto best = std::max_element(sols.begin(), sols.end(), [](const Configuration& a, const Configuration& b) {
        return spread(a) < spread(b);
    });
    return degeneracy_flags(*best, tol);
}

/// Positively oriented solution first; stable otherwise.
void order_pair(std::vector<Configuration>& sols) {
    if (sols.size() == 2 && orientation_of(sols[0]) <= 0.0 && orientation_of(sols[1]) > 0.0)
        std::swap(sols[0], sols[1]);
}

/// Twin pair, or a single solution when the second one coincides with the first.
SolutionSet pair_or_unique(Configuration first, std::optional<Configuration> second) {
    SolutionSet set;
    set.solutions.push_back(std::move(first));
    if (second && !similar(set.solutions[0], *second)) {
        set.solutions.push_back(std::move(*second));
        set.kind = SolutionKind::TwinPair;
        order_pair(set.solutions);
    } else {
        set.kind = SolutionKind::Unique;
    }
    return set;
}

double max_residual(const std::vector<Configuration>& sols, const DoubleAngleMatrix& M) {
    double worst = 0.0;
    for (const auto& s : sols) worst = std::max(worst, matrix_residual(s, M));
    return worst;
}

SolutionSet dual_pair(const DoubleAngleMatrix& M, const SolveOptions& options, ReconstructionReport& report) {
    const auto found = numeric_or_fail(M, options);
    report.stages.push_back({"numeric", found.front().residual});
    std::optional<Configuration> second;
    std::string failure;
    try {
        second = dual_second_solution(found.front().config, options.tol);
        report.stages.push_back({"dual", matrix_residual(*second, M)});
    } catch (const GeodesyError& err) {
        failure = err.what();
    }
    if (!second && found.size() > 1) second = found[1].config;
    SolutionSet set = pair_or_unique(found.front().config, second);
    if (!failure.empty()) set.diagnostics.reasons.push_back("dual construction failed: " + failure);
    return set;
}

}  // namespace

SolutionSet identify_quadrilateral(const DoubleAngleMatrix& M, const SolveOptions& options) {
    if (M.t() != 4 || M.m() < 4) fail(ErrorCode::InvalidShape, "quadrilateral identification needs t = 4, m >= 4");
    const auto found = numeric_or_fail(M, options);
    const Configuration& first = found.front().config;
    const Configuration second = twin_configuration(first, M, options.tol);
    SolutionSet set = pair_or_unique(first, second);
    for (const auto& s : set.solutions) {
        const double r = matrix_residual(s, M);
        if (r > options.tol) fail(ErrorCode::ValidationFailed, "solution residual " + std::to_string(r));
        set.diagnostics.residuals.push_back(r);
    }
    return set;
}

SolveResult solve(const DoubleAngleMatrix& M, const std::optional<DirectedAngleMatrix>& directed,
                  const SolveOptions& options) {
    const std::size_t t = M.t(), m = M.m();
    if (t < 3 || m < 1) fail(ErrorCode::InvalidShape, "solve needs t >= 3 and m >= 1");
    if (directed && (directed->t() != t || directed->m() != m))
        fail(ErrorCode::InvalidShape, "directed matrix shape differs from the double angle matrix");

    SolveResult result;
    auto& report = result.report;
    auto& set = result.set;
    report.t = t;
    report.m = m;
    const long excess = (static_cast<long>(m) - 2) * (static_cast<long>(t) - 3);
    report.dimension_count = excess - 2;

    if (excess < 2) {
        report.branch = kBranchUnderdetermined;
        set.kind = SolutionKind::Infinite;
        set.diagnostics.reasons.push_back("(m-2)(t-3) = " + std::to_string(excess) +
                                          " < 2: fewer equations than unknowns");
        return result;
    }

    // Matrix-level degeneracy: the surface interpolation is not unique.
    if (t == 4) {
        const int dim = profile_dimension(M, {0, 1, 2, 3}, options.rank_tol);
        if (dim != 1) {
            report.branch = kBranchDegenerateProfile;
            set.kind = SolutionKind::DegenerateAmbiguous;
            set.diagnostics.reasons.push_back("profile interpolation has dimension " + std::to_string(dim));
        }
    } else if (m == 3) {
        const auto co = interpolate_coprofile(M, options.rank_tol);
        if (co.dimension != 1) {
            report.branch = kBranchDegenerateCoprofile;
            set.kind = SolutionKind::DegenerateAmbiguous;
            set.diagnostics.reasons.push_back("co-profile interpolation has dimension " +
                                              std::to_string(co.dimension));
        }
    }
    if (set.kind == SolutionKind::DegenerateAmbiguous) {
        // Sample solutions for inspection; none are guaranteed to be all of them.
        for (const auto& s : enumerate_numeric(M, enumerate_options(options))) set.solutions.push_back(s.config);
        for (const auto& s : set.solutions) set.diagnostics.residuals.push_back(matrix_residual(s, M));
        if (set.solutions.empty())
            set.diagnostics.reasons.push_back("no sample solution with distinct points (repeated rows in M?)");
        else
            set.diagnostics.flags = solution_flags(set.solutions, options.degeneracy_tol);
        return result;
    }

    if (t >= 5 && m >= 4) {
        report.branch = kBranchUniqueProfile;
        try {
            IdentifyOptions io;
            io.rank_tol = options.rank_tol;
            io.tol = options.tol;
            const auto targets = identify_targets(M, io);
            Configuration cfg(targets, resect_measures(targets, M));
            report.stages.push_back({"identify", matrix_residual(cfg, M)});
            set.kind = SolutionKind::Unique;
            set.solutions.push_back(std::move(cfg));
        } catch (const GeodesyError& err) {
            if (err.code() != ErrorCode::DegenerateSubset) throw;
            set.kind = SolutionKind::DegenerateAmbiguous;
            set.diagnostics.reasons.push_back(err.what());
            for (const auto& s : enumerate_numeric(M, enumerate_options(options))) set.solutions.push_back(s.config);
        }
    } else if (t == 4) {
        report.branch = kBranchTwinQuadrilateral;
        set = identify_quadrilateral(M, options);
        report.stages.push_back({"twin", max_residual(set.solutions, M)});
    } else {
        report.branch = kBranchDualTwin;
        set = dual_pair(M, options, report);
    }

    set.diagnostics.residuals.clear();
    for (const auto& s : set.solutions) {
        const double r = matrix_residual(s, M);
        if (r > options.tol && set.kind != SolutionKind::DegenerateAmbiguous)
            fail(ErrorCode::ValidationFailed, "solution reproduces the matrix only to " + std::to_string(r));
        set.diagnostics.residuals.push_back(r);
    }
    report.stages.push_back({"final", max_residual(set.solutions, M)});

    // Point-level degeneracy of the reconstruction.
    if (!set.solutions.empty()) {
        set.diagnostics.flags = solution_flags(set.solutions, options.degeneracy_tol);
        if (!set.diagnostics.flags.empty()) {
            set.kind = SolutionKind::DegenerateAmbiguous;
            for (auto kind : set.diagnostics.flags.kinds()) set.diagnostics.reasons.push_back(to_string(kind));
        }
    }

    if (directed) {
        report.direction.applied = true;
        report.direction.before = set.solutions.size();
        set.solutions = filter_by_direction(set.solutions, *directed, options.tol);
        report.direction.after = set.solutions.size();
        if (set.solutions.empty())
            fail(ErrorCode::NoSolutionFound, "no candidate reproduces the directed angles");
        if (set.kind == SolutionKind::TwinPair && set.solutions.size() == 1) {
            set.kind = SolutionKind::Unique;
            set.diagnostics.reasons.push_back("direction information selects one twin");
        }
        set.diagnostics.residuals.clear();
        for (const auto& s : set.solutions) set.diagnostics.residuals.push_back(matrix_residual(s, M));
    }
    return result;
}

}  // namespace geodesy
