#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geodesy/measurement.hpp"

namespace geodesy {

struct EnumerateOptions {
    std::size_t restarts = 64;
    std::uint64_t seed = 0;
    /// Max entrywise residual for a restart to count as converged.
    double converge_tol = 1e-10;
    /// Similarity-alignment rms below which two solutions are the same.
    double cluster_tol = 1e-4;
    std::size_t max_iterations = 300;
};

struct NumericSolution {
    Configuration config;  // canonical frame
    double residual = 0.0;
    std::size_t hits = 0;  // restarts that converged into this cluster
};

struct EnumerateStats {
    std::size_t restarts = 0;
    std::size_t converged = 0;
    double best_residual = 0.0;
};

/// Damped least-squares search for configurations reproducing M, from seeded
/// random starts. Returns one representative per cluster, ordered by residual
/// and then by coordinates.
std::vector<NumericSolution> enumerate_numeric(const DoubleAngleMatrix& M, const EnumerateOptions& options = {},
                                               EnumerateStats* stats = nullptr);

}  // namespace geodesy
