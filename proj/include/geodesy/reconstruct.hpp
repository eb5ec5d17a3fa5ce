#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "geodesy/measurement.hpp"
#include "geodesy/profile.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// Resection and forward intersection

struct ResectOptions {
    /// Relative distance to the circumcircle of the three targets below which
    /// the measure point is not determined.
    double critical_tol = 1e-9;
    double tangent_tol = 1e-12;
};

/// Measure point q with (angle_q(p1, p2))^2 = d12 and (angle_q(p1, p3))^2 = d13:
/// the second intersection of the two angle circles through p1.
PlanarPoint resect(const PlanarPoint& p1, const PlanarPoint& p2, const PlanarPoint& p3, const DoubleAngle& d12,
                   const DoubleAngle& d13, const ResectOptions& options = {});

/// The line through `station` whose double angle from the ray station -> reference is `angle`.
struct SightLine {
    PlanarPoint station;
    PlanarPoint reference;
    DoubleAngle angle;

    Complex direction() const;
};

/// |sin| of the crossing angle of two sight lines.
double crossing_sine(const SightLine& a, const SightLine& b);

PlanarPoint intersect_sight_lines(const SightLine& a, const SightLine& b, double tol = 1e-10);

/// Target recovered from two known measure points and its double angles
/// against the known target p1.
PlanarPoint forward_intersect(const PlanarPoint& q1, const PlanarPoint& q2, const PlanarPoint& p1,
                              const DoubleAngle& d1, const DoubleAngle& d2, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Canonical frame and validation

/// Similarity placing targets[0] at (0,0) and targets[1] at (1,0).
Similarity canonical_frame(const Configuration& cfg);
Configuration canonicalize(const Configuration& cfg);

/// Max entrywise distance between M and the matrix measured on cfg.
double matrix_residual(const Configuration& cfg, const DoubleAngleMatrix& M);

/// Resects every measure point of M against the targets, choosing for each
/// row the target triple that reproduces the whole row best.
std::vector<PlanarPoint> resect_measures(std::span<const PlanarPoint> targets, const DoubleAngleMatrix& M);

// ---------------------------------------------------------------------------
// Point identification

struct IdentifyOptions {
    double rank_tol = kRankTol;
    /// Cross-validation bound on re-measured rows.
    double tol = 1e-6;
};

/// Targets (canonical frame) from a double angle matrix with t >= 5, m >= 4,
/// by diagonal-point measurements on the 4-subset profiles.
std::vector<PlanarPoint> identify_targets(const DoubleAngleMatrix& M, const IdentifyOptions& options = {});

/// Double angle at target e between the reference target 0 and target b,
/// read off three subset profiles of `model`.
DoubleAngle angle_at_target(ProfileModel& model, std::size_t e, std::size_t b);

/// Reflected circumcenters: p'_i is the mirror image (across the x-axis) of
/// the circumcenter of the triangle omitting p_i. A cocircular quadrilateral
/// is returned unchanged.
std::array<PlanarPoint, 4> twin_quadrilateral(std::span<const PlanarPoint> quad, double tol = 1e-9);

/// Twin of a full t = 4 solution: twin targets, measures resected, canonical
/// frame. Tries the alternative vertex correspondences if M is not matched.
Configuration twin_configuration(const Configuration& sol, const DoubleAngleMatrix& M, double tol = 1e-6);

/// Second solution of a three-measure-point configuration: the configuration
/// is inverted about p_1, the twin of the inverted quadrilateral
/// (image of infinity, q_1, q_2, q_3) is taken, and the remaining targets are
/// forward-intersected against the mapped-back measure points.
Configuration dual_second_solution(const Configuration& sol, double tol = 1e-6);

}  // namespace geodesy
