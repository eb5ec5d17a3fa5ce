#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geodesy/measurement.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// Cyclic cubics

/// Real plane cubic through the cyclic points (0:1:i) and (0:1:-i).
///
/// Coefficients are in homogeneous coordinates (w:x:y), monomial order
/// w^3, w^2x, w^2y, wx^2, wxy, wy^2, x^3, x^2y, xy^2, y^3; unit norm.
struct CyclicCubic {
    std::array<double, 10> coefficients{};
    /// Fewer than eight points: a cubic exists for any input.
    bool underdetermined = false;

    double evaluate(const PlanarPoint& p) const;
    /// Value at the cyclic point (0:1:i); zero up to rounding.
    Complex at_cyclic_point() const;
};

/// A cyclic cubic through all points, if the condition matrix has numerical
/// rank at most 7 (relative tolerance `rank_tol`).
std::optional<CyclicCubic> fit_cyclic_cubic(std::span<const PlanarPoint> points, double rank_tol = 1e-8);

// ---------------------------------------------------------------------------
// Degeneracy flags

enum class DegeneracyKind {
    CocircularTargets,
    CollinearTargets,
    CocircularMeasures,
    CollinearMeasures,
    CyclicCubic,
};

std::string to_string(DegeneracyKind kind);

struct DegeneracyFlag {
    DegeneracyKind kind;
    /// Target or measure indices of the offending subset (empty for the cubic).
    std::vector<std::size_t> indices;
};

struct DegeneracyFlags {
    std::vector<DegeneracyFlag> flags;

    bool empty() const { return flags.empty(); }
    bool has(DegeneracyKind kind) const;
    /// Distinct kinds raised, in enum order.
    std::vector<DegeneracyKind> kinds() const;
};

/// Every 5-subset of targets and 4-subset of measures tested for
/// cocircularity/collinearity at `tol` relative to the configuration diameter,
/// plus a cyclic cubic through all t + m points when t + m >= 8.
DegeneracyFlags degeneracy_flags(const Configuration& cfg, double tol = 1e-7);

// ---------------------------------------------------------------------------
// Fundamental circles and regions

/// True when the four points are in convex position.
bool is_convex(std::span<const PlanarPoint> quad);

/// Vertex indices in counter-clockwise order around the centroid.
std::array<std::size_t, 4> cyclic_order(std::span<const PlanarPoint> quad);

struct FundamentalCircles {
    std::array<PlanarPoint, 4> quad{};
    /// circles[i] passes through every vertex except quad[i].
    std::vector<GeneralizedCircle> circles;
    bool convex = false;
    /// Inside-bits of the inner region, when the quadrilateral is convex.
    std::optional<std::uint8_t> inner_bits;
};

FundamentalCircles fundamental_circles(std::span<const PlanarPoint> quad, double tol = 1e-9);

enum class RegionLabel { Inner, Bounded, Unbounded };

std::string to_string(RegionLabel label);

struct RegionSignature {
    std::array<bool, 4> inside{};
    RegionLabel label = RegionLabel::Bounded;

    /// inside[i] packed into bit i.
    std::uint8_t bits() const;
};

/// Throws OnExceptionalCurve when q is within tol (relative to the
/// quadrilateral's diameter) of a fundamental circle.
RegionSignature region_signature(const PlanarPoint& q, const FundamentalCircles& fc, double tol = 1e-9);

struct RegionSample {
    PlanarPoint point;
    RegionSignature signature;
};

struct RegionCensus {
    /// One sample per realized signature, ordered by bits.
    std::vector<RegionSample> regions;
    /// Arcs (pieces of a circle between consecutive vertices) bounding the unbounded region.
    std::size_t unbounded_arcs = 0;
    std::size_t grid_signatures = 0;
};

/// Signatures realized on a grid x grid lattice over the circles' bounding
/// box, united with points just off both sides of every arc midpoint.
RegionCensus region_census(const FundamentalCircles& fc, std::size_t grid = 200);

/// Number of arcs on the boundary of the unbounded region.
std::size_t unbounded_boundary_arcs(const FundamentalCircles& fc);

/// Uniform samples (rejection on a disk around the inner reference point)
/// lying in the inner region of a convex quadrilateral.
std::vector<PlanarPoint> sample_inner_region(const FundamentalCircles& fc, std::size_t count, std::uint64_t seed);

/// Uniform samples in the region with the given bits, searched over the
/// circles' bounding box enlarged by `margin` diameters.
std::vector<PlanarPoint> sample_region(const FundamentalCircles& fc, std::uint8_t bits, std::size_t count,
                                       std::uint64_t seed, double margin = 1.0);

// ---------------------------------------------------------------------------
// Twin map and directions

/// rho(q): the point measuring against `twin` what q measures against `quad`.
PlanarPoint twin_map(const PlanarPoint& q, std::span<const PlanarPoint> quad, std::span<const PlanarPoint> twin,
                     double tol = 1e-6);

/// directed_angle(rho(q), p'_1, p'_i) / directed_angle(q, p_1, p_i) rounded
/// to +-1; `deviation` receives the distance to the returned sign.
int direction_sign(const PlanarPoint& q, std::span<const PlanarPoint> quad, std::span<const PlanarPoint> twin,
                   std::size_t i, double* deviation = nullptr);

/// Candidates whose directed-angle matrix reproduces `directed` to tol.
std::vector<Configuration> filter_by_direction(std::span<const Configuration> candidates,
                                               const DirectedAngleMatrix& directed, double tol = 1e-6);

}  // namespace geodesy
