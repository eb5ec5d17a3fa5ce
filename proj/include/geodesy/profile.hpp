#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "geodesy/measurement.hpp"

namespace geodesy {

inline constexpr double kRankTol = 1e-8;

/// Quadratic form v^T Q v on complex P^3, Q symmetric with unit Frobenius norm.
///
/// Serialized coefficient order is lexicographic on index pairs:
/// (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) (1,3) (2,2) (2,3) (3,3).
class Quadric {
public:
    explicit Quadric(const Eigen::Matrix4cd& q);
    static Quadric from_coefficients(std::span<const Complex, 10> coeffs);

    const Eigen::Matrix4cd& matrix() const { return q_; }
    std::array<Complex, 10> coefficients() const;

    Complex form(const Eigen::Vector4cd& u, const Eigen::Vector4cd& v) const;
    Complex evaluate_raw(const ProjectivePoint& p) const;

    /// |v^T Q v| / |v|^2, the scale-free residual of a point.
    double residual(const ProjectivePoint& p) const;

private:
    Eigen::Matrix4cd q_;
};

struct InterpolationResult {
    std::vector<Quadric> basis;
    int dimension = 0;
    /// Smallest retained over largest discarded singular value (infinite when
    /// nothing nonzero was discarded).
    double conditioning = 0.0;
    std::vector<double> singular_values;
};

/// Coordinate points of P^dim plus the all-ones point.
std::vector<ProjectivePoint> fixed_profile_points(std::size_t dim);

InterpolationResult interpolate_quadric(std::span<const ProjectivePoint> points, double rank_tol = kRankTol);

/// Profile quadric of four targets. `targets` is ascending and starts with
/// the reference target 0; coordinate k of the quadric belongs to targets[k].
struct SubsetProfile {
    std::array<std::size_t, 4> targets{};
    Quadric quadric;
    double conditioning = 0.0;
};

/// Interpolates the profile of a 4-subset from the rows of M and the five
/// fixed points. Throws NonUniqueProfile (detail = dimension) unless the
/// solution space is one-dimensional.
SubsetProfile profile_for_subset(const DoubleAngleMatrix& M, std::array<std::size_t, 4> subset,
                                 double rank_tol = kRankTol);

/// Nullspace dimension of the subset profile interpolation, without throwing.
int profile_dimension(const DoubleAngleMatrix& M, std::array<std::size_t, 4> subset, double rank_tol = kRankTol);

/// Quadric(s) through the t-1 column points of a three-row matrix and the fixed points.
InterpolationResult interpolate_coprofile(const DoubleAngleMatrix& M, double rank_tol = kRankTol);

/// Two diagonals of a 4-subset, given as target indices (not positions).
struct DiagonalPairing {
    std::array<std::size_t, 2> first{};
    std::array<std::size_t, 2> second{};
};

struct DiagonalOptions {
    double tangent_tol = 1e-6;
    double unit_tol = 1e-6;
};

/// Double angles, measured from the intersection point of the two diagonals,
/// between targets[0] and targets[1..3] of the subset.
std::array<DoubleAngle, 3> diagonal_measurement(const SubsetProfile& profile, const DiagonalPairing& pairing,
                                                const DiagonalOptions& options = {});

/// The collection of 4-subset profiles of a t >= 4 tuple, built lazily.
class ProfileModel {
public:
    ProfileModel(DoubleAngleMatrix M, double rank_tol = kRankTol);

    std::size_t t() const { return M_.t(); }
    const DoubleAngleMatrix& matrix() const { return M_; }

    /// Cached profile of {0, a, b, c} (any order); rethrows NonUniqueProfile.
    const SubsetProfile& subset(std::array<std::size_t, 4> indices);

    /// Largest residual of any measurement row, projected to a stored
    /// subset, on that subset's quadric.
    double max_row_residual() const;

private:
    DoubleAngleMatrix M_;
    double rank_tol_;
    std::map<std::array<std::size_t, 4>, SubsetProfile> cache_;
    std::map<std::array<std::size_t, 4>, int> failures_;
};

}  // namespace geodesy
