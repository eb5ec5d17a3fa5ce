#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geodesy/geometry.hpp"

namespace geodesy {

/// Oriented angle between two rays, stored as a unit complex number.
class DirectedAngle {
public:
    DirectedAngle() = default;
    /// Accepts a value within kUnitTol of the unit circle and renormalizes it.
    explicit DirectedAngle(Complex value);
    static DirectedAngle normalized(Complex value);
    static DirectedAngle from_radians(double radians);

    Complex value() const { return value_; }
    double radians() const { return std::arg(value_); }

    DirectedAngle operator*(const DirectedAngle& o) const { return normalized(value_ * o.value_); }
    DirectedAngle operator/(const DirectedAngle& o) const { return normalized(value_ * std::conj(o.value_)); }

private:
    Complex value_{1.0, 0.0};
};

/// Square of a directed angle: the angle between two lines, known modulo pi.
class DoubleAngle {
public:
    DoubleAngle() = default;
    explicit DoubleAngle(Complex value);
    static DoubleAngle normalized(Complex value);
    static DoubleAngle from_directed(const DirectedAngle& a);

    Complex value() const { return value_; }

    /// One of the two directed angles squaring to this value (argument in (-pi/2, pi/2]).
    DirectedAngle half() const;

    DoubleAngle operator*(const DoubleAngle& o) const { return normalized(value_ * o.value_); }
    DoubleAngle operator/(const DoubleAngle& o) const { return normalized(value_ * std::conj(o.value_)); }
    DoubleAngle inverse() const { return DoubleAngle(std::conj(value_)); }
    DoubleAngle conj() const { return DoubleAngle(std::conj(value_)); }

    double distance(const DoubleAngle& o) const { return std::abs(value_ - o.value_); }

private:
    Complex value_{1.0, 0.0};
};

/// Targets p_1..p_t (index 0 is the reference target) and measure points q_1..q_m.
class Configuration {
public:
    Configuration() = default;
    /// Validates shape (t >= 3, m >= 1) and that all t + m points are distinct.
    Configuration(std::vector<PlanarPoint> targets, std::vector<PlanarPoint> measures);

    std::size_t t() const { return targets_.size(); }
    std::size_t m() const { return measures_.size(); }
    const std::vector<PlanarPoint>& targets() const { return targets_; }
    const std::vector<PlanarPoint>& measures() const { return measures_; }

    /// Targets followed by measures.
    std::vector<PlanarPoint> all_points() const;

    Configuration transformed(const Similarity& s) const;

private:
    std::vector<PlanarPoint> targets_;
    std::vector<PlanarPoint> measures_;
};

/// m x (t-1) array of angles measured at q_j between the reference target
/// and target i (column i-1).
template <typename Angle>
class AngleMatrix {
public:
    AngleMatrix() = default;
    AngleMatrix(std::size_t t, std::size_t m);
    AngleMatrix(std::size_t t, std::size_t m, std::vector<Angle> entries);

    std::size_t t() const { return t_; }
    std::size_t m() const { return m_; }
    std::size_t cols() const { return t_ - 1; }

    /// Angle at measure j between target 0 and target `target` (1 <= target < t).
    const Angle& at(std::size_t j, std::size_t target) const { return entries_[j * cols() + target - 1]; }
    Angle& at(std::size_t j, std::size_t target) { return entries_[j * cols() + target - 1]; }

    /// Same angle with target 0 allowed (the identity angle).
    Angle entry_or_identity(std::size_t j, std::size_t target) const {
        return target == 0 ? Angle() : at(j, target);
    }

    std::vector<Angle> row(std::size_t j) const;
    std::vector<Angle> column(std::size_t target) const;

    /// Matrix for the targets listed in `order` (order[0] becomes the
    /// reference), obtained through the chain rule.
    AngleMatrix permuted_targets(std::span<const std::size_t> order) const;

    /// Restriction to a subset of the measure points.
    AngleMatrix select_measures(std::span<const std::size_t> rows) const;

    const std::vector<Angle>& entries() const { return entries_; }

private:
    std::size_t t_ = 0;
    std::size_t m_ = 0;
    std::vector<Angle> entries_;
};

using DoubleAngleMatrix = AngleMatrix<DoubleAngle>;
using DirectedAngleMatrix = AngleMatrix<DirectedAngle>;

/// Max entrywise |a - b| of two matrices of equal shape.
double max_entry_distance(const DoubleAngleMatrix& a, const DoubleAngleMatrix& b);
double max_entry_distance(const DirectedAngleMatrix& a, const DirectedAngleMatrix& b);

DoubleAngleMatrix squared(const DirectedAngleMatrix& directed);

/// Point of complex projective space, compared up to complex scale.
class ProjectivePoint {
public:
    explicit ProjectivePoint(std::vector<Complex> coords);

    std::size_t dimension() const { return coords_.size() - 1; }
    const std::vector<Complex>& coords() const { return coords_; }
    Complex operator[](std::size_t i) const { return coords_[i]; }

    /// Affine chart dividing by the first coordinate (dropped from the result).
    std::vector<Complex> chart() const;

    bool equals(const ProjectivePoint& other, double tol = 1e-9) const;

private:
    std::vector<Complex> coords_;
};

DirectedAngle directed_angle(const PlanarPoint& q, const PlanarPoint& p1, const PlanarPoint& p2);
DoubleAngle double_angle(const PlanarPoint& q, const PlanarPoint& p1, const PlanarPoint& p2);

/// (F_1(z) : ... : F_t(z)), each factor renormalized to unit modulus.
ProjectivePoint measurement_map(std::span<const PlanarPoint> targets, const PlanarPoint& q);

DoubleAngleMatrix double_angle_matrix(const Configuration& cfg);
DirectedAngleMatrix directed_angle_matrix(const Configuration& cfg);

ProjectivePoint profile_point_from_row(std::span<const DoubleAngle> row);
ProjectivePoint coprofile_point_from_column(std::span<const DoubleAngle> column);

}  // namespace geodesy
