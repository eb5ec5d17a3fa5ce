#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "geodesy/errors.hpp"

namespace geodesy {

using Complex = std::complex<double>;

inline constexpr double kUnitTol = 1e-9;
inline constexpr double kCollinearTol = 1e-9;
inline constexpr double kResidualTol = 1e-9;

/// A point of the real plane. The complex views z = x + iy and its conjugate
/// are derived on demand.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    Complex z() const { return {x, y}; }
    Complex z_bar() const { return {x, -y}; }

    static PlanarPoint from_complex(Complex z) { return {z.real(), z.imag()}; }

    friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

double distance(const PlanarPoint& a, const PlanarPoint& b);

/// Largest pairwise distance of a point set (0 for fewer than two points).
double diameter(std::span<const PlanarPoint> pts);

/// Signed twice-area of the triangle (a, b, c); positive for counter-clockwise.
double orientation(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c);

/// z -> a * z + b, or a * conj(z) + b when mirrored.
class Similarity {
public:
    Similarity() = default;
    Similarity(Complex scale_rotation, Complex translation, bool mirrored = false);

    static Similarity identity() { return {}; }

    /// The orientation-preserving similarity sending a -> a_img and b -> b_img.
    static Similarity from_two_points(const PlanarPoint& a, const PlanarPoint& b,
                                      const PlanarPoint& a_img, const PlanarPoint& b_img);

    Complex scale_rotation() const { return a_; }
    Complex translation() const { return b_; }
    bool mirrored() const { return mirrored_; }

    Complex apply(Complex z) const { return a_ * (mirrored_ ? std::conj(z) : z) + b_; }
    PlanarPoint apply(const PlanarPoint& p) const { return PlanarPoint::from_complex(apply(p.z())); }
    std::vector<PlanarPoint> apply(std::span<const PlanarPoint> pts) const;

    /// (*this) after `inner`: z -> this(inner(z)).
    Similarity compose(const Similarity& inner) const;
    Similarity inverse() const;

private:
    Complex a_{1.0, 0.0};
    Complex b_{0.0, 0.0};
    bool mirrored_ = false;
};

/// A(x^2 + y^2) + Bx + Cy + D = 0, coefficient vector of unit norm with its
/// first nonzero entry positive. A == 0 encodes a line.
class GeneralizedCircle {
public:
    static GeneralizedCircle from_coefficients(double a, double b, double c, double d);

    const std::array<double, 4>& coefficients() const { return coeffs_; }
    double A() const { return coeffs_[0]; }
    double B() const { return coeffs_[1]; }
    double C() const { return coeffs_[2]; }
    double D() const { return coeffs_[3]; }

    bool is_line(double tol = 1e-14) const;
    PlanarPoint center() const;
    double radius() const;

    double evaluate(const PlanarPoint& p) const;

    /// First-order geometric distance |f(p)| / sqrt(B^2 + C^2 - 4AD); exact for
    /// lines, accurate near the curve for circles.
    double distance(const PlanarPoint& p) const;

    /// Signed side: negative inside a circle; for lines the sign of Bx + Cy + D.
    double side(const PlanarPoint& p) const;

    /// Max coefficient difference to another circle in canonical form.
    double coefficient_distance(const GeneralizedCircle& other) const;

private:
    explicit GeneralizedCircle(std::array<double, 4> c) : coeffs_(c) {}
    std::array<double, 4> coeffs_{};
};

PlanarPoint circumcenter(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c,
                         double tol = kCollinearTol);

GeneralizedCircle circle_through(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c);

/// Least-squares generalized circle through >= 3 points (algebraic fit on
/// normalized coordinates).
GeneralizedCircle fit_generalized_circle(std::span<const PlanarPoint> pts);

bool are_cocircular(std::span<const PlanarPoint> pts, double tol = kResidualTol);
bool are_collinear(std::span<const PlanarPoint> pts, double tol = kCollinearTol);

struct Alignment {
    Similarity transform;
    double rms_residual = 0.0;
};

/// Least-squares similarity mapping `source` onto `target`. The residual is
/// expressed in source units (target-space rms divided by the scale |a|).
Alignment align_similarity(std::span<const PlanarPoint> source, std::span<const PlanarPoint> target,
                           bool allow_mirror);

/// Intersection of the line through a1, a2 with the line through b1, b2.
/// Throws ParallelLines when they do not cross.
PlanarPoint line_intersection(const PlanarPoint& a1, const PlanarPoint& a2, const PlanarPoint& b1,
                              const PlanarPoint& b2, double tol = 1e-12);

}  // namespace geodesy
