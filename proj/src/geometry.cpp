#include "geodesy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace geodesy {

double distance(const PlanarPoint& a, const PlanarPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double diameter(std::span<const PlanarPoint> pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
    return d;
}

double orientation(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// ---------------------------------------------------------------------------
// Similarity

Similarity::Similarity(Complex scale_rotation, Complex translation, bool mirrored)
    : a_(scale_rotation), b_(translation), mirrored_(mirrored) {
    if (!(std::abs(a_) > 0.0) || !std::isfinite(std::abs(a_)) || !std::isfinite(std::abs(b_)))
        fail(ErrorCode::InvalidArgument, "similarity needs a finite nonzero scale-rotation");
}

Similarity Similarity::from_two_points(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& a_img,
                                       const PlanarPoint& b_img) {
    const Complex d = b.z() - a.z();
    if (std::abs(d) == 0.0) fail(ErrorCode::DegenerateSource, "reference points coincide");
    const Complex scale = (b_img.z() - a_img.z()) / d;
    return Similarity(scale, a_img.z() - scale * a.z(), false);
}

std::vector<PlanarPoint> Similarity::apply(std::span<const PlanarPoint> pts) const {
    std::vector<PlanarPoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(apply(p));
    return out;
}

Similarity Similarity::compose(const Similarity& inner) const {
    const Complex a2 = mirrored_ ? std::conj(inner.a_) : inner.a_;
    const Complex b2 = mirrored_ ? std::conj(inner.b_) : inner.b_;
    return Similarity(a_ * a2, a_ * b2 + b_, mirrored_ != inner.mirrored_);
}

Similarity Similarity::inverse() const {
    if (mirrored_) return Similarity(1.0 / std::conj(a_), -std::conj(b_ / a_), true);
    return Similarity(1.0 / a_, -b_ / a_, false);
}

// ---------------------------------------------------------------------------
// GeneralizedCircle

GeneralizedCircle GeneralizedCircle::from_coefficients(double a, double b, double c, double d) {
    std::array<double, 4> v{a, b, c, d};
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::InvalidArgument, "zero circle coefficients");
    for (double& x : v) x /= norm;
    for (double x : v) {
        if (std::abs(x) > 1e-12) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            break;
        }
    }
    if (v[0] != 0.0 && v[1] * v[1] + v[2] * v[2] - 4.0 * v[0] * v[3] <= 0.0)
        fail(ErrorCode::InvalidArgument, "coefficients do not describe a real circle");
    return GeneralizedCircle(v);
}

bool GeneralizedCircle::is_line(double tol) const { return std::abs(A()) <= tol; }

PlanarPoint GeneralizedCircle::center() const {
    if (A() == 0.0) fail(ErrorCode::InvalidArgument, "a line has no center");
    return {-B() / (2.0 * A()), -C() / (2.0 * A())};
}

double GeneralizedCircle::radius() const {
    if (A() == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(B() * B() + C() * C() - 4.0 * A() * D()) / (2.0 * std::abs(A()));
}

double GeneralizedCircle::evaluate(const PlanarPoint& p) const {
    return A() * (p.x * p.x + p.y * p.y) + B() * p.x + C() * p.y + D();
}

double GeneralizedCircle::distance(const PlanarPoint& p) const {
    const double disc = B() * B() + C() * C() - 4.0 * A() * D();
    return std::abs(evaluate(p)) / std::sqrt(disc);
}

double GeneralizedCircle::side(const PlanarPoint& p) const {
    const double f = evaluate(p);
    return A() < 0.0 ? -f : f;
}

double GeneralizedCircle::coefficient_distance(const GeneralizedCircle& other) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(coeffs_[i] - other.coeffs_[i]));
    return d;
}

// ---------------------------------------------------------------------------
// Constructions and predicates

PlanarPoint circumcenter(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c, double tol) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double scale = std::max({distance(a, b), distance(a, c), distance(b, c)});
    if (std::abs(d) <= 2.0 * tol * scale * scale)
        fail(ErrorCode::CollinearInput, "circumcenter of collinear points");
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

GeneralizedCircle circle_through(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c) {
    // Work relative to a, where the circle equation has no constant term.
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const double A = bx * cy - by * cx;
    const double B = by * c2 - b2 * cy;
    const double C = b2 * cx - bx * c2;
    return GeneralizedCircle::from_coefficients(A, B - 2.0 * A * a.x, C - 2.0 * A * a.y,
                                                A * (a.x * a.x + a.y * a.y) - B * a.x - C * a.y);
}

GeneralizedCircle fit_generalized_circle(std::span<const PlanarPoint> pts) {
    if (pts.size() < 3) fail(ErrorCode::TooFewPoints, "circle fit needs at least 3 points");
    if (pts.size() == 3) return circle_through(pts[0], pts[1], pts[2]);

    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double s = 0.0;
    for (const auto& p : pts) s += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
    s = std::sqrt(s / static_cast<double>(pts.size()));
    if (!(s > 0.0)) fail(ErrorCode::DegenerateSource, "all points coincide");

    Eigen::MatrixXd rows(static_cast<Eigen::Index>(pts.size()), 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double u = (pts[i].x - mx) / s, v = (pts[i].y - my) / s;
        rows.row(static_cast<Eigen::Index>(i)) << u * u + v * v, u, v, 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const Eigen::Vector4d n = svd.matrixV().col(3);
    const double A = n[0], B = n[1], C = n[2], D = n[3];
    // Undo u = (x - m) / s and clear the 1/s^2 factor.
    return GeneralizedCircle::from_coefficients(A, -2.0 * A * mx + s * B, -2.0 * A * my + s * C,
                                                A * (mx * mx + my * my) - s * (B * mx + C * my) + s * s * D);
}

bool are_cocircular(std::span<const PlanarPoint> pts, double tol) {
    if (pts.size() < 4) fail(ErrorCode::TooFewPoints, "cocircularity needs at least 4 points");
    if (diameter(pts) == 0.0) return true;
    const GeneralizedCircle circle = fit_generalized_circle(pts);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, circle.distance(p));
    return worst < tol;
}

bool are_collinear(std::span<const PlanarPoint> pts, double tol) {
    if (pts.size() < 3) return true;
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : pts) {
        const double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Principal axis of the scatter matrix.
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const double nx = -std::sin(angle), ny = std::cos(angle);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs((p.x - mx) * nx + (p.y - my) * ny));
    return worst < tol;
}

namespace {

Alignment fit_similarity(std::span<const PlanarPoint> source, std::span<const PlanarPoint> target, bool mirror) {
    const auto n = static_cast<double>(source.size());
    Complex ms{0.0, 0.0}, mt{0.0, 0.0};
    for (std::size_t k = 0; k < source.size(); ++k) {
        ms += mirror ? source[k].z_bar() : source[k].z();
        mt += target[k].z();
    }
    ms /= n;
    mt /= n;
    Complex num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t k = 0; k < source.size(); ++k) {
        const Complex s = (mirror ? source[k].z_bar() : source[k].z()) - ms;
        num += std::conj(s) * (target[k].z() - mt);
        den += std::norm(s);
    }
    if (std::abs(num) == 0.0) num = Complex(std::numeric_limits<double>::min(), 0.0);
    const Complex a = num / den;
    const Similarity sim(a, mt - a * ms, mirror);
    double ss = 0.0;
    for (std::size_t k = 0; k < source.size(); ++k) ss += std::norm(sim.apply(source[k].z()) - target[k].z());
    return {sim, std::sqrt(ss / n) / std::abs(a)};
}

}  // namespace

Alignment align_similarity(std::span<const PlanarPoint> source, std::span<const PlanarPoint> target,
                           bool allow_mirror) {
    if (source.size() != target.size() || source.size() < 2)
        fail(ErrorCode::InvalidArgument, "alignment needs two tuples of equal length >= 2");
    if (diameter(source) == 0.0) fail(ErrorCode::DegenerateSource, "all source points coincide");

    Alignment best = fit_similarity(source, target, false);
    if (allow_mirror) {
        Alignment mirrored = fit_similarity(source, target, true);
        if (mirrored.rms_residual < best.rms_residual) best = mirrored;
    }
    return best;
}

PlanarPoint line_intersection(const PlanarPoint& a1, const PlanarPoint& a2, const PlanarPoint& b1,
                              const PlanarPoint& b2, double tol) {
    const double ux = a2.x - a1.x, uy = a2.y - a1.y;
    const double vx = b2.x - b1.x, vy = b2.y - b1.y;
    const double cross = ux * vy - uy * vx;
    if (std::abs(cross) <= tol * std::hypot(ux, uy) * std::hypot(vx, vy))
        fail(ErrorCode::ParallelLines, "lines do not cross");
    const double s = ((b1.x - a1.x) * vy - (b1.y - a1.y) * vx) / cross;
    return {a1.x + s * ux, a1.y + s * uy};
}

}  // namespace geodesy
