#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "geodesy/geometry.hpp"
#include "geodesy/measurement.hpp"

namespace testing {

using geodesy::Complex;
using geodesy::PlanarPoint;

inline double min_separation(const std::vector<PlanarPoint>& pts) {
    double best = 1e300;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::min(best, geodesy::distance(pts[a], pts[b]));
    return best;
}

/// Points uniform in [-1,1]^2 with a minimum pairwise separation.
inline std::vector<PlanarPoint> random_points(std::mt19937_64& rng, std::size_t n, double sep = 0.05) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PlanarPoint> pts;
    while (pts.size() < n) {
        PlanarPoint p{u(rng), u(rng)};
        bool ok = true;
        for (const auto& o : pts) ok = ok && geodesy::distance(o, p) >= sep;
        if (ok) pts.push_back(p);
    }
    return pts;
}

inline geodesy::Configuration random_configuration(std::mt19937_64& rng, std::size_t t, std::size_t m) {
    auto pts = random_points(rng, t + m);
    std::vector<PlanarPoint> targets(pts.begin(), pts.begin() + static_cast<long>(t));
    std::vector<PlanarPoint> measures(pts.begin() + static_cast<long>(t), pts.end());
    return {targets, measures};
}

/// Four points in convex position, listed in counter-clockwise order.
inline std::vector<PlanarPoint> random_convex_quad(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> r(0.6, 1.4), jitter(-0.35, 0.35);
    std::vector<PlanarPoint> q;
    for (int k = 0; k < 4; ++k) {
        const double a = k * M_PI / 2.0 + jitter(rng), rad = r(rng);
        q.push_back({rad * std::cos(a), rad * std::sin(a)});
    }
    return q;
}

/// Three points around the origin and a fourth inside their triangle.
inline std::vector<PlanarPoint> random_concave_quad(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> r(0.8, 1.2), jitter(-0.3, 0.3), w(0.2, 0.5);
    std::vector<PlanarPoint> q;
    for (int k = 0; k < 3; ++k) {
        const double a = k * 2.0 * M_PI / 3.0 + jitter(rng), rad = r(rng);
        q.push_back({rad * std::cos(a), rad * std::sin(a)});
    }
    const double a = w(rng), b = w(rng), c = 1.0 - a - b;
    q.push_back({a * q[0].x + b * q[1].x + c * q[2].x, a * q[0].y + b * q[1].y + c * q[2].y});
    return q;
}

/// arg of conj(q - p1)(q - p2), computed with atan2 on real vectors.
inline double angle_oracle(const PlanarPoint& q, const PlanarPoint& p1, const PlanarPoint& p2) {
    const double ax = p1.x - q.x, ay = p1.y - q.y, bx = p2.x - q.x, by = p2.y - q.y;
    return std::atan2(ax * by - ay * bx, ax * bx + ay * by);
}

inline double wrap_pi(double a) { return std::remainder(a, 2.0 * M_PI); }

}  // namespace testing
