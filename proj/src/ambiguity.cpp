#include "geodesy/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "geodesy/reconstruct.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// Cyclic cubics

namespace {

using Exponent = std::array<int, 3>;  // powers of (w, x, y)
using Poly = std::map<Exponent, double>;

constexpr std::array<Exponent, 10> kCubicMonomials{{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1}, {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) out[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    return out;
}

Poly add(Poly a, const Poly& b, double scale = 1.0) {
    for (const auto& [e, c] : b) a[e] += scale * c;
    return a;
}

// Real basis of cubics through both cyclic points, evaluated on affine
// coordinates (u, v): the six monomials of degree <= 2 and u(u^2+v^2), v(u^2+v^2).
std::array<double, 8> cyclic_basis(double u, double v) {
    const double r2 = u * u + v * v;
    return {1.0, u, v, u * u, u * v, v * v, u * r2, v * r2};
}

}  // namespace

double CyclicCubic::evaluate(const PlanarPoint& p) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto& e = kCubicMonomials[k];
        sum += coefficients[k] * std::pow(p.x, e[1]) * std::pow(p.y, e[2]);
    }
    return sum;
}

Complex CyclicCubic::at_cyclic_point() const {
    const auto& c = coefficients;
    return {c[6] - c[8], c[7] - c[9]};
}

std::optional<CyclicCubic> fit_cyclic_cubic(std::span<const PlanarPoint> points, double rank_tol) {
    if (points.empty()) fail(ErrorCode::TooFewPoints, "cubic fit needs at least one point");
    const auto n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x / n;
        my += p.y / n;
    }
    double s = 0.0;
    for (const auto& p : points) s += ((p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my)) / n;
    s = std::sqrt(s);
    if (!(s > 0.0)) s = 1.0;

    Eigen::MatrixXd A(static_cast<Eigen::Index>(std::max<std::size_t>(points.size(), 8)), 8);
    A.setZero();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto row = cyclic_basis((points[i].x - mx) / s, (points[i].y - my) / s);
        for (int k = 0; k < 8; ++k) A(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const bool underdetermined = points.size() < 8;
    if (!underdetermined && sv[7] > rank_tol * sv[0]) return std::nullopt;
    const Eigen::VectorXd n8 = svd.matrixV().col(7);

    // Back to (w:x:y): u = (x - mx w) / s, v = (y - my w) / s.
    const Poly W{{{1, 0, 0}, 1.0}};
    const Poly U{{{0, 1, 0}, 1.0 / s}, {{1, 0, 0}, -mx / s}};
    const Poly V{{{0, 0, 1}, 1.0 / s}, {{1, 0, 0}, -my / s}};
    const Poly R2 = add(multiply(U, U), multiply(V, V));
    const std::array<Poly, 8> basis{
        multiply(multiply(W, W), W), multiply(multiply(W, W), U), multiply(multiply(W, W), V),
        multiply(multiply(W, U), U), multiply(multiply(W, U), V), multiply(multiply(W, V), V),
        multiply(U, R2),             multiply(V, R2),
    };
    Poly cubic;
    for (std::size_t k = 0; k < 8; ++k) cubic = add(cubic, basis[k], n8[static_cast<Eigen::Index>(k)]);

    CyclicCubic out;
    out.underdetermined = underdetermined;
    double norm = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto it = cubic.find(kCubicMonomials[k]);
        out.coefficients[k] = it == cubic.end() ? 0.0 : it->second;
        norm += out.coefficients[k] * out.coefficients[k];
    }
    norm = std::sqrt(norm);
    for (auto& c : out.coefficients) c /= norm;
    return out;
}

// ---------------------------------------------------------------------------
// Degeneracy flags

std::string to_string(DegeneracyKind kind) {
    switch (kind) {
        case DegeneracyKind::CocircularTargets: return "cocircular-targets";
        case DegeneracyKind::CollinearTargets: return "collinear-targets";
        case DegeneracyKind::CocircularMeasures: return "cocircular-measures";
        case DegeneracyKind::CollinearMeasures: return "collinear-measures";
        case DegeneracyKind::CyclicCubic: return "cyclic-cubic";
    }
    return "unknown";
}

bool DegeneracyFlags::has(DegeneracyKind kind) const {
    return std::any_of(flags.begin(), flags.end(), [&](const DegeneracyFlag& f) { return f.kind == kind; });
}

std::vector<DegeneracyKind> DegeneracyFlags::kinds() const {
    std::vector<DegeneracyKind> out;
    for (auto kind : {DegeneracyKind::CocircularTargets, DegeneracyKind::CollinearTargets,
                      DegeneracyKind::CocircularMeasures, DegeneracyKind::CollinearMeasures,
                      DegeneracyKind::CyclicCubic})
        if (has(kind)) out.push_back(kind);
    return out;
}

namespace {

// Calls f on every k-subset of {0..n-1}.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

void flag_subsets(std::span<const PlanarPoint> pts, std::size_t k, double abs_tol, DegeneracyKind circle_kind,
                  DegeneracyKind line_kind, DegeneracyFlags& out) {
    for_each_subset(pts.size(), k, [&](const std::vector<std::size_t>& idx) {
        std::vector<PlanarPoint> sub;
        for (auto i : idx) sub.push_back(pts[i]);
        if (are_collinear(sub, abs_tol))
            out.flags.push_back({line_kind, idx});
        else if (are_cocircular(sub, abs_tol))
            out.flags.push_back({circle_kind, idx});
    });
}

}  // namespace

DegeneracyFlags degeneracy_flags(const Configuration& cfg, double tol) {
    DegeneracyFlags out;
    const auto all = cfg.all_points();
    const double abs_tol = tol * diameter(all);
    flag_subsets(cfg.targets(), 5, abs_tol, DegeneracyKind::CocircularTargets, DegeneracyKind::CollinearTargets, out);
    flag_subsets(cfg.measures(), 4, abs_tol, DegeneracyKind::CocircularMeasures, DegeneracyKind::CollinearMeasures,
                 out);
    if (all.size() >= 8) {
        // The relative rank threshold tracks the geometric tolerance.
        if (fit_cyclic_cubic(all, tol)) out.flags.push_back({DegeneracyKind::CyclicCubic, {}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fundamental circles and regions

namespace {

double exact_distance(const GeneralizedCircle& c, const PlanarPoint& p) {
    if (c.is_line()) return c.distance(p);
    return std::abs(distance(p, c.center()) - c.radius());
}

std::uint8_t inside_bits(const PlanarPoint& q, const std::vector<GeneralizedCircle>& circles) {
    std::uint8_t bits = 0;
    for (std::size_t i = 0; i < circles.size(); ++i)
        if (circles[i].side(q) < 0.0) bits |= static_cast<std::uint8_t>(1u << i);
    return bits;
}

std::array<PlanarPoint, 3> omit(std::span<const PlanarPoint> quad, std::size_t i) {
    std::array<PlanarPoint, 3> tri{};
    std::size_t n = 0;
    for (std::size_t k = 0; k < 4; ++k)
        if (k != i) tri[n++] = quad[k];
    return tri;
}

void require_quad(std::span<const PlanarPoint> quad) {
    if (quad.size() != 4) fail(ErrorCode::InvalidArgument, "a quadrilateral has four vertices");
}

}  // namespace

std::array<std::size_t, 4> cyclic_order(std::span<const PlanarPoint> quad) {
    require_quad(quad);
    double cx = 0.0, cy = 0.0;
    for (const auto& p : quad) {
        cx += p.x / 4.0;
        cy += p.y / 4.0;
    }
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(quad[a].y - cy, quad[a].x - cx) < std::atan2(quad[b].y - cy, quad[b].x - cx);
    });
    return order;
}

bool is_convex(std::span<const PlanarPoint> quad) {
    require_quad(quad);
    // Convex position: no vertex lies inside the triangle of the other three.
    for (std::size_t i = 0; i < 4; ++i) {
        const auto tri = omit(quad, i);
        const double o1 = orientation(tri[0], tri[1], quad[i]);
        const double o2 = orientation(tri[1], tri[2], quad[i]);
        const double o3 = orientation(tri[2], tri[0], quad[i]);
        if ((o1 > 0 && o2 > 0 && o3 > 0) || (o1 < 0 && o2 < 0 && o3 < 0)) return false;
    }
    return true;
}

FundamentalCircles fundamental_circles(std::span<const PlanarPoint> quad, double tol) {
    require_quad(quad);
    const double scale = diameter(quad);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto tri = omit(quad, i);
        if (std::abs(orientation(tri[0], tri[1], tri[2])) <= tol * scale * scale)
            fail(ErrorCode::CollinearTriple, "three vertices of the quadrilateral are collinear");
    }
    if (are_cocircular(quad, tol * scale))
        fail(ErrorCode::Cocircular, "the vertices are cocircular; the twin map is a similarity");

    FundamentalCircles fc;
    std::copy(quad.begin(), quad.end(), fc.quad.begin());
    for (std::size_t i = 0; i < 4; ++i) {
        const auto tri = omit(quad, i);
        fc.circles.push_back(circle_through(tri[0], tri[1], tri[2]));
    }
    fc.convex = is_convex(quad);
    if (fc.convex) {
        const auto o = cyclic_order(quad);
        const PlanarPoint centre = line_intersection(quad[o[0]], quad[o[2]], quad[o[1]], quad[o[3]]);
        fc.inner_bits = inside_bits(centre, fc.circles);
    }
    return fc;
}

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Inner: return "inner";
        case RegionLabel::Bounded: return "bounded";
        case RegionLabel::Unbounded: return "unbounded";
    }
    return "unknown";
}

std::uint8_t RegionSignature::bits() const {
    std::uint8_t b = 0;
    for (std::size_t i = 0; i < 4; ++i)
        if (inside[i]) b |= static_cast<std::uint8_t>(1u << i);
    return b;
}

namespace {

RegionSignature signature_from_bits(std::uint8_t bits, const FundamentalCircles& fc) {
    RegionSignature sig;
    for (std::size_t i = 0; i < 4; ++i) sig.inside[i] = (bits >> i) & 1u;
    if (bits == 0)
        sig.label = RegionLabel::Unbounded;
    else if (fc.inner_bits && *fc.inner_bits == bits)
        sig.label = RegionLabel::Inner;
    else
        sig.label = RegionLabel::Bounded;
    return sig;
}

struct Box {
    double x0, y0, x1, y1;
};

Box bounding_box(const FundamentalCircles& fc, double margin) {
    Box b{1e300, 1e300, -1e300, -1e300};
    for (const auto& c : fc.circles) {
        const PlanarPoint m = c.center();
        const double r = c.radius();
        b.x0 = std::min(b.x0, m.x - r);
        b.y0 = std::min(b.y0, m.y - r);
        b.x1 = std::max(b.x1, m.x + r);
        b.y1 = std::max(b.y1, m.y + r);
    }
    const double pad = margin * std::max(b.x1 - b.x0, b.y1 - b.y0);
    return {b.x0 - pad, b.y0 - pad, b.x1 + pad, b.y1 + pad};
}

double nearest_circle(const PlanarPoint& q, const FundamentalCircles& fc) {
    double d = 1e300;
    for (const auto& c : fc.circles) d = std::min(d, exact_distance(c, q));
    return d;
}

struct ArcMidpoint {
    std::size_t circle;
    PlanarPoint point;
    Complex outward;  // unit normal pointing away from the centre
};

// Midpoints of the three arcs into which the vertices on circle i cut it.
std::vector<ArcMidpoint> arc_midpoints(const FundamentalCircles& fc) {
    std::vector<ArcMidpoint> out;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& c = fc.circles[i];
        const Complex centre = c.center().z();
        const double r = c.radius();
        std::vector<double> angles;
        for (const auto& p : omit(fc.quad, i)) angles.push_back(std::arg(p.z() - centre));
        std::sort(angles.begin(), angles.end());
        for (std::size_t k = 0; k < 3; ++k) {
            const double a = angles[k];
            const double b = k + 1 < 3 ? angles[k + 1] : angles[0] + 2.0 * std::numbers::pi;
            const Complex dir = std::polar(1.0, 0.5 * (a + b));
            out.push_back({i, PlanarPoint::from_complex(centre + r * dir), dir});
        }
    }
    return out;
}

}  // namespace

RegionSignature region_signature(const PlanarPoint& q, const FundamentalCircles& fc, double tol) {
    const double scale = diameter(fc.quad);
    for (std::size_t i = 0; i < fc.circles.size(); ++i)
        if (exact_distance(fc.circles[i], q) <= tol * scale)
            fail(ErrorCode::OnExceptionalCurve, "point lies on fundamental circle " + std::to_string(i));
    return signature_from_bits(inside_bits(q, fc.circles), fc);
}

RegionCensus region_census(const FundamentalCircles& fc, std::size_t grid) {
    std::map<std::uint8_t, PlanarPoint> seen;
    const auto record = [&](const PlanarPoint& q) {
        try {
            const auto sig = region_signature(q, fc);
            seen.emplace(sig.bits(), q);
        } catch (const GeodesyError&) {
        }
    };

    const Box box = bounding_box(fc, 0.1);
    for (std::size_t a = 0; a < grid; ++a)
        for (std::size_t b = 0; b < grid; ++b) {
            const double u = (static_cast<double>(a) + 0.5) / static_cast<double>(grid);
            const double v = (static_cast<double>(b) + 0.5) / static_cast<double>(grid);
            record({box.x0 + u * (box.x1 - box.x0), box.y0 + v * (box.y1 - box.y0)});
        }
    const std::size_t grid_count = seen.size();

    // Every region is bounded by at least one arc, so stepping off both
    // sides of each arc midpoint reaches all of them.
    for (const auto& arc : arc_midpoints(fc)) {
        double clearance = 1e300;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != arc.circle) clearance = std::min(clearance, exact_distance(fc.circles[k], arc.point));
        const double eps = std::min(1e-3 * fc.circles[arc.circle].radius(), 0.25 * clearance);
        record(PlanarPoint::from_complex(arc.point.z() + eps * arc.outward));
        record(PlanarPoint::from_complex(arc.point.z() - eps * arc.outward));
    }

    RegionCensus census;
    for (const auto& [bits, q] : seen) census.regions.push_back({q, signature_from_bits(bits, fc)});
    census.unbounded_arcs = unbounded_boundary_arcs(fc);
    census.grid_signatures = grid_count;
    return census;
}

std::size_t unbounded_boundary_arcs(const FundamentalCircles& fc) {
    std::size_t count = 0;
    for (const auto& arc : arc_midpoints(fc)) {
        bool outside_others = true;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != arc.circle && fc.circles[k].side(arc.point) <= 0.0) outside_others = false;
        if (outside_others) ++count;
    }
    return count;
}

std::vector<PlanarPoint> sample_region(const FundamentalCircles& fc, std::uint8_t bits, std::size_t count,
                                       std::uint64_t seed, double margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Box box = bounding_box(fc, margin);
    std::vector<PlanarPoint> out;
    const std::size_t max_tries = 400000;
    for (std::size_t tries = 0; tries < max_tries && out.size() < count; ++tries) {
        const PlanarPoint q{box.x0 + unit(rng) * (box.x1 - box.x0), box.y0 + unit(rng) * (box.y1 - box.y0)};
        if (inside_bits(q, fc.circles) == bits && nearest_circle(q, fc) > 1e-9 * diameter(fc.quad))
            out.push_back(q);
    }
    if (out.size() == count) return out;

    // Thin regions: fall back to a disk around a census point that stays inside the region.
    const auto census = region_census(fc, 50);
    const auto it = std::find_if(census.regions.begin(), census.regions.end(),
                                 [&](const RegionSample& s) { return s.signature.bits() == bits; });
    if (it == census.regions.end()) return out;
    const double radius = 0.99 * nearest_circle(it->point, fc);
    while (out.size() < count) {
        const Complex offset = std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        out.push_back(PlanarPoint::from_complex(it->point.z() + offset));
    }
    return out;
}

std::vector<PlanarPoint> sample_inner_region(const FundamentalCircles& fc, std::size_t count, std::uint64_t seed) {
    if (!fc.inner_bits) fail(ErrorCode::InvalidArgument, "the inner region is defined for convex quadrilaterals only");
    return sample_region(fc, *fc.inner_bits, count, seed, 0.0);
}

// ---------------------------------------------------------------------------
// Twin map and directions

PlanarPoint twin_map(const PlanarPoint& q, std::span<const PlanarPoint> quad, std::span<const PlanarPoint> twin,
                     double tol) {
    require_quad(quad);
    require_quad(twin);
    const double scale = diameter(quad);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto tri = omit(quad, i);
        if (exact_distance(circle_through(tri[0], tri[1], tri[2]), q) <= 1e-9 * scale)
            fail(ErrorCode::OnExceptionalCurve, "point lies on fundamental circle " + std::to_string(i));
    }
    const DoubleAngle d1 = double_angle(q, quad[0], quad[1]);
    const DoubleAngle d2 = double_angle(q, quad[0], quad[2]);
    const DoubleAngle d3 = double_angle(q, quad[0], quad[3]);
    const PlanarPoint image = resect(twin[0], twin[1], twin[2], d1, d2);
    const double residual = double_angle(image, twin[0], twin[3]).distance(d3);
    if (residual > tol)
        fail(ErrorCode::ValidationFailed, "fourth target disagrees by " + std::to_string(residual));
    return image;
}

int direction_sign(const PlanarPoint& q, std::span<const PlanarPoint> quad, std::span<const PlanarPoint> twin,
                   std::size_t i, double* deviation) {
    if (i == 0 || i >= 4) fail(ErrorCode::InvalidArgument, "direction sign needs a target index in 1..3");
    const PlanarPoint image = twin_map(q, quad, twin);
    const Complex quotient =
        (directed_angle(image, twin[0], twin[i]) / directed_angle(q, quad[0], quad[i])).value();
    const double plus = std::abs(quotient - 1.0), minus = std::abs(quotient + 1.0);
    const double dev = std::min(plus, minus);
    if (dev > 0.1) fail(ErrorCode::QuotientNotSign, "direction quotient is not close to +-1");
    if (deviation) *deviation = dev;
    return plus <= minus ? 1 : -1;
}

std::vector<Configuration> filter_by_direction(std::span<const Configuration> candidates,
                                               const DirectedAngleMatrix& directed, double tol) {
    std::vector<Configuration> kept;
    for (const auto& c : candidates) {
        if (c.t() != directed.t() || c.m() != directed.m()) continue;
        if (max_entry_distance(directed_angle_matrix(c), directed) <= tol) kept.push_back(c);
    }
    return kept;
}

}  // namespace geodesy
