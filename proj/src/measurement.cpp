#include "geodesy/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geodesy {

namespace {

constexpr double kCoincidentTol = 1e-12;

bool coincide(const PlanarPoint& a, const PlanarPoint& b) {
    const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y)});
    return distance(a, b) <= kCoincidentTol * scale;
}

Complex unit(Complex v) { return v / std::abs(v); }

Complex checked_unit(Complex value, const char* what) {
    const double r = std::abs(value);
    if (!std::isfinite(r) || std::abs(r - 1.0) > kUnitTol)
        fail(ErrorCode::InvalidArgument, std::string(what) + " must have unit modulus");
    return value / r;
}

Complex checked_normalized(Complex value) {
    const double r = std::abs(value);
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "cannot normalize a zero angle");
    return value / r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Angles

DirectedAngle::DirectedAngle(Complex value) : value_(checked_unit(value, "directed angle")) {}

DirectedAngle DirectedAngle::normalized(Complex value) { return DirectedAngle(checked_normalized(value)); }

DirectedAngle DirectedAngle::from_radians(double radians) { return DirectedAngle(std::polar(1.0, radians)); }

DoubleAngle::DoubleAngle(Complex value) : value_(checked_unit(value, "double angle")) {}

DoubleAngle DoubleAngle::normalized(Complex value) { return DoubleAngle(checked_normalized(value)); }

DoubleAngle DoubleAngle::from_directed(const DirectedAngle& a) { return normalized(a.value() * a.value()); }

DirectedAngle DoubleAngle::half() const { return DirectedAngle::normalized(std::sqrt(value_)); }

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<PlanarPoint> targets, std::vector<PlanarPoint> measures)
    : targets_(std::move(targets)), measures_(std::move(measures)) {
    if (targets_.size() < 3) fail(ErrorCode::InvalidShape, "a configuration needs at least 3 targets");
    if (measures_.empty()) fail(ErrorCode::InvalidShape, "a configuration needs at least 1 measure point");
    const auto pts = all_points();
    for (const auto& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorCode::InvalidInput, "non-finite coordinate");
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = i + 1; k < pts.size(); ++k)
            if (coincide(pts[i], pts[k]))
                fail(ErrorCode::CoincidentPoints,
                     "points " + std::to_string(i) + " and " + std::to_string(k) + " coincide");
}

std::vector<PlanarPoint> Configuration::all_points() const {
    std::vector<PlanarPoint> pts = targets_;
    pts.insert(pts.end(), measures_.begin(), measures_.end());
    return pts;
}

Configuration Configuration::transformed(const Similarity& s) const {
    return Configuration(s.apply(targets_), s.apply(measures_));
}

// ---------------------------------------------------------------------------
// AngleMatrix

template <typename Angle>
AngleMatrix<Angle>::AngleMatrix(std::size_t t, std::size_t m) : t_(t), m_(m), entries_(m * (t - 1)) {
    if (t < 2) fail(ErrorCode::InvalidShape, "angle matrix needs t >= 2");
}

template <typename Angle>
AngleMatrix<Angle>::AngleMatrix(std::size_t t, std::size_t m, std::vector<Angle> entries)
    : t_(t), m_(m), entries_(std::move(entries)) {
    if (t < 2) fail(ErrorCode::InvalidShape, "angle matrix needs t >= 2");
    if (entries_.size() != m * (t - 1)) fail(ErrorCode::InvalidShape, "entry count does not match m x (t-1)");
}

template <typename Angle>
std::vector<Angle> AngleMatrix<Angle>::row(std::size_t j) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(j * cols()),
            entries_.begin() + static_cast<std::ptrdiff_t>((j + 1) * cols())};
}

template <typename Angle>
std::vector<Angle> AngleMatrix<Angle>::column(std::size_t target) const {
    std::vector<Angle> out;
    out.reserve(m_);
    for (std::size_t j = 0; j < m_; ++j) out.push_back(at(j, target));
    return out;
}

template <typename Angle>
AngleMatrix<Angle> AngleMatrix<Angle>::permuted_targets(std::span<const std::size_t> order) const {
    if (order.size() < 2) fail(ErrorCode::InvalidArgument, "target order needs at least 2 entries");
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] >= t_) fail(ErrorCode::InvalidArgument, "target index out of range");
        for (std::size_t l = 0; l < k; ++l)
            if (order[l] == order[k]) fail(ErrorCode::InvalidArgument, "repeated target index");
    }
    AngleMatrix out(order.size(), m_);
    for (std::size_t j = 0; j < m_; ++j) {
        const Angle ref = entry_or_identity(j, order[0]);
        for (std::size_t k = 1; k < order.size(); ++k) out.at(j, k) = entry_or_identity(j, order[k]) / ref;
    }
    return out;
}

template <typename Angle>
AngleMatrix<Angle> AngleMatrix<Angle>::select_measures(std::span<const std::size_t> rows) const {
    AngleMatrix out(t_, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= m_) fail(ErrorCode::InvalidArgument, "measure index out of range");
        for (std::size_t i = 1; i < t_; ++i) out.at(r, i) = at(rows[r], i);
    }
    return out;
}

template class AngleMatrix<DoubleAngle>;
template class AngleMatrix<DirectedAngle>;

namespace {

template <typename Angle>
double max_distance(const AngleMatrix<Angle>& a, const AngleMatrix<Angle>& b) {
    if (a.t() != b.t() || a.m() != b.m()) fail(ErrorCode::InvalidShape, "matrix shapes differ");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        worst = std::max(worst, std::abs(a.entries()[k].value() - b.entries()[k].value()));
    return worst;
}

}  // namespace

double max_entry_distance(const DoubleAngleMatrix& a, const DoubleAngleMatrix& b) { return max_distance(a, b); }
double max_entry_distance(const DirectedAngleMatrix& a, const DirectedAngleMatrix& b) {
    return max_distance(a, b);
}

DoubleAngleMatrix squared(const DirectedAngleMatrix& directed) {
    std::vector<DoubleAngle> entries;
    entries.reserve(directed.entries().size());
    for (const auto& a : directed.entries()) entries.push_back(DoubleAngle::from_directed(a));
    return DoubleAngleMatrix(directed.t(), directed.m(), std::move(entries));
}

// ---------------------------------------------------------------------------
// ProjectivePoint

ProjectivePoint::ProjectivePoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) fail(ErrorCode::InvalidArgument, "projective point needs >= 2 coordinates");
    double norm = 0.0;
    for (const auto& c : coords_) norm += std::norm(c);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::InvalidArgument, "zero projective vector");
}

std::vector<Complex> ProjectivePoint::chart() const {
    if (coords_[0] == Complex(0.0, 0.0)) fail(ErrorCode::InvalidArgument, "point lies at infinity of the chart");
    std::vector<Complex> out;
    out.reserve(coords_.size() - 1);
    for (std::size_t i = 1; i < coords_.size(); ++i) out.push_back(coords_[i] / coords_[0]);
    return out;
}

bool ProjectivePoint::equals(const ProjectivePoint& other, double tol) const {
    if (coords_.size() != other.coords_.size()) return false;
    // Parallel complex vectors: |<u, v>| == |u| |v|.
    Complex inner{0.0, 0.0};
    double nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        inner += std::conj(coords_[i]) * other.coords_[i];
        nu += std::norm(coords_[i]);
        nv += std::norm(other.coords_[i]);
    }
    const double cos2 = std::norm(inner) / (nu * nv);
    return std::sqrt(std::max(0.0, 1.0 - cos2)) <= tol;
}

// ---------------------------------------------------------------------------
// Measurements

DirectedAngle directed_angle(const PlanarPoint& q, const PlanarPoint& p1, const PlanarPoint& p2) {
    if (coincide(q, p1) || coincide(q, p2)) fail(ErrorCode::CoincidentPoints, "measure point coincides with a target");
    const Complex z = q.z();
    return DirectedAngle::normalized(unit(std::conj(z - p1.z())) * unit(z - p2.z()));
}

DoubleAngle double_angle(const PlanarPoint& q, const PlanarPoint& p1, const PlanarPoint& p2) {
    return DoubleAngle::from_directed(directed_angle(q, p1, p2));
}

ProjectivePoint measurement_map(std::span<const PlanarPoint> targets, const PlanarPoint& q) {
    if (targets.size() < 2) fail(ErrorCode::InvalidArgument, "measurement map needs >= 2 targets");
    std::vector<Complex> hol, anti;
    hol.reserve(targets.size());
    anti.reserve(targets.size());
    for (const auto& p : targets) {
        if (coincide(q, p)) fail(ErrorCode::BasePoint, "measure point is a base point of the measurement map");
        hol.push_back(unit(q.z() - p.z()));
        anti.push_back(std::conj(hol.back()));
    }
    // F_k = (z - w_k) * prod_{i != k} conj(z - w_i).
    std::vector<Complex> coords(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        Complex f = hol[k];
        for (std::size_t i = 0; i < targets.size(); ++i)
            if (i != k) f = unit(f * anti[i]);
        coords[k] = f;
    }
    return ProjectivePoint(std::move(coords));
}

DirectedAngleMatrix directed_angle_matrix(const Configuration& cfg) {
    DirectedAngleMatrix out(cfg.t(), cfg.m());
    for (std::size_t j = 0; j < cfg.m(); ++j)
        for (std::size_t i = 1; i < cfg.t(); ++i)
            out.at(j, i) = directed_angle(cfg.measures()[j], cfg.targets()[0], cfg.targets()[i]);
    return out;
}

DoubleAngleMatrix double_angle_matrix(const Configuration& cfg) {
    DoubleAngleMatrix out(cfg.t(), cfg.m());
    for (std::size_t j = 0; j < cfg.m(); ++j)
        for (std::size_t i = 1; i < cfg.t(); ++i)
            out.at(j, i) = double_angle(cfg.measures()[j], cfg.targets()[0], cfg.targets()[i]);
    return out;
}

namespace {

ProjectivePoint homogenize(std::span<const DoubleAngle> values) {
    std::vector<Complex> coords;
    coords.reserve(values.size() + 1);
    coords.emplace_back(1.0, 0.0);
    for (const auto& a : values) coords.push_back(a.value());
    return ProjectivePoint(std::move(coords));
}

}  // namespace

ProjectivePoint profile_point_from_row(std::span<const DoubleAngle> row) { return homogenize(row); }

ProjectivePoint coprofile_point_from_column(std::span<const DoubleAngle> column) { return homogenize(column); }

}  // namespace geodesy
