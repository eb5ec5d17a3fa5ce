#include "geodesy/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace geodesy {

namespace {

constexpr std::array<std::array<int, 2>, 10> kMonomials{{
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3},
}};

Eigen::Vector4cd as_vector(const ProjectivePoint& p) {
    if (p.dimension() != 3) fail(ErrorCode::InvalidArgument, "quadric points must lie in P^3");
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v[i] = p[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadric

Quadric::Quadric(const Eigen::Matrix4cd& q) : q_(0.5 * (q + q.transpose())) {
    const double norm = q_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::InvalidArgument, "zero quadric");
    q_ /= norm;
}

Quadric Quadric::from_coefficients(std::span<const Complex, 10> coeffs) {
    Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
    for (std::size_t k = 0; k < kMonomials.size(); ++k) {
        const auto [i, j] = kMonomials[k];
        if (i == j) {
            q(i, i) = coeffs[k];
        } else {
            q(i, j) = 0.5 * coeffs[k];
            q(j, i) = 0.5 * coeffs[k];
        }
    }
    return Quadric(q);
}

std::array<Complex, 10> Quadric::coefficients() const {
    std::array<Complex, 10> out{};
    for (std::size_t k = 0; k < kMonomials.size(); ++k) {
        const auto [i, j] = kMonomials[k];
        out[k] = i == j ? q_(i, i) : 2.0 * q_(i, j);
    }
    return out;
}

Complex Quadric::form(const Eigen::Vector4cd& u, const Eigen::Vector4cd& v) const {
    return (u.transpose() * q_ * v)(0, 0);
}

Complex Quadric::evaluate_raw(const ProjectivePoint& p) const {
    const Eigen::Vector4cd v = as_vector(p);
    return form(v, v);
}

double Quadric::residual(const ProjectivePoint& p) const {
    const Eigen::Vector4cd v = as_vector(p);
    return std::abs(form(v, v)) / v.squaredNorm();
}

// ---------------------------------------------------------------------------
// Interpolation

std::vector<ProjectivePoint> fixed_profile_points(std::size_t dim) {
    if (dim < 2) fail(ErrorCode::InvalidArgument, "fixed points need a projective space of dimension >= 2");
    std::vector<ProjectivePoint> out;
    out.reserve(dim + 2);
    for (std::size_t k = 0; k <= dim; ++k) {
        std::vector<Complex> e(dim + 1, Complex(0.0, 0.0));
        e[k] = 1.0;
        out.emplace_back(std::move(e));
    }
    out.emplace_back(std::vector<Complex>(dim + 1, Complex(1.0, 0.0)));
    return out;
}

InterpolationResult interpolate_quadric(std::span<const ProjectivePoint> points, double rank_tol) {
    if (points.empty()) fail(ErrorCode::InvalidArgument, "interpolation needs at least one point");
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(points.size()), 10);
    for (std::size_t r = 0; r < points.size(); ++r) {
        const Eigen::Vector4cd v = as_vector(points[r]).normalized();
        for (std::size_t k = 0; k < kMonomials.size(); ++k) {
            const auto [i, j] = kMonomials[k];
            rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = v[i] * v[j];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();

    InterpolationResult result;
    result.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double cutoff = rank_tol * (sv.size() > 0 ? sv[0] : 0.0);
    int rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    result.dimension = 10 - rank;
    if (rank == 0) {
        result.conditioning = 0.0;
    } else if (rank < sv.size() && sv[rank] > 0.0) {
        result.conditioning = sv[rank - 1] / sv[rank];
    } else {
        result.conditioning = std::numeric_limits<double>::infinity();
    }
    for (int k = rank; k < 10; ++k) {
        std::array<Complex, 10> c{};
        for (int i = 0; i < 10; ++i) c[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
        result.basis.push_back(Quadric::from_coefficients(c));
    }
    return result;
}

namespace {

std::array<std::size_t, 4> checked_subset(const DoubleAngleMatrix& M, std::array<std::size_t, 4> subset) {
    std::sort(subset.begin(), subset.end());
    if (subset[0] != 0) fail(ErrorCode::InvalidArgument, "a profile subset must contain the reference target");
    for (std::size_t k = 1; k < 4; ++k) {
        if (subset[k] == subset[k - 1]) fail(ErrorCode::InvalidArgument, "repeated target in profile subset");
        if (subset[k] >= M.t()) fail(ErrorCode::InvalidArgument, "profile subset index out of range");
    }
    return subset;
}

InterpolationResult interpolate_subset(const DoubleAngleMatrix& M, const std::array<std::size_t, 4>& subset,
                                       double rank_tol) {
    std::vector<ProjectivePoint> pts;
    for (std::size_t j = 0; j < M.m(); ++j) {
        const std::array<DoubleAngle, 3> row{M.at(j, subset[1]), M.at(j, subset[2]), M.at(j, subset[3])};
        pts.push_back(profile_point_from_row(row));
    }
    for (auto& p : fixed_profile_points(3)) pts.push_back(std::move(p));
    return interpolate_quadric(pts, rank_tol);
}

}  // namespace

SubsetProfile profile_for_subset(const DoubleAngleMatrix& M, std::array<std::size_t, 4> subset, double rank_tol) {
    if (M.m() < 4) fail(ErrorCode::InvalidArgument, "profile interpolation needs at least 4 measure points");
    const auto sorted = checked_subset(M, subset);
    InterpolationResult r = interpolate_subset(M, sorted, rank_tol);
    if (r.dimension != 1)
        fail(ErrorCode::NonUniqueProfile,
             "profile solution space has dimension " + std::to_string(r.dimension), r.dimension);
    return SubsetProfile{sorted, r.basis.front(), r.conditioning};
}

int profile_dimension(const DoubleAngleMatrix& M, std::array<std::size_t, 4> subset, double rank_tol) {
    return interpolate_subset(M, checked_subset(M, subset), rank_tol).dimension;
}

InterpolationResult interpolate_coprofile(const DoubleAngleMatrix& M, double rank_tol) {
    if (M.m() != 3) fail(ErrorCode::InvalidArgument, "co-profile interpolation needs exactly 3 measure points");
    std::vector<ProjectivePoint> pts;
    for (std::size_t i = 1; i < M.t(); ++i) pts.push_back(coprofile_point_from_column(M.column(i)));
    for (auto& p : fixed_profile_points(3)) pts.push_back(std::move(p));
    return interpolate_quadric(pts, rank_tol);
}

// ---------------------------------------------------------------------------
// Diagonal points

std::array<DoubleAngle, 3> diagonal_measurement(const SubsetProfile& profile, const DiagonalPairing& pairing,
                                                const DiagonalOptions& options) {
    const auto position = [&](std::size_t target) {
        const auto it = std::find(profile.targets.begin(), profile.targets.end(), target);
        if (it == profile.targets.end()) fail(ErrorCode::InvalidArgument, "pairing uses a target outside the subset");
        return static_cast<int>(it - profile.targets.begin());
    };
    Eigen::Vector4cd e1 = Eigen::Vector4cd::Zero(), e2 = Eigen::Vector4cd::Zero();
    std::array<bool, 4> in_first{};
    for (std::size_t target : pairing.first) {
        e1[position(target)] += 1.0;
        in_first[static_cast<std::size_t>(position(target))] = true;
    }
    for (std::size_t target : pairing.second) e2[position(target)] += 1.0;
    for (int k = 0; k < 4; ++k)
        if (std::abs(e1[k] + e2[k] - 1.0) > 0.0)
            fail(ErrorCode::InvalidArgument, "pairing must split the subset into two diagonals");

    // Points lambda * e1 + mu * e2 of the line; (1:1) is the image of infinity.
    const Complex a = profile.quadric.form(e1, e1);
    const Complex b = profile.quadric.form(e1, e2);
    const Complex c = profile.quadric.form(e2, e2);

    std::array<std::array<Complex, 2>, 2> roots{};
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (std::max(std::abs(a), std::abs(c)) <= 1e-14 * scale) {
        roots = {{{1.0, 0.0}, {0.0, 1.0}}};
    } else if (std::abs(a) >= std::abs(c)) {
        const Complex disc = std::sqrt(b * b - a * c);
        roots = {{{(-b + disc) / a, 1.0}, {(-b - disc) / a, 1.0}}};
    } else {
        const Complex disc = std::sqrt(b * b - a * c);
        roots = {{{1.0, (-b + disc) / c}, {1.0, (-b - disc) / c}}};
    }

    const auto off_infinity = [](const std::array<Complex, 2>& r) {
        return std::abs(r[0] - r[1]) / std::max(std::abs(r[0]), std::abs(r[1]));
    };
    const auto& r0 = roots[0];
    const auto& r1 = roots[1];
    const double separation = std::abs(r0[0] * r1[1] - r1[0] * r0[1]) /
                              (std::hypot(std::abs(r0[0]), std::abs(r0[1])) * std::hypot(std::abs(r1[0]), std::abs(r1[1])));
    if (separation < options.tangent_tol)
        fail(ErrorCode::TangentLine, "diagonal line is tangent to the profile at the image of infinity");
    const auto& root = off_infinity(r0) >= off_infinity(r1) ? r0 : r1;
    if (off_infinity(root) < options.tangent_tol)
        fail(ErrorCode::TangentLine, "both intersections collapse onto the image of infinity");

    std::array<Complex, 4> coords{};
    for (std::size_t k = 0; k < 4; ++k) coords[k] = in_first[k] ? root[0] : root[1];
    std::array<DoubleAngle, 3> chart{};
    for (std::size_t k = 1; k < 4; ++k) {
        const Complex v = coords[k] / coords[0];
        if (!std::isfinite(std::abs(v)) || std::abs(std::abs(v) - 1.0) > options.unit_tol)
            fail(ErrorCode::NonUnitChart, "diagonal point chart is off the unit torus");
        chart[k - 1] = DoubleAngle::normalized(v);
    }
    return chart;
}

// ---------------------------------------------------------------------------
// ProfileModel

ProfileModel::ProfileModel(DoubleAngleMatrix M, double rank_tol) : M_(std::move(M)), rank_tol_(rank_tol) {
    if (M_.t() < 4) fail(ErrorCode::InvalidShape, "a profile model needs at least 4 targets");
}

const SubsetProfile& ProfileModel::subset(std::array<std::size_t, 4> indices) {
    std::sort(indices.begin(), indices.end());
    if (auto it = cache_.find(indices); it != cache_.end()) return it->second;
    if (auto it = failures_.find(indices); it != failures_.end())
        fail(ErrorCode::NonUniqueProfile, "profile solution space has dimension " + std::to_string(it->second),
             it->second);
    try {
        return cache_.emplace(indices, profile_for_subset(M_, indices, rank_tol_)).first->second;
    } catch (const GeodesyError& e) {
        if (e.code() == ErrorCode::NonUniqueProfile) failures_.emplace(indices, e.detail());
        throw;
    }
}

double ProfileModel::max_row_residual() const {
    double worst = 0.0;
    for (const auto& [indices, profile] : cache_) {
        for (std::size_t j = 0; j < M_.m(); ++j) {
            const std::array<DoubleAngle, 3> row{M_.at(j, indices[1]), M_.at(j, indices[2]), M_.at(j, indices[3])};
            worst = std::max(worst, profile.quadric.residual(profile_point_from_row(row)));
        }
    }
    return worst;
}

}  // namespace geodesy
