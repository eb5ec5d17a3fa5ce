#include <doctest.h>

#include <Eigen/Dense>

#include "geodesy/commands.hpp"
#include "geodesy/errors.hpp"
#include "geodesy/profile.hpp"
#include "support.hpp"

using namespace geodesy;

namespace {

std::vector<ProjectivePoint> profile_points(const DoubleAngleMatrix& M) {
    auto pts = fixed_profile_points(3);
    for (std::size_t j = 0; j < M.m(); ++j) pts.push_back(profile_point_from_row(M.row(j)));
    return pts;
}

// Rank of the evaluation matrix of the ten quadratic monomials.
int nullity_oracle(const std::vector<ProjectivePoint>& pts) {
    Eigen::MatrixXcd A(pts.size(), 10);
    for (std::size_t r = 0; r < pts.size(); ++r) {
        int c = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) A(static_cast<long>(r), c++) = pts[r][i] * pts[r][j];
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    lu.setThreshold(1e-10);
    return 10 - static_cast<int>(lu.rank());
}

std::array<DoubleAngle, 3> measured_from(const PlanarPoint& q, const std::vector<PlanarPoint>& quad) {
    return {double_angle(q, quad[0], quad[1]), double_angle(q, quad[0], quad[2]), double_angle(q, quad[0], quad[3])};
}

double triple_distance(const std::array<DoubleAngle, 3>& a, const std::array<DoubleAngle, 3>& b) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, a[k].distance(b[k]));
    return worst;
}

}  // namespace

TEST_CASE("fixed profile points") {
    CHECK(fixed_profile_points(3).size() == 5);
    CHECK(fixed_profile_points(2).size() == 4);
    CHECK(fixed_profile_points(4).size() == 6);
    const auto pts = fixed_profile_points(3);
    CHECK(pts[4].equals(ProjectivePoint({1, 1, 1, 1})));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) > 0);
}

TEST_CASE("only the fixed points leave five quadrics") {
    const auto pts = fixed_profile_points(3);
    const auto r = interpolate_quadric(pts);
    CHECK(r.dimension == nullity_oracle(pts));
    CHECK(r.dimension == 5);
}

TEST_CASE("generic four-target profiles are unique") {
    std::mt19937_64 rng(31);
    int unique = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto cfg = testing::random_configuration(rng, 4, 4);
        const auto pts = profile_points(double_angle_matrix(cfg));
        const auto r = interpolate_quadric(pts);
        if (r.dimension == 1) ++unique;
        for (const auto& q : r.basis)
            for (const auto& p : pts) CHECK(q.residual(p) < 1e-8);
    }
    CHECK(unique >= 95);
}

TEST_CASE("profile dimension is invariant under reordering") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cfg = testing::random_configuration(rng, 4, 2 + trial % 3);
        auto pts = profile_points(double_angle_matrix(cfg));
        const int dim = interpolate_quadric(pts).dimension;
        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(interpolate_quadric(pts).dimension == dim);
        CHECK(dim == nullity_oracle(pts));
    }
}

TEST_CASE("a further measurement lies on the interpolated profile") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cfg = testing::random_configuration(rng, 4, 4);
        const auto r = interpolate_quadric(profile_points(double_angle_matrix(cfg)));
        REQUIRE(r.dimension == 1);
        const auto extra = testing::random_points(rng, 1).front();
        CHECK(r.basis[0].residual(measurement_map(cfg.targets(), extra)) < 1e-8);
    }
}

TEST_CASE("fig2 configuration has a pencil of profiles") {
    const auto s = cmd_gen({Family::Fig2, 4, 4, 3, 0.0});
    const auto r = interpolate_quadric(profile_points(double_angle_matrix(s.config)));
    CHECK(r.dimension >= 2);
    const auto M = double_angle_matrix(s.config);
    CHECK(profile_dimension(M, {0, 1, 2, 3}) >= 2);
    try {
        profile_for_subset(M, {0, 1, 2, 3});
        FAIL("expected NonUniqueProfile");
    } catch (const GeodesyError& e) {
        CHECK(e.code() == ErrorCode::NonUniqueProfile);
        CHECK(e.detail() >= 2);
    }
}

TEST_CASE("profile_for_subset") {
    std::mt19937_64 rng(34);
    const auto cfg = testing::random_configuration(rng, 5, 4);
    const auto M = double_angle_matrix(cfg);
    const auto prof = profile_for_subset(M, {0, 1, 2, 3});
    for (std::size_t j = 0; j < M.m(); ++j) {
        std::vector<PlanarPoint> quad(cfg.targets().begin(), cfg.targets().begin() + 4);
        CHECK(prof.quadric.residual(measurement_map(quad, cfg.measures()[j])) < 1e-8);
    }
    CHECK_THROWS_AS(profile_for_subset(M, {1, 2, 3, 4}), GeodesyError);
}

TEST_CASE("quadric coefficients round trip") {
    std::mt19937_64 rng(35);
    const auto cfg = testing::random_configuration(rng, 4, 4);
    const auto prof = profile_for_subset(double_angle_matrix(cfg), {0, 1, 2, 3});
    const auto c = prof.quadric.coefficients();
    const auto back = Quadric::from_coefficients(c);
    CHECK((back.matrix() - prof.quadric.matrix()).norm() < 1e-12);
}

TEST_CASE("co-profile dimensions") {
    std::mt19937_64 rng(36);
    int unique = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto cfg = testing::random_configuration(rng, 5, 3);
        const auto M = double_angle_matrix(cfg);
        const auto r = interpolate_coprofile(M);
        if (r.dimension == 1) ++unique;
        for (const auto& q : r.basis)
            for (std::size_t i = 1; i < M.t(); ++i) CHECK(q.residual(coprofile_point_from_column(M.column(i))) < 1e-8);
    }
    CHECK(unique >= 95);

    for (int trial = 0; trial < 10; ++trial) {
        const auto cfg = testing::random_configuration(rng, 4, 3);
        CHECK(interpolate_coprofile(double_angle_matrix(cfg)).dimension >= 2);
    }

    // Collinear targets: every column lies on one line's worth of quadrics.
    const Configuration line({{0, 0}, {1, 0}, {2.5, 0}, {-1.2, 0}, {0.6, 0}}, {{0.3, 0.9}, {-0.4, 0.5}, {1.1, -0.7}});
    CHECK(interpolate_coprofile(double_angle_matrix(line)).dimension >= 2);
}

TEST_CASE("diagonal measurement of a square is the measurement at its centre") {
    const std::vector<PlanarPoint> quad{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Configuration cfg(quad, {{0.2, 1.7}, {1.6, 0.4}, {-0.5, -0.3}, {2.1, 1.9}});
    const auto prof = profile_for_subset(double_angle_matrix(cfg), {0, 1, 2, 3});
    const auto d = diagonal_measurement(prof, {{0, 2}, {1, 3}});
    CHECK(triple_distance(d, measured_from({0.5, 0.5}, quad)) < 1e-8);
}

TEST_CASE("diagonal measurement reproduces the diagonal point") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cfg = testing::random_configuration(rng, 4, 4);
        const auto& p = cfg.targets();
        const std::vector<PlanarPoint> quad(p.begin(), p.end());
        const auto prof = profile_for_subset(double_angle_matrix(cfg), {0, 1, 2, 3});
        const std::array<DiagonalPairing, 3> pairings{
            DiagonalPairing{{0, 1}, {2, 3}}, DiagonalPairing{{0, 2}, {1, 3}}, DiagonalPairing{{0, 3}, {1, 2}}};
        for (const auto& pr : pairings) {
            // Intersection of the two lines by Cramer's rule.
            const auto &a1 = p[pr.first[0]], &a2 = p[pr.first[1]], &b1 = p[pr.second[0]], &b2 = p[pr.second[1]];
            const double dx1 = a2.x - a1.x, dy1 = a2.y - a1.y, dx2 = b2.x - b1.x, dy2 = b2.y - b1.y;
            const double den = dx1 * dy2 - dy1 * dx2;
            if (std::abs(den) < 1e-3) continue;
            const double s = ((b1.x - a1.x) * dy2 - (b1.y - a1.y) * dx2) / den;
            const PlanarPoint x{a1.x + s * dx1, a1.y + s * dy1};
            if (testing::min_separation({x, p[0], p[1], p[2], p[3]}) < 1e-3) continue;
            try {
                const auto d = diagonal_measurement(prof, pr);
                CHECK(triple_distance(d, measured_from(x, quad)) < 1e-7);
            } catch (const GeodesyError& e) {
                CHECK(e.code() == ErrorCode::TangentLine);
            }
        }
    }
}

TEST_CASE("parallel diagonals make the diagonal line tangent") {
    // A trapezoid: the diagonal point of the parallel sides is at infinity.
    const std::vector<PlanarPoint> quad{{0, 0}, {2, 0}, {1.5, 1}, {0.5, 1}};
    const Configuration cfg(quad, {{0.3, 2.1}, {2.4, 1.3}, {-0.7, 0.4}, {1.2, -0.9}});
    const auto prof = profile_for_subset(double_angle_matrix(cfg), {0, 1, 2, 3});
    try {
        diagonal_measurement(prof, {{0, 1}, {2, 3}});
        FAIL("expected TangentLine");
    } catch (const GeodesyError& e) {
        CHECK(e.code() == ErrorCode::TangentLine);
    }
}
