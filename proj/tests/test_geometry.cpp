#include <doctest.h>

#include <algorithm>
#include <array>

#include <Eigen/Dense>

#include "geodesy/errors.hpp"
#include "geodesy/geometry.hpp"
#include "support.hpp"

using namespace geodesy;

namespace {

// Perpendicular bisectors of ab and ac as a 2x2 linear system.
PlanarPoint bisector_oracle(PlanarPoint a, PlanarPoint b, PlanarPoint c) {
    Eigen::Matrix2d A;
    A << 2 * (b.x - a.x), 2 * (b.y - a.y), 2 * (c.x - a.x), 2 * (c.y - a.y);
    Eigen::Vector2d rhs(b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y, c.x * c.x + c.y * c.y - a.x * a.x - a.y * a.y);
    const Eigen::Vector2d s = A.colPivHouseholderQr().solve(rhs);
    return {s[0], s[1]};
}

// Null vector of [x^2+y^2, x, y, 1] rows.
std::array<double, 4> nullspace_oracle(const std::vector<PlanarPoint>& pts) {
    Eigen::MatrixXd A(pts.size(), 4);
    for (std::size_t k = 0; k < pts.size(); ++k)
        A.row(static_cast<long>(k)) << pts[k].x * pts[k].x + pts[k].y * pts[k].y, pts[k].x, pts[k].y, 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    Eigen::Vector4d v = svd.matrixV().col(3);
    v.normalize();
    for (int i = 0; i < 4; ++i)
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0) v = -v;
            break;
        }
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

TEST_CASE("circumcenter examples") {
    auto c = circumcenter({0, 0}, {1, 0}, {0, 1});
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));

    c = circumcenter({0, 0}, {2, 0}, {1, std::sqrt(3.0)});
    CHECK(c.x == doctest::Approx(1.0));
    CHECK(c.y == doctest::Approx(1.0 / std::sqrt(3.0)));

    c = circumcenter({0, 0}, {2, 0}, {1, 5});
    const auto o = bisector_oracle({0, 0}, {2, 0}, {1, 5});
    CHECK(distance(c, o) < 1e-12);

    CHECK_THROWS_AS(circumcenter({0, 0}, {1, 1}, {2, 2}), GeodesyError);
}

TEST_CASE("circumcenter is permutation invariant") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = testing::random_points(rng, 3, 0.1);
        const auto ref = circumcenter(p[0], p[1], p[2]);
        std::array<int, 3> idx{0, 1, 2};
        do {
            const auto c = circumcenter(p[idx[0]], p[idx[1]], p[idx[2]]);
            CHECK(distance(c, ref) < 1e-9 * std::max(1.0, std::abs(ref.z())));
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
}

TEST_CASE("circle_through examples") {
    auto unit = circle_through({1, 0}, {0, 1}, {-1, 0});
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(unit.A() == doctest::Approx(s));
    CHECK(unit.B() == doctest::Approx(0.0));
    CHECK(unit.C() == doctest::Approx(0.0));
    CHECK(unit.D() == doctest::Approx(-s));
    CHECK(unit.radius() == doctest::Approx(1.0));

    auto line = circle_through({0, 0}, {1, 0}, {2, 0});
    CHECK(line.is_line());
    CHECK(line.A() == 0.0);
    CHECK(std::abs(line.C()) == doctest::Approx(1.0));

    const std::vector<PlanarPoint> pts{{0, 0}, {3, 1}, {-1, 2}};
    const auto fit = circle_through(pts[0], pts[1], pts[2]);
    const auto o = nullspace_oracle(pts);
    for (int i = 0; i < 4; ++i) CHECK(fit.coefficients()[i] == doctest::Approx(o[i]).epsilon(1e-10));
}

TEST_CASE("circle_through vanishes at its points") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = testing::random_points(rng, 3, 0.1);
        const auto c = circle_through(p[0], p[1], p[2]);
        for (const auto& q : p) CHECK(std::abs(c.evaluate(q)) < 1e-9);
    }
}

TEST_CASE("are_cocircular") {
    const std::vector<PlanarPoint> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(are_cocircular(square));
    const std::vector<PlanarPoint> off{{0, 0}, {1, 0}, {0, 1}, {5, 5}};
    CHECK_FALSE(are_cocircular(off));
    // Residual oracle: distance of (5,5) to the circle through the rest.
    const auto c = circumcenter(off[0], off[1], off[2]);
    CHECK(std::abs(distance(off[3], c) - distance(off[0], c)) > 1.0);

    std::vector<PlanarPoint> ring;
    for (int k = 0; k < 5; ++k) ring.push_back({1 + 2 * std::cos(1.3 * k), 1 + 2 * std::sin(1.3 * k)});
    CHECK(are_cocircular(ring));
}

TEST_CASE("are_cocircular is similarity invariant") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PlanarPoint> ring;
        const double r = 0.5 + std::abs(u(rng));
        for (int k = 0; k < 5; ++k) ring.push_back({r * std::cos(u(rng) * 3), r * std::sin(u(rng) * 3)});
        auto generic = testing::random_points(rng, 5, 0.1);
        const Similarity s({u(rng), u(rng)}, {u(rng), u(rng)}, trial % 2 == 1);
        if (std::abs(s.scale_rotation()) < 0.2) continue;
        CHECK(are_cocircular(ring, 1e-9) == are_cocircular(s.apply(ring), 1e-9));
        CHECK(are_cocircular(generic, 1e-9) == are_cocircular(s.apply(generic), 1e-9));
    }
}

TEST_CASE("are_collinear") {
    CHECK(are_collinear(std::vector<PlanarPoint>{{0, 0}, {1, 1}, {2, 2}}));
    const std::vector<PlanarPoint> bent{{0, 0}, {1, 1}, {2, 2.5}};
    CHECK_FALSE(are_collinear(bent));
    // Distance of the third point to the line y = x.
    CHECK(std::abs(bent[2].y - bent[2].x) / std::sqrt(2.0) > 0.3);
    CHECK(are_collinear(std::vector<PlanarPoint>{{0, 0}, {3, 7}}));
}

TEST_CASE("align_similarity examples") {
    const std::vector<PlanarPoint> T{{0, 0}, {1, 0}, {0.3, 0.8}, {-0.5, 0.2}};
    auto id = align_similarity(T, T, false);
    CHECK(std::abs(id.transform.scale_rotation() - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(id.transform.translation()) < 1e-12);
    CHECK(id.rms_residual < 1e-12);

    std::vector<PlanarPoint> rot;
    for (const auto& p : T) rot.push_back(PlanarPoint::from_complex(Complex(0, 2) * p.z()));
    auto r = align_similarity(T, rot, false);
    CHECK(std::abs(r.transform.scale_rotation() - Complex(0, 2)) < 1e-12);
    CHECK(std::abs(r.transform.translation()) < 1e-12);
    CHECK(r.rms_residual < 1e-12);

    std::vector<PlanarPoint> mirror;
    for (const auto& p : T) mirror.push_back({p.x, -p.y});
    auto m1 = align_similarity(T, mirror, true);
    CHECK(m1.transform.mirrored());
    CHECK(m1.rms_residual < 1e-12);
    auto m0 = align_similarity(T, mirror, false);
    CHECK_FALSE(m0.transform.mirrored());
    CHECK(m0.rms_residual > 1e-3);
}

TEST_CASE("align_similarity recovers random similarities") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto T = testing::random_points(rng, 6);
        const bool mirror = trial % 3 == 0;
        const Similarity s({u(rng), u(rng)}, {u(rng), u(rng)}, mirror);
        if (std::abs(s.scale_rotation()) < 0.1) continue;
        const auto img = s.apply(T);
        const auto al = align_similarity(T, img, true);
        CHECK(al.rms_residual < 1e-10);
        for (std::size_t k = 0; k < T.size(); ++k) CHECK(distance(al.transform.apply(T[k]), img[k]) < 1e-8);
    }
}

TEST_CASE("similarity composition and inverse") {
    const Similarity a({0.5, 1.0}, {2, -1}, true), b({-1.5, 0.2}, {0.3, 0.4});
    const PlanarPoint p{0.7, -0.2};
    CHECK(distance(a.compose(b).apply(p), a.apply(b.apply(p))) < 1e-12);
    CHECK(distance(a.inverse().apply(a.apply(p)), p) < 1e-12);
    const auto f = Similarity::from_two_points({0, 0}, {1, 0}, {1, 1}, {1, 3});
    CHECK(distance(f.apply(PlanarPoint{1, 0}), PlanarPoint{1, 3}) < 1e-12);
}

TEST_CASE("line_intersection") {
    const auto p = line_intersection({0, 0}, {1, 1}, {0, 1}, {1, 0});
    CHECK(distance(p, {0.5, 0.5}) < 1e-14);
    CHECK_THROWS_AS(line_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}), GeodesyError);
}
