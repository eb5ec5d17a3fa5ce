#include <doctest.h>

#include <set>

#include <Eigen/Dense>

#include "geodesy/ambiguity.hpp"
#include "geodesy/commands.hpp"
#include "geodesy/errors.hpp"
#include "geodesy/reconstruct.hpp"
#include "support.hpp"

using namespace geodesy;

namespace {

std::vector<PlanarPoint> circle_and_line(std::size_t on_circle, std::size_t on_line, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * M_PI), v(-2.0, 2.0);
    std::vector<PlanarPoint> pts;
    for (std::size_t k = 0; k < on_circle; ++k) {
        const double a = u(rng);
        pts.push_back({0.3 + 0.8 * std::cos(a), -0.2 + 0.8 * std::sin(a)});
    }
    for (std::size_t k = 0; k < on_line; ++k) {
        const double s = v(rng);
        pts.push_back({s, 0.4 * s + 1.3});
    }
    return pts;
}

// Rank of the real cubic conditions plus the two real conditions at (0:1:i).
int cubic_rank_oracle(const std::vector<PlanarPoint>& pts) {
    Eigen::MatrixXd A(pts.size() + 2, 10);
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const double x = pts[r].x, y = pts[r].y;
        A.row(static_cast<long>(r)) << 1, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
    }
    // x^3 + i x^2 y - x y^2 - i y^3 at (1, i): real part x^3 - xy^2, imaginary x^2y - y^3.
    A.row(static_cast<long>(pts.size())) << 0, 0, 0, 0, 0, 0, 1, 0, -1, 0;
    A.row(static_cast<long>(pts.size()) + 1) << 0, 0, 0, 0, 0, 0, 0, 1, 0, -1;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto s = svd.singularValues();
    int rank = 0;
    for (long k = 0; k < s.size(); ++k)
        if (s[k] > 1e-9 * s[0]) ++rank;
    return rank;
}

bool convex_oracle(const std::vector<PlanarPoint>& q) {
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<PlanarPoint> tri;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != i) tri.push_back(q[k]);
        const double a = orientation(tri[0], tri[1], q[i]), b = orientation(tri[1], tri[2], q[i]),
                     c = orientation(tri[2], tri[0], q[i]);
        if ((a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0)) return false;
    }
    return true;
}

PlanarPoint diagonal_point(const std::vector<PlanarPoint>& q) {
    const auto order = cyclic_order(q);
    return line_intersection(q[order[0]], q[order[2]], q[order[1]], q[order[3]]);
}

// Arcs of the fundamental circles bounding the unbounded region, found by
// walking each circle and counting runs outside the other three disks that
// are separated by vertices.
std::size_t unbounded_arcs_oracle(const FundamentalCircles& fc) {
    std::size_t arcs = 0;
    const std::size_t steps = 20000;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto c = fc.circles[i].center();
        const double r = fc.circles[i].radius();
        std::vector<double> vertex_angles;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != i) vertex_angles.push_back(std::atan2(fc.quad[k].y - c.y, fc.quad[k].x - c.x));
        std::sort(vertex_angles.begin(), vertex_angles.end());
        for (std::size_t a = 0; a < 3; ++a) {
            const double lo = vertex_angles[a], hi = a + 1 < 3 ? vertex_angles[a + 1] : vertex_angles[0] + 2 * M_PI;
            std::size_t outside = 0;
            for (std::size_t s = 1; s < steps; ++s) {
                const double th = lo + (hi - lo) * static_cast<double>(s) / steps;
                const PlanarPoint p{c.x + r * std::cos(th), c.y + r * std::sin(th)};
                bool out = true;
                for (std::size_t k = 0; k < 4; ++k)
                    if (k != i && fc.circles[k].side(p) < 0) out = false;
                if (out) ++outside;
            }
            if (outside > steps / 2) ++arcs;
        }
    }
    return arcs;
}

}  // namespace

TEST_CASE("cyclic cubic fits") {
    std::mt19937_64 rng(51);
    const auto cl = circle_and_line(5, 3, rng);
    const auto cubic = fit_cyclic_cubic(cl);
    REQUIRE(cubic.has_value());
    CHECK_FALSE(cubic->underdetermined);
    double scale = 0.0;
    for (double c : cubic->coefficients) scale += c * c;
    CHECK(scale == doctest::Approx(1.0));
    for (const auto& p : cl) CHECK(std::abs(cubic->evaluate(p)) < 1e-8);
    CHECK(std::abs(cubic->at_cyclic_point()) < 1e-10);
    CHECK(cubic_rank_oracle(cl) <= 9);

    for (int trial = 0; trial < 20; ++trial) {
        const auto generic = testing::random_points(rng, 8, 0.1);
        CHECK(cubic_rank_oracle(generic) == 10);
        CHECK_FALSE(fit_cyclic_cubic(generic).has_value());
    }

    const auto few = fit_cyclic_cubic(testing::random_points(rng, 4));
    REQUIRE(few.has_value());
    CHECK(few->underdetermined);
}

TEST_CASE("degeneracy flags") {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        CHECK(degeneracy_flags(cmd_gen({Family::Generic, 5, 4, seed, 0.0}).config).empty());

    std::vector<PlanarPoint> ring;
    for (double a : {0.2, 1.4, 2.6, 3.9, 5.1}) ring.push_back({std::cos(a), std::sin(a)});
    const Configuration five(ring, {{0.1, 0.2}, {2.0, 0.3}, {-0.4, 1.7}, {0.5, -2.2}});
    const auto f = degeneracy_flags(five);
    CHECK(f.has(DegeneracyKind::CocircularTargets));

    std::mt19937_64 rng(52);
    const auto cl = circle_and_line(4, 4, rng);
    const Configuration cubic({cl[0], cl[1], cl[2], cl[4]}, {cl[3], cl[5], cl[6], cl[7]});
    CHECK(degeneracy_flags(cubic).has(DegeneracyKind::CyclicCubic));
    CHECK(to_string(DegeneracyKind::CyclicCubic) == "cyclic-cubic");
}

TEST_CASE("fundamental circles") {
    const std::vector<PlanarPoint> quad{{0, 0}, {2, 0}, {2, 1}, {0, 3}};
    const auto fc = fundamental_circles(quad);
    REQUIRE(fc.circles.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k)
            if (k != i) CHECK(std::abs(fc.circles[i].evaluate(quad[k])) < 1e-9);

    const std::vector<PlanarPoint> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK_THROWS_AS(fundamental_circles(square), GeodesyError);
    CHECK_THROWS_AS(fundamental_circles(std::vector<PlanarPoint>{{0, 0}, {1, 0}, {2, 0}, {0, 1}}), GeodesyError);
}

TEST_CASE("is_convex") {
    CHECK(is_convex(std::vector<PlanarPoint>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK_FALSE(is_convex(std::vector<PlanarPoint>{{0, 0}, {2, 0}, {0.7, 0.5}, {1, 2}}));
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const auto q = testing::random_points(rng, 4, 0.1);
        CHECK(is_convex(q) == convex_oracle(q));
    }
}

TEST_CASE("region signatures") {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 10; ++trial) {
        const auto quad = testing::random_convex_quad(rng);
        const auto fc = fundamental_circles(quad);
        REQUIRE(fc.inner_bits.has_value());
        const auto inner = region_signature(diagonal_point(quad), fc);
        CHECK(inner.label == RegionLabel::Inner);
        CHECK(inner.bits() == *fc.inner_bits);
        const PlanarPoint far{10 * diameter(quad), 3 * diameter(quad)};
        const auto out = region_signature(far, fc);
        CHECK(out.label == RegionLabel::Unbounded);
        CHECK(out.bits() == 0);
        CHECK_THROWS_AS(region_signature(quad[0], fc), GeodesyError);
    }
}

TEST_CASE("region census") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const auto convex = fundamental_circles(testing::random_convex_quad(rng));
        const auto cc = region_census(convex);
        CHECK(cc.regions.size() == 10);
        CHECK(cc.unbounded_arcs == 2);
        CHECK(unbounded_arcs_oracle(convex) == 2);

        const auto concave = fundamental_circles(testing::random_concave_quad(rng));
        const auto nc = region_census(concave);
        CHECK(nc.regions.size() == 10);
        CHECK(nc.unbounded_arcs != 2);
        CHECK(unbounded_arcs_oracle(concave) == nc.unbounded_arcs);
        CHECK_FALSE(concave.inner_bits.has_value());
    }
}

TEST_CASE("signatures are locally constant") {
    std::mt19937_64 rng(56);
    const auto quad = testing::random_convex_quad(rng);
    const auto fc = fundamental_circles(quad);
    std::uniform_real_distribution<double> u(-3, 3), d(-5e-5, 5e-5);
    int pairs = 0;
    while (pairs < 1000) {
        const PlanarPoint a{u(rng), u(rng)}, b{a.x + d(rng), a.y + d(rng)};
        bool straddles = false;
        for (const auto& c : fc.circles) straddles = straddles || (c.side(a) < 0) != (c.side(b) < 0);
        if (straddles) continue;
        CHECK(region_signature(a, fc).bits() == region_signature(b, fc).bits());
        ++pairs;
    }
}

TEST_CASE("twin map identity") {
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto quad = testing::random_convex_quad(rng);
        const auto twin = twin_quadrilateral(quad);
        int done = 0;
        while (done < 100) {
            const PlanarPoint q{u(rng), u(rng)};
            try {
                const auto r = twin_map(q, quad, twin);
                const auto a = measurement_map(quad, q).chart(), b = measurement_map(twin, r).chart();
                for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-8);
                ++done;
            } catch (const GeodesyError& e) {
                CHECK(e.code() == ErrorCode::OnExceptionalCurve);
            }
        }
    }
    // On a fundamental circle.
    const std::vector<PlanarPoint> quad{{0, 0}, {2, 0}, {2, 1}, {0, 3}};
    const auto twin = twin_quadrilateral(quad);
    const auto fc = fundamental_circles(quad);
    const auto c = fc.circles[0].center();
    const PlanarPoint on{c.x + fc.circles[0].radius(), c.y};
    CHECK_THROWS_AS(twin_map(on, quad, twin), GeodesyError);
}

TEST_CASE("twin map of a cocircular quad is a similarity") {
    std::vector<PlanarPoint> quad;
    for (double a : {0.3, 1.5, 3.0, 4.4}) quad.push_back({0.2 + 1.1 * std::cos(a), -0.1 + 1.1 * std::sin(a)});
    const auto twin = twin_quadrilateral(quad);
    const auto s = align_similarity(quad, twin, true);
    REQUIRE(s.rms_residual < 1e-8);
    for (const PlanarPoint q : {PlanarPoint{0.1, 0.2}, PlanarPoint{2.5, -0.7}, PlanarPoint{-1.9, 1.8}})
        CHECK(distance(twin_map(q, quad, twin), s.transform.apply(q)) < 1e-8);
}

TEST_CASE("twin of a convex quad is convex and maps inner to inner") {
    std::mt19937_64 rng(58);
    for (int trial = 0; trial < 10; ++trial) {
        const auto quad = testing::random_convex_quad(rng);
        const auto t = twin_quadrilateral(quad);
        const std::vector<PlanarPoint> twin(t.begin(), t.end());
        CHECK(is_convex(twin));
        const auto fc = fundamental_circles(quad), ft = fundamental_circles(twin);
        for (const auto& q : sample_inner_region(fc, 20, 7 + static_cast<std::uint64_t>(trial)))
            CHECK(region_signature(twin_map(q, quad, twin), ft).label == RegionLabel::Inner);
    }
}

TEST_CASE("direction signs") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 5; ++trial) {
        const auto quad = testing::random_convex_quad(rng);
        const auto twin = twin_quadrilateral(quad);
        const auto fc = fundamental_circles(quad);
        for (std::size_t i = 1; i < 4; ++i) CHECK(direction_sign(diagonal_point(quad), quad, twin, i) == 1);
        for (const auto& q : sample_inner_region(fc, 50, 100 + static_cast<std::uint64_t>(trial)))
            for (std::size_t i = 1; i < 4; ++i) {
                double dev = 1.0;
                CHECK(direction_sign(q, quad, twin, i, &dev) == 1);
                CHECK(dev < 1e-8);
            }
        // Constant on every region.
        for (const auto& region : region_census(fc).regions) {
            const auto samples = sample_region(fc, region.signature.bits(), 100, 200 + static_cast<std::uint64_t>(trial));
            REQUIRE(samples.size() == 100);
            for (std::size_t i = 1; i < 4; ++i) {
                const int first = direction_sign(samples[0], quad, twin, i);
                for (const auto& q : samples) CHECK(direction_sign(q, quad, twin, i) == first);
            }
        }
    }
}

TEST_CASE("filter by direction") {
    std::mt19937_64 rng(60);
    const auto quad = testing::random_convex_quad(rng);
    const auto t = twin_quadrilateral(quad);
    const std::vector<PlanarPoint> twin(t.begin(), t.end());
    const auto fc = fundamental_circles(quad);

    auto candidates = [&](const std::vector<PlanarPoint>& qs) {
        std::vector<PlanarPoint> rho;
        for (const auto& q : qs) rho.push_back(twin_map(q, quad, twin));
        return std::vector<Configuration>{Configuration(quad, qs), Configuration(twin, rho)};
    };

    const auto inner = sample_inner_region(fc, 4, 1);
    auto both = candidates(inner);
    CHECK(max_entry_distance(double_angle_matrix(both[0]), double_angle_matrix(both[1])) < 1e-8);
    CHECK(filter_by_direction(both, directed_angle_matrix(both[0])).size() == 2);

    // Find a region where some sign is -1.
    std::optional<PlanarPoint> flipping;
    for (const auto& region : region_census(fc).regions) {
        for (std::size_t i = 1; i < 4 && !flipping; ++i)
            if (direction_sign(region.point, quad, twin, i) == -1) flipping = region.point;
        if (flipping) break;
    }
    REQUIRE(flipping.has_value());
    std::vector<PlanarPoint> qs(inner.begin(), inner.begin() + 3);
    qs.push_back(*flipping);
    auto mixed = candidates(qs);
    const auto kept = filter_by_direction(mixed, directed_angle_matrix(mixed[0]));
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].all_points() == mixed[0].all_points());

    CHECK(filter_by_direction({}, directed_angle_matrix(mixed[0])).empty());
}
