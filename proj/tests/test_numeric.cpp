#include <doctest.h>

#include "geodesy/ambiguity.hpp"
#include "geodesy/commands.hpp"
#include "geodesy/numeric.hpp"
#include "geodesy/reconstruct.hpp"
#include "geodesy/solve.hpp"
#include "support.hpp"

using namespace geodesy;

namespace {

Configuration generic(std::size_t t, std::size_t m, std::uint64_t seed) {
    return cmd_gen({Family::Generic, t, m, seed, 0.0}).config;
}

double align_rms(const Configuration& a, const Configuration& b) {
    return align_similarity(a.all_points(), b.all_points(), false).rms_residual;
}

}  // namespace

TEST_CASE("numeric cluster counts") {
    for (auto [t, m, expected] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
             {4, 4, 2}, {5, 4, 1}, {5, 3, 2}}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto cfg = generic(t, m, 100 + seed);
            const auto M = double_angle_matrix(cfg);
            EnumerateStats stats;
            const auto found = enumerate_numeric(M, {}, &stats);
            CHECK(found.size() == expected);
            CHECK(stats.converged > 0);
            for (const auto& s : found) CHECK(s.residual < 1e-10);
            double nearest = 1e300;
            for (const auto& s : found) nearest = std::min(nearest, align_rms(s.config, cfg));
            CHECK(nearest < 1e-6);
        }
    }
}

TEST_CASE("numeric enumeration is deterministic") {
    const auto M = double_angle_matrix(generic(4, 4, 7));
    EnumerateOptions o;
    o.seed = 99;
    const auto a = enumerate_numeric(M, o), b = enumerate_numeric(M, o);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k].config.all_points() == b[k].config.all_points());
}

TEST_CASE("solve shape examples") {
    CHECK(solve(double_angle_matrix(generic(4, 4, 1)), std::nullopt).set.kind == SolutionKind::TwinPair);
    CHECK(solve(double_angle_matrix(generic(5, 4, 1)), std::nullopt).set.kind == SolutionKind::Unique);
    CHECK(solve(double_angle_matrix(generic(4, 3, 1)), std::nullopt).set.kind == SolutionKind::Infinite);
    CHECK(solve(double_angle_matrix(generic(5, 3, 1)), std::nullopt).set.kind == SolutionKind::TwinPair);
    const auto cubic = cmd_gen({Family::CyclicCubic, 4, 4, 1, 0.0}).config;
    CHECK(solve(double_angle_matrix(cubic), std::nullopt).set.kind == SolutionKind::DegenerateAmbiguous);
}

TEST_CASE("solve round trip on unique shapes") {
    for (auto [t, m] : std::vector<std::pair<std::size_t, std::size_t>>{{5, 4}, {6, 4}, {5, 5}, {7, 6}}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto cfg = generic(t, m, seed);
            const auto r = solve(double_angle_matrix(cfg), std::nullopt);
            CHECK(r.set.kind == SolutionKind::Unique);
            CHECK(r.report.branch == kBranchUniqueProfile);
            REQUIRE(r.set.solutions.size() == 1);
            CHECK(align_rms(r.set.solutions[0], cfg) < 1e-6);
        }
    }
}

TEST_CASE("twin pairs are consistent and distinct") {
    for (auto [t, m] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 4}, {5, 3}, {4, 5}, {6, 3}}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto cfg = generic(t, m, seed);
            const auto M = double_angle_matrix(cfg);
            const auto r = solve(M, std::nullopt);
            REQUIRE(r.set.kind == SolutionKind::TwinPair);
            REQUIRE(r.set.solutions.size() == 2);
            const auto M0 = double_angle_matrix(r.set.solutions[0]), M1 = double_angle_matrix(r.set.solutions[1]);
            CHECK(max_entry_distance(M0, M1) < 1e-6);
            CHECK(align_rms(r.set.solutions[0], r.set.solutions[1]) > 1e-3);
            const auto& a = r.set.solutions[0].targets();
            const auto& b = r.set.solutions[1].targets();
            const bool first_positive = orientation(a[0], a[1], a[2]) > 0.0;
            const bool second_positive = orientation(b[0], b[1], b[2]) > 0.0;
            CHECK((first_positive || !second_positive));
        }
    }
}

TEST_CASE("numeric count agrees with solve") {
    for (auto [t, m] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 4}, {5, 3}, {5, 4}}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto M = double_angle_matrix(generic(t, m, 500 + seed));
            const auto r = solve(M, std::nullopt);
            CHECK(enumerate_numeric(M, {}).size() == r.set.solutions.size());
        }
    }
}

TEST_CASE("parameter count gate") {
    for (std::size_t t = 3; t <= 7; ++t)
        for (std::size_t m = 1; m <= 6; ++m) {
            const long excess = (static_cast<long>(m) - 2) * (static_cast<long>(t) - 3);
            const auto r = solve(double_angle_matrix(generic(t, m, t * 10 + m)), std::nullopt);
            CHECK((r.set.kind == SolutionKind::Infinite) == (excess < 2));
            CHECK(r.report.dimension_count == excess - 2);
        }
}

TEST_CASE("directed angles narrow a twin pair") {
    // Measure points outside the inner region usually tell the twins apart.
    std::size_t narrowed = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto cfg = generic(4, 4, seed);
        const auto r = solve(double_angle_matrix(cfg), directed_angle_matrix(cfg));
        CHECK(r.report.direction.applied);
        REQUIRE_FALSE(r.set.solutions.empty());
        if (r.set.solutions.size() == 1) {
            ++narrowed;
            CHECK(r.set.kind == SolutionKind::Unique);
            CHECK(align_rms(r.set.solutions[0], cfg) < 1e-6);
        }
    }
    CHECK(narrowed > 0);
}

TEST_CASE("degenerate profiles are reported") {
    const auto fig2 = cmd_gen({Family::Fig2, 4, 4, 0, 0.0}).config;
    const auto r = solve(double_angle_matrix(fig2), std::nullopt);
    CHECK(r.set.kind == SolutionKind::DegenerateAmbiguous);
    CHECK(r.report.branch == kBranchDegenerateProfile);
    CHECK_FALSE(r.set.diagnostics.reasons.empty());

    const auto line = Configuration({{0, 0}, {1, 0}, {2.5, 0}, {-1.2, 0}, {0.6, 0}}, {{0.3, 0.9}, {-0.4, 0.5}, {1.1, -0.7}});
    const auto c = solve(double_angle_matrix(line), std::nullopt);
    CHECK(c.set.kind == SolutionKind::DegenerateAmbiguous);
    CHECK(c.report.branch == kBranchDegenerateCoprofile);
}

TEST_CASE("solve rejects bad shapes") {
    DirectedAngleMatrix wrong(4, 2);
    CHECK_THROWS_AS(solve(double_angle_matrix(generic(5, 4, 0)), wrong), GeodesyError);
}
