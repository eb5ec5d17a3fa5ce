#include "geodesy/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace geodesy {

// ---------------------------------------------------------------------------
// Resection and forward intersection

PlanarPoint resect(const PlanarPoint& p1, const PlanarPoint& p2, const PlanarPoint& p3, const DoubleAngle& d12,
                   const DoubleAngle& d13, const ResectOptions& options) {
    const Complex a = p2.z() - p1.z();
    const Complex b = p3.z() - p1.z();
    if (std::abs(a) == 0.0 || std::abs(b) == 0.0 || std::abs(a - b) == 0.0)
        fail(ErrorCode::InvalidArgument, "resection targets must be distinct");
    const Complex d = d12.value();
    const Complex e = d13.value();

    // With v = 1 / (z - w1) each angle circle through p1 becomes the real line
    //   a v - d conj(a) conj(v) = 1 - d,
    // and the two lines are solved as a 2x2 system in (v, conj(v)).
    const Complex det = d * std::conj(a) * b - e * a * std::conj(b);
    if (std::abs(det) <= options.tangent_tol * std::abs(a) * std::abs(b)) {
        const DoubleAngle circum = double_angle(p3, p1, p2);
        if (d12.distance(circum) < 1e-6 && d13.distance(double_angle(p2, p1, p3)) < 1e-6)
            fail(ErrorCode::OnCriticalCircle, "both angle circles are the circumcircle of the targets");
        fail(ErrorCode::TangentCircles, "angle circles only meet at p1");
    }
    const Complex v = (d * std::conj(a) * (1.0 - e) - e * std::conj(b) * (1.0 - d)) / det;
    if (std::abs(v) * std::max(std::abs(a), std::abs(b)) <= options.tangent_tol)
        fail(ErrorCode::TangentCircles, "angle circles only meet at p1 and infinity");
    const PlanarPoint q = PlanarPoint::from_complex(p1.z() + 1.0 / v);

    const std::array<PlanarPoint, 3> triple{p1, p2, p3};
    const GeneralizedCircle critical = circle_through(p1, p2, p3);
    if (critical.distance(q) <= options.critical_tol * diameter(triple))
        fail(ErrorCode::OnCriticalCircle, "measure point lies on the circle through the three targets");
    return q;
}

Complex SightLine::direction() const { return (reference.z() - station.z()) * angle.half().value(); }

double crossing_sine(const SightLine& a, const SightLine& b) {
    const Complex u = a.direction(), v = b.direction();
    return std::abs((std::conj(u) * v).imag()) / (std::abs(u) * std::abs(v));
}

PlanarPoint intersect_sight_lines(const SightLine& a, const SightLine& b, double tol) {
    if (distance(a.station, a.reference) == 0.0 || distance(b.station, b.reference) == 0.0)
        fail(ErrorCode::CoincidentPoints, "sight line station coincides with its reference");
    const PlanarPoint a2 = PlanarPoint::from_complex(a.station.z() + a.direction());
    const PlanarPoint b2 = PlanarPoint::from_complex(b.station.z() + b.direction());
    return line_intersection(a.station, a2, b.station, b2, tol);
}

PlanarPoint forward_intersect(const PlanarPoint& q1, const PlanarPoint& q2, const PlanarPoint& p1,
                              const DoubleAngle& d1, const DoubleAngle& d2, double tol) {
    if (distance(q1, q2) == 0.0) fail(ErrorCode::InvalidArgument, "forward intersection needs two distinct stations");
    return intersect_sight_lines(SightLine{q1, p1, d1}, SightLine{q2, p1, d2}, tol);
}

// ---------------------------------------------------------------------------
// Canonical frame and validation

Similarity canonical_frame(const Configuration& cfg) {
    return Similarity::from_two_points(cfg.targets()[0], cfg.targets()[1], {0.0, 0.0}, {1.0, 0.0});
}

Configuration canonicalize(const Configuration& cfg) { return cfg.transformed(canonical_frame(cfg)); }

double matrix_residual(const Configuration& cfg, const DoubleAngleMatrix& M) {
    return max_entry_distance(double_angle_matrix(cfg), M);
}

namespace {

double row_residual(std::span<const PlanarPoint> targets, const PlanarPoint& q, const DoubleAngleMatrix& M,
                    std::size_t j) {
    double worst = 0.0;
    for (std::size_t i = 1; i < targets.size(); ++i)
        worst = std::max(worst, double_angle(q, targets[0], targets[i]).distance(M.at(j, i)));
    return worst;
}

}  // namespace

std::vector<PlanarPoint> resect_measures(std::span<const PlanarPoint> targets, const DoubleAngleMatrix& M) {
    if (targets.size() != M.t()) fail(ErrorCode::InvalidShape, "target count does not match the matrix");
    std::vector<PlanarPoint> measures;
    measures.reserve(M.m());
    for (std::size_t j = 0; j < M.m(); ++j) {
        std::optional<PlanarPoint> best;
        double best_residual = std::numeric_limits<double>::infinity();
        std::optional<GeodesyError> last_error;
        for (std::size_t a = 1; a < targets.size(); ++a) {
            for (std::size_t b = a + 1; b < targets.size(); ++b) {
                try {
                    const PlanarPoint q = resect(targets[0], targets[a], targets[b], M.at(j, a), M.at(j, b));
                    const double r = row_residual(targets, q, M, j);
                    if (r < best_residual) {
                        best_residual = r;
                        best = q;
                    }
                } catch (const GeodesyError& e) {
                    last_error = e;
                }
            }
        }
        if (!best) {
            if (last_error) throw *last_error;
            fail(ErrorCode::TangentCircles, "no target triple resects measure point " + std::to_string(j));
        }
        measures.push_back(*best);
    }
    return measures;
}

// ---------------------------------------------------------------------------
// Point identification from subset profiles

DoubleAngle angle_at_target(ProfileModel& model, std::size_t e, std::size_t b) {
    const std::size_t t = model.t();
    if (e == 0 || b == 0 || e == b || e >= t || b >= t)
        fail(ErrorCode::InvalidArgument, "angle_at_target needs two distinct non-reference targets");
    std::optional<GeodesyError> last_error;
    for (std::size_t c = 1; c < t; ++c) {
        if (c == b || c == e) continue;
        for (std::size_t d = 1; d < t; ++d) {
            if (d == b || d == e || d == c) continue;
            try {
                // Diagonal points q_1 = (p0 p_c) x (p_b p_d), q_2 = (p0 p_e) x (p_b p_d),
                // q_3 = (p0 p_c) x (p_b p_e); the angle at p_e follows as beta + gamma - alpha.
                const auto entry_for_b = [&](std::array<std::size_t, 4> subset, DiagonalPairing pairing) {
                    const SubsetProfile& profile = model.subset(subset);
                    const auto chart = diagonal_measurement(profile, pairing);
                    const auto pos = std::find(profile.targets.begin(), profile.targets.end(), b) -
                                     profile.targets.begin();
                    return chart[static_cast<std::size_t>(pos) - 1];
                };
                const DoubleAngle alpha = entry_for_b({0, b, c, d}, {{0, c}, {b, d}});
                const DoubleAngle beta = entry_for_b({0, b, e, d}, {{0, e}, {b, d}});
                const DoubleAngle gamma = entry_for_b({0, b, c, e}, {{0, c}, {b, e}});
                return beta * gamma / alpha;
            } catch (const GeodesyError& err) {
                switch (err.code()) {
                    case ErrorCode::NonUniqueProfile:
                    case ErrorCode::TangentLine:
                    case ErrorCode::NonUnitChart:
                        last_error = err;
                        continue;
                    default:
                        throw;
                }
            }
        }
    }
    fail(ErrorCode::DegenerateSubset,
         "no usable subset profiles for the angle at target " + std::to_string(e) +
             (last_error ? std::string(" (") + last_error->what() + ")" : std::string()));
}

namespace {

/// Targets in the frame p0 = (0,0), p1 = (1,0), using target 0 as reference.
std::vector<PlanarPoint> identify_with_reference(const DoubleAngleMatrix& M, double rank_tol) {
    const std::size_t t = M.t();
    ProfileModel model(M, rank_tol);
    std::vector<std::optional<PlanarPoint>> placed(t);
    placed[0] = PlanarPoint{0.0, 0.0};
    placed[1] = PlanarPoint{1.0, 0.0};

    // Sight line from a placed target s towards target k.
    const auto sight = [&](std::size_t s, std::size_t k) -> SightLine {
        if (s == 0) {
            // Angle at p0 from the triangle (p0, p1, p_k): D_p0(p1, pk) = D_p1(p0, pk) / D_pk(p0, p1).
            const DoubleAngle at_p1 = angle_at_target(model, 1, k);
            const DoubleAngle at_pk = angle_at_target(model, k, 1);
            return SightLine{*placed[0], *placed[1], at_p1 / at_pk};
        }
        return SightLine{*placed[s], *placed[0], angle_at_target(model, s, k)};
    };

    for (std::size_t k = 2; k < t; ++k) {
        std::vector<SightLine> lines;
        std::optional<GeodesyError> last_error;
        for (std::size_t s = 0; s < t; ++s) {
            if (!placed[s]) continue;
            try {
                lines.push_back(sight(s, k));
            } catch (const GeodesyError& err) {
                if (err.code() != ErrorCode::DegenerateSubset) throw;
                last_error = err;
            }
        }
        double best = 0.0;
        std::optional<std::pair<std::size_t, std::size_t>> pair;
        for (std::size_t a = 0; a < lines.size(); ++a)
            for (std::size_t b = a + 1; b < lines.size(); ++b)
                if (const double s = crossing_sine(lines[a], lines[b]); s > best) {
                    best = s;
                    pair = {a, b};
                }
        if (!pair || best < 1e-6) {
            if (last_error) throw *last_error;
            fail(ErrorCode::ParallelLines, "no crossing sight lines for target " + std::to_string(k));
        }
        placed[k] = intersect_sight_lines(lines[pair->first], lines[pair->second]);
    }
    std::vector<PlanarPoint> out;
    out.reserve(t);
    for (const auto& p : placed) out.push_back(*p);
    return out;
}

}  // namespace

std::vector<PlanarPoint> identify_targets(const DoubleAngleMatrix& M, const IdentifyOptions& options) {
    if (M.t() < 5 || M.m() < 4) fail(ErrorCode::InvalidShape, "target identification needs t >= 5 and m >= 4");
    const std::size_t t = M.t();
    std::optional<GeodesyError> last_error;
    // Reference target 0 first; the other references handle subsets that are
    // degenerate for it (e.g. four collinear targets through p_1).
    for (std::size_t r = 0; r < t; ++r) {
        std::vector<std::size_t> order{r};
        for (std::size_t i = 0; i < t; ++i)
            if (i != r) order.push_back(i);
        try {
            const auto local = identify_with_reference(M.permuted_targets(order), options.rank_tol);
            std::vector<PlanarPoint> targets(t);
            for (std::size_t k = 0; k < t; ++k) targets[order[k]] = local[k];
            const Similarity frame = Similarity::from_two_points(targets[0], targets[1], {0.0, 0.0}, {1.0, 0.0});
            targets = frame.apply(targets);

            const auto measures = resect_measures(targets, M);
            double worst = 0.0;
            for (std::size_t j = 0; j < M.m(); ++j) worst = std::max(worst, row_residual(targets, measures[j], M, j));
            if (worst > options.tol)
                fail(ErrorCode::InconsistentAngles,
                     "re-measured rows deviate by " + std::to_string(worst) + " from the input");
            return targets;
        } catch (const GeodesyError& err) {
            switch (err.code()) {
                case ErrorCode::DegenerateSubset:
                case ErrorCode::ParallelLines:
                case ErrorCode::InconsistentAngles:
                case ErrorCode::TangentCircles:
                case ErrorCode::OnCriticalCircle:
                case ErrorCode::CoincidentPoints:
                case ErrorCode::CollinearInput:
                case ErrorCode::DegenerateSource:
                    last_error = err;
                    continue;
                default:
                    throw;
            }
        }
    }
    if (last_error && last_error->code() == ErrorCode::InconsistentAngles) throw *last_error;
    fail(ErrorCode::DegenerateSubset,
         std::string("target identification failed for every reference") +
             (last_error ? std::string(": ") + last_error->what() : std::string()));
}

// ---------------------------------------------------------------------------
// Twins

namespace {

void require_no_collinear_triple(std::span<const PlanarPoint> quad, double tol) {
    const double scale = diameter(quad);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k)
                if (std::abs(orientation(quad[i], quad[j], quad[k])) <= tol * scale * scale)
                    fail(ErrorCode::CollinearTriple, "three vertices of the quadrilateral are collinear");
}

std::array<PlanarPoint, 4> reflected_circumcenters(std::span<const PlanarPoint> quad,
                                                   const std::array<std::size_t, 4>& correspondence) {
    std::array<PlanarPoint, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t omit = correspondence[i];
        std::array<PlanarPoint, 3> tri{};
        std::size_t n = 0;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != omit) tri[n++] = quad[k];
        const PlanarPoint c = circumcenter(tri[0], tri[1], tri[2]);
        out[i] = PlanarPoint{c.x, -c.y};
    }
    return out;
}

constexpr std::array<std::array<std::size_t, 4>, 4> kCorrespondences{{
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
}};

}  // namespace

std::array<PlanarPoint, 4> twin_quadrilateral(std::span<const PlanarPoint> quad, double tol) {
    if (quad.size() != 4) fail(ErrorCode::InvalidArgument, "a quadrilateral has four vertices");
    require_no_collinear_triple(quad, tol);
    if (are_cocircular(quad, tol * diameter(quad))) return {quad[0], quad[1], quad[2], quad[3]};
    return reflected_circumcenters(quad, kCorrespondences[0]);
}

Configuration twin_configuration(const Configuration& sol, const DoubleAngleMatrix& M, double tol) {
    if (sol.t() != 4) fail(ErrorCode::InvalidShape, "twin configuration needs exactly four targets");
    const auto& quad = sol.targets();
    require_no_collinear_triple(quad, 1e-9);
    if (are_cocircular(quad, 1e-9 * diameter(quad))) return canonicalize(sol);

    std::optional<GeodesyError> last_error;
    double best_residual = std::numeric_limits<double>::infinity();
    for (const auto& correspondence : kCorrespondences) {
        try {
            const auto twin = reflected_circumcenters(quad, correspondence);
            const Similarity frame = Similarity::from_two_points(twin[0], twin[1], {0.0, 0.0}, {1.0, 0.0});
            const auto targets = frame.apply(std::span<const PlanarPoint>(twin));
            Configuration cfg(targets, resect_measures(targets, M));
            const double r = matrix_residual(cfg, M);
            if (r <= tol) return cfg;
            best_residual = std::min(best_residual, r);
        } catch (const GeodesyError& err) {
            last_error = err;
        }
    }
    fail(ErrorCode::ValidationFailed,
         "no vertex correspondence of the twin reproduces the matrix (best residual " +
             std::to_string(best_residual) + ")" + (last_error ? std::string(": ") + last_error->what() : ""));
}

Configuration dual_second_solution(const Configuration& sol, double tol) {
    if (sol.m() != 3) fail(ErrorCode::InvalidShape, "the dual construction needs exactly three measure points");
    const DoubleAngleMatrix M = double_angle_matrix(sol);
    const Complex p0 = sol.targets()[0].z();

    // Inversion about p_1 exchanges the roles: the image of infinity (0) and
    // the inverted measure points form a quadrilateral whose twin carries the
    // second solution.
    std::array<PlanarPoint, 4> dual{PlanarPoint{0.0, 0.0}};
    for (std::size_t j = 0; j < 3; ++j) dual[j + 1] = PlanarPoint::from_complex(1.0 / (sol.measures()[j].z() - p0));
    const auto twin = twin_quadrilateral(dual);

    const Complex origin = twin[0].z();
    std::vector<PlanarPoint> measures;
    for (std::size_t j = 0; j < 3; ++j) measures.push_back(PlanarPoint::from_complex(1.0 / (twin[j + 1].z() - origin)));
    std::vector<PlanarPoint> targets{PlanarPoint{0.0, 0.0}};

    for (std::size_t i = 1; i < sol.t(); ++i) {
        std::array<SightLine, 3> lines{SightLine{measures[0], targets[0], M.at(0, i)},
                                       SightLine{measures[1], targets[0], M.at(1, i)},
                                       SightLine{measures[2], targets[0], M.at(2, i)}};
        // Intersect the best-crossing pair, validate on the remaining line.
        std::size_t skip = 0;
        double best = -1.0;
        for (std::size_t s = 0; s < 3; ++s) {
            const double c = crossing_sine(lines[(s + 1) % 3], lines[(s + 2) % 3]);
            if (c > best) {
                best = c;
                skip = s;
            }
        }
        const PlanarPoint p = intersect_sight_lines(lines[(skip + 1) % 3], lines[(skip + 2) % 3]);
        const double check = double_angle(measures[skip], targets[0], p).distance(M.at(skip, i));
        if (check > tol)
            fail(ErrorCode::ValidationFailed,
                 "third measure point disagrees by " + std::to_string(check) + " on target " + std::to_string(i));
        targets.push_back(p);
    }
    Configuration second = canonicalize(Configuration(targets, measures));
    const double residual = matrix_residual(second, M);
    if (residual > tol)
        fail(ErrorCode::ValidationFailed, "dual solution reproduces the matrix only to " + std::to_string(residual));
    return second;
}

}  // namespace geodesy
