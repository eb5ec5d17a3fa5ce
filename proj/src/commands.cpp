#include "geodesy/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "geodesy/ambiguity.hpp"
#include "geodesy/reconstruct.hpp"
#include "geodesy/svg.hpp"

namespace geodesy {

// ---------------------------------------------------------------------------
// gen

std::string to_string(Family f) {
    switch (f) {
        case Family::Generic: return "generic";
        case Family::CocircularTargets: return "cocircular-targets";
        case Family::CocircularMeasures: return "cocircular-measures";
        case Family::CyclicCubic: return "cyclic-cubic";
        case Family::CollinearTargets: return "collinear-targets";
        case Family::Fig2: return "fig2";
    }
    return "unknown";
}

Family family_from_string(const std::string& name) {
    for (auto f : {Family::Generic, Family::CocircularTargets, Family::CocircularMeasures, Family::CyclicCubic,
                   Family::CollinearTargets, Family::Fig2})
        if (to_string(f) == name) return f;
    fail(ErrorCode::InvalidInput, "unknown scenario family '" + name + "'");
}

namespace {

using Sampler = std::function<PlanarPoint()>;

class PointPool {
public:
    explicit PointPool(std::mt19937_64& rng) : rng_(rng) {}

    /// Draws from `sampler` until the point keeps the minimum separation.
    bool add(std::vector<PlanarPoint>& into, const Sampler& sampler) {
        for (int tries = 0; tries < 1000; ++tries) {
            const PlanarPoint p = sampler();
            const bool clear = std::all_of(all_.begin(), all_.end(),
                                           [&](const PlanarPoint& q) { return distance(p, q) >= kMinSeparation; });
            if (clear) {
                all_.push_back(p);
                into.push_back(p);
                return true;
            }
        }
        return false;
    }

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

private:
    std::mt19937_64& rng_;
    std::vector<PlanarPoint> all_;
};

struct Draw {
    std::vector<PlanarPoint> targets, measures;
};

std::optional<Draw> draw(Family family, std::size_t t, std::size_t m, std::mt19937_64& rng) {
    PointPool pool(rng);
    const Sampler square = [&] { return PlanarPoint{pool.uniform(0.0, 1.0), pool.uniform(0.0, 1.0)}; };
    const double r = pool.uniform(0.3, 0.45);
    const PlanarPoint centre{0.5 + pool.uniform(-0.05, 0.05), 0.5 + pool.uniform(-0.05, 0.05)};
    const Sampler on_circle = [&, r, centre] {
        const double a = pool.uniform(0.0, 2.0 * std::numbers::pi);
        return PlanarPoint{centre.x + r * std::cos(a), centre.y + r * std::sin(a)};
    };
    const double slope = pool.uniform(-0.6, 0.6), offset = pool.uniform(0.35, 0.65);
    const Sampler on_line = [&, slope, offset] {
        const double x = pool.uniform(0.0, 1.0);
        return PlanarPoint{x, offset + slope * (x - 0.5)};
    };

    Draw d;
    bool ok = true;
    const auto fill = [&](std::vector<PlanarPoint>& into, std::size_t n, const Sampler& s) {
        for (std::size_t k = 0; k < n && ok; ++k) ok = pool.add(into, s);
    };
    switch (family) {
        case Family::Generic:
            fill(d.targets, t, square);
            fill(d.measures, m, square);
            break;
        case Family::CocircularTargets:
            fill(d.targets, t, on_circle);
            fill(d.measures, m, square);
            break;
        case Family::CocircularMeasures:
            fill(d.targets, t, square);
            fill(d.measures, m, on_circle);
            break;
        case Family::CollinearTargets:
            fill(d.targets, t, on_line);
            fill(d.measures, m, square);
            break;
        case Family::CyclicCubic:
        case Family::Fig2:
            // Targets and half of the measure points on a circle, the rest on a line.
            fill(d.targets, t, on_circle);
            fill(d.measures, m / 2, on_circle);
            fill(d.measures, m - m / 2, on_line);
            break;
    }
    if (!ok) return std::nullopt;
    return d;
}

}  // namespace

Scenario cmd_gen(const GenOptions& options) {
    std::size_t t = options.t, m = options.m;
    if (options.family == Family::Fig2) t = m = 4;
    if (t < 3) fail(ErrorCode::InvalidShape, "scenarios need t >= 3");
    if (m < 1) fail(ErrorCode::InvalidShape, "scenarios need m >= 1");
    if (options.jitter < 0.0 || !std::isfinite(options.jitter)) fail(ErrorCode::InvalidInput, "jitter must be >= 0");

    std::mt19937_64 rng(options.seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const auto d = draw(options.family, t, m, rng);
        if (!d) continue;
        Configuration cfg(d->targets, d->measures);
        if (options.family == Family::Generic && !degeneracy_flags(cfg).empty()) continue;
        Scenario s;
        s.config = std::move(cfg);
        s.seed = options.seed;
        s.generator = to_string(options.family);
        s.jitter = options.jitter;
        return s;
    }
    fail(ErrorCode::InvalidShape, "could not place " + std::to_string(t + m) + " separated points");
}

// ---------------------------------------------------------------------------
// measure / solve

MatricesFile cmd_measure(const Scenario& scenario) {
    DirectedAngleMatrix directed = directed_angle_matrix(scenario.config);
    if (scenario.jitter > 0.0) {
        std::mt19937_64 rng(scenario.seed.value_or(0) ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> noise(0.0, scenario.jitter);
        std::vector<DirectedAngle> entries;
        for (const auto& a : directed.entries()) entries.push_back(a * DirectedAngle::from_radians(noise(rng)));
        directed = DirectedAngleMatrix(directed.t(), directed.m(), std::move(entries));
    }
    return {squared(directed), directed};
}

SolveResult cmd_solve(const MatricesFile& matrices, const SolveOptions& options, bool use_directed) {
    if (use_directed && !matrices.directed)
        fail(ErrorCode::InvalidInput, "--directed needs a matrices file with directed angles");
    return solve(matrices.double_angles, use_directed ? matrices.directed : std::nullopt, options);
}

// ---------------------------------------------------------------------------
// census

std::string expected_count(std::size_t t, std::size_t m) {
    if ((static_cast<long>(m) - 2) * (static_cast<long>(t) - 3) < 2) return "inf";
    return (t == 4 || m == 3) ? "2" : "1";
}

namespace {

std::string expected_for(Family family, std::size_t t, std::size_t m) {
    const std::string generic = expected_count(t, m);
    if (generic == "inf") return generic;
    switch (family) {
        case Family::Generic: return generic;
        case Family::CocircularTargets:
        case Family::CollinearTargets: return t >= 5 ? "flagged" : generic;
        case Family::CocircularMeasures: return m >= 4 ? "flagged" : generic;
        case Family::CyclicCubic:
        case Family::Fig2: return t + m >= 8 ? "flagged" : generic;
    }
    return generic;
}

std::string outcome(const SolveResult& r) {
    switch (r.set.kind) {
        case SolutionKind::Infinite: return "inf";
        case SolutionKind::DegenerateAmbiguous: return "flagged";
        default: return std::to_string(r.set.solutions.size());
    }
}

}  // namespace

std::vector<CensusRow> cmd_census(const CensusOptions& options) {
    std::vector<CensusRow> rows;
    for (const auto& [t0, m0] : options.shapes) {
        const bool fig2 = options.family == Family::Fig2;
        CensusRow row;
        row.t = fig2 ? 4 : t0;
        row.m = fig2 ? 4 : m0;
        row.expected = expected_for(options.family, row.t, row.m);
        row.instances = options.instances;
        for (std::size_t k = 0; k < options.instances; ++k) {
            std::string seen;
            try {
                const Scenario s = cmd_gen({options.family, row.t, row.m, options.seed + k, 0.0});
                SolveOptions so;
                so.restarts = options.restarts;
                so.seed = options.seed + k;
                seen = outcome(solve(double_angle_matrix(s.config), std::nullopt, so));
            } catch (const GeodesyError&) {
                seen = "error";
            }
            ++row.observed[seen];
            if (seen == row.expected) ++row.agree;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json census_to_json(const std::vector<CensusRow>& rows, const CensusOptions& options) {
    Json j;
    j["schema"] = kCensusSchema;
    j["version"] = kSchemaVersion;
    j["family"] = to_string(options.family);
    j["instances"] = options.instances;
    j["seed"] = options.seed;
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json obs = Json::object();
        for (const auto& [k, v] : r.observed) obs[k] = v;
        arr.push_back({{"t", r.t},
                       {"m", r.m},
                       {"expected", r.expected},
                       {"observed", obs},
                       {"agree", r.agree},
                       {"instances", r.instances}});
    }
    j["rows"] = arr;
    return j;
}

std::string census_to_text(const std::vector<CensusRow>& rows) {
    std::ostringstream out;
    out << "t  m  expected  agree     observed\n";
    for (const auto& r : rows) {
        char head[64];
        std::snprintf(head, sizeof head, "%-2zu %-2zu %-9s %3zu/%-5zu", r.t, r.m, r.expected.c_str(), r.agree,
                      r.instances);
        out << head;
        for (const auto& [k, v] : r.observed) out << " " << k << ":" << v;
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// plot

std::string to_string(PlotKind k) {
    switch (k) {
        case PlotKind::Config: return "config";
        case PlotKind::Twin: return "twin";
        case PlotKind::CirclesRegions: return "circles-regions";
    }
    return "unknown";
}

PlotKind plot_kind_from_string(const std::string& name) {
    for (auto k : {PlotKind::Config, PlotKind::Twin, PlotKind::CirclesRegions})
        if (to_string(k) == name) return k;
    fail(ErrorCode::InvalidInput, "unknown plot kind '" + name + "'");
}

namespace {

constexpr const char* kTargetColour = "#1f4e9c";
constexpr const char* kMeasureColour = "#c0392b";
constexpr const char* kTwinColour = "#2e8b57";
constexpr const char* kCircleColour = "#7f7f7f";

// Light fills for the 16 possible inside-bit patterns.
constexpr std::array<const char*, 16> kRegionFill{
    "#ffffff", "#fde2e2", "#e2f0fd", "#e9e2fd", "#e2fde8", "#fdf5e2", "#e2fdfb", "#f3e2fd",
    "#fdebd0", "#d5f5e3", "#d6eaf8", "#fadbd8", "#e8daef", "#fcf3cf", "#d1f2eb", "#ebdef0",
};
constexpr const char* kInnerFill = "#f7c948";

struct Bounds {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;

    void add(const PlanarPoint& p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    void add_circle(const PlanarPoint& c, double r) {
        add({c.x - r, c.y - r});
        add({c.x + r, c.y + r});
    }
    SvgCanvas canvas(double margin = 0.08) const {
        const double pad = margin * std::max({x1 - x0, y1 - y0, 1e-9});
        return SvgCanvas(x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    }
};

std::array<PlanarPoint, 4> first_quad(const Configuration& c) {
    if (c.t() < 4) fail(ErrorCode::UnplottableReport, "twin and region plots need at least four targets");
    return {c.targets()[0], c.targets()[1], c.targets()[2], c.targets()[3]};
}

std::vector<PlanarPoint> hull_polygon(const std::array<PlanarPoint, 4>& q) {
    std::vector<PlanarPoint> out;
    for (auto i : cyclic_order(q)) out.push_back(q[i]);
    return out;
}

void draw_points(SvgCanvas& svg, const std::vector<PlanarPoint>& pts, const char* colour, const char* prefix) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
        svg.dot(pts[k], colour);
        svg.label(pts[k], prefix + std::to_string(k + 1), colour);
    }
}

std::string plot_config(const Configuration& c) {
    Bounds b;
    for (const auto& p : c.all_points()) b.add(p);
    SvgCanvas svg = b.canvas();
    for (const auto& q : c.measures())
        for (const auto& p : c.targets()) svg.line(q, p, "#d0d0d0", 0.8);
    draw_points(svg, c.targets(), kTargetColour, "p");
    draw_points(svg, c.measures(), kMeasureColour, "q");
    return svg.finish();
}

std::string plot_twin(const Configuration& c) {
    const auto quad = first_quad(c);
    const auto fc = fundamental_circles(quad);
    const auto twin = twin_quadrilateral(quad);
    Bounds b;
    for (const auto& p : quad) b.add(p);
    for (const auto& p : twin) b.add(p);
    for (const auto& circle : fc.circles) b.add_circle(circle.center(), circle.radius());
    SvgCanvas svg = b.canvas();
    for (const auto& circle : fc.circles) {
        svg.circle(circle.center(), circle.radius(), kCircleColour, true);
        svg.dot(circle.center(), kCircleColour, 2.5);
    }
    svg.polygon(hull_polygon(quad), kTargetColour, "none");
    svg.polygon(hull_polygon(twin), kTwinColour, "none");
    draw_points(svg, {quad.begin(), quad.end()}, kTargetColour, "p");
    draw_points(svg, {twin.begin(), twin.end()}, kTwinColour, "p'");
    return svg.finish();
}

std::string plot_regions(const Configuration& c) {
    const auto quad = first_quad(c);
    const auto fc = fundamental_circles(quad);
    Bounds b;
    for (const auto& circle : fc.circles) b.add_circle(circle.center(), circle.radius());
    const double pad = 0.1 * std::max(b.x1 - b.x0, b.y1 - b.y0);
    b.add({b.x0 - pad, b.y0 - pad});
    b.add({b.x1 + pad, b.y1 + pad});
    SvgCanvas svg = b.canvas(0.0);

    // Shade by horizontal runs of equal signature on a fixed lattice.
    constexpr int cells = 160;
    const double dx = (b.x1 - b.x0) / cells, dy = (b.y1 - b.y0) / cells;
    const auto fill_of = [&](const PlanarPoint& p) -> const char* {
        std::uint8_t bits = 0;
        for (std::size_t i = 0; i < 4; ++i)
            if (fc.circles[i].side(p) < 0.0) bits |= static_cast<std::uint8_t>(1u << i);
        if (fc.inner_bits && bits == *fc.inner_bits) return kInnerFill;
        return kRegionFill[bits];
    };
    for (int row = 0; row < cells; ++row) {
        const double y = b.y0 + (row + 0.5) * dy;
        int start = 0;
        const char* current = fill_of({b.x0 + 0.5 * dx, y});
        for (int col = 1; col <= cells; ++col) {
            const char* next = col < cells ? fill_of({b.x0 + (col + 0.5) * dx, y}) : nullptr;
            if (next != current) {
                svg.rect(b.x0 + start * dx, b.y0 + row * dy, b.x0 + col * dx, b.y0 + (row + 1) * dy, current);
                start = col;
                current = next;
            }
        }
    }
    for (const auto& circle : fc.circles) svg.circle(circle.center(), circle.radius(), "#404040");
    draw_points(svg, {quad.begin(), quad.end()}, kTargetColour, "p");
    return svg.finish();
}

}  // namespace

std::string cmd_plot(const Configuration& config, PlotKind what) {
    switch (what) {
        case PlotKind::Config: return plot_config(config);
        case PlotKind::Twin: return plot_twin(config);
        case PlotKind::CirclesRegions: return plot_regions(config);
    }
    fail(ErrorCode::InvalidInput, "unknown plot kind");
}

std::string cmd_plot(const ReportFile& report, PlotKind what) {
    if (report.solutions.empty())
        fail(ErrorCode::UnplottableReport, "report of kind " + to_string(report.kind) + " has no solutions to plot");
    return cmd_plot(report.solutions.front(), what);
}

}  // namespace geodesy
