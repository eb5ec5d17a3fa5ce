#include "geodesy/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "geodesy/reconstruct.hpp"

namespace geodesy {

namespace {

struct Seed {
    std::size_t free_target = 2;
    std::pair<std::size_t, std::size_t> stations{0, 1};
    Complex start;
};

// Unknown layout: targets 2..t-1, then measures 0..m-1, each as (x, y).
// Targets 0 and 1 are pinned at (0,0) and (1,0).
class Problem {
public:
    explicit Problem(const DoubleAngleMatrix& M) : M_(M), t_(M.t()), m_(M.m()) {}

    Eigen::Index unknowns() const { return static_cast<Eigen::Index>(2 * (t_ - 2 + m_)); }
    Eigen::Index residuals() const { return static_cast<Eigen::Index>(2 * m_ * (t_ - 1)); }

    Complex target(const Eigen::VectorXd& x, std::size_t i) const {
        if (i == 0) return {0.0, 0.0};
        if (i == 1) return {1.0, 0.0};
        const auto k = static_cast<Eigen::Index>(2 * (i - 2));
        return {x[k], x[k + 1]};
    }
    Complex measure(const Eigen::VectorXd& x, std::size_t j) const {
        const auto k = static_cast<Eigen::Index>(2 * (t_ - 2 + j));
        return {x[k], x[k + 1]};
    }
    Eigen::Index target_slot(std::size_t i) const { return static_cast<Eigen::Index>(2 * (i - 2)); }
    Eigen::Index measure_slot(std::size_t j) const { return static_cast<Eigen::Index>(2 * (t_ - 2 + j)); }

    /// Residual vector and (optionally) its Jacobian. Returns false on a
    /// coincidence of a measure point with a target.
    bool evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) const {
        r.resize(residuals());
        if (J) J->setZero(residuals(), unknowns());
        const Complex I{0.0, 1.0};
        Eigen::Index row = 0;
        for (std::size_t j = 0; j < m_; ++j) {
            const Complex z = measure(x, j);
            const Complex a = z - target(x, 0);
            if (std::abs(a) < 1e-300) return false;
            for (std::size_t i = 1; i < t_; ++i, row += 2) {
                const Complex b = z - target(x, i);
                if (std::abs(b) < 1e-300) return false;
                // D = conj(a)/a * b/conj(b) with a = z - w_0, b = z - w_i.
                const Complex D = (std::conj(a) / a) * (b / std::conj(b));
                if (!std::isfinite(D.real()) || !std::isfinite(D.imag())) return false;
                const Complex res = D - M_.at(j, i).value();
                r[row] = res.real();
                r[row + 1] = res.imag();
                if (!J) continue;
                const Complex ia = 1.0 / a, iac = 1.0 / std::conj(a), ib = 1.0 / b, ibc = 1.0 / std::conj(b);
                const Complex dqx = D * (iac - ia + ib - ibc);
                const Complex dqy = D * I * (-iac - ia + ib + ibc);
                const Eigen::Index qs = measure_slot(j);
                (*J)(row, qs) = dqx.real();
                (*J)(row + 1, qs) = dqx.imag();
                (*J)(row, qs + 1) = dqy.real();
                (*J)(row + 1, qs + 1) = dqy.imag();
                if (i >= 2) {
                    const Complex dwx = D * (-ib + ibc);
                    const Complex dwy = D * (-I * ib - I * ibc);
                    const Eigen::Index ws = target_slot(i);
                    (*J)(row, ws) = dwx.real();
                    (*J)(row + 1, ws) = dwx.imag();
                    (*J)(row, ws + 1) = dwy.real();
                    (*J)(row + 1, ws + 1) = dwy.imag();
                }
            }
        }
        return true;
    }

    double max_entry_residual(const Eigen::VectorXd& r) const {
        double worst = 0.0;
        for (Eigen::Index k = 0; k < r.size(); k += 2) worst = std::max(worst, std::hypot(r[k], r[k + 1]));
        return worst;
    }

    std::optional<Configuration> configuration(const Eigen::VectorXd& x) const {
        std::vector<PlanarPoint> targets, measures;
        for (std::size_t i = 0; i < t_; ++i) targets.push_back(PlanarPoint::from_complex(target(x, i)));
        for (std::size_t j = 0; j < m_; ++j) measures.push_back(PlanarPoint::from_complex(measure(x, j)));
        try {
            return Configuration(std::move(targets), std::move(measures));
        } catch (const GeodesyError&) {
            return std::nullopt;
        }
    }

    /// Full unknown vector determined by one free target p_k: measure points
    /// resected from (p_1, p_2, p_k), the remaining targets forward-intersected
    /// from two measure points.
    std::optional<Eigen::VectorXd> lift(const Seed& seed, Complex pk) const {
        const PlanarPoint P0{0.0, 0.0}, P1{1.0, 0.0}, Pk = PlanarPoint::from_complex(pk);
        try {
            Eigen::VectorXd x(unknowns());
            x[target_slot(seed.free_target)] = pk.real();
            x[target_slot(seed.free_target) + 1] = pk.imag();
            std::vector<PlanarPoint> qs;
            for (std::size_t j = 0; j < m_; ++j) {
                qs.push_back(resect(P0, P1, Pk, M_.at(j, 1), M_.at(j, seed.free_target)));
                x[measure_slot(j)] = qs[j].x;
                x[measure_slot(j) + 1] = qs[j].y;
            }
            const auto [s1, s2] = seed.stations;
            for (std::size_t i = 2; i < t_; ++i) {
                if (i == seed.free_target) continue;
                const PlanarPoint p = forward_intersect(qs[s1], qs[s2], P0, M_.at(s1, i), M_.at(s2, i));
                x[target_slot(i)] = p.x;
                x[target_slot(i) + 1] = p.y;
            }
            if (x.allFinite()) return x;
        } catch (const GeodesyError&) {
        }
        return std::nullopt;
    }

    /// Residual of the lifted configuration, for the reduced search.
    bool evaluate_reduced(const Seed& seed, const Eigen::Vector2d& p, Eigen::VectorXd& r) const {
        const auto x = lift(seed, {p[0], p[1]});
        return x && evaluate(*x, r, nullptr);
    }

    /// Free target, station pair and a start for the free target, placed
    /// log-uniformly in distance around p_1 or p_2.
    Seed random_seed(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Seed seed;
        seed.free_target = 2 + std::uniform_int_distribution<std::size_t>(0, t_ - 3)(rng);
        const std::size_t s1 = std::uniform_int_distribution<std::size_t>(0, m_ - 1)(rng);
        std::size_t s2 = std::uniform_int_distribution<std::size_t>(0, m_ - 2)(rng);
        if (s2 >= s1) ++s2;
        seed.stations = {s1, s2};
        const double radius = std::exp(std::log(1e-3) + unit(rng) * std::log(1e5));
        const Complex centre = unit(rng) < 0.5 ? Complex{0.0, 0.0} : Complex{1.0, 0.0};
        seed.start = centre + std::polar(radius, 2.0 * std::numbers::pi * unit(rng));
        return seed;
    }

private:
    const DoubleAngleMatrix& M_;
    std::size_t t_;
    std::size_t m_;
};

struct Outcome {
    Eigen::VectorXd x;
    double residual = std::numeric_limits<double>::infinity();
};

/// Damped least squares over the free target only, with a forward-difference Jacobian.
std::optional<Complex> reduced_search(const Problem& problem, const Seed& seed, const EnumerateOptions& options) {
    Eigen::Vector2d p{seed.start.real(), seed.start.imag()};
    Eigen::VectorXd r, r_trial, r_step;
    if (!problem.evaluate_reduced(seed, p, r)) return std::nullopt;
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        if (problem.max_entry_residual(r) < 1e-8) break;
        Eigen::MatrixXd J(r.size(), 2);
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d pk = p;
            const double h = 1e-7 * std::max(1.0, std::abs(p[k]));
            pk[k] += h;
            if (!problem.evaluate_reduced(seed, pk, r_step)) return std::nullopt;
            J.col(k) = (r_step - r) / h;
        }
        const Eigen::Matrix2d JtJ = J.transpose() * J;
        const Eigen::Vector2d g = J.transpose() * r;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::Matrix2d A = JtJ;
            A.diagonal() += lambda * (JtJ.diagonal().array() + 1e-12).matrix();
            const Eigen::Vector2d step = A.ldlt().solve(-g);
            const Eigen::Vector2d trial = p + step;
            if (step.allFinite() && problem.evaluate_reduced(seed, trial, r_trial) && r_trial.squaredNorm() < cost) {
                p = trial;
                r = r_trial;
                cost = r.squaredNorm();
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    return Complex{p[0], p[1]};
}

Outcome levenberg_marquardt(const Problem& problem, Eigen::VectorXd x, const EnumerateOptions& options) {
    Eigen::VectorXd r, r_trial;
    Eigen::MatrixXd J;
    if (!problem.evaluate(x, r, &J)) return {x, std::numeric_limits<double>::infinity()};
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        if (problem.max_entry_residual(r) < 0.01 * options.converge_tol) break;
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal() += lambda * (JtJ.diagonal().array() + 1e-12).matrix();
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd x_trial = x + step;
            if (step.allFinite() && problem.evaluate(x_trial, r_trial, nullptr) && r_trial.squaredNorm() < cost) {
                x = x_trial;
                cost = r_trial.squaredNorm();
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
        problem.evaluate(x, r, &J);
    }
    return {x, problem.max_entry_residual(r)};
}

bool lexicographically_less(const Configuration& a, const Configuration& b) {
    const auto pa = a.all_points(), pb = b.all_points();
    for (std::size_t k = 0; k < pa.size(); ++k) {
        if (pa[k].x != pb[k].x) return pa[k].x < pb[k].x;
        if (pa[k].y != pb[k].y) return pa[k].y < pb[k].y;
    }
    return false;
}

}  // namespace

std::vector<NumericSolution> enumerate_numeric(const DoubleAngleMatrix& M, const EnumerateOptions& options,
                                               EnumerateStats* stats) {
    const Problem problem(M);
    std::vector<NumericSolution> clusters;
    EnumerateStats local{options.restarts, 0, std::numeric_limits<double>::infinity()};

    for (std::size_t restart = 0; restart < options.restarts; ++restart) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(restart)};
        std::mt19937_64 rng(seq);
        const Seed seed = problem.random_seed(rng);
        const auto pk = reduced_search(problem, seed, options);
        if (!pk) continue;
        const auto start = problem.lift(seed, *pk);
        if (!start) continue;
        const Outcome out = levenberg_marquardt(problem, *start, options);
        local.best_residual = std::min(local.best_residual, out.residual);
        if (!(out.residual < options.converge_tol)) continue;
        auto cfg = problem.configuration(out.x);
        if (!cfg) continue;
        ++local.converged;

        const auto pts = cfg->all_points();
        bool merged = false;
        for (auto& c : clusters) {
            const auto other = c.config.all_points();
            if (align_similarity(pts, other, false).rms_residual < options.cluster_tol) {
                ++c.hits;
                if (out.residual < c.residual) {
                    c.config = *cfg;
                    c.residual = out.residual;
                }
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back({*cfg, out.residual, 1});
    }

    std::sort(clusters.begin(), clusters.end(), [](const NumericSolution& a, const NumericSolution& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        return lexicographically_less(a.config, b.config);
    });
    if (stats) *stats = local;
    return clusters;
}

}  // namespace geodesy
