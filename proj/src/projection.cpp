#include "kappadetect/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kappadetect/error.hpp"
#include "kappadetect/seed.hpp"

namespace kappadetect {

namespace {

void check_dims(int n, int k) {
    if (n < 1 || k < 1 || k > n) {
        throw DimensionError("projection dimension must satisfy 1 <= k <= n, got n=" +
                             std::to_string(n) + " k=" + std::to_string(k));
    }
}

Eigen::MatrixXd standard_normal(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    // Column-major fill; the draw order is part of the determinism contract.
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) m(r, c) = normal(rng);
    }
    return m;
}

}  // namespace

Projection Projection::from_orthonormal(Eigen::MatrixXd matrix, double tol) {
    check_dims(static_cast<int>(matrix.rows()), static_cast<int>(matrix.cols()));
    Projection p(std::move(matrix));
    if (!(p.orthonormality_error() <= tol)) {
        throw RankError("matrix columns are not orthonormal (error " +
                        std::to_string(p.orthonormality_error()) + ")");
    }
    return p;
}

double Projection::orthonormality_error() const {
    const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Projection adopt_orthonormal(Eigen::MatrixXd matrix) { return Projection(std::move(matrix)); }

void SolverConfig::validate() const {
    if (!(step_size > 0.0)) throw ConfigError("solver step_size must be positive");
    if (max_iters < 1) throw ConfigError("solver max_iters must be positive");
    if (!(convergence_tol > 0.0)) throw ConfigError("solver convergence_tol must be positive");
    if (patience < 1) throw ConfigError("solver patience must be positive");
}

int detail::gram_schmidt(Eigen::MatrixXd& m, double rel_tol) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double original = m.col(j).norm();
        if (!(original > 0.0) || !std::isfinite(original)) return static_cast<int>(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < j; ++i) {
                m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
            }
        }
        const double residual = m.col(j).norm();
        if (residual <= rel_tol * original) return static_cast<int>(j);
        m.col(j) /= residual;
    }
    return -1;
}

Projection orthonormalize(const Eigen::MatrixXd& matrix) {
    check_dims(static_cast<int>(matrix.rows()), static_cast<int>(matrix.cols()));
    Eigen::MatrixXd q = matrix;
    const int bad = detail::gram_schmidt(q);
    if (bad >= 0) {
        throw RankError("matrix is rank deficient at column " + std::to_string(bad));
    }
    return Projection(std::move(q));
}

Projection random_projection(int n, int k, std::uint64_t seed) {
    check_dims(n, k);
    Rng rng(seed);
    for (;;) {
        Eigen::MatrixXd g = standard_normal(n, k, rng);
        // A Gaussian matrix is rank deficient with probability zero; redraw if it happens.
        if (detail::gram_schmidt(g) < 0) return adopt_orthonormal(std::move(g));
    }
}

double kappa_of(const Projection& p, const SecantSet& s) {
    if (s.empty()) throw DegenerateSecantSetError("kappa of an empty secant set");
    if (s.ambient_dim() != p.n()) {
        throw IncompatibleError("secant dimension " + std::to_string(s.ambient_dim()) +
                                " does not match projection dimension " + std::to_string(p.n()));
    }
    const Eigen::MatrixXd w = p.matrix().transpose() * s.secants;
    const double min_sq = w.colwise().squaredNorm().minCoeff();
    return std::clamp(std::sqrt(min_sq), 0.0, 1.0);
}

namespace {

struct WorstSecant {
    Eigen::Index index;
    double kappa;
};

WorstSecant worst_secant(const Eigen::MatrixXd& p, const Eigen::MatrixXd& secants, Eigen::MatrixXd& w,
                         Eigen::RowVectorXd& sq) {
    w.noalias() = p.transpose() * secants;
    sq = w.colwise().squaredNorm();
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < sq.size(); ++j) {
        if (sq(j) < sq(best)) best = j;
    }
    return {best, std::min(1.0, std::sqrt(sq(best)))};
}

// Soft minimum  -log(sum exp(-beta q_j)) / beta  of the squared secant norms q.
double soft_min(const Eigen::RowVectorXd& q, double beta, Eigen::RowVectorXd* weights) {
    const double lo = q.minCoeff();
    const Eigen::RowVectorXd e = (-beta * (q.array() - lo)).exp().matrix();
    const double total = e.sum();
    if (weights) *weights = e / total;
    return lo - std::log(total) / beta;
}

// Backtracking Riemannian ascent on the soft minimum for a ladder of
// sharpness values. `p` holds the current iterate; the best kappa iterate is
// recorded in `result`.
void polish(const SecantSet& s, Eigen::MatrixXd p, SolveResult& result) {
    static constexpr double kBetas[] = {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 1e4, 3e4, 1e5};
    constexpr int kStepsPerBeta = 60;
    Eigen::MatrixXd w;
    Eigen::RowVectorXd q;
    Eigen::RowVectorXd weights;
    for (const double beta : kBetas) {
        double eta = 1.0;
        w.noalias() = p.transpose() * s.secants;
        q = w.colwise().squaredNorm();
        double f = soft_min(q, beta, &weights);
        for (int it = 0; it < kStepsPerBeta; ++it) {
            Eigen::MatrixXd grad = 2.0 * s.secants * (weights.asDiagonal() * w.transpose());
            grad -= p * (p.transpose() * grad);
            const double g2 = grad.squaredNorm();
            if (g2 < 1e-20) break;
            bool moved = false;
            while (eta > 1e-12) {
                Eigen::MatrixXd candidate = p + eta * grad;
                if (detail::gram_schmidt(candidate) < 0) {
                    Eigen::MatrixXd cw = candidate.transpose() * s.secants;
                    Eigen::RowVectorXd cq = cw.colwise().squaredNorm();
                    Eigen::RowVectorXd cweights;
                    const double cf = soft_min(cq, beta, &cweights);
                    if (cf >= f + 1e-4 * eta * g2) {
                        p.swap(candidate);
                        w.swap(cw);
                        q.swap(cq);
                        weights.swap(cweights);
                        f = cf;
                        moved = true;
                        eta *= 2.0;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if (!moved) break;
            const double kappa = std::min(1.0, std::sqrt(q.minCoeff()));
            if (kappa > result.kappa) {
                result.kappa = kappa;
                result.projection = adopt_orthonormal(p);
            }
        }
    }
}

}  // namespace

SolveResult refine_projection(const SecantSet& s, const Projection& start, const SolverConfig& cfg,
                              const TraceHook& trace) {
    cfg.validate();
    if (s.empty()) throw DegenerateSecantSetError("cannot solve over an empty secant set");
    if (s.ambient_dim() != start.n()) {
        throw IncompatibleError("secant dimension " + std::to_string(s.ambient_dim()) +
                                " does not match projection dimension " + std::to_string(start.n()));
    }
    const int k = start.k();
    const int n = start.n();
    if (k == n) {
        return SolveResult{start, 1.0, 1.0, 0};
    }

    Rng rng(derive_seed(cfg.seed, 0x66616c6c6261636bULL));
    std::normal_distribution<double> normal;

    Eigen::MatrixXd p = start.matrix();
    Eigen::MatrixXd w(k, s.secants.cols());
    Eigen::RowVectorXd sq;
    WorstSecant worst = worst_secant(p, s.secants, w, sq);

    SolveResult result{start, worst.kappa, worst.kappa, 0};
    double window_best = result.kappa;
    Eigen::VectorXd u(k);

    int iter = 0;
    while (iter < cfg.max_iters && result.kappa < 1.0) {
        const double alpha = cfg.step_size / (1.0 + static_cast<double>(iter) / 100.0);
        const auto secant = s.secants.col(worst.index);
        if (worst.kappa > 0.0) {
            u = w.col(worst.index);
            if (cfg.normalized_step) u /= u.norm();
        } else {
            for (int i = 0; i < k; ++i) u(i) = normal(rng);
            u /= u.norm();
        }
        Eigen::MatrixXd candidate = p;
        candidate.noalias() += alpha * secant * u.transpose();
        // A rank-deficient step only happens for alpha large enough to cancel a
        // column; keep the previous iterate in that case.
        if (detail::gram_schmidt(candidate) < 0) p.swap(candidate);
        ++iter;

        worst = worst_secant(p, s.secants, w, sq);
        if (worst.kappa > result.kappa) {
            result.kappa = worst.kappa;
            result.projection = adopt_orthonormal(p);
        }
        if (trace) trace(IterationTrace{iter, worst.kappa, result.kappa, p});
        if (iter % cfg.patience == 0) {
            if (result.kappa - window_best < cfg.convergence_tol) break;
            window_best = result.kappa;
        }
    }
    result.iterations = iter;
    if (cfg.smooth_polish && result.kappa < 1.0) polish(s, result.projection.matrix(), result);
    return result;
}

SolveResult solve_min_secant_projection(const SecantSet& s, int k, const SolverConfig& cfg,
                                        const TraceHook& trace) {
    cfg.validate();
    if (s.empty()) throw DegenerateSecantSetError("cannot solve over an empty secant set");
    return refine_projection(s, random_projection(s.ambient_dim(), k, cfg.seed), cfg, trace);
}

SolveResult solve_best_of(const SecantSet& s, int k, const SolverConfig& cfg, int restarts) {
    if (restarts < 1) throw ConfigError("restarts must be positive");
    std::optional<SolveResult> best;
    for (int r = 0; r < restarts; ++r) {
        SolverConfig run = cfg;
        run.seed = derive_seed(cfg.seed, stream::kRestart, r);
        SolveResult res = solve_min_secant_projection(s, k, run);
        if (!best || res.kappa > best->kappa) best = std::move(res);
    }
    return *std::move(best);
}

}  // namespace kappadetect
