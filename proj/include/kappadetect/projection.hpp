#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "kappadetect/geometry.hpp"

namespace kappadetect {

/// An n x k matrix with orthonormal columns, i.e. a point of Proj(n, k).
class Projection {
public:
    /// Wraps `matrix` after checking 1 <= k <= n and column orthonormality
    /// within `tol`. Throws DimensionError or RankError.
    static Projection from_orthonormal(Eigen::MatrixXd matrix, double tol = 1e-8);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    int n() const noexcept { return static_cast<int>(matrix_.rows()); }
    int k() const noexcept { return static_cast<int>(matrix_.cols()); }

    /// max |P^T P - I| entry.
    double orthonormality_error() const;

private:
    explicit Projection(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
    friend Projection orthonormalize(const Eigen::MatrixXd& matrix);
    friend Projection adopt_orthonormal(Eigen::MatrixXd matrix);

    Eigen::MatrixXd matrix_;
};

/// Wraps a matrix the caller already knows to be orthonormal, skipping the check.
Projection adopt_orthonormal(Eigen::MatrixXd matrix);

namespace detail {

/// In-place Gram-Schmidt (two passes). Returns the index of the first column
/// whose residual falls below rel_tol times its original norm, or -1.
/// Columns before a failing one are left orthonormal.
int gram_schmidt(Eigen::MatrixXd& m, double rel_tol = 1e-10);

}  // namespace detail

struct SolverConfig {
    double step_size = 0.1;
    int max_iters = 2000;
    /// Stop once the best kappa gains less than this over `patience` iterations.
    double convergence_tol = 1e-5;
    int patience = 100;
    std::uint64_t seed = 0;
    /// Move along s* u^T with u = P^T s* / |P^T s*| instead of s* (s*^T P).
    bool normalized_step = true;
    /// After the worst-secant iterations, ascend a soft minimum of the squared
    /// secant norms with increasing sharpness. Only accepted where kappa improves.
    bool smooth_polish = true;

    void validate() const;
};

/// Orthonormal basis of a uniformly random k-dimensional subspace of R^n,
/// from the orthonormalization of an n x k standard normal matrix.
Projection random_projection(int n, int k, std::uint64_t seed);

/// Modified Gram-Schmidt with one reorthogonalization pass. Preserves the
/// column span; every output column has a positive dot product with its input
/// column. Throws RankError for numerically rank-deficient input.
Projection orthonormalize(const Eigen::MatrixXd& matrix);

/// min over secants of |P^T s|, clamped to [0, 1].
double kappa_of(const Projection& p, const SecantSet& s);

struct SolveResult {
    Projection projection;
    double kappa = 0.0;
    double initial_kappa = 0.0;
    int iterations = 0;
};

struct IterationTrace {
    int iteration;
    double current_kappa;
    double best_kappa;
    const Eigen::MatrixXd& projection;
};

using TraceHook = std::function<void(const IterationTrace&)>;

/// Local solution of  argmax_{P in Proj(n,k)} min_{s in S} |P^T s|  from
/// random_projection(n, k, cfg.seed). The returned projection is the best
/// iterate seen, so the result is never worse than the starting point.
///
/// Each step picks the worst-preserved secant s* (lowest index on ties) and
/// sets P <- orthonormalize(P + alpha * s* u^T), alpha = step_size / (1 + iter/100).
/// k == n is answered without iterating (kappa = 1). With smooth_polish the
/// best iterate is then refined by ascent on a soft minimum (see SolverConfig).
SolveResult solve_min_secant_projection(const SecantSet& s, int k, const SolverConfig& cfg,
                                        const TraceHook& trace = {});

/// Same iteration, started from a caller-supplied projection.
SolveResult refine_projection(const SecantSet& s, const Projection& start, const SolverConfig& cfg,
                              const TraceHook& trace = {});

/// Best of `restarts` independent solves; restart r uses seed
/// derive_seed(cfg.seed, stream::kRestart, r).
SolveResult solve_best_of(const SecantSet& s, int k, const SolverConfig& cfg, int restarts);

}  // namespace kappadetect
