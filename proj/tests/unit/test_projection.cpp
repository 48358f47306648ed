#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kappadetect/error.hpp"
#include "kappadetect/projection.hpp"
#include "test_support.hpp"

using namespace kappadetect;

namespace {

SecantSet secants_of(const Eigen::MatrixXd& points) {
    return compute_normalized_secants(PointCloud(points), SecantFilterPolicy::none());
}

// Best kappa over unit vectors of the plane, at 0.01 degree steps.
double planar_grid_kappa(const SecantSet& s) {
    double best = 0.0;
    for (int step = 0; step < 18000; ++step) {
        const double a = step * 0.01 * std::numbers::pi / 180.0;
        const Eigen::Vector2d u(std::cos(a), std::sin(a));
        best = std::max(best, (u.transpose() * s.secants).cwiseAbs().minCoeff());
    }
    return best;
}

}  // namespace

TEST_CASE("random projections are orthonormal and reproducible") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 1 + static_cast<int>(seed % 8);
        const int k = 1 + static_cast<int>(seed % n);
        const auto p = random_projection(n, k, seed);
        CHECK(p.n() == n);
        CHECK(p.k() == k);
        CHECK(p.orthonormality_error() < 1e-12);
        CHECK(random_projection(n, k, seed).matrix() == p.matrix());
    }
    CHECK(random_projection(5, 2, 1).matrix() != random_projection(5, 2, 2).matrix());
}

TEST_CASE("projection dimensions are checked") {
    CHECK_THROWS_AS(random_projection(3, 4, 0), DimensionError);
    CHECK_THROWS_AS(random_projection(3, 0, 0), DimensionError);
    CHECK_THROWS_AS(Projection::from_orthonormal(Eigen::MatrixXd::Ones(3, 1)), RankError);
    CHECK_NOTHROW(Projection::from_orthonormal(Eigen::MatrixXd::Identity(3, 2)));
}

TEST_CASE("orthonormalize keeps the span and orientation of each column") {
    Eigen::MatrixXd m(3, 2);
    m << 2, 1, 0, 1, 0, 0;
    const auto p = orthonormalize(m);
    CHECK(p.matrix().col(0).isApprox(Eigen::Vector3d(1, 0, 0)));
    CHECK(p.matrix().col(1).isApprox(Eigen::Vector3d(0, 1, 0)));
    for (int j = 0; j < 2; ++j) CHECK(p.matrix().col(j).dot(m.col(j)) > 0.0);

    Eigen::MatrixXd deficient(3, 2);
    deficient << 1, 2, 1, 2, 1, 2;
    CHECK_THROWS_AS(orthonormalize(deficient), RankError);
}

TEST_CASE("kappa of axis secants") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 1, 0, 0, 1;
    const auto s = secants_of(pts);
    CHECK(kappa_of(Projection::from_orthonormal(Eigen::MatrixXd::Identity(2, 2)), s) == doctest::Approx(1.0));
    Eigen::MatrixXd e1(2, 1);
    e1 << 1, 0;
    CHECK(kappa_of(Projection::from_orthonormal(e1), s) == doctest::Approx(0.0));
    CHECK_THROWS_AS(kappa_of(random_projection(3, 1, 0), s), IncompatibleError);
}

TEST_CASE("orthogonal secants in the plane project best onto the diagonal") {
    // Secants e1 and e2 alone: the best line is a diagonal, kappa = 1/sqrt(2).
    SecantSet s;
    s.secants = Eigen::MatrixXd::Identity(2, 2);
    s.raw_lengths = {1.0, 1.0};
    s.pairs = {{0, 1}, {0, 2}};
    s.source_count = 3;
    const auto diag = solve_best_of(s, 1, SolverConfig{}, 5);
    CHECK(diag.kappa == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));

    Eigen::MatrixXd two(3, 2);
    two << 0, 0, 1, 0, 0, 5;
    // secants e1, e2 and (1,-5)/sqrt(26); the grid settles the optimum
    s = secants_of(two);
    const auto res = solve_best_of(s, 1, SolverConfig{}, 20);
    CHECK(res.kappa == doctest::Approx(planar_grid_kappa(s)).epsilon(1e-3));
    CHECK(res.projection.orthonormality_error() < 1e-10);
}

TEST_CASE("k equal to n gives kappa 1 without iterating") {
    const auto s = secants_of(kdtest::gaussian_matrix(6, 3, 4));
    const auto res = solve_min_secant_projection(s, 3, SolverConfig{});
    CHECK(res.kappa == 1.0);
    CHECK(res.iterations == 0);
}

TEST_CASE("collinear points are preserved perfectly in one dimension") {
    Eigen::MatrixXd pts(5, 4);
    for (int i = 0; i < 5; ++i) pts.row(i) = (i * i + 1.0) * Eigen::RowVector4d(1, -2, 0.5, 3);
    const auto res = solve_min_secant_projection(secants_of(pts), 1, SolverConfig{});
    CHECK(res.kappa == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.step_size = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.patience = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.convergence_tol = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(solve_best_of(secants_of(kdtest::gaussian_matrix(3, 2, 0)), 1, SolverConfig{}, 0), ConfigError);
}

TEST_CASE("the solver never returns worse than its start, stays in [0,1] and is deterministic") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const int k = 1 + static_cast<int>(seed % (n - 1));
        const auto s = secants_of(kdtest::gaussian_matrix(4 + static_cast<int>(seed % 5), n, seed));
        SolverConfig cfg;
        cfg.seed = seed;
        cfg.max_iters = 300;
        const auto start = random_projection(n, k, seed);
        const auto res = refine_projection(s, start, cfg);
        CHECK(res.initial_kappa == doctest::Approx(kappa_of(start, s)));
        CHECK(res.kappa >= res.initial_kappa);
        CHECK(res.kappa >= 0.0);
        CHECK(res.kappa <= 1.0);
        CHECK(res.kappa == doctest::Approx(kappa_of(res.projection, s)).epsilon(1e-12));
        CHECK(res.projection.orthonormality_error() < 1e-9);
        const auto again = refine_projection(s, start, cfg);
        CHECK(again.kappa == res.kappa);
        CHECK(again.projection.matrix() == res.projection.matrix());
    }
}

TEST_CASE("the trace hook sees a nondecreasing best kappa") {
    const auto s = secants_of(kdtest::gaussian_matrix(8, 4, 11));
    SolverConfig cfg;
    cfg.smooth_polish = false;
    double last = -1.0;
    int calls = 0;
    const auto res = solve_min_secant_projection(s, 2, cfg, [&](const IterationTrace& t) {
        CHECK(t.best_kappa >= last);
        CHECK(t.current_kappa <= t.best_kappa + 1e-15);
        last = t.best_kappa;
        ++calls;
    });
    CHECK(calls == res.iterations);
    CHECK(res.kappa == last);
}

TEST_CASE("best of 20 restarts matches a fine planar grid on random instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = secants_of(kdtest::gaussian_matrix(3 + static_cast<int>(seed % 6), 2, 100 + seed));
        SolverConfig cfg;
        cfg.seed = seed;
        const auto res = solve_best_of(s, 1, cfg, 20);
        CHECK(res.kappa == doctest::Approx(planar_grid_kappa(s)).epsilon(5e-3));
    }
}
