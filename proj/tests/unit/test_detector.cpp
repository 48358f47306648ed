#include <doctest.h>

#include "kappadetect/detector.hpp"
#include "kappadetect/error.hpp"
#include "test_support.hpp"

using namespace kappadetect;

namespace {

ProfileOptions quick_options(std::uint64_t seed) {
    ProfileOptions opt;
    opt.trials = 2;
    opt.solver.seed = seed;
    opt.solver.max_iters = 300;
    return opt;
}

}  // namespace

TEST_CASE("classification is strict at the threshold") {
    CHECK(classify(0.01, 0.05) == Prediction::rare);
    CHECK(classify(0.05, 0.05) == Prediction::majority);
    CHECK(classify(0.0, 0.0) == Prediction::majority);
    CHECK(std::string(to_string(Prediction::rare)) == "rare");
    CHECK(std::string(to_string(Prediction::majority)) == "majority");
}

TEST_CASE("recommended ratio range") {
    CHECK(ratio_in_recommended_range(1.1));
    CHECK(ratio_in_recommended_range(1.3));
    CHECK(ratio_in_recommended_range(1.5));
    CHECK_FALSE(ratio_in_recommended_range(1.0));
    CHECK_FALSE(ratio_in_recommended_range(2.0));
}

TEST_CASE("threshold arithmetic") {
    const auto r = threshold_from_distances({0.1, 0.2, 0.3}, 1.3);
    CHECK(r.d_avg == doctest::Approx(0.2));
    CHECK(r.threshold == doctest::Approx(0.26));
    CHECK(r.per_point_distances.size() == 3);
    CHECK_THROWS_AS(threshold_from_distances({}, 1.3), InsufficientRareClassError);
    CHECK_THROWS_AS(threshold_from_distances({0.1}, 0.0), ConfigError);
}

TEST_CASE("detection config validation") {
    DetectionConfig cfg;
    cfg.threshold = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.threshold = 0.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("collinear rare points give a zero threshold") {
    Eigen::MatrixXd pts(6, 3);
    for (int i = 0; i < 6; ++i) pts.row(i) = (1.0 + i * i) * Eigen::RowVector3d(1, 2, -1);
    const auto report = determine_threshold(PointCloud(pts), 1.3, DimensionRange::consecutive(1, 3), quick_options(0));
    CHECK(report.threshold == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.per_point_distances.size() == 6);
}

TEST_CASE("too few rare points and dimension mismatches are rejected") {
    const auto rare = kdtest::random_cloud(4, 3, 1);
    const auto y = kdtest::random_cloud(2, 3, 2);
    CHECK_THROWS_AS(profile_shifts(rare.subset({0, 1, 2}), y, DimensionRange::consecutive(1, 3), quick_options(0)),
                    InsufficientRareClassError);
    CHECK_NOTHROW(profile_shifts(rare, y, DimensionRange::consecutive(1, 3), quick_options(0)));
    CHECK_THROWS_AS(determine_threshold(rare, 1.3, DimensionRange::consecutive(1, 3), quick_options(0)),
                    InsufficientRareClassError);
    CHECK_THROWS_AS(profile_shifts(rare, kdtest::random_cloud(2, 4, 2), DimensionRange::consecutive(1, 2),
                                   quick_options(0)),
                    IncompatibleError);
}

TEST_CASE("outcomes follow input order and use the threshold") {
    const auto rare = kdtest::random_cloud(7, 3, 3);
    const auto y = kdtest::random_cloud(4, 3, 4);
    DetectionConfig cfg;
    cfg.dims = DimensionRange::consecutive(1, 3);
    cfg.profile = quick_options(2);
    cfg.threshold = 0.1;
    const auto outcomes = kappa_detect(rare, y, cfg);
    const auto shifts = profile_shifts(rare, y, cfg.dims, cfg.profile);
    REQUIRE(outcomes.size() == 4);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        CHECK(outcomes[i].point_index == i);
        CHECK(outcomes[i].d_y == shifts[i]);
        CHECK(outcomes[i].predicted == classify(shifts[i], 0.1));
    }
}

TEST_CASE("a duplicate of a labeled rare point has zero shift and is predicted rare") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);
        const auto rare = kdtest::random_cloud(n + 2 + static_cast<int>(seed % 3), n, 3000 + seed);
        const auto copy_of = static_cast<std::size_t>(seed % rare.size());
        DetectionConfig cfg;
        cfg.dims = DimensionRange::consecutive(1, n);
        cfg.profile = quick_options(seed);
        if (seed % 2) cfg.profile.policy = SecantFilterPolicy::drop_shortest(0.1);
        cfg.threshold = 0.05;
        const auto out = kappa_detect(rare, rare.subset({copy_of}), cfg);
        CHECK(out[0].d_y == 0.0);
        CHECK(out[0].predicted == Prediction::rare);
    }
}

TEST_CASE("the positional threshold overload matches the options form") {
    const auto rare = kdtest::random_cloud(6, 2, 8);
    const auto opt = quick_options(4);
    const auto dims = DimensionRange::consecutive(1, 2);
    const auto a = determine_threshold(rare, 1.2, dims, opt);
    const auto b = determine_threshold(rare, opt.trials, 1.2, dims, opt.policy, opt.solver);
    CHECK(a.threshold == b.threshold);
    CHECK(a.r == 1.2);
}

TEST_CASE("profile shifts refine both clouds from the fresh rare profile") {
    const auto rare = kdtest::random_cloud(7, 3, 21);
    const auto y = kdtest::random_cloud(1, 3, 22);
    const auto dims = DimensionRange::consecutive(1, 2);
    const auto opt = quick_options(4);
    const auto fresh = compute_kappa_profile(rare, dims, opt);
    const double expected = profile_distance(refine_kappa_profile(rare, fresh, opt),
                                             refine_kappa_profile(rare.with_point(y.point(0)), fresh, opt));
    CHECK(profile_shifts(rare, y, dims, opt)[0] == expected);
}
