#include "kappadetect/detector.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "kappadetect/error.hpp"
#include "kappadetect/parallel.hpp"

namespace kappadetect {

const char* to_string(Prediction p) { return p == Prediction::rare ? "rare" : "majority"; }

void DetectionConfig::validate() const {
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw ConfigError("detection threshold must be a finite nonnegative number");
    }
    profile.validate();
}

namespace {

std::vector<std::size_t> iota_keys(std::size_t count) {
    std::vector<std::size_t> keys(count);
    std::iota(keys.begin(), keys.end(), std::size_t{0});
    return keys;
}

// The rare cloud and every perturbed cloud are refined from the same fresh
// optima, so a perturbation that leaves the secant set unchanged (a duplicate
// point) reproduces the baseline exactly.
struct Baseline {
    KappaProfile start;
    KappaProfile profile;
};

Baseline make_baseline(const PointCloud& rare, const DimensionRange& dims, const ProfileOptions& options) {
    Baseline b;
    b.start = compute_kappa_profile(rare, dims, options, iota_keys(rare.size()));
    b.profile = refine_kappa_profile(rare, b.start, options);
    return b;
}

}  // namespace

std::vector<double> profile_shifts(const PointCloud& rare, const PointCloud& unlabeled,
                                   const DimensionRange& dims, const ProfileOptions& options) {
    options.validate();
    if (rare.ambient_dim() != unlabeled.ambient_dim()) {
        throw IncompatibleError("rare points live in R^" + std::to_string(rare.ambient_dim()) +
                                " but unlabeled points live in R^" + std::to_string(unlabeled.ambient_dim()));
    }
    dims.check_ambient(rare.ambient_dim());
    const auto needed = static_cast<std::size_t>(dims.back()) + 1;
    if (rare.size() < needed) {
        throw InsufficientRareClassError("need at least " + std::to_string(needed) +
                                         " labeled rare points for dims up to " + std::to_string(dims.back()) +
                                         ", got " + std::to_string(rare.size()));
    }

    ProfileOptions inner = options;
    inner.jobs = 1;
    const Baseline baseline = make_baseline(rare, dims, inner);

    std::vector<double> shifts(unlabeled.size());
    parallel_for(unlabeled.size(), options.jobs, [&](std::size_t i) {
        const PointCloud augmented = rare.with_point(unlabeled.point(i));
        const KappaProfile with_y = refine_kappa_profile(augmented, baseline.start, inner);
        shifts[i] = profile_distance(baseline.profile, with_y);
    });
    return shifts;
}

std::vector<DetectionOutcome> kappa_detect(const PointCloud& rare, const PointCloud& unlabeled,
                                           const DetectionConfig& cfg) {
    cfg.validate();
    const auto shifts = profile_shifts(rare, unlabeled, cfg.dims, cfg.profile);
    std::vector<DetectionOutcome> out;
    out.reserve(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        out.push_back({i, shifts[i], classify(shifts[i], cfg.threshold)});
    }
    return out;
}

ThresholdReport threshold_from_distances(std::vector<double> distances, double r) {
    if (distances.empty()) throw InsufficientRareClassError("no leave-one-out distances");
    if (!(r > 0.0)) throw ConfigError("threshold multiplier r must be positive");
    ThresholdReport report;
    report.d_avg = std::accumulate(distances.begin(), distances.end(), 0.0) /
                   static_cast<double>(distances.size());
    report.per_point_distances = std::move(distances);
    report.r = r;
    report.threshold = r * report.d_avg;
    return report;
}

ThresholdReport determine_threshold(const PointCloud& rare, double r, const DimensionRange& dims,
                                    const ProfileOptions& options) {
    options.validate();
    dims.check_ambient(rare.ambient_dim());
    const auto needed = static_cast<std::size_t>(dims.back()) + 2;
    if (rare.size() < needed) {
        throw InsufficientRareClassError("leave-one-out threshold needs at least " + std::to_string(needed) +
                                         " labeled rare points, got " + std::to_string(rare.size()));
    }
    ProfileOptions inner = options;
    inner.jobs = 1;
    const Baseline baseline = make_baseline(rare, dims, inner);

    std::vector<double> distances(rare.size());
    parallel_for(rare.size(), options.jobs, [&](std::size_t x) {
        const KappaProfile without_x = refine_kappa_profile(rare.without_point(x), baseline.start, inner);
        distances[x] = profile_distance(baseline.profile, without_x);
    });
    return threshold_from_distances(std::move(distances), r);
}

ThresholdReport determine_threshold(const PointCloud& rare, int trials, double r, const DimensionRange& dims,
                                    const SecantFilterPolicy& policy, const SolverConfig& cfg) {
    ProfileOptions opt;
    opt.trials = trials;
    opt.policy = policy;
    opt.solver = cfg;
    return determine_threshold(rare, r, dims, opt);
}

}  // namespace kappadetect
