#include "kappadetect/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kappadetect/error.hpp"
#include "kappadetect/seed.hpp"

namespace kappadetect {

ProfileOptions ExperimentSpec::default_profile_options() {
    ProfileOptions opt;
    opt.trials = 5;
    opt.policy = SecantFilterPolicy::drop_shortest(0.05);
    return opt;
}

void ExperimentSpec::validate() const {
    if (rare_label.empty()) throw ConfigError("rare_label is required");
    if (n_labeled_rare < 2) throw ConfigError("n_labeled_rare must be at least 2");
    if (runs < 1) throw ConfigError("runs must be positive");
    if (majority_subsample && *majority_subsample < 1) throw ConfigError("majority_subsample must be positive");
    if (const auto* fixed = std::get_if<FixedThreshold>(&threshold)) {
        if (!(fixed->value >= 0.0)) throw ConfigError("fixed threshold must be nonnegative");
    } else if (!(std::get<LeaveOneOutThreshold>(threshold).r > 0.0)) {
        throw ConfigError("threshold multiplier r must be positive");
    }
    profile.validate();
}

DimensionRange experiment_dims(int ambient_dim, std::size_t n_labeled_rare) {
    const int cap = std::min({ambient_dim, 10, static_cast<int>(n_labeled_rare) - 2});
    if (cap < 1) throw ConfigError("too few labeled rare points to pick a dimension range");
    return DimensionRange::consecutive(1, cap);
}

namespace {

std::vector<std::size_t> draw_sorted(std::vector<std::size_t> pool, std::size_t take, Rng& rng) {
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(take, pool.size()));
    std::sort(pool.begin(), pool.end());
    return pool;
}

double percent(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

MetricsReport run_experiment(const PointCloud& cloud, const ExperimentSpec& spec) {
    spec.validate();
    const auto& labels = cloud.labels();

    std::vector<std::size_t> rare_rows;
    std::vector<std::size_t> majority_rows;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        (labels[i] == spec.rare_label ? rare_rows : majority_rows).push_back(i);
    }
    if (rare_rows.size() <= spec.n_labeled_rare) {
        throw ConfigError("rare class '" + spec.rare_label + "' has " + std::to_string(rare_rows.size()) +
                          " points; need more than n_labeled_rare = " + std::to_string(spec.n_labeled_rare));
    }
    std::vector<std::size_t> eligible;
    for (std::size_t r : rare_rows) {
        if (std::find(spec.excluded_labeled.begin(), spec.excluded_labeled.end(), r) ==
            spec.excluded_labeled.end()) {
            eligible.push_back(r);
        }
    }
    if (eligible.size() < spec.n_labeled_rare) {
        throw ConfigError("not enough rare points remain after exclusions");
    }

    const DimensionRange dims = spec.dims ? *spec.dims : experiment_dims(cloud.ambient_dim(), spec.n_labeled_rare);
    dims.check_ambient(cloud.ambient_dim());

    MetricsReport report;
    report.rare_label = spec.rare_label;
    report.n_labeled_rare = spec.n_labeled_rare;
    report.majority_subsample = spec.majority_subsample;
    report.dims = dims;
    report.trials = spec.profile.trials;
    report.policy = spec.profile.policy;
    report.threshold_rule = spec.threshold;
    report.master_seed = spec.master_seed;

    for (int run = 0; run < spec.runs; ++run) {
        const std::uint64_t run_seed = derive_seed(spec.master_seed, stream::kRun, run);
        Rng split_rng(derive_seed(run_seed, stream::kSplit));
        const auto labeled = draw_sorted(eligible, spec.n_labeled_rare, split_rng);

        std::vector<std::size_t> majority = majority_rows;
        if (spec.majority_subsample && *spec.majority_subsample < majority.size()) {
            Rng sub_rng(derive_seed(run_seed, stream::kSubsample));
            majority = draw_sorted(majority, *spec.majority_subsample, sub_rng);
        }
        std::vector<std::size_t> unlabeled;
        for (std::size_t r : rare_rows) {
            if (!std::binary_search(labeled.begin(), labeled.end(), r)) unlabeled.push_back(r);
        }
        unlabeled.insert(unlabeled.end(), majority.begin(), majority.end());
        std::sort(unlabeled.begin(), unlabeled.end());

        ProfileOptions profile = spec.profile;
        profile.solver.seed = run_seed;
        const PointCloud rare_cloud = cloud.subset(labeled);
        const PointCloud y_cloud = cloud.subset(unlabeled);

        RunMetrics metrics;
        metrics.labeled_rows = labeled;
        if (const auto* fixed = std::get_if<FixedThreshold>(&spec.threshold)) {
            metrics.threshold = fixed->value;
        } else {
            const double r = std::get<LeaveOneOutThreshold>(spec.threshold).r;
            metrics.threshold = determine_threshold(rare_cloud, r, dims, profile).threshold;
        }

        const auto shifts = profile_shifts(rare_cloud, y_cloud, dims, profile);
        for (std::size_t i = 0; i < unlabeled.size(); ++i) {
            const bool is_rare = labels[unlabeled[i]] == spec.rare_label;
            const Prediction predicted = classify(shifts[i], metrics.threshold);
            if (is_rare) {
                ++metrics.rare_unlabeled;
                if (predicted == Prediction::rare) ++metrics.true_positives;
            } else {
                ++metrics.majority_unlabeled;
                if (predicted == Prediction::rare) ++metrics.false_positives;
            }
            report.outcomes.push_back({static_cast<std::size_t>(run), unlabeled[i], shifts[i], predicted, is_rare});
        }
        metrics.pct_rare_identified = percent(metrics.true_positives, metrics.rare_unlabeled);
        metrics.pct_majority_misidentified = percent(metrics.false_positives, metrics.majority_unlabeled);
        report.per_run.push_back(std::move(metrics));
    }

    for (const auto& m : report.per_run) {
        report.pct_rare_identified += m.pct_rare_identified;
        report.pct_majority_misidentified += m.pct_majority_misidentified;
    }
    report.pct_rare_identified /= static_cast<double>(report.per_run.size());
    report.pct_majority_misidentified /= static_cast<double>(report.per_run.size());
    return report;
}

Histogram export_histogram(std::span<const LabeledOutcome> outcomes, std::size_t bins) {
    if (outcomes.empty()) throw EmptyInputError("histogram of no outcomes");
    if (bins < 1) throw ConfigError("bins must be positive");
    double max_d = 0.0;
    for (const auto& o : outcomes) max_d = std::max(max_d, o.d_y);

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = max_d * static_cast<double>(b) / static_cast<double>(bins);
    }
    h.rare.assign(bins, 0);
    h.majority.assign(bins, 0);
    for (const auto& o : outcomes) {
        std::size_t b = 0;
        if (max_d > 0.0) {
            b = std::min(bins - 1, static_cast<std::size_t>(o.d_y / max_d * static_cast<double>(bins)));
        }
        ++(o.is_rare ? h.rare : h.majority)[b];
    }
    return h;
}

double median_shift(std::span<const LabeledOutcome> outcomes, bool rare) {
    std::vector<double> values;
    for (const auto& o : outcomes) {
        if (o.is_rare == rare) values.push_back(o.d_y);
    }
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<double> singular_value_profile(const PointCloud& cloud) {
    if (cloud.size() < 2) throw EmptyInputError("singular values need at least 2 points");
    const Eigen::MatrixXd centered = cloud.points().rowwise() - cloud.points().colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const Eigen::VectorXd sv = svd.singularValues();
    std::vector<double> out(static_cast<std::size_t>(sv.size()), 0.0);
    const double largest = sv.size() ? sv(0) : 0.0;
    if (largest > 0.0) {
        for (Eigen::Index i = 0; i < sv.size(); ++i) out[static_cast<std::size_t>(i)] = sv(i) / largest;
    }
    return out;
}

}  // namespace kappadetect
