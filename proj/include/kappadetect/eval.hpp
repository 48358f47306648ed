#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kappadetect/detector.hpp"
#include "kappadetect/geometry.hpp"
#include "kappadetect/profile.hpp"

namespace kappadetect {

struct FixedThreshold {
    double value = 0.05;
};

/// Leave-one-out threshold r * d_avg, recomputed from each run's labeled points.
struct LeaveOneOutThreshold {
    double r = kDefaultRatio;
};

using ThresholdRule = std::variant<FixedThreshold, LeaveOneOutThreshold>;

struct ExperimentSpec {
    std::string rare_label;
    std::size_t n_labeled_rare = 9;
    int runs = 10;
    /// Random subset of the majority rows to classify in each run.
    std::optional<std::size_t> majority_subsample;
    ThresholdRule threshold = LeaveOneOutThreshold{};
    /// Defaults to 1..min(n, 10, n_labeled_rare - 2).
    std::optional<DimensionRange> dims;
    /// trials, secant filter and solver settings. The solver seed is replaced
    /// per run by derive_seed(master_seed, run).
    ProfileOptions profile = default_profile_options();
    /// Cloud rows that may never be drawn as labeled rare points.
    std::vector<std::size_t> excluded_labeled;
    std::uint64_t master_seed = 0;

    static ProfileOptions default_profile_options();
    void validate() const;
};

/// Experiment dims used when ExperimentSpec::dims is unset.
DimensionRange experiment_dims(int ambient_dim, std::size_t n_labeled_rare);

struct LabeledOutcome {
    std::size_t run = 0;
    std::size_t row = 0;  // row of the input cloud
    double d_y = 0.0;
    Prediction predicted = Prediction::majority;
    bool is_rare = false;
};

struct RunMetrics {
    double threshold = 0.0;
    std::size_t rare_unlabeled = 0;
    std::size_t true_positives = 0;
    std::size_t majority_unlabeled = 0;
    std::size_t false_positives = 0;
    double pct_rare_identified = 0.0;
    double pct_majority_misidentified = 0.0;
    std::vector<std::size_t> labeled_rows;
};

struct MetricsReport {
    std::string rare_label;
    std::size_t n_labeled_rare = 0;
    std::optional<std::size_t> majority_subsample;
    DimensionRange dims;
    int trials = 0;
    SecantFilterPolicy policy;
    ThresholdRule threshold_rule;
    std::uint64_t master_seed = 0;

    double pct_rare_identified = 0.0;
    double pct_majority_misidentified = 0.0;
    std::vector<RunMetrics> per_run;
    std::vector<LabeledOutcome> outcomes;
};

/// Repeated random-partition evaluation of the detector on a labeled cloud.
/// Every row whose label differs from rare_label is a majority point.
MetricsReport run_experiment(const PointCloud& cloud, const ExperimentSpec& spec);

struct Histogram {
    std::vector<double> edges;  // bins + 1 entries, edges[0] = 0
    std::vector<std::size_t> rare;
    std::vector<std::size_t> majority;
};

/// Equal-width bins over [0, max d_y]; the last bin is closed.
Histogram export_histogram(std::span<const LabeledOutcome> outcomes, std::size_t bins);

/// Median d_y of the rare (or majority) outcomes; NaN when there are none.
double median_shift(std::span<const LabeledOutcome> outcomes, bool rare);

/// Singular values of the mean-centered data, scaled so the largest is 1.
/// Length min(count, n); all zeros when every point coincides.
std::vector<double> singular_value_profile(const PointCloud& cloud);

}  // namespace kappadetect
