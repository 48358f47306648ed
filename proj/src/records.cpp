#include "kappadetect/records.hpp"

#include <fmt/format.h>

namespace kappadetect {

std::string fixed6(double v) {
    // Avoid printing "-0.000000".
    std::string s = fmt::format("{:.6f}", v);
    if (s == "-0.000000") s.erase(0, 1);
    return s;
}

std::string format_profile(const KappaProfile& profile) {
    std::string out = "record,kappa_profile\n";
    out += fmt::format("dims,{}\n", profile.dims.to_string());
    out += fmt::format("trials_averaged,{}\n", profile.trials_averaged);
    out += "k,kappa\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        out += fmt::format("{},{}\n", profile.dims[i], fixed6(profile.values[i]));
    }
    return out;
}

std::string format_threshold_report(const ThresholdReport& report) {
    std::string out = "record,threshold_report\n";
    out += fmt::format("r,{}\n", fixed6(report.r));
    out += fmt::format("d_avg,{}\n", fixed6(report.d_avg));
    out += fmt::format("threshold,{}\n", fixed6(report.threshold));
    out += "index,d_x\n";
    for (std::size_t i = 0; i < report.per_point_distances.size(); ++i) {
        out += fmt::format("{},{}\n", i, fixed6(report.per_point_distances[i]));
    }
    return out;
}

std::string format_outcomes(std::span<const DetectionOutcome> outcomes, const std::vector<std::string>* true_labels) {
    std::string out = true_labels ? "point_index,d_y,predicted,true_label\n" : "point_index,d_y,predicted\n";
    for (const auto& o : outcomes) {
        out += fmt::format("{},{},{}", o.point_index, fixed6(o.d_y), to_string(o.predicted));
        if (true_labels) out += "," + true_labels->at(o.point_index);
        out += '\n';
    }
    return out;
}

namespace {

std::string describe(const ThresholdRule& rule) {
    if (const auto* fixed = std::get_if<FixedThreshold>(&rule)) return "fixed:" + fixed6(fixed->value);
    return "leave_one_out:r=" + fixed6(std::get<LeaveOneOutThreshold>(rule).r);
}

}  // namespace

std::string format_metrics_report(const MetricsReport& report, std::string_view dataset) {
    std::string out = "record,metrics_report\n";
    if (!dataset.empty()) out += fmt::format("dataset,{}\n", dataset);
    out += fmt::format("rare_label,{}\n", report.rare_label);
    out += fmt::format("n_labeled_rare,{}\n", report.n_labeled_rare);
    out += fmt::format("runs,{}\n", report.per_run.size());
    out += fmt::format("majority_subsample,{}\n",
                       report.majority_subsample ? std::to_string(*report.majority_subsample) : "all");
    out += fmt::format("dims,{}\n", report.dims.to_string());
    out += fmt::format("trials,{}\n", report.trials);
    out += fmt::format("filter,{}:{}\n", to_string(report.policy.mode), fixed6(report.policy.value));
    out += fmt::format("threshold_rule,{}\n", describe(report.threshold_rule));
    out += fmt::format("master_seed,{}\n", report.master_seed);
    out += fmt::format("pct_rare_identified,{}\n", fixed6(report.pct_rare_identified));
    out += fmt::format("pct_majority_misidentified,{}\n", fixed6(report.pct_majority_misidentified));
    out += fmt::format("median_d_y_rare,{}\n", fixed6(median_shift(report.outcomes, true)));
    out += fmt::format("median_d_y_majority,{}\n", fixed6(median_shift(report.outcomes, false)));
    out += "run,threshold,rare_unlabeled,true_positives,majority_unlabeled,false_positives,"
           "pct_rare_identified,pct_majority_misidentified\n";
    for (std::size_t i = 0; i < report.per_run.size(); ++i) {
        const auto& m = report.per_run[i];
        out += fmt::format("{},{},{},{},{},{},{},{}\n", i, fixed6(m.threshold), m.rare_unlabeled, m.true_positives,
                           m.majority_unlabeled, m.false_positives, fixed6(m.pct_rare_identified),
                           fixed6(m.pct_majority_misidentified));
    }
    return out;
}

std::string format_histogram(const Histogram& histogram) {
    std::string out = "record,d_y_histogram\n";
    out += fmt::format("bins,{}\n", histogram.rare.size());
    out += "bin_low,bin_high,rare,majority\n";
    for (std::size_t b = 0; b < histogram.rare.size(); ++b) {
        out += fmt::format("{},{},{},{}\n", fixed6(histogram.edges[b]), fixed6(histogram.edges[b + 1]),
                           histogram.rare[b], histogram.majority[b]);
    }
    return out;
}

std::string format_labeled_outcomes(std::span<const LabeledOutcome> outcomes) {
    std::string out = "run,row,d_y,predicted,true_class\n";
    for (const auto& o : outcomes) {
        out += fmt::format("{},{},{},{},{}\n", o.run, o.row, fixed6(o.d_y), to_string(o.predicted),
                           o.is_rare ? "rare" : "majority");
    }
    return out;
}

}  // namespace kappadetect
