#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kappadetect/detector.hpp"
#include "kappadetect/eval.hpp"
#include "kappadetect/profile.hpp"

// Plain-text exports. Every record starts with "key,value" header lines and
// continues with a comma-delimited table whose first line names the columns.
// Reals are printed with exactly 6 decimals.

namespace kappadetect {

std::string fixed6(double v);

std::string format_profile(const KappaProfile& profile);

std::string format_threshold_report(const ThresholdReport& report);

/// Columns point_index,d_y,predicted[,true_label].
std::string format_outcomes(std::span<const DetectionOutcome> outcomes,
                            const std::vector<std::string>* true_labels = nullptr);

std::string format_metrics_report(const MetricsReport& report, std::string_view dataset = {});

std::string format_histogram(const Histogram& histogram);

/// Columns run,row,d_y,predicted,true_class.
std::string format_labeled_outcomes(std::span<const LabeledOutcome> outcomes);

}  // namespace kappadetect
