#pragma once

#include <cstddef>
#include <vector>

#include "kappadetect/geometry.hpp"
#include "kappadetect/profile.hpp"

namespace kappadetect {

enum class Prediction { rare, majority };

const char* to_string(Prediction p);

/// Lower and upper end of the recommended threshold multiplier range.
inline constexpr double kRecommendedRatioMin = 1.1;
inline constexpr double kRecommendedRatioMax = 1.5;
inline constexpr double kDefaultRatio = 1.3;

struct DetectionConfig {
    /// A point is rare iff its profile shift is strictly below this value.
    double threshold = 0.05;
    DimensionRange dims = DimensionRange::consecutive(1, 1);
    ProfileOptions profile;

    void validate() const;
};

struct DetectionOutcome {
    std::size_t point_index = 0;
    double d_y = 0.0;
    Prediction predicted = Prediction::majority;
};

struct ThresholdReport {
    std::vector<double> per_point_distances;
    double d_avg = 0.0;
    double r = kDefaultRatio;
    double threshold = 0.0;
};

/// rare iff d_y < threshold.
inline Prediction classify(double d_y, double threshold) {
    return d_y < threshold ? Prediction::rare : Prediction::majority;
}

inline bool ratio_in_recommended_range(double r) {
    return r >= kRecommendedRatioMin && r <= kRecommendedRatioMax;
}

/// Profile shift d_y = |kappa(rare) - kappa(rare + {y})| for every row y of
/// `unlabeled`. The baseline is computed once. Every profile uses the same
/// solver seed, with the rare points keyed 0..r-1 and y keyed r, so the
/// random starts of the baseline and of each augmented cloud coincide on the
/// shared points and d_y measures the geometry y adds rather than solver noise.
///
/// Throws InsufficientRareClassError when rare has fewer than max(dims)+1
/// points and IncompatibleError on an ambient dimension mismatch.
std::vector<double> profile_shifts(const PointCloud& rare, const PointCloud& unlabeled,
                                   const DimensionRange& dims, const ProfileOptions& options);

/// Classifies every row of `unlabeled`; outcomes follow input order.
std::vector<DetectionOutcome> kappa_detect(const PointCloud& rare, const PointCloud& unlabeled,
                                           const DetectionConfig& cfg);

/// Leave-one-out threshold: d_x = |kappa(rare) - kappa(rare \ {x})| for each
/// labeled rare point, threshold = r * mean(d_x). Needs max(dims)+2 points.
ThresholdReport determine_threshold(const PointCloud& rare, double r, const DimensionRange& dims,
                                    const ProfileOptions& options);

ThresholdReport determine_threshold(const PointCloud& rare, int trials, double r, const DimensionRange& dims,
                                    const SecantFilterPolicy& policy, const SolverConfig& cfg);

/// Threshold arithmetic on precomputed leave-one-out distances.
ThresholdReport threshold_from_distances(std::vector<double> distances, double r);

}  // namespace kappadetect
