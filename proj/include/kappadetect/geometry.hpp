#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kappadetect {

/// Points in R^n, one per row, with optional per-point class tags.
class PointCloud {
public:
    PointCloud() = default;

    /// Throws EmptyInputError for zero rows or columns and SchemaError when
    /// labels are present with the wrong length.
    explicit PointCloud(Eigen::MatrixXd points,
                        std::optional<std::vector<std::string>> labels = std::nullopt);

    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    int ambient_dim() const noexcept { return static_cast<int>(points_.cols()); }

    const Eigen::MatrixXd& points() const noexcept { return points_; }
    Eigen::RowVectorXd point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }

    bool has_labels() const noexcept { return labels_.has_value(); }
    const std::vector<std::string>& labels() const;
    const std::string& label(std::size_t i) const { return labels().at(i); }

    /// New cloud holding the given rows, in the given order.
    PointCloud subset(const std::vector<std::size_t>& rows) const;

    /// This cloud with one extra point appended (labels, if any, get `label`).
    PointCloud with_point(const Eigen::RowVectorXd& p, const std::string& label = {}) const;

    PointCloud without_point(std::size_t row) const;

    /// Row-wise concatenation. Labels are kept only if both sides carry them.
    static PointCloud concat(const PointCloud& a, const PointCloud& b);

    /// Copy with every label replaced by `label`.
    PointCloud relabeled(const std::string& label) const;

private:
    Eigen::MatrixXd points_;
    std::optional<std::vector<std::string>> labels_;
};

enum class FilterMode { none, absolute_min_length, drop_shortest_fraction };

struct SecantFilterPolicy {
    FilterMode mode = FilterMode::none;
    double value = 0.0;

    static SecantFilterPolicy none() { return {}; }
    static SecantFilterPolicy min_length(double len) { return {FilterMode::absolute_min_length, len}; }
    static SecantFilterPolicy drop_shortest(double fraction) {
        return {FilterMode::drop_shortest_fraction, fraction};
    }

    /// Throws ConfigError when the invariants do not hold.
    void validate() const;
};

const char* to_string(FilterMode mode);
FilterMode parse_filter_mode(const std::string& name);

/// Unit-normalized pairwise differences. Column j of `secants` is
/// (x_a - x_b) / |x_a - x_b| for pairs[j] = (a, b) with a < b.
///
/// Pairs are enumerated in co-lexicographic order, (0,1), (0,2), (1,2),
/// (0,3), ..., so appending a point to a cloud appends its pairs at the end.
struct SecantSet {
    Eigen::MatrixXd secants;  // n x m
    std::vector<double> raw_lengths;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t source_count = 0;
    /// Zero-length pairs plus pairs rejected by the filter policy.
    std::size_t discarded_count = 0;
    /// Pairs that repeat another pair because one endpoint duplicates an
    /// earlier point. They are neither kept nor counted as discarded.
    std::size_t duplicate_pair_count = 0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(secants.cols()); }
    bool empty() const noexcept { return size() == 0; }
    int ambient_dim() const noexcept { return static_cast<int>(secants.rows()); }
    Eigen::VectorXd secant(std::size_t j) const { return secants.col(static_cast<Eigen::Index>(j)); }
};

/// Builds the filtered normalized secant set of a cloud.
///
/// A point that exactly repeats an earlier point contributes no secants: its
/// pair with the original is zero-length (discarded) and its pairs with every
/// other point repeat existing ones (duplicate_pair_count). The shortest-fraction
/// filter drops floor(fraction * candidates) pairs, where candidates are the
/// nonzero pairs among distinct points; ties go to the lower pair index.
SecantSet compute_normalized_secants(const PointCloud& cloud, const SecantFilterPolicy& policy);

}  // namespace kappadetect
