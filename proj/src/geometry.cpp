#include "kappadetect/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "kappadetect/error.hpp"

namespace kappadetect {

PointCloud::PointCloud(Eigen::MatrixXd points, std::optional<std::vector<std::string>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.rows() < 1) {
        throw EmptyInputError("point cloud must contain at least one point");
    }
    if (points_.cols() < 1) {
        throw EmptyInputError("point cloud must have ambient dimension >= 1");
    }
    if (labels_ && labels_->size() != size()) {
        throw SchemaError("label count " + std::to_string(labels_->size()) +
                          " does not match point count " + std::to_string(size()));
    }
}

const std::vector<std::string>& PointCloud::labels() const {
    if (!labels_) {
        throw ConfigError("point cloud carries no labels");
    }
    return *labels_;
}

PointCloud PointCloud::subset(const std::vector<std::size_t>& rows) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), points_.cols());
    std::optional<std::vector<std::string>> out_labels;
    if (labels_) {
        out_labels.emplace();
        out_labels->reserve(rows.size());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = points_.row(static_cast<Eigen::Index>(rows.at(i)));
        if (labels_) {
            out_labels->push_back(labels_->at(rows[i]));
        }
    }
    return PointCloud(std::move(out), std::move(out_labels));
}

PointCloud PointCloud::with_point(const Eigen::RowVectorXd& p, const std::string& label) const {
    if (p.size() != points_.cols()) {
        throw IncompatibleError("point dimension " + std::to_string(p.size()) +
                                " does not match cloud dimension " + std::to_string(points_.cols()));
    }
    Eigen::MatrixXd out(points_.rows() + 1, points_.cols());
    out.topRows(points_.rows()) = points_;
    out.row(points_.rows()) = p;
    auto out_labels = labels_;
    if (out_labels) {
        out_labels->push_back(label);
    }
    return PointCloud(std::move(out), std::move(out_labels));
}

PointCloud PointCloud::without_point(std::size_t row) const {
    std::vector<std::size_t> keep;
    keep.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        if (i != row) keep.push_back(i);
    }
    return subset(keep);
}

PointCloud PointCloud::concat(const PointCloud& a, const PointCloud& b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw IncompatibleError("cannot concatenate clouds of dimension " +
                                std::to_string(a.ambient_dim()) + " and " +
                                std::to_string(b.ambient_dim()));
    }
    Eigen::MatrixXd out(a.points_.rows() + b.points_.rows(), a.points_.cols());
    out << a.points_, b.points_;
    std::optional<std::vector<std::string>> out_labels;
    if (a.labels_ && b.labels_) {
        out_labels = *a.labels_;
        out_labels->insert(out_labels->end(), b.labels_->begin(), b.labels_->end());
    }
    return PointCloud(std::move(out), std::move(out_labels));
}

PointCloud PointCloud::relabeled(const std::string& label) const {
    return PointCloud(points_, std::vector<std::string>(size(), label));
}

void SecantFilterPolicy::validate() const {
    switch (mode) {
        case FilterMode::none:
            return;
        case FilterMode::absolute_min_length:
            if (!(value >= 0.0)) throw ConfigError("absolute_min_length requires value >= 0");
            return;
        case FilterMode::drop_shortest_fraction:
            if (!(value >= 0.0 && value < 1.0)) {
                throw ConfigError("drop_shortest_fraction requires value in [0, 1)");
            }
            return;
    }
}

const char* to_string(FilterMode mode) {
    switch (mode) {
        case FilterMode::none: return "none";
        case FilterMode::absolute_min_length: return "absolute_min_length";
        case FilterMode::drop_shortest_fraction: return "drop_shortest_fraction";
    }
    return "unknown";
}

FilterMode parse_filter_mode(const std::string& name) {
    if (name == "none") return FilterMode::none;
    if (name == "absolute_min_length" || name == "min-length") return FilterMode::absolute_min_length;
    if (name == "drop_shortest_fraction" || name == "fraction") return FilterMode::drop_shortest_fraction;
    throw ConfigError("unknown filter mode '" + name + "'");
}

namespace {

struct RowLess {
    const Eigen::MatrixXd* m;
    bool operator()(std::size_t a, std::size_t b) const {
        for (Eigen::Index c = 0; c < m->cols(); ++c) {
            const double x = (*m)(static_cast<Eigen::Index>(a), c);
            const double y = (*m)(static_cast<Eigen::Index>(b), c);
            if (x < y) return true;
            if (y < x) return false;
        }
        return false;
    }
};

// canonical[i] is the first row numerically equal to row i.
std::vector<std::size_t> canonical_rows(const Eigen::MatrixXd& points) {
    const auto count = static_cast<std::size_t>(points.rows());
    std::vector<std::size_t> canonical(count);
    std::map<std::size_t, std::size_t, RowLess> first_seen(RowLess{&points});
    for (std::size_t i = 0; i < count; ++i) {
        auto [it, inserted] = first_seen.emplace(i, i);
        canonical[i] = it->second;
    }
    return canonical;
}

}  // namespace

SecantSet compute_normalized_secants(const PointCloud& cloud, const SecantFilterPolicy& policy) {
    policy.validate();
    const std::size_t count = cloud.size();
    if (count < 2) {
        throw EmptyInputError("secants need at least 2 points, got " + std::to_string(count));
    }
    const Eigen::MatrixXd& pts = cloud.points();
    const auto canonical = canonical_rows(pts);

    struct Candidate {
        std::size_t a, b;
        double length;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(count * (count - 1) / 2);

    SecantSet out;
    out.source_count = count;

    for (std::size_t b = 1; b < count; ++b) {
        for (std::size_t a = 0; a < b; ++a) {
            const bool a_dup = canonical[a] != a;
            const bool b_dup = canonical[b] != b;
            if (a_dup || b_dup) {
                if (canonical[a] == canonical[b]) {
                    ++out.discarded_count;
                } else {
                    ++out.duplicate_pair_count;
                }
                continue;
            }
            const double len = (pts.row(static_cast<Eigen::Index>(a)) -
                                pts.row(static_cast<Eigen::Index>(b))).norm();
            if (len == 0.0) {
                ++out.discarded_count;
                continue;
            }
            candidates.push_back({a, b, len});
        }
    }

    std::vector<bool> keep(candidates.size(), true);
    switch (policy.mode) {
        case FilterMode::none:
            break;
        case FilterMode::absolute_min_length:
            for (std::size_t j = 0; j < candidates.size(); ++j) {
                keep[j] = candidates[j].length >= policy.value;
            }
            break;
        case FilterMode::drop_shortest_fraction: {
            const auto drop = static_cast<std::size_t>(
                std::floor(policy.value * static_cast<double>(candidates.size())));
            std::vector<std::size_t> order(candidates.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return candidates[x].length < candidates[y].length;
            });
            for (std::size_t j = 0; j < drop; ++j) keep[order[j]] = false;
            break;
        }
    }

    const auto kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
    out.discarded_count += candidates.size() - kept;
    if (kept == 0) {
        throw DegenerateSecantSetError("all " + std::to_string(count * (count - 1) / 2) +
                                       " point pairs were discarded");
    }

    const int n = cloud.ambient_dim();
    out.secants.resize(n, static_cast<Eigen::Index>(kept));
    out.raw_lengths.reserve(kept);
    out.pairs.reserve(kept);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (!keep[j]) continue;
        const auto& c = candidates[j];
        out.secants.col(col++) = (pts.row(static_cast<Eigen::Index>(c.a)) -
                                  pts.row(static_cast<Eigen::Index>(c.b))).transpose() / c.length;
        out.raw_lengths.push_back(c.length);
        out.pairs.emplace_back(c.a, c.b);
    }
    return out;
}

}  // namespace kappadetect
