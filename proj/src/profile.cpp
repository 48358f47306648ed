#include "kappadetect/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>

#include "kappadetect/error.hpp"
#include "kappadetect/parallel.hpp"
#include "kappadetect/seed.hpp"

namespace kappadetect {

DimensionRange::DimensionRange(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("dimension range is empty");
    if (dims_.front() < 1) throw DimensionError("dimensions must be >= 1");
    for (std::size_t i = 1; i < dims_.size(); ++i) {
        if (dims_[i] <= dims_[i - 1]) throw DimensionError("dimensions must be strictly increasing");
    }
}

DimensionRange DimensionRange::consecutive(int lo, int hi) {
    if (hi < lo) throw DimensionError("empty dimension range " + std::to_string(lo) + ".." + std::to_string(hi));
    std::vector<int> d(static_cast<std::size_t>(hi - lo + 1));
    std::iota(d.begin(), d.end(), lo);
    return DimensionRange(std::move(d));
}

namespace {

int parse_int(std::string_view text) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw DimensionError("invalid dimension '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

DimensionRange DimensionRange::parse(const std::string& text) {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        return consecutive(parse_int(std::string_view(text).substr(0, dots)),
                           parse_int(std::string_view(text).substr(dots + 2)));
    }
    std::vector<int> dims;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto stop = comma == std::string::npos ? text.size() : comma;
        dims.push_back(parse_int(std::string_view(text).substr(start, stop - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return DimensionRange(std::move(dims));
}

void DimensionRange::check_ambient(int n) const {
    if (dims_.empty()) throw DimensionError("dimension range is empty");
    if (dims_.back() > n) {
        throw DimensionError("dimension " + std::to_string(dims_.back()) +
                             " exceeds ambient dimension " + std::to_string(n));
    }
}

std::string DimensionRange::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims_[i]);
    }
    return out;
}

DimensionRange default_dims(int n) { return DimensionRange::consecutive(1, std::min(n, 10)); }

void ProfileOptions::validate() const {
    if (trials < 1) throw ConfigError("trials must be positive");
    if (restarts < 1) throw ConfigError("restarts must be positive");
    policy.validate();
    solver.validate();
}

namespace {

// Replaces failing columns with Gaussian draws until the matrix is orthonormal.
// Only needed when the secants span fewer than k directions.
void orthonormalize_with_fallback(Eigen::MatrixXd& m, Rng& rng) {
    std::normal_distribution<double> normal;
    for (int attempt = 0;; ++attempt) {
        const int bad = detail::gram_schmidt(m);
        if (bad < 0) return;
        if (attempt > 1000) {
            // Deterministic last resort; cannot fail once enough basis vectors are tried.
            m.col(bad).setZero();
            m(attempt % m.rows(), bad) = 1.0;
            continue;
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, bad) = normal(rng);
    }
}

// n x cols matrix  sum_{(a,b)} s_ab (h_a - h_b)^T  with h rows drawn in key order.
Eigen::MatrixXd random_secant_combination(const SecantSet& s, std::span<const std::size_t> keys,
                                          std::size_t key_count, int cols, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd h(static_cast<Eigen::Index>(key_count), cols);
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (int c = 0; c < cols; ++c) h(r, c) = normal(rng);
    }
    Eigen::MatrixXd weights(static_cast<Eigen::Index>(s.size()), cols);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto [a, b] = s.pairs[j];
        weights.row(static_cast<Eigen::Index>(j)) =
            h.row(static_cast<Eigen::Index>(keys[a])) - h.row(static_cast<Eigen::Index>(keys[b]));
    }
    return s.secants * weights;
}

struct TrialResult {
    std::vector<double> values;
    std::vector<Eigen::MatrixXd> optima;
};

TrialResult single_trial(const SecantSet& s, const DimensionRange& dims, const ProfileOptions& opt,
                         std::span<const std::size_t> keys, std::size_t key_count, int trial) {
    const int n = s.ambient_dim();
    TrialResult out;
    out.values.reserve(dims.size());
    std::optional<Projection> previous;

    for (std::size_t i = 0; i < dims.size(); ++i) {
        const int k = dims[i];
        SolverConfig cfg = opt.solver;
        cfg.seed = derive_seed(opt.solver.seed, stream::kProfile, trial, k);

        // Cheap worst-secant runs from several starts; only the best one gets
        // the (much more expensive) smooth polish.
        SolverConfig quick = cfg;
        quick.smooth_polish = false;
        std::optional<SolveResult> best;
        for (int r = 0; r < opt.restarts; ++r) {
            Eigen::MatrixXd start;
            if (r == 0 && opt.warm_start && previous) {
                Rng rng(derive_seed(opt.solver.seed, stream::kAugment, trial, k));
                const int extra = k - previous->k();
                start.resize(n, k);
                start.leftCols(previous->k()) = previous->matrix();
                start.rightCols(extra) = random_secant_combination(s, keys, key_count, extra, rng);
                orthonormalize_with_fallback(start, rng);
            } else {
                Rng rng(r == 0 ? cfg.seed : derive_seed(cfg.seed, stream::kRestart, r));
                start = random_secant_combination(s, keys, key_count, k, rng);
                orthonormalize_with_fallback(start, rng);
            }
            SolveResult run = refine_projection(s, adopt_orthonormal(std::move(start)), quick);
            if (!best || run.kappa > best->kappa) best = std::move(run);
        }
        SolveResult res = cfg.smooth_polish ? refine_projection(s, best->projection, cfg) : *std::move(best);
        out.values.push_back(res.kappa);
        out.optima.push_back(res.projection.matrix());
        previous = std::move(res.projection);
    }
    return out;
}

void average_trials(KappaProfile& p) {
    p.values.assign(p.dims.size(), 0.0);
    for (std::size_t i = 0; i < p.dims.size(); ++i) {
        double sum = 0.0;
        for (const auto& trial : p.per_trial) sum += trial[i];
        p.values[i] = sum / static_cast<double>(p.per_trial.size());
    }
}

}  // namespace

KappaProfile profile_of_secants(const SecantSet& s, const DimensionRange& dims, const ProfileOptions& options,
                                std::span<const std::size_t> point_keys) {
    options.validate();
    if (s.empty()) throw DegenerateSecantSetError("cannot profile an empty secant set");
    dims.check_ambient(s.ambient_dim());

    std::vector<std::size_t> default_keys;
    if (point_keys.empty()) {
        default_keys.resize(s.source_count);
        std::iota(default_keys.begin(), default_keys.end(), std::size_t{0});
        point_keys = default_keys;
    }
    if (point_keys.size() < s.source_count) {
        throw IncompatibleError("point_keys must name every source point");
    }
    const std::size_t key_count = *std::max_element(point_keys.begin(), point_keys.end()) + 1;

    KappaProfile out;
    out.dims = dims;
    out.trials_averaged = options.trials;
    out.per_trial.resize(static_cast<std::size_t>(options.trials));
    out.optima.resize(out.per_trial.size());
    parallel_for(out.per_trial.size(), options.jobs, [&](std::size_t j) {
        auto trial = single_trial(s, dims, options, point_keys, key_count, static_cast<int>(j));
        out.per_trial[j] = std::move(trial.values);
        out.optima[j] = std::move(trial.optima);
    });
    average_trials(out);
    return out;
}

KappaProfile refine_kappa_profile(const PointCloud& cloud, const KappaProfile& start,
                                  const ProfileOptions& options) {
    options.validate();
    start.dims.check_ambient(cloud.ambient_dim());
    if (start.optima.empty() || start.optima.size() != start.per_trial.size()) {
        throw IncompatibleError("starting profile carries no projections");
    }
    const SecantSet s = compute_normalized_secants(cloud, options.policy);
    if (s.empty()) throw DegenerateSecantSetError("cannot profile an empty secant set");

    KappaProfile out;
    out.dims = start.dims;
    out.trials_averaged = static_cast<int>(start.optima.size());
    out.per_trial.assign(start.optima.size(), std::vector<double>(start.dims.size()));
    out.optima.assign(start.optima.size(), std::vector<Eigen::MatrixXd>(start.dims.size()));
    parallel_for(start.optima.size(), options.jobs, [&](std::size_t j) {
        for (std::size_t i = 0; i < start.dims.size(); ++i) {
            const Eigen::MatrixXd& p0 = start.optima[j][i];
            if (p0.rows() != cloud.ambient_dim() || p0.cols() != start.dims[i]) {
                throw IncompatibleError("starting projection has the wrong shape");
            }
            SolverConfig cfg = options.solver;
            cfg.seed = derive_seed(options.solver.seed, stream::kProfile, j, start.dims[i]);
            SolveResult res = refine_projection(s, adopt_orthonormal(p0), cfg);
            out.per_trial[j][i] = res.kappa;
            out.optima[j][i] = res.projection.matrix();
        }
    });
    average_trials(out);
    return out;
}

KappaProfile compute_kappa_profile(const PointCloud& cloud, const DimensionRange& dims,
                                   const ProfileOptions& options, std::span<const std::size_t> point_keys) {
    dims.check_ambient(cloud.ambient_dim());
    if (!point_keys.empty() && point_keys.size() != cloud.size()) {
        throw IncompatibleError("point_keys size does not match the cloud");
    }
    const SecantSet s = compute_normalized_secants(cloud, options.policy);
    return profile_of_secants(s, dims, options, point_keys);
}

KappaProfile compute_kappa_profile(const PointCloud& cloud, const DimensionRange& dims, int trials,
                                   const SecantFilterPolicy& policy, const SolverConfig& cfg) {
    ProfileOptions opt;
    opt.trials = trials;
    opt.policy = policy;
    opt.solver = cfg;
    return compute_kappa_profile(cloud, dims, opt);
}

double profile_distance(const KappaProfile& a, const KappaProfile& b) {
    if (a.dims != b.dims || a.values.size() != b.values.size()) {
        throw IncompatibleError("profiles have different dimension ranges (" + a.dims.to_string() +
                                " vs " + b.dims.to_string() + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace kappadetect
