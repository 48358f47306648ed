// kappadetect command-line tool.
//
// Exit codes: 0 success, 1 I/O or data error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kappadetect/datasets.hpp"
#include "kappadetect/detector.hpp"
#include "kappadetect/error.hpp"
#include "kappadetect/eval.hpp"
#include "kappadetect/profile.hpp"
#include "kappadetect/records.hpp"

namespace kd = kappadetect;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Flags shared by every subcommand that computes profiles.
struct ProfileFlags {
    std::string dims;
    int trials = 5;
    int restarts = kd::ProfileOptions{}.restarts;
    std::string filter_mode;
    double filter_value = 0.0;
    std::uint64_t seed = 0;
    int jobs = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dims", dims, "Target dimensions, A..B or a comma list (default 1..min(n,10))");
        cmd->add_option("--trials", trials, "Random-start trials averaged per profile")->check(CLI::PositiveNumber);
        cmd->add_option("--restarts", restarts, "Solver starts per trial and dimension; the best is kept")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--filter-mode", filter_mode, "Secant filter: none, min_length or drop_shortest");
        cmd->add_option("--filter-value", filter_value, "Minimum length or dropped fraction");
        cmd->add_option("--seed", seed, "Seed for every random choice");
        cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    }

    kd::ProfileOptions options(kd::SecantFilterPolicy fallback) const {
        kd::ProfileOptions opt;
        opt.trials = trials;
        opt.restarts = restarts;
        opt.policy = filter_mode.empty() ? fallback
                                         : kd::SecantFilterPolicy{kd::parse_filter_mode(filter_mode), filter_value};
        opt.solver.seed = seed;
        opt.jobs = jobs;
        opt.validate();
        return opt;
    }

    kd::DimensionRange dims_for(int n) const {
        kd::DimensionRange d = dims.empty() ? kd::default_dims(n) : kd::DimensionRange::parse(dims);
        d.check_ambient(n);
        return d;
    }
};

// Usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kd::IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw kd::IoError("failed writing '" + path + "'");
}

void warn_ratio(double r) {
    if (!kd::ratio_in_recommended_range(r)) {
        std::cerr << fmt::format("warning: r = {} is outside the recommended range [{}, {}]\n", kd::fixed6(r),
                                 kd::kRecommendedRatioMin, kd::kRecommendedRatioMax);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rare-category detection from kappa-profile shifts"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic point cloud");
    std::string gen_kind;
    std::size_t gen_count = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_output;
    gen->add_option("kind", gen_kind,
                    "trig_curve_6d, torus_10d, rp2_10d, s3_10d, gaussian or gaussian_majority")
        ->required();
    gen->add_option("--count", gen_count, "Points (per cluster for gaussian_majority)")->required();
    gen->add_option("--seed", gen_seed);
    gen->add_option("--output", gen_output, "Destination file")->required();

    // profile
    auto* prof = app.add_subcommand("profile", "Print the kappa profile of a cloud");
    ProfileFlags prof_flags;
    std::string prof_input;
    std::string prof_output;
    prof->add_option("--input", prof_input, "Cloud file")->required();
    prof->add_option("--output", prof_output, "Write the record here instead of standard output");
    prof_flags.attach(prof);

    // threshold
    auto* thr = app.add_subcommand("threshold", "Leave-one-out threshold from labeled rare points");
    ProfileFlags thr_flags;
    std::string thr_input;
    std::string thr_output;
    double thr_r = kd::kDefaultRatio;
    thr->add_option("--input", thr_input, "Labeled rare cloud")->required();
    thr->add_option("--r", thr_r, "Multiplier applied to the mean leave-one-out shift");
    thr->add_option("--output", thr_output);
    thr_flags.attach(thr);

    // detect
    auto* det = app.add_subcommand("detect", "Classify unlabeled points as rare or majority");
    ProfileFlags det_flags;
    std::string det_rare;
    std::string det_unlabeled;
    std::string det_output;
    std::optional<double> det_threshold;
    std::optional<double> det_auto_r;
    det->add_option("--rare", det_rare, "Labeled rare cloud")->required();
    det->add_option("--unlabeled", det_unlabeled, "Cloud to classify")->required();
    auto* det_thr_opt = det->add_option("--threshold", det_threshold, "Fixed threshold on d_y");
    det->add_option("--auto-threshold-r", det_auto_r, "Derive the threshold by leave-one-out with this r")
        ->excludes(det_thr_opt);
    det->add_option("--output", det_output);
    det_flags.attach(det);

    // eval
    auto* ev = app.add_subcommand("eval", "Repeated random-partition evaluation on a labeled dataset");
    ProfileFlags ev_flags;
    std::string ev_input;
    std::string ev_preset;
    std::string ev_rare_label;
    std::size_t ev_n_labeled = 9;
    int ev_runs = 10;
    std::optional<std::size_t> ev_subsample;
    std::optional<double> ev_threshold;
    std::optional<double> ev_auto_r;
    std::vector<std::size_t> ev_exclude;
    std::string ev_output;
    std::string ev_histogram;
    std::size_t ev_bins = 20;
    std::string ev_outcomes;
    ev->add_option("--input", ev_input, "Dataset file")->required();
    ev->add_option("--preset", ev_preset, "ecoli, pageblocks, shuttle, glass or keel; omit for a cloud file");
    ev->add_option("--rare-label", ev_rare_label, "Class treated as rare")->required();
    ev->add_option("--n-labeled", ev_n_labeled, "Labeled rare points per run");
    ev->add_option("--runs", ev_runs)->check(CLI::PositiveNumber);
    ev->add_option("--majority-subsample", ev_subsample, "Majority rows classified per run");
    auto* ev_thr_opt = ev->add_option("--threshold", ev_threshold, "Fixed threshold instead of leave-one-out");
    ev->add_option("--auto-threshold-r", ev_auto_r, "Leave-one-out multiplier (default 1.3)")->excludes(ev_thr_opt);
    ev->add_option("--exclude-labeled", ev_exclude, "Dataset rows (0-based) never drawn as labeled rare points")
        ->delimiter(',');
    ev->add_option("--output", ev_output, "Metrics report file (default standard output)");
    ev->add_option("--histogram", ev_histogram, "Write the d_y histogram here");
    ev->add_option("--histogram-bins", ev_bins)->check(CLI::PositiveNumber);
    ev->add_option("--outcomes", ev_outcomes, "Write every per-point outcome here");
    ev_flags.attach(ev);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_count < 1) throw UsageError("--count must be positive");
            kd::PointCloud cloud;
            if (gen_kind == "gaussian_majority") {
                cloud = kd::gen_gaussian_majority(gen_count, gen_seed);
            } else {
                cloud = kd::gen_manifold_samples(kd::parse_manifold_kind(gen_kind), gen_count, gen_seed);
            }
            kd::write_cloud(std::filesystem::path(gen_output), cloud);
        } else if (prof->parsed()) {
            const auto opt = prof_flags.options(kd::SecantFilterPolicy::none());
            const auto cloud = kd::read_cloud(std::filesystem::path(prof_input));
            const auto dims = prof_flags.dims_for(cloud.ambient_dim());
            emit(kd::format_profile(kd::compute_kappa_profile(cloud, dims, opt)), prof_output);
        } else if (thr->parsed()) {
            const auto opt = thr_flags.options(kd::SecantFilterPolicy::none());
            if (!(thr_r > 0.0)) throw UsageError("--r must be positive");
            warn_ratio(thr_r);
            const auto rare = kd::read_cloud(std::filesystem::path(thr_input));
            const auto dims = thr_flags.dims_for(rare.ambient_dim());
            emit(kd::format_threshold_report(kd::determine_threshold(rare, thr_r, dims, opt)), thr_output);
        } else if (det->parsed()) {
            const auto opt = det_flags.options(kd::SecantFilterPolicy::none());
            if (!det_threshold && !det_auto_r) throw UsageError("detect needs --threshold or --auto-threshold-r");
            if (det_threshold && !(*det_threshold >= 0.0)) throw UsageError("--threshold must be nonnegative");
            if (det_auto_r) {
                if (!(*det_auto_r > 0.0)) throw UsageError("--auto-threshold-r must be positive");
                warn_ratio(*det_auto_r);
            }
            const auto rare = kd::read_cloud(std::filesystem::path(det_rare));
            const auto unlabeled = kd::read_cloud(std::filesystem::path(det_unlabeled));
            if (rare.ambient_dim() != unlabeled.ambient_dim()) {
                throw kd::IncompatibleError(fmt::format("rare points have {} coordinates, unlabeled points {}",
                                                        rare.ambient_dim(), unlabeled.ambient_dim()));
            }
            kd::DetectionConfig cfg;
            cfg.dims = det_flags.dims_for(rare.ambient_dim());
            cfg.profile = opt;
            cfg.threshold = det_threshold ? *det_threshold
                                          : kd::determine_threshold(rare, *det_auto_r, cfg.dims, opt).threshold;
            const auto outcomes = kd::kappa_detect(rare, unlabeled, cfg);
            const auto* truth = unlabeled.has_labels() ? &unlabeled.labels() : nullptr;
            std::string text = fmt::format("threshold,{}\n", kd::fixed6(cfg.threshold));
            text += kd::format_outcomes(outcomes, truth);
            emit(text, det_output);
        } else if (ev->parsed()) {
            kd::ExperimentSpec spec;
            spec.profile = ev_flags.options(kd::SecantFilterPolicy::drop_shortest(0.05));
            spec.rare_label = ev_rare_label;
            spec.n_labeled_rare = ev_n_labeled;
            spec.runs = ev_runs;
            spec.majority_subsample = ev_subsample;
            spec.master_seed = ev_flags.seed;
            spec.excluded_labeled = ev_exclude;
            if (ev_threshold) {
                spec.threshold = kd::FixedThreshold{*ev_threshold};
            } else {
                const double r = ev_auto_r.value_or(kd::kDefaultRatio);
                warn_ratio(r);
                spec.threshold = kd::LeaveOneOutThreshold{r};
            }
            std::optional<kd::DatasetPreset> preset;
            if (!ev_preset.empty()) preset = kd::parse_preset(ev_preset);
            const kd::PointCloud data = preset ? kd::load_delimited(ev_input, kd::preset_schema(*preset))
                                               : kd::read_cloud(std::filesystem::path(ev_input));
            if (!data.has_labels()) throw kd::SchemaError("dataset has no class labels");
            if (!ev_flags.dims.empty()) spec.dims = ev_flags.dims_for(data.ambient_dim());

            const auto report = kd::run_experiment(data, spec);
            emit(kd::format_metrics_report(report, preset ? kd::to_string(*preset) : ev_input), ev_output);
            if (!ev_histogram.empty()) {
                emit(kd::format_histogram(kd::export_histogram(report.outcomes, ev_bins)), ev_histogram);
            }
            if (!ev_outcomes.empty()) emit(kd::format_labeled_outcomes(report.outcomes), ev_outcomes);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kd::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kd::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kd::IncompatibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
