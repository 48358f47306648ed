#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "kappadetect/datasets.hpp"
#include "kappadetect/detector.hpp"
#include "kappadetect/error.hpp"
#include "kappadetect/eval.hpp"
#include "kappadetect/geometry.hpp"
#include "kappadetect/profile.hpp"
#include "kappadetect/projection.hpp"

namespace py = pybind11;
namespace kd = kappadetect;

namespace {

using Dims = std::variant<std::string, std::vector<int>>;

kd::DimensionRange to_dims(const Dims& dims) {
    if (const auto* text = std::get_if<std::string>(&dims)) return kd::DimensionRange::parse(*text);
    return kd::DimensionRange(std::get<std::vector<int>>(dims));
}

kd::SecantFilterPolicy to_policy(const std::string& mode, double value) {
    kd::SecantFilterPolicy p{kd::parse_filter_mode(mode), value};
    p.validate();
    return p;
}

kd::ProfileOptions to_options(int trials, std::uint64_t seed, const std::string& filter_mode, double filter_value,
                              int restarts, int jobs) {
    kd::ProfileOptions o;
    o.trials = trials;
    o.solver.seed = seed;
    o.policy = to_policy(filter_mode, filter_value);
    o.restarts = restarts;
    o.jobs = jobs;
    return o;
}

py::tuple cloud_tuple(const kd::PointCloud& c) {
    py::object labels = py::none();
    if (c.has_labels()) labels = py::cast(c.labels());
    return py::make_tuple(c.points(), labels);
}

// Profile options shared by every profiling entry point.
#define KD_PROFILE_ARGS                                                                           \
    py::arg("trials") = 5, py::arg("seed") = 0, py::arg("filter_mode") = "none",                  \
        py::arg("filter_value") = 0.0, py::arg("restarts") = 16, py::arg("jobs") = 1

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "kappa-profile rare category detection";

    auto error = py::register_exception<kd::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<kd::EmptyInputError>(m, "EmptyInputError", error);
    py::register_exception<kd::DegenerateSecantSetError>(m, "DegenerateSecantSetError", error);
    py::register_exception<kd::DimensionError>(m, "DimensionError", error);
    py::register_exception<kd::RankError>(m, "RankError", error);
    py::register_exception<kd::IncompatibleError>(m, "IncompatibleError", error);
    py::register_exception<kd::InsufficientRareClassError>(m, "InsufficientRareClassError", error);
    py::register_exception<kd::ConfigError>(m, "ConfigError", error);
    py::register_exception<kd::IoError>(m, "IoError", error);
    py::register_exception<kd::SchemaError>(m, "SchemaError", error);
    py::register_exception<kd::ParseError>(m, "ParseError", error);

    py::class_<kd::KappaProfile>(m, "KappaProfile")
        .def_property_readonly("dims", [](const kd::KappaProfile& p) { return p.dims.dims(); })
        .def_readonly("values", &kd::KappaProfile::values)
        .def_readonly("per_trial", &kd::KappaProfile::per_trial)
        .def_readonly("trials_averaged", &kd::KappaProfile::trials_averaged)
        .def("__repr__", [](const kd::KappaProfile& p) {
            return "KappaProfile(dims=" + p.dims.to_string() + ")";
        });

    m.def(
        "secants",
        [](const Eigen::MatrixXd& points, const std::string& filter_mode, double filter_value) {
            const auto s = kd::compute_normalized_secants(kd::PointCloud(points), to_policy(filter_mode, filter_value));
            return py::make_tuple(s.secants, s.pairs);
        },
        py::arg("points"), py::arg("filter_mode") = "none", py::arg("filter_value") = 0.0,
        "Normalized secants (n x m) and their point pairs.");

    m.def(
        "kappa",
        [](const Eigen::MatrixXd& projection, const Eigen::MatrixXd& points) {
            const auto s = kd::compute_normalized_secants(kd::PointCloud(points), kd::SecantFilterPolicy::none());
            return kd::kappa_of(kd::Projection::from_orthonormal(projection), s);
        },
        py::arg("projection"), py::arg("points"), "Smallest secant norm under an orthonormal n x k projection.");

    m.def(
        "solve",
        [](const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts) {
            const auto s = kd::compute_normalized_secants(kd::PointCloud(points), kd::SecantFilterPolicy::none());
            kd::SolverConfig cfg;
            cfg.seed = seed;
            const auto res = kd::solve_best_of(s, k, cfg, restarts);
            return py::make_tuple(res.kappa, res.projection.matrix());
        },
        py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 1,
        "Best (kappa, projection) found for target dimension k.");

    m.def(
        "kappa_profile",
        [](const Eigen::MatrixXd& points, const Dims& dims, int trials, std::uint64_t seed,
           const std::string& filter_mode, double filter_value, int restarts, int jobs) {
            return kd::compute_kappa_profile(kd::PointCloud(points), to_dims(dims),
                                             to_options(trials, seed, filter_mode, filter_value, restarts, jobs));
        },
        py::arg("points"), py::arg("dims"), KD_PROFILE_ARGS);

    m.def("profile_distance", &kd::profile_distance, py::arg("a"), py::arg("b"));

    m.def(
        "profile_shifts",
        [](const Eigen::MatrixXd& rare, const Eigen::MatrixXd& unlabeled, const Dims& dims, int trials,
           std::uint64_t seed, const std::string& filter_mode, double filter_value, int restarts, int jobs) {
            return kd::profile_shifts(kd::PointCloud(rare), kd::PointCloud(unlabeled), to_dims(dims),
                                      to_options(trials, seed, filter_mode, filter_value, restarts, jobs));
        },
        py::arg("rare"), py::arg("unlabeled"), py::arg("dims"), KD_PROFILE_ARGS,
        "Profile shift d_y of each unlabeled row against the rare points.");

    m.def(
        "determine_threshold",
        [](const Eigen::MatrixXd& rare, double r, const Dims& dims, int trials, std::uint64_t seed,
           const std::string& filter_mode, double filter_value, int restarts, int jobs) {
            const auto rep = kd::determine_threshold(kd::PointCloud(rare), r, to_dims(dims),
                                                     to_options(trials, seed, filter_mode, filter_value, restarts, jobs));
            py::dict out;
            out["threshold"] = rep.threshold;
            out["d_avg"] = rep.d_avg;
            out["r"] = rep.r;
            out["distances"] = rep.per_point_distances;
            return out;
        },
        py::arg("rare"), py::arg("r") = kd::kDefaultRatio, py::arg("dims") = Dims{std::string("1..1")},
        KD_PROFILE_ARGS, "Leave-one-out threshold r * mean(d_x).");

    m.def(
        "detect",
        [](const Eigen::MatrixXd& rare, const Eigen::MatrixXd& unlabeled, double threshold, const Dims& dims,
           int trials, std::uint64_t seed, const std::string& filter_mode, double filter_value, int restarts,
           int jobs) {
            kd::DetectionConfig cfg;
            cfg.threshold = threshold;
            cfg.dims = to_dims(dims);
            cfg.profile = to_options(trials, seed, filter_mode, filter_value, restarts, jobs);
            const auto outcomes = kd::kappa_detect(kd::PointCloud(rare), kd::PointCloud(unlabeled), cfg);
            std::vector<double> d;
            std::vector<bool> is_rare;
            for (const auto& o : outcomes) {
                d.push_back(o.d_y);
                is_rare.push_back(o.predicted == kd::Prediction::rare);
            }
            return py::make_tuple(d, is_rare);
        },
        py::arg("rare"), py::arg("unlabeled"), py::arg("threshold"), py::arg("dims"), KD_PROFILE_ARGS,
        "(d_y, is_rare) per unlabeled row; rare iff d_y < threshold.");

    m.def(
        "gen_trig_moment_curve",
        [](std::size_t count, std::uint64_t seed) { return kd::gen_trig_moment_curve(count, seed).points(); },
        py::arg("count"), py::arg("seed") = 0);
    m.def(
        "gen_gaussian_majority",
        [](std::size_t count_per_cluster, std::uint64_t seed) {
            return cloud_tuple(kd::gen_gaussian_majority(count_per_cluster, seed));
        },
        py::arg("count_per_cluster"), py::arg("seed") = 0, "(points, labels) of the six-cluster majority.");
    m.def(
        "gen_manifold_samples",
        [](const std::string& kind, std::size_t count, std::uint64_t seed) {
            return kd::gen_manifold_samples(kd::parse_manifold_kind(kind), count, seed).points();
        },
        py::arg("kind"), py::arg("count"), py::arg("seed") = 0);

    m.def(
        "load_dataset",
        [](const std::string& path, const std::string& preset) {
            return cloud_tuple(kd::load_delimited(path, kd::preset_schema(kd::parse_preset(preset))));
        },
        py::arg("path"), py::arg("preset"), "(points, labels) of a delimited file read with a preset schema.");

    m.def(
        "singular_value_profile",
        [](const Eigen::MatrixXd& points) { return kd::singular_value_profile(kd::PointCloud(points)); },
        py::arg("points"));
}
