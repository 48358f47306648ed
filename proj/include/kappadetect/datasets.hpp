#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kappadetect/geometry.hpp"

namespace kappadetect {

// ---------------------------------------------------------------------------
// Synthetic data

enum class ManifoldKind { trig_curve_6d, torus_10d, rp2_10d, s3_10d, gaussian };

const char* to_string(ManifoldKind kind);
/// Throws ConfigError for unknown names.
ManifoldKind parse_manifold_kind(const std::string& name);

/// f(t) = (cos t, sin t, cos 2t, sin 2t, cos 3t, sin 3t).
Eigen::RowVectorXd trig_moment_curve(double t);

/// `count` points f(t_i), t_i ~ U[0, 2 pi).
PointCloud gen_trig_moment_curve(std::size_t count, std::uint64_t seed);

/// Six clusters in R^6, each N(0, C_i) with C_i = diag(0.2, ..., 1 at i, ..., 0.2).
/// Rows are grouped by cluster; labels are "1".."6".
PointCloud gen_gaussian_majority(std::size_t count_per_cluster, std::uint64_t seed);

/// Samples of a compact manifold smoothly embedded in R^10 (R^6 for the
/// trig curve), or standard Gaussian noise in R^10. Base coordinates are
/// (cos u, sin u, cos v, sin v) for the torus, a unit 4-vector for S^3 and
/// (x^2, y^2, z^2, xy, xz, yz) of a unit (x, y, z) for RP^2, zero padded.
PointCloud gen_manifold_samples(ManifoldKind kind, std::size_t count, std::uint64_t seed);

/// The fixed rotation of R^10 applied after each manifold's coordinate map;
/// gen_manifold_samples returns rows x = rotation * base(x).
const Eigen::MatrixXd& manifold_embedding_rotation();

/// Base (pre-rotation) coordinates of a manifold sample, i.e. the inverse
/// of the rotation applied to a row of gen_manifold_samples.
Eigen::VectorXd manifold_base_coordinates(const Eigen::RowVectorXd& embedded);

// ---------------------------------------------------------------------------
// Delimited text ingestion

struct IngestSchema {
    /// nullopt splits on runs of whitespace.
    std::optional<char> delimiter;
    /// Negative values count from the end (-1 is the last column).
    int label_column = -1;
    std::vector<int> drop_columns;
    bool has_header = false;
    /// Lines starting with this prefix are skipped (e.g. "@" for KEEL headers).
    std::string comment_prefix;
    /// Raw label -> readable class name, applied at load time.
    std::map<std::string, std::string> label_names;

    void validate() const;
};

enum class DatasetPreset { ecoli, pageblocks, shuttle, glass, keel };

const char* to_string(DatasetPreset preset);
/// Throws ConfigError for unknown names.
DatasetPreset parse_preset(const std::string& name);

/// Column layout of the UCI distribution files:
///   ecoli      ecoli.data        whitespace, sequence name, 7 features, class
///   pageblocks page-blocks.data  whitespace, 10 features, class 1..5
///   shuttle    shuttle.trn/.tst  whitespace, 9 features, class 1..7
///   glass      glass.data        comma, Id, 9 features, type 1..7
///   keel       *.dat             comma, '@' header lines, features, class
IngestSchema preset_schema(DatasetPreset preset);

PointCloud parse_delimited(std::istream& in, const IngestSchema& schema);
/// Throws IoError if the file cannot be opened, ParseError for a bad field and
/// SchemaError when rows disagree on column count.
PointCloud load_delimited(const std::filesystem::path& path, const IngestSchema& schema);

// ---------------------------------------------------------------------------
// Cloud files: one header line "# kappadetect-cloud n=<n> count=<count> labels=<0|1>"
// followed by comma-separated rows (label last when present).

void write_cloud(std::ostream& out, const PointCloud& cloud);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);
/// Reads a cloud file. Files without the header are read as plain
/// comma-separated numbers with no labels.
PointCloud read_cloud(std::istream& in);
PointCloud read_cloud(const std::filesystem::path& path);

}  // namespace kappadetect
