#include "kappadetect/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "kappadetect/error.hpp"
#include "kappadetect/projection.hpp"
#include "kappadetect/seed.hpp"

namespace kappadetect {

namespace {

constexpr int kEmbeddingDim = 10;
constexpr std::uint64_t kEmbeddingRotationSeed = 0x4b617070614d616eULL;

}  // namespace

const char* to_string(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::trig_curve_6d: return "trig_curve_6d";
        case ManifoldKind::torus_10d: return "torus_10d";
        case ManifoldKind::rp2_10d: return "rp2_10d";
        case ManifoldKind::s3_10d: return "s3_10d";
        case ManifoldKind::gaussian: return "gaussian";
    }
    return "unknown";
}

ManifoldKind parse_manifold_kind(const std::string& name) {
    for (auto kind : {ManifoldKind::trig_curve_6d, ManifoldKind::torus_10d, ManifoldKind::rp2_10d,
                      ManifoldKind::s3_10d, ManifoldKind::gaussian}) {
        if (name == to_string(kind)) return kind;
    }
    throw ConfigError("unknown manifold kind '" + name + "'");
}

Eigen::RowVectorXd trig_moment_curve(double t) {
    Eigen::RowVectorXd p(6);
    p << std::cos(t), std::sin(t), std::cos(2 * t), std::sin(2 * t), std::cos(3 * t), std::sin(3 * t);
    return p;
}

PointCloud gen_trig_moment_curve(std::size_t count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("count must be positive");
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(count), 6);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) pts.row(i) = trig_moment_curve(angle(rng));
    return PointCloud(std::move(pts));
}

PointCloud gen_gaussian_majority(std::size_t count_per_cluster, std::uint64_t seed) {
    if (count_per_cluster < 1) throw ConfigError("count_per_cluster must be positive");
    constexpr int kClusters = 6;
    const double narrow = std::sqrt(0.2);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    const auto per = static_cast<Eigen::Index>(count_per_cluster);
    Eigen::MatrixXd pts(per * kClusters, 6);
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(pts.rows()));
    for (int c = 0; c < kClusters; ++c) {
        for (Eigen::Index i = 0; i < per; ++i) {
            const Eigen::Index row = c * per + i;
            for (int d = 0; d < 6; ++d) pts(row, d) = normal(rng) * (d == c ? 1.0 : narrow);
            labels.push_back(std::to_string(c + 1));
        }
    }
    return PointCloud(std::move(pts), std::move(labels));
}

const Eigen::MatrixXd& manifold_embedding_rotation() {
    static const Eigen::MatrixXd rotation =
        random_projection(kEmbeddingDim, kEmbeddingDim, kEmbeddingRotationSeed).matrix();
    return rotation;
}

Eigen::VectorXd manifold_base_coordinates(const Eigen::RowVectorXd& embedded) {
    if (embedded.size() != kEmbeddingDim) throw IncompatibleError("expected a point of R^10");
    return manifold_embedding_rotation().transpose() * embedded.transpose();
}

namespace {

Eigen::Vector4d unit_4d(Rng& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        Eigen::Vector4d v(normal(rng), normal(rng), normal(rng), normal(rng));
        const double len = v.norm();
        if (len > 1e-12) return v / len;
    }
}

Eigen::Vector3d unit_3d(Rng& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
        const double len = v.norm();
        if (len > 1e-12) return v / len;
    }
}

// Coordinates of one sample before the fixed rotation.
Eigen::VectorXd base_sample(ManifoldKind kind, Rng& rng) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kEmbeddingDim);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    switch (kind) {
        case ManifoldKind::torus_10d: {
            const double u = angle(rng);
            const double v = angle(rng);
            x.head<4>() << std::cos(u), std::sin(u), std::cos(v), std::sin(v);
            break;
        }
        case ManifoldKind::s3_10d:
            x.head<4>() = unit_4d(rng);
            break;
        case ManifoldKind::rp2_10d: {
            const Eigen::Vector3d p = unit_3d(rng);
            x.head<6>() << p.x() * p.x(), p.y() * p.y(), p.z() * p.z(), p.x() * p.y(), p.x() * p.z(),
                p.y() * p.z();
            break;
        }
        case ManifoldKind::gaussian:
        case ManifoldKind::trig_curve_6d:
            throw ConfigError("no embedding for this kind");
    }
    return x;
}

}  // namespace

PointCloud gen_manifold_samples(ManifoldKind kind, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("count must be positive");
    if (kind == ManifoldKind::trig_curve_6d) return gen_trig_moment_curve(count, seed);

    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(count), kEmbeddingDim);
    if (kind == ManifoldKind::gaussian) {
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            for (int d = 0; d < kEmbeddingDim; ++d) pts(i, d) = normal(rng);
        }
        return PointCloud(std::move(pts));
    }
    const Eigen::MatrixXd& rotation = manifold_embedding_rotation();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        pts.row(i) = (rotation * base_sample(kind, rng)).transpose();
    }
    return PointCloud(std::move(pts));
}

// ---------------------------------------------------------------------------

void IngestSchema::validate() const {
    for (int c : drop_columns) {
        if (c == label_column) throw SchemaError("label column cannot also be dropped");
    }
}

const char* to_string(DatasetPreset preset) {
    switch (preset) {
        case DatasetPreset::ecoli: return "ecoli";
        case DatasetPreset::pageblocks: return "pageblocks";
        case DatasetPreset::shuttle: return "shuttle";
        case DatasetPreset::glass: return "glass";
        case DatasetPreset::keel: return "keel";
    }
    return "unknown";
}

DatasetPreset parse_preset(const std::string& name) {
    for (auto p : {DatasetPreset::ecoli, DatasetPreset::pageblocks, DatasetPreset::shuttle,
                   DatasetPreset::glass, DatasetPreset::keel}) {
        if (name == to_string(p)) return p;
    }
    throw ConfigError("unknown dataset preset '" + name + "'");
}

IngestSchema preset_schema(DatasetPreset preset) {
    IngestSchema s;
    switch (preset) {
        case DatasetPreset::ecoli:
            s.drop_columns = {0};
            break;
        case DatasetPreset::pageblocks:
            s.label_names = {{"1", "text"},
                             {"2", "horiz_line"},
                             {"3", "graphic"},
                             {"4", "vert_line"},
                             {"5", "picture"}};
            break;
        case DatasetPreset::shuttle:
            s.label_names = {{"1", "Rad_Flow"}, {"2", "Fpv_Close"}, {"3", "Fpv_Open"}, {"4", "High"},
                             {"5", "Bypass"},   {"6", "Bpv_Close"}, {"7", "Bpv_Open"}};
            break;
        case DatasetPreset::glass:
            s.delimiter = ',';
            s.drop_columns = {0};
            s.label_names = {{"1", "building_windows_float_processed"},
                             {"2", "building_windows_non_float_processed"},
                             {"3", "vehicle_windows_float_processed"},
                             {"4", "vehicle_windows_non_float_processed"},
                             {"5", "containers"},
                             {"6", "tableware"},
                             {"7", "headlamps"}};
            break;
        case DatasetPreset::keel:
            s.delimiter = ',';
            s.comment_prefix = "@";
            break;
    }
    return s;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, std::optional<char> delimiter) {
    std::vector<std::string_view> out;
    if (!delimiter) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i >= line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            out.push_back(line.substr(start, i - start));
        }
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(*delimiter, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_double(std::string_view text, double& value) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace

PointCloud parse_delimited(std::istream& in, const IngestSchema& schema) {
    schema.validate();
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::optional<std::size_t> arity;
    std::vector<std::size_t> feature_columns;
    std::size_t label_index = 0;
    bool header_skipped = !schema.has_header;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (!schema.comment_prefix.empty() && line.starts_with(schema.comment_prefix)) continue;
        if (!header_skipped) {
            header_skipped = true;
            continue;
        }
        const auto fields = split(line, schema.delimiter);
        if (!arity) {
            arity = fields.size();
            const auto cols = static_cast<int>(fields.size());
            const int label_col = schema.label_column < 0 ? cols + schema.label_column : schema.label_column;
            if (label_col < 0 || label_col >= cols) {
                throw SchemaError(fmt::format("label column {} does not exist in a {}-column file",
                                              schema.label_column, cols));
            }
            label_index = static_cast<std::size_t>(label_col);
            for (int c = 0; c < cols; ++c) {
                const bool dropped = std::any_of(schema.drop_columns.begin(), schema.drop_columns.end(),
                                                 [&](int d) { return (d < 0 ? cols + d : d) == c; });
                if (c != label_col && !dropped) feature_columns.push_back(static_cast<std::size_t>(c));
            }
            if (feature_columns.empty()) throw SchemaError("schema leaves no feature columns");
        } else if (fields.size() != *arity) {
            throw SchemaError(fmt::format("line {}: expected {} columns, found {}", line_no, *arity,
                                          fields.size()));
        }
        std::vector<double> row;
        row.reserve(feature_columns.size());
        for (std::size_t c : feature_columns) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                throw ParseError(line_no, fmt::format("column {}: cannot parse '{}' as a number", c + 1,
                                                      std::string(fields[c])));
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        std::string label(fields[label_index]);
        if (auto it = schema.label_names.find(label); it != schema.label_names.end()) label = it->second;
        labels.push_back(std::move(label));
    }
    if (rows.empty()) throw EmptyInputError("no data rows found");

    Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(feature_columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return PointCloud(std::move(pts), std::move(labels));
}

PointCloud load_delimited(const std::filesystem::path& path, const IngestSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_delimited(in, schema);
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::string_view kCloudMagic = "# kappadetect-cloud";
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
    out << fmt::format("{} n={} count={} labels={}\n", kCloudMagic, cloud.ambient_dim(), cloud.size(),
                       cloud.has_labels() ? 1 : 0);
    const Eigen::MatrixXd& pts = cloud.points();
    std::string line;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        line.clear();
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            if (j) line += ',';
            line += fmt::format("{:.17g}", pts(i, j));
        }
        if (cloud.has_labels()) {
            line += ',';
            line += cloud.label(static_cast<std::size_t>(i));
        }
        line += '\n';
        out << line;
    }
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_cloud(out, cloud);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

PointCloud read_cloud(std::istream& in) {
    std::string first;
    if (!std::getline(in, first)) throw EmptyInputError("empty cloud file");
    IngestSchema schema;
    schema.delimiter = ',';
    if (first.starts_with(kCloudMagic)) {
        int n = -1;
        long long count = -1;
        int labeled = 0;
        std::istringstream header(first.substr(kCloudMagic.size()));
        std::string token;
        while (header >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const auto key = token.substr(0, eq);
            const auto value = token.substr(eq + 1);
            if (key == "n") n = std::stoi(value);
            if (key == "count") count = std::stoll(value);
            if (key == "labels") labeled = std::stoi(value);
        }
        // The leading blank line keeps parser line numbers aligned with the file.
        std::stringstream body;
        body << '\n';
        std::string line;
        while (std::getline(in, line)) {
            // Unlabeled rows get a dummy label column so the generic parser can be reused.
            if (!labeled && !trim(line).empty()) line += ",_";
            body << line << '\n';
        }
        PointCloud cloud = parse_delimited(body, schema);
        if (n >= 0 && cloud.ambient_dim() != n) throw SchemaError("cloud header dimension mismatch");
        if (count >= 0 && static_cast<long long>(cloud.size()) != count) {
            throw SchemaError("cloud header count mismatch");
        }
        return labeled ? cloud : PointCloud(cloud.points());
    }
    std::stringstream body;
    body << first << (trim(first).empty() ? "" : ",_") << '\n';
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) line += ",_";
        body << line << '\n';
    }
    return PointCloud(parse_delimited(body, schema).points());
}

PointCloud read_cloud(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_cloud(in);
}

}  // namespace kappadetect
