#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "kappadetect/geometry.hpp"
#include "kappadetect/projection.hpp"

namespace kdtest {

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
    }
    return m;
}

inline kappadetect::PointCloud random_cloud(int count, int n, std::uint64_t seed) {
    return kappadetect::PointCloud(gaussian_matrix(count, n, seed));
}

/// Random orthogonal n x n matrix.
inline Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
    return kappadetect::random_projection(n, n, seed).matrix();
}

}  // namespace kdtest
