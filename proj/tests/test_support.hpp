#pragma once

#include <cmath>
#include <cstdint>

#include "normtest/samplers.hpp"

namespace normtest::testing {

/// Standard normal n x d matrix from a dedicated substream.
inline Matrix normal_sample(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng = substream(seed, StreamFamily::Generic, 9001);
    return standard_normal_matrix(n, d, rng);
}

/// Random matrix with a condition number kept moderate.
inline Matrix random_invertible(std::size_t d, std::uint64_t seed) {
    Rng rng = substream(seed, StreamFamily::Generic, 9002);
    Matrix a = standard_normal_matrix(d, d, rng);
    a += 2.0 * Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    return a;
}

inline double rel_diff(double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

}  // namespace normtest::testing
