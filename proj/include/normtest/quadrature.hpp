#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "normtest/common.hpp"

namespace normtest {

/// Resolution of the tensor-product Gauss–Hermite rules used by the integration oracles.
struct QuadratureSpec {
    std::size_t nodes_per_dim = 96;
    /// Tensor nodes whose weight is below this fraction of the largest weight are dropped.
    double weight_cutoff = 1e-16;
};

/// Gauss–Hermite rule for the weight exp(-x^2) on the real line.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Builds the rule by the Golub–Welsch eigenvalue method. Requires count >= 1.
[[nodiscard]] GaussHermiteRule gauss_hermite(std::size_t count);

/// Tensor rule on R^d for the weight exp(-a ||t||^2).
struct TensorRule {
    Matrix nodes;  ///< one node per row
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
};

/// Throws UnsupportedDimension for d > max_dim.
[[nodiscard]] TensorRule weighted_tensor_rule(std::size_t d, double a, const QuadratureSpec& spec,
                                              std::size_t max_dim = 3);

/// Adaptive Gauss–Kronrod integration of f over [lo, hi]; infinite limits are allowed.
[[nodiscard]] double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                                  double tolerance = 1e-12);

}  // namespace normtest
