#pragma once

#include <cstddef>

#include "normtest/common.hpp"

namespace normtest {

/// An n x d observation matrix, one observation per row. Entries are finite.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }

private:
    Matrix values_;
};

/// Scaled residuals Y_j = S^{-1/2}(X_j - mean) together with the moments used to build them.
///
/// The covariance uses the divisor n, not n - 1. Every statistic in this library is a
/// function of the residuals alone, which is what makes them affine invariant.
struct StandardizedSample {
    Matrix residuals;  ///< n x d, row j is Y_j
    Vector mean;
    Matrix covariance;
    Matrix inv_sqrt;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(residuals.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(residuals.cols()); }
};

inline constexpr double kDefaultSingularTolerance = 1e-12;

[[nodiscard]] Vector sample_mean(const DataMatrix& data);

/// (1/n) sum (X_j - mean)(X_j - mean)^T. Requires n >= 2.
[[nodiscard]] Matrix sample_covariance(const DataMatrix& data);

/// Symmetric inverse square root Q diag(lambda^{-1/2}) Q^T.
///
/// Throws SingularCovariance when the smallest eigenvalue is at most
/// rel_tol times the largest one.
[[nodiscard]] Matrix spd_inverse_sqrt(const Matrix& s, double rel_tol = kDefaultSingularTolerance);

/// Requires n >= d + 1 and a nonsingular covariance.
[[nodiscard]] StandardizedSample scaled_residuals(const DataMatrix& data);

/// Residuals-only fast path used inside Monte Carlo loops.
[[nodiscard]] Matrix standardize_rows(const Matrix& x);

}  // namespace normtest
