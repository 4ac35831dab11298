#pragma once

#include "normtest/common.hpp"

namespace normtest::kernels {

/// Sum over pairs j < k of w_j w_k exp(-c ||y_j - y_k||^2); y holds one point per row.
///
/// Rows are distributed over OpenMP workers; every row sum is computed by one worker in a
/// fixed order and the row sums are combined serially with compensated summation, so the
/// result does not depend on the number of workers.
[[nodiscard]] double gauss_pair_sum(const Matrix& y, const Vector& w, double c);

/// Plain double loop over all ordered pairs j != k, halved. Reference for gauss_pair_sum.
[[nodiscard]] double gauss_pair_sum_serial(const Matrix& y, const Vector& w, double c);

/// Per-row Gaussian-weighted sums over all k (including k = j):
///   sums(j)        = sum_k w_k exp(-c ||y_j - y_k||^2)
///   moments.row(j) = sum_k w_k exp(-c ||y_j - y_k||^2) y_k^T
struct RowSums {
    Vector sums;
    Matrix moments;
};

[[nodiscard]] RowSums gauss_row_sums(const Matrix& y, const Vector& w, double c);
[[nodiscard]] RowSums gauss_row_sums_serial(const Matrix& y, const Vector& w, double c);

}  // namespace normtest::kernels
