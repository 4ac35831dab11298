#pragma once

#include <cstddef>

#include "normtest/common.hpp"
#include "normtest/quadrature.hpp"
#include "normtest/standardize.hpp"

namespace normtest {

/// Value of the harmonic-oscillator statistic together with its provenance.
struct StatisticValue {
    double value = 0.0;   ///< T_{n,a} >= 0
    double scaled = 0.0;  ///< d^{-2} (a/pi)^{d/2} T_{n,a}, the scale used for critical values
    std::size_t n = 0;
    std::size_t d = 0;
    double a = 0.0;
};

/// d^{-2} (a/pi)^{d/2}.
[[nodiscard]] double scale_factor(std::size_t d, double a);

/// Closed-form T_{n,a}: a pairwise Gaussian sum, a per-observation sum and a constant.
[[nodiscard]] StatisticValue t_statistic(const StandardizedSample& sample, TuningParameter a);

/// T_{n,a} from scaled residuals (one per row). Uses the threaded pair-sum kernel.
[[nodiscard]] double t_statistic_value(const Matrix& residuals, double a);

/// Same quantity evaluated with plain serial loops; used to test the fast path.
[[nodiscard]] double t_statistic_reference(const Matrix& residuals, double a);

/// n * integral of |Laplacian of the empirical CF minus that of the N(0, I) CF|^2 exp(-a||t||^2),
/// evaluated on a tensor Gauss–Hermite rule. Supports d <= 3; testing oracle only.
[[nodiscard]] double t_statistic_quadrature(const StandardizedSample& sample, TuningParameter a,
                                            const QuadratureSpec& grid = {});
[[nodiscard]] double t_statistic_quadrature(const Matrix& residuals, double a, const QuadratureSpec& grid = {});

/// ||n^{-1} sum ||Y_j||^2 Y_j||^2, skewness in the sense of Mori, Rohatgi and Szekely.
[[nodiscard]] double mrs_skewness(const Matrix& residuals);
/// n^{-2} sum_{j,k} (Y_j^T Y_k)^3, Mardia's skewness.
[[nodiscard]] double mardia_skewness(const Matrix& residuals);
/// n^{-1} sum ||Y_j||^4, Mardia's kurtosis.
[[nodiscard]] double mardia_kurtosis(const Matrix& residuals);

/// exp(-||t||^2 / 2), the N(0, I) characteristic function.
[[nodiscard]] double normal_cf(const Vector& t);
/// cos(t^T x) + sin(t^T x)
[[nodiscard]] double cs_plus(const Vector& t, const Vector& x);
/// cos(t^T x) - sin(t^T x)
[[nodiscard]] double cs_minus(const Vector& t, const Vector& x);

}  // namespace normtest
