#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "normtest/common.hpp"
#include "normtest/statistic.hpp"

namespace normtest {

/// Covariance kernel of the Gaussian limit process of the standardized empirical process
/// under normality. s and t must have the same length d.
[[nodiscard]] double kernel_K(const Vector& s, const Vector& t);

/// Summand h(x, t) of the limit process at N(0, I) data; E[h(X,s) h(X,t)] = K(s,t).
[[nodiscard]] double h_function(const Vector& x, const Vector& t);

/// Statistic evaluated on one raw n x d sample.
using SampleStatistic = std::function<double(const Matrix& raw)>;

/// Replications first .. first+count-1 of `stat` on N_d(0, I) samples of size n, in
/// replication order. Replication i draws its data from its own substream only.
[[nodiscard]] std::vector<double> null_replicates(std::size_t d, std::size_t n, std::uint64_t first,
                                                  std::size_t count, std::uint64_t seed,
                                                  const SampleStatistic& stat);
[[nodiscard]] std::vector<double> null_replicates_serial(std::size_t d, std::size_t n, std::uint64_t first,
                                                         std::size_t count, std::uint64_t seed,
                                                         const SampleStatistic& stat);

/// Scaled T_{n,a} on one raw sample (standardizes first).
[[nodiscard]] SampleStatistic scaled_t_statistic(std::size_t d, double a);

/// Sorted scaled statistic values under the null.
[[nodiscard]] std::vector<double> mc_null_sample(std::size_t d, std::size_t n, double a, std::size_t replications,
                                                 std::uint64_t seed);

/// The ceil((1-alpha) N)-th order statistic of an ascending sample.
[[nodiscard]] double critical_value(std::span<const double> sorted, double alpha);

/// (1 + #{null >= observed}) / (R + 1); the null values need not be sorted.
[[nodiscard]] double pvalue_mc(double observed, std::span<const double> null_values);
[[nodiscard]] double pvalue_mc(const StatisticValue& observed, std::size_t replications, std::uint64_t seed);

/// Settings of the finite-dimensional approximation to the limit null distribution.
struct LimitSamplerConfig {
    std::size_t m = 1000;       ///< support points
    std::size_t ell = 100000;   ///< replicates
    std::uint64_t seed = 1;
    double jitter = 1e-10;      ///< diagonal jitter, relative to trace / m
    double psd_tolerance = 1e-8;  ///< allowed negative eigenvalue, relative to the largest one

    void check() const;
};

/// Symmetric matrix (K(U_i, U_j)) for support points given as rows.
[[nodiscard]] Matrix kernel_matrix(const Matrix& support);

/// m support points drawn from N_d(0, (2a)^{-1} I), one per row.
[[nodiscard]] Matrix limit_support(std::size_t d, double a, const LimitSamplerConfig& config);

/// Nonnegative eigenvalues of the kernel matrix after jitter and clipping, with eigenvectors.
struct RepairedSpectrum {
    Vector eigenvalues;
    Matrix eigenvectors;
    double most_negative = 0.0;  ///< smallest eigenvalue before clipping
};

/// Throws KernelNotPSD when an eigenvalue is below -psd_tolerance * largest.
[[nodiscard]] RepairedSpectrum repair_spectrum(const Matrix& sigma, const LimitSamplerConfig& config);

/// Replicates Z_j = ||X_j||^2 / (d^2 m), X_j ~ N_m(0, Sigma_K), in replicate order.
/// Uses ||X||^2 = sum lambda_i g_i^2, which needs only the eigenvalues.
[[nodiscard]] std::vector<double> limit_sample_from_support(const Matrix& support, const LimitSamplerConfig& config);

/// Same replicates, forming X_j = Q Lambda^{1/2} g_j explicitly. O(m^2) per replicate.
[[nodiscard]] std::vector<double> limit_sample_reference(const Matrix& support, const LimitSamplerConfig& config);

[[nodiscard]] double limit_quantile_from_support(const Matrix& support, double alpha, const LimitSamplerConfig& config);
[[nodiscard]] double limit_quantile(std::size_t d, double a, double alpha, const LimitSamplerConfig& config);

/// Closed-form mean of the limit null distribution of T_{n,a} (unscaled).
[[nodiscard]] double expected_limit(std::size_t d, double a);

/// One cell of a critical-value table; n == nullopt marks the limit (n = infinity).
struct CriticalValueEntry {
    std::size_t d = 1;
    std::optional<std::size_t> n;
    double a = 1.0;
    double alpha = 0.05;
    double quantile = 0.0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

struct CriticalValueTable {
    std::vector<CriticalValueEntry> entries;

    /// Entry with matching (d, n, a, alpha), if any.
    [[nodiscard]] const CriticalValueEntry* find(std::size_t d, std::optional<std::size_t> n, double a,
                                                 double alpha) const;
};

}  // namespace normtest
