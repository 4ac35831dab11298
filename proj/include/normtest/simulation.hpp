#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "normtest/competitors.hpp"
#include "normtest/samplers.hpp"

namespace normtest {

/// Statistic values on `count` samples of size n drawn from `spec`, replications
/// first .. first+count-1, in replication order. Every statistic evaluated with the same
/// seed sees the same samples.
[[nodiscard]] std::vector<double> alternative_replicates(const AlternativeSpec& spec, std::size_t n,
                                                         const CompetitorSpec& stat, std::uint64_t first,
                                                         std::size_t count, std::uint64_t seed);

/// Monte Carlo (1 - alpha) quantile of a statistic under N_d(0, I).
[[nodiscard]] double simulated_critical_value(const CompetitorSpec& stat, std::size_t d, std::size_t n, double alpha,
                                              std::size_t replications, std::uint64_t seed);

/// Fraction of values strictly above the critical value.
[[nodiscard]] double rejection_rate(const std::vector<double>& values, double critical);

struct CoverageResult {
    double coverage = 0.0;    ///< fraction of intervals containing the true Delta_a
    double mean_width = 0.0;
    std::size_t replications = 0;
    std::size_t clipped = 0;  ///< replications whose variance estimate was clipped at zero
};

/// Coverage of the asymptotic confidence interval for Delta_a under `spec`.
[[nodiscard]] CoverageResult coverage_study(const AlternativeSpec& spec, std::size_t n, double a, double alpha,
                                            double true_delta, std::size_t replications, std::uint64_t seed);

}  // namespace normtest
