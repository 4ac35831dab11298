#include "normtest/simulation.hpp"

#include <algorithm>

#include "normtest/inference.hpp"
#include "normtest/nulldist.hpp"
#include "normtest/parallel.hpp"

namespace normtest {

std::vector<double> alternative_replicates(const AlternativeSpec& spec, std::size_t n, const CompetitorSpec& stat,
                                           std::uint64_t first, std::size_t count, std::uint64_t seed) {
    validate(spec);
    stat.check(spec.dim);
    return run_replications(first, count, [&](std::uint64_t i) {
        Rng rng = substream(seed, StreamFamily::AlternativeReplicate, i);
        return evaluate(stat, sample_matrix(spec, n, rng));
    });
}

double simulated_critical_value(const CompetitorSpec& stat, std::size_t d, std::size_t n, double alpha,
                                std::size_t replications, std::uint64_t seed) {
    stat.check(d);
    std::vector<double> values =
        null_replicates(d, n, 0, replications, seed, [&stat](const Matrix& raw) { return evaluate(stat, raw); });
    std::sort(values.begin(), values.end());
    return critical_value(values, alpha);
}

double rejection_rate(const std::vector<double>& values, double critical) {
    if (values.empty()) {
        return 0.0;
    }
    const auto hits = std::count_if(values.begin(), values.end(), [critical](double v) { return v > critical; });
    return static_cast<double>(hits) / static_cast<double>(values.size());
}

CoverageResult coverage_study(const AlternativeSpec& spec, std::size_t n, double a, double alpha, double true_delta,
                              std::size_t replications, std::uint64_t seed) {
    validate(spec);
    std::vector<double> widths(replications, 0.0);
    std::vector<char> clipped(replications, 0);
    const auto hits = run_replications(0, replications, [&](std::uint64_t i) {
        Rng rng = substream(seed, StreamFamily::AlternativeReplicate, i);
        const StandardizedSample s = scaled_residuals(DataMatrix(sample_matrix(spec, n, rng)));
        const DeltaEstimate est = estimate_delta(s, TuningParameter(a));
        const ConfidenceInterval ci = confidence_interval(est, alpha);
        widths[i] = ci.upper - ci.lower;
        clipped[i] = est.sigma_clipped ? 1 : 0;
        return (ci.lower <= true_delta && true_delta <= ci.upper) ? 1.0 : 0.0;
    });
    CoverageResult r;
    r.replications = replications;
    for (std::size_t i = 0; i < replications; ++i) {
        r.coverage += hits[i];
        r.mean_width += widths[i];
        r.clipped += static_cast<std::size_t>(clipped[i]);
    }
    if (replications > 0) {
        r.coverage /= static_cast<double>(replications);
        r.mean_width /= static_cast<double>(replications);
    }
    return r;
}

}  // namespace normtest
