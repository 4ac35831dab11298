#include "normtest/nulldist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "normtest/parallel.hpp"
#include "normtest/rng.hpp"
#include "normtest/samplers.hpp"
#include "normtest/standardize.hpp"

namespace normtest {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

}  // namespace

double kernel_K(const Vector& s, const Vector& t) {
    if (s.size() != t.size()) {
        throw InvalidArgument("kernel arguments must have the same dimension");
    }
    const double d = static_cast<double>(s.size());
    const double d2 = d + 2.0;
    const double d4 = d + 4.0;
    const double ss = s.squaredNorm();
    const double tt = t.squaredNorm();
    const double st = s.dot(t);
    const double diff = ss + tt - 2.0 * st;
    const double psi_diff = std::exp(-0.5 * diff);
    const double psi_st = std::exp(-0.5 * (ss + tt));
    const double first = psi_diff * ((diff - d2) * (diff - d2) - 2.0 * d2);
    const double second = -0.5 * st * st * (ss - d4) * (tt - d4) + 2.0 * d2 * (ss + tt) - ss * ss - tt * tt -
                          ss * tt - st * (ss - d2) * (tt - d2) - d * d2;
    return first + psi_st * second;
}

double h_function(const Vector& x, const Vector& t) {
    const double d = static_cast<double>(t.size());
    const double tt = t.squaredNorm();
    const double psi = std::exp(-0.5 * tt);
    const double m = (d - tt) * psi;
    const double xx = x.squaredNorm();
    const double tx = t.dot(x);
    return xx * (std::cos(tx) + std::sin(tx)) - (2.0 * psi + m) * tx - psi * xx +
           (2.0 * psi + 0.5 * m) * tx * tx - (psi + 0.5 * m) * tt;
}

std::vector<double> null_replicates(std::size_t d, std::size_t n, std::uint64_t first, std::size_t count,
                                    std::uint64_t seed, const SampleStatistic& stat) {
    return run_replications(first, count, [&](std::uint64_t i) {
        Rng rng = substream(seed, StreamFamily::NullReplicate, i);
        return stat(standard_normal_matrix(n, d, rng));
    });
}

std::vector<double> null_replicates_serial(std::size_t d, std::size_t n, std::uint64_t first, std::size_t count,
                                           std::uint64_t seed, const SampleStatistic& stat) {
    return run_replications_serial(first, count, [&](std::uint64_t i) {
        Rng rng = substream(seed, StreamFamily::NullReplicate, i);
        return stat(standard_normal_matrix(n, d, rng));
    });
}

SampleStatistic scaled_t_statistic(std::size_t d, double a) {
    const double scale = scale_factor(d, TuningParameter(a).value());
    return [scale, a](const Matrix& raw) { return scale * t_statistic_value(standardize_rows(raw), a); };
}

std::vector<double> mc_null_sample(std::size_t d, std::size_t n, double a, std::size_t replications,
                                   std::uint64_t seed) {
    if (d == 0 || n < d + 1) {
        throw InvalidArgument("null sampling needs d >= 1 and n >= d + 1");
    }
    std::vector<double> values = null_replicates(d, n, 0, replications, seed, scaled_t_statistic(d, a));
    std::sort(values.begin(), values.end());
    return values;
}

double critical_value(std::span<const double> sorted, double alpha) {
    check_alpha(alpha);
    if (sorted.empty()) {
        throw InvalidArgument("critical value of an empty sample");
    }
    const double target = (1.0 - alpha) * static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::ceil(target - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    return sorted[k - 1];
}

double pvalue_mc(double observed, std::span<const double> null_values) {
    const auto exceed = std::count_if(null_values.begin(), null_values.end(),
                                      [observed](double v) { return v >= observed; });
    return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(null_values.size()) + 1.0);
}

double pvalue_mc(const StatisticValue& observed, std::size_t replications, std::uint64_t seed) {
    const auto null = mc_null_sample(observed.d, observed.n, observed.a, replications, seed);
    return pvalue_mc(observed.scaled, null);
}

void LimitSamplerConfig::check() const {
    if (m < 2) {
        throw InvalidArgument("limit sampler needs at least two support points");
    }
    if (ell < 1) {
        throw InvalidArgument("limit sampler needs at least one replicate");
    }
    if (!(jitter >= 0.0) || !(psd_tolerance >= 0.0)) {
        throw InvalidArgument("jitter and tolerance must be nonnegative");
    }
}

Matrix kernel_matrix(const Matrix& support) {
    const Eigen::Index m = support.rows();
    Matrix k(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Vector ui = support.row(i).transpose();
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = kernel_K(ui, support.row(j).transpose());
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

Matrix limit_support(std::size_t d, double a, const LimitSamplerConfig& config) {
    config.check();
    const double sd = 1.0 / std::sqrt(2.0 * TuningParameter(a).value());
    Rng rng = substream(config.seed, StreamFamily::SupportPoints, 0);
    return sd * standard_normal_matrix(config.m, d, rng);
}

RepairedSpectrum repair_spectrum(const Matrix& sigma, const LimitSamplerConfig& config) {
    const Eigen::Index m = sigma.rows();
    Matrix work = sigma;
    const double trace = sigma.trace();
    if (trace > 0.0) {
        work.diagonal().array() += config.jitter * trace / static_cast<double>(m);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(work);
    if (eig.info() != Eigen::Success) {
        throw KernelNotPSD("eigendecomposition of the kernel matrix failed");
    }
    RepairedSpectrum out;
    out.most_negative = eig.eigenvalues().minCoeff();
    const double largest = std::max(0.0, eig.eigenvalues().maxCoeff());
    if (out.most_negative < -config.psd_tolerance * largest) {
        throw KernelNotPSD("kernel matrix has eigenvalue " + std::to_string(out.most_negative) +
                           " (largest " + std::to_string(largest) + ")");
    }
    out.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
    out.eigenvectors = eig.eigenvectors();
    return out;
}

std::vector<double> limit_sample_from_support(const Matrix& support, const LimitSamplerConfig& config) {
    config.check();
    const RepairedSpectrum spec = repair_spectrum(kernel_matrix(support), config);
    const double d = static_cast<double>(support.cols());
    const double norm = d * d * static_cast<double>(support.rows());
    const Vector& lambda = spec.eigenvalues;
    return run_replications(0, config.ell, [&](std::uint64_t j) {
        Rng rng = substream(config.seed, StreamFamily::LimitReplicate, j);
        std::normal_distribution<double> z(0.0, 1.0);
        double s = 0.0;
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            const double g = z(rng);
            s += lambda(i) * g * g;
        }
        return s / norm;
    });
}

std::vector<double> limit_sample_reference(const Matrix& support, const LimitSamplerConfig& config) {
    config.check();
    const RepairedSpectrum spec = repair_spectrum(kernel_matrix(support), config);
    const Matrix factor = spec.eigenvectors * spec.eigenvalues.cwiseSqrt().asDiagonal();
    const double d = static_cast<double>(support.cols());
    const double norm = d * d * static_cast<double>(support.rows());
    return run_replications_serial(0, config.ell, [&](std::uint64_t j) {
        Rng rng = substream(config.seed, StreamFamily::LimitReplicate, j);
        std::normal_distribution<double> z(0.0, 1.0);
        Vector g(factor.cols());
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            g(i) = z(rng);
        }
        return (factor * g).squaredNorm() / norm;
    });
}

double limit_quantile_from_support(const Matrix& support, double alpha, const LimitSamplerConfig& config) {
    check_alpha(alpha);
    std::vector<double> z = limit_sample_from_support(support, config);
    std::sort(z.begin(), z.end());
    return critical_value(z, alpha);
}

double limit_quantile(std::size_t d, double a, double alpha, const LimitSamplerConfig& config) {
    return limit_quantile_from_support(limit_support(d, a, config), alpha, config);
}

double expected_limit(std::size_t d, double a) {
    const double dd = static_cast<double>(d);
    const double av = TuningParameter(a).value();
    const auto c = [&](int j) { return std::pow(kPi, dd / 2.0) * dd / std::pow(av + 1.0, dd / 2.0 + j); };
    return dd * (dd + 2.0) * (std::pow(kPi / av, dd / 2.0) - std::pow(kPi / (av + 1.0), dd / 2.0)) -
           c(4) * (dd + 2.0) * (dd + 4.0) * (dd + 6.0) / 32.0 + c(3) * (dd + 2.0) * (dd + 3.0) * (dd + 4.0) / 8.0 -
           c(2) * (dd + 2.0) * (dd * dd + 4.0 * dd + 14.0) / 8.0 - c(1) * (dd - 2.0) * (dd + 2.0) / 2.0;
}

const CriticalValueEntry* CriticalValueTable::find(std::size_t d, std::optional<std::size_t> n, double a,
                                                   double alpha) const {
    for (const auto& e : entries) {
        if (e.d == d && e.n == n && e.a == a && e.alpha == alpha) {
            return &e;
        }
    }
    return nullptr;
}

}  // namespace normtest
