#include "normtest/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "normtest/kernels.hpp"

namespace normtest {

namespace {

constexpr double kPi = std::numbers::pi;

struct Parts {
    double single = 0.0;
    double constant = 0.0;
};

// Everything except the pairwise sum, which the caller supplies.
Parts non_pair_terms(const Vector& r2, std::size_t d, double a) {
    const double dd = static_cast<double>(d);
    const double b = 2.0 * a + 1.0;
    double single = 0.0;
    for (Eigen::Index j = 0; j < r2.size(); ++j) {
        single += r2(j) * (r2(j) + 2.0 * dd * a * b) * std::exp(-0.5 * r2(j) / b);
    }
    Parts p;
    p.single = 2.0 * std::pow(2.0 * kPi, dd / 2.0) / std::pow(b, 2.0 + dd / 2.0) * single;
    p.constant = static_cast<double>(r2.size()) * std::pow(kPi, dd / 2.0) / std::pow(a + 1.0, 2.0 + dd / 2.0) *
                 (a * (a + 1.0) * dd * dd + dd * (dd + 2.0) / 4.0);
    return p;
}

double assemble(double pair_sum, const Vector& r2, std::size_t d, double a) {
    const double n = static_cast<double>(r2.size());
    const double diag = r2.squaredNorm();
    const double first = std::pow(kPi / a, static_cast<double>(d) / 2.0) / n * (diag + 2.0 * pair_sum);
    const Parts p = non_pair_terms(r2, d, a);
    return std::max(0.0, first - p.single + p.constant);
}

void check_a(double a) {
    (void)TuningParameter(a);
}

}  // namespace

double scale_factor(std::size_t d, double a) {
    const double dd = static_cast<double>(d);
    return std::pow(a / kPi, dd / 2.0) / (dd * dd);
}

double t_statistic_value(const Matrix& residuals, double a) {
    check_a(a);
    const Vector r2 = residuals.rowwise().squaredNorm();
    const double pair = kernels::gauss_pair_sum(residuals, r2, 1.0 / (4.0 * a));
    return assemble(pair, r2, static_cast<std::size_t>(residuals.cols()), a);
}

double t_statistic_reference(const Matrix& residuals, double a) {
    check_a(a);
    const Vector r2 = residuals.rowwise().squaredNorm();
    const double pair = kernels::gauss_pair_sum_serial(residuals, r2, 1.0 / (4.0 * a));
    return assemble(pair, r2, static_cast<std::size_t>(residuals.cols()), a);
}

StatisticValue t_statistic(const StandardizedSample& sample, TuningParameter a) {
    StatisticValue out;
    out.n = sample.size();
    out.d = sample.dim();
    out.a = a.value();
    out.value = t_statistic_value(sample.residuals, a.value());
    out.scaled = scale_factor(out.d, out.a) * out.value;
    return out;
}

double t_statistic_quadrature(const Matrix& residuals, double a, const QuadratureSpec& grid) {
    check_a(a);
    const auto d = static_cast<std::size_t>(residuals.cols());
    const TensorRule rule = weighted_tensor_rule(d, a, grid);
    const Vector r2 = residuals.rowwise().squaredNorm();
    const double n = static_cast<double>(residuals.rows());
    double total = 0.0;
    for (std::size_t g = 0; g < rule.size(); ++g) {
        const Vector t = rule.nodes.row(static_cast<Eigen::Index>(g)).transpose();
        const double tt = t.squaredNorm();
        double c = 0.0;
        double s = 0.0;
        for (Eigen::Index j = 0; j < residuals.rows(); ++j) {
            const double arg = residuals.row(j).dot(t);
            c += r2(j) * std::cos(arg);
            s += r2(j) * std::sin(arg);
        }
        c /= n;
        s /= n;
        const double re = c + (tt - static_cast<double>(d)) * std::exp(-0.5 * tt);
        total += rule.weights[g] * (re * re + s * s);
    }
    return n * total;
}

double t_statistic_quadrature(const StandardizedSample& sample, TuningParameter a, const QuadratureSpec& grid) {
    return t_statistic_quadrature(sample.residuals, a.value(), grid);
}

double mrs_skewness(const Matrix& residuals) {
    const Vector r2 = residuals.rowwise().squaredNorm();
    const Vector m = (residuals.transpose() * r2) / static_cast<double>(residuals.rows());
    return m.squaredNorm();
}

double mardia_skewness(const Matrix& residuals) {
    const Eigen::Index n = residuals.rows();
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector g = residuals * residuals.row(j).transpose();
        total += g.array().cube().sum();
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

double mardia_kurtosis(const Matrix& residuals) {
    return residuals.rowwise().squaredNorm().array().square().mean();
}

double normal_cf(const Vector& t) {
    return std::exp(-0.5 * t.squaredNorm());
}

double cs_plus(const Vector& t, const Vector& x) {
    const double u = t.dot(x);
    return std::cos(u) + std::sin(u);
}

double cs_minus(const Vector& t, const Vector& x) {
    const double u = t.dot(x);
    return std::cos(u) - std::sin(u);
}

}  // namespace normtest
