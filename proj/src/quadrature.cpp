#include "normtest/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace normtest {

GaussHermiteRule gauss_hermite(std::size_t count) {
    if (count == 0) {
        throw InvalidArgument("Gauss-Hermite rule needs at least one node");
    }
    const auto n = static_cast<Eigen::Index>(count);
    // Jacobi matrix of the Hermite recurrence for weight exp(-x^2).
    Matrix jacobi = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k) / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
    GaussHermiteRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double v0 = eig.eigenvectors()(0, k);
        rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
        rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
    }
    return rule;
}

TensorRule weighted_tensor_rule(std::size_t d, double a, const QuadratureSpec& spec, std::size_t max_dim) {
    if (d == 0 || d > max_dim) {
        throw UnsupportedDimension("quadrature oracle supports 1 <= d <= " + std::to_string(max_dim) +
                                   ", got d = " + std::to_string(d));
    }
    if (!(a > 0.0)) {
        throw InvalidArgument("weight parameter must be positive");
    }
    const GaussHermiteRule base = gauss_hermite(spec.nodes_per_dim);
    const std::size_t m = base.nodes.size();
    const double scale = 1.0 / std::sqrt(a);
    const double wmax = *std::max_element(base.weights.begin(), base.weights.end());
    const double cutoff = spec.weight_cutoff * std::pow(wmax, static_cast<double>(d));

    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        total *= m;
    }
    std::vector<double> kept_w;
    std::vector<std::size_t> kept_idx;
    std::vector<std::size_t> digits(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            digits[i] = rem % m;
            rem /= m;
            w *= base.weights[digits[i]];
        }
        if (w >= cutoff) {
            kept_w.push_back(w * std::pow(scale, static_cast<double>(d)));
            kept_idx.push_back(flat);
        }
    }
    TensorRule rule;
    rule.weights = std::move(kept_w);
    rule.nodes.resize(static_cast<Eigen::Index>(kept_idx.size()), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < kept_idx.size(); ++r) {
        std::size_t rem = kept_idx[r];
        for (std::size_t i = 0; i < d; ++i) {
            rule.nodes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = base.nodes[rem % m] * scale;
            rem /= m;
        }
    }
    return rule;
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, tolerance, &error);
    if (!std::isfinite(value)) {
        throw Error("numerical integration produced a non-finite value");
    }
    return value;
}

}  // namespace normtest
