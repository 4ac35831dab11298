#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "normtest/statistic.hpp"
#include "test_support.hpp"

using namespace normtest;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix pm_one() {
    Matrix y(2, 1);
    y << -1.0, 1.0;
    return y;
}

double brute_mrs(const Matrix& y) {
    const double n = static_cast<double>(y.rows());
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        for (Eigen::Index k = 0; k < y.rows(); ++k) {
            s += y.row(j).squaredNorm() * y.row(k).squaredNorm() * y.row(j).dot(y.row(k));
        }
    }
    return s / (n * n);
}

double brute_mardia(const Matrix& y) {
    const double n = static_cast<double>(y.rows());
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        for (Eigen::Index k = 0; k < y.rows(); ++k) {
            s += std::pow(y.row(j).dot(y.row(k)), 3);
        }
    }
    return s / (n * n);
}

}  // namespace

TEST_CASE("hand-evaluated value for the two-point sample", "[statistic]") {
    const double term1 = std::sqrt(kPi) * (1.0 + std::exp(-1.0));
    const double term2 = 2.0 * (2.0 * std::sqrt(2.0 * kPi) / std::pow(3.0, 2.5)) * 7.0 * std::exp(-1.0 / 6.0);
    const double term3 = 2.0 * (std::sqrt(kPi) / std::pow(2.0, 2.5)) * 2.75;
    const double oracle = term1 - term2 + term3;
    CHECK_THAT(oracle, WithinAbs(0.33657, 5e-5));

    const double t = t_statistic_value(pm_one(), 1.0);
    CHECK_THAT(t, WithinRel(oracle, 1e-13));
    CHECK_THAT(t * scale_factor(1, 1.0), WithinAbs(0.18989, 5e-5));
    CHECK(testing::rel_diff(t_statistic_quadrature(pm_one(), 1.0), oracle) < 1e-6);
}

TEST_CASE("closed form agrees with the quadrature oracle", "[statistic][oracle]") {
    const auto d = GENERATE(1, 2);
    const auto n = GENERATE(10, 30);
    const auto a = GENERATE(0.5, 1.0, 2.0);
    const Matrix y = standardize_rows(testing::normal_sample(static_cast<std::size_t>(n), static_cast<std::size_t>(d),
                                                             static_cast<std::uint64_t>(100 * d + n)));
    const double closed = t_statistic_value(y, a);
    CHECK(testing::rel_diff(closed, t_statistic_quadrature(y, a)) < 1e-5);
}

TEST_CASE("closed form agrees with quadrature in three dimensions", "[statistic][oracle]") {
    const Matrix y = standardize_rows(testing::normal_sample(8, 3, 77));
    QuadratureSpec grid;
    grid.nodes_per_dim = 40;
    CHECK(testing::rel_diff(t_statistic_value(y, 1.5), t_statistic_quadrature(y, 1.5, grid)) < 1e-5);
    const Matrix y4 = standardize_rows(testing::normal_sample(8, 4, 77));
    CHECK_THROWS_AS(t_statistic_quadrature(y4, 1.0), UnsupportedDimension);
}

TEST_CASE("fast path matches the serial reference", "[statistic]") {
    const Matrix y = standardize_rows(testing::normal_sample(500, 3, 4));
    for (double a : {0.1, 1.0, 5.0}) {
        // T is a difference of terms of order n (pi/a)^{d/2} d^2; compare on that scale.
        const double scale = 500.0 * std::pow(kPi / a, 1.5) * 9.0;
        CHECK(std::abs(t_statistic_value(y, a) - t_statistic_reference(y, a)) < 1e-12 * scale);
    }
}

TEST_CASE("statistic is nonnegative and scaled consistently", "[statistic][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix x = testing::normal_sample(6, 2, seed);
        const auto v = t_statistic(scaled_residuals(DataMatrix(x)), TuningParameter(0.3 + 0.2 * seed));
        CHECK(v.value >= 0.0);
        CHECK_THAT(v.scaled, WithinRel(v.value * scale_factor(2, v.a), 1e-15));
    }
}

TEST_CASE("statistic is affine invariant", "[statistic][property]") {
    const Matrix x = testing::normal_sample(30, 3, 8);
    const Matrix a = testing::random_invertible(3, 9);
    Matrix z = x * a.transpose();
    z.rowwise() += Eigen::RowVector3d(5.0, -1.0, 2.0);
    const double t1 = t_statistic(scaled_residuals(DataMatrix(x)), TuningParameter(1.0)).value;
    const double t2 = t_statistic(scaled_residuals(DataMatrix(z)), TuningParameter(1.0)).value;
    CHECK(testing::rel_diff(t1, t2) < 1e-8);
}

TEST_CASE("small-a limit is the kurtosis", "[statistic][limit]") {
    SECTION("d = 2, 3 and 5 at a = 1e-8") {
        for (std::size_t d : {2U, 3U, 5U}) {
            const Matrix y = standardize_rows(testing::normal_sample(25, d, 40 + d));
            const double a = 1e-8;
            const double lhs = std::pow(a / kPi, 0.5 * static_cast<double>(d)) * t_statistic_value(y, a);
            CHECK_THAT(lhs, WithinAbs(mardia_kurtosis(y), 1e-6));
        }
    }
    SECTION("d = 1 converges only at smaller a") {
        const Matrix y = standardize_rows(testing::normal_sample(25, 1, 41));
        const double a = 1e-16;
        const double lhs = std::sqrt(a / kPi) * t_statistic_value(y, a);
        CHECK_THAT(lhs, WithinAbs(mardia_kurtosis(y), 1e-6));
    }
}

TEST_CASE("large-a limit is the skewness of Mori, Rohatgi and Szekely", "[statistic][limit]") {
    const std::size_t d = 2;
    const Matrix y = standardize_rows(testing::normal_sample(15, d, 50));
    const double target = mrs_skewness(y);
    double previous = std::numeric_limits<double>::infinity();
    for (double a : {1e4, 1e5, 1e6}) {
        const double norm = 2.0 * std::pow(a, 0.5 * d + 1.0) / (15.0 * std::pow(kPi, 0.5 * d));
        const double gap = std::abs(norm * t_statistic_value(y, a) - target);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-3 * std::max(1.0, target));
}

TEST_CASE("moment statistics agree with direct sums", "[statistic]") {
    const Matrix y = standardize_rows(testing::normal_sample(40, 3, 60));
    CHECK(testing::rel_diff(mrs_skewness(y), brute_mrs(y)) < 1e-12);
    CHECK(testing::rel_diff(mardia_skewness(y), brute_mardia(y)) < 1e-12);
    double kurt = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        kurt += std::pow(y.row(j).squaredNorm(), 2);
    }
    CHECK(testing::rel_diff(mardia_kurtosis(y), kurt / 40.0) < 1e-13);
    CHECK(mardia_kurtosis(y) >= 9.0 - 1e-9);
}

TEST_CASE("symmetric samples have zero skewness", "[statistic]") {
    Matrix y3(3, 1);
    y3 << -std::sqrt(1.5), 0.0, std::sqrt(1.5);
    for (const Matrix& y : {pm_one(), y3}) {
        CHECK_THAT(mrs_skewness(y), WithinAbs(0.0, 1e-15));
        CHECK_THAT(mardia_skewness(y), WithinAbs(0.0, 1e-15));
    }
    CHECK_THAT(mardia_kurtosis(pm_one()), WithinAbs(1.0, 1e-15));
}

TEST_CASE("characteristic-function helpers", "[statistic]") {
    Vector t(2);
    t << 0.3, -0.4;
    Vector x(2);
    x << 1.0, 2.0;
    const double arg = t.dot(x);
    CHECK_THAT(normal_cf(t), WithinRel(std::exp(-0.125), 1e-15));
    CHECK_THAT(cs_plus(t, x), WithinRel(std::cos(arg) + std::sin(arg), 1e-15));
    CHECK_THAT(cs_minus(t, x), WithinRel(std::cos(arg) - std::sin(arg), 1e-15));
}

TEST_CASE("invalid tuning parameters are rejected", "[statistic]") {
    CHECK_THROWS_AS(TuningParameter(0.0), InvalidArgument);
    CHECK_THROWS_AS(TuningParameter(-1.0), InvalidArgument);
    CHECK_THROWS_AS(TuningParameter(std::numeric_limits<double>::infinity()), InvalidArgument);
}
