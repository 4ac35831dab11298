#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "normtest/inference.hpp"
#include "normtest/normal.hpp"
#include "normtest/samplers.hpp"
#include "normtest/statistic.hpp"
#include "test_support.hpp"

using namespace normtest;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    std::copy(v.begin(), v.end(), out.data());
    return out;
}

Matrix sample_y(std::size_t n, std::size_t d, std::uint64_t seed) {
    return standardize_rows(testing::normal_sample(n, d, seed));
}

// Integral of f(t) against exp(-a||t||^2) on a fine tensor rule.
template <class F>
auto weighted_integral(std::size_t d, double a, F f) {
    QuadratureSpec spec;
    spec.nodes_per_dim = d == 1 ? 160 : 100;
    const TensorRule rule = weighted_tensor_rule(d, a, spec);
    decltype(f(Vector())) acc = f(Vector::Zero(static_cast<Eigen::Index>(d))) * 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        acc += rule.weights[i] * f(Vector(rule.nodes.row(static_cast<Eigen::Index>(i)).transpose()));
    }
    return acc;
}

// Aggregates evaluated term by term with plain loops. The last per-observation
// aggregate takes p2 with its arguments in the order the double integral produces.
PAggregates naive_aggregates(const Matrix& y, double a) {
    const Eigen::Index n = y.rows();
    const Eigen::Index d = y.cols();
    const double nn = static_cast<double>(n);
    auto row = [&](Eigen::Index j) { return Vector(y.row(j).transpose()); };
    auto r = [&](Eigen::Index j) { return y.row(j).squaredNorm(); };

    PAggregates p;
    p.p1a1_tilde = Vector::Zero(d);
    p.p1a2_tilde = Vector::Zero(d);
    p.p2a_tilde = Vector::Zero(d);
    p.p1a_bar = Matrix::Zero(d, d);
    p.p1a2_of = Vector::Zero(n);
    p.p1a3_of = Vector::Zero(n);
    p.p2a3_of = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double pp = p1(row(j), row(k), a);
            const Vector p2v = p2(row(j), row(k), a);
            p.p1a1 += r(j) * r(k) * pp / (nn * nn);
            p.p1a1_tilde += r(j) * r(k) * pp * row(k) / (nn * nn);
            p.p1a2_tilde += r(j) * pp * row(k) / (nn * nn);
            p.p1a_bar += r(j) * r(k) * pp * row(k) * row(k).transpose() / (nn * nn);
            p.p2a1 += r(j) * r(k) * row(k).dot(p2v) / (nn * nn);
            p.p2a_tilde += r(j) * r(k) * p2v / (nn * nn);
        }
        p.p1a1 -= r(j) * q1(row(j), a) / nn;
        p.p1a1_tilde -= r(j) * q1(row(j), a) * row(j) / nn;
        p.p1a2_tilde -= q1(row(j), a) * row(j) / nn;
        p.p1a_bar -= r(j) * row(j) * row(j).transpose() * q1(row(j), a) / nn;
        p.p2a1 -= r(j) * row(j).dot(q2(row(j), a)) / nn;
        p.p2a_tilde -= r(j) * q2(row(j), a) / nn;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            p.p2a2 += r(j) * r(k) * row(k).dot(p.p1a_bar * p2(row(j), row(k), a)) / (nn * nn);
        }
        p.p2a2 -= r(j) * row(j).dot(p.p1a_bar * q2(row(j), a)) / nn;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector yj = row(j);
        for (Eigen::Index k = 0; k < n; ++k) {
            p.p1a3_of(j) += r(k) * p1(yj, row(k), a) / nn;
            for (Eigen::Index l = 0; l < n; ++l) {
                p.p1a2_of(j) += r(k) * std::pow(yj.dot(row(l)), 2) * p1(row(k), row(l), a) / (nn * nn);
                p.p2a3_of(j) += r(k) * r(l) * row(k).dot(yj) * yj.dot(p2(row(l), row(k), a)) / (nn * nn);
            }
            p.p1a2_of(j) -= std::pow(yj.dot(row(k)), 2) * q1(row(k), a) / nn;
            p.p2a3_of(j) -= r(k) * row(k).dot(yj) * yj.dot(q2(row(k), a)) / nn;
        }
        p.p1a3_of(j) -= q1(yj, a);
    }
    return p;
}

double vdiff(const Vector& x, const Vector& y) {
    return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("m function", "[inference]") {
    CHECK(m_func(Vector::Zero(3)) == 3.0);
    CHECK_THAT(m_func(vec({1.0, 1.0})), WithinAbs(0.0, 1e-16));
    const Vector t = vec({0.3, -1.2});
    CHECK_THAT(m_func(t), WithinRel((2.0 - 1.53) * std::exp(-0.765), 1e-14));
}

TEST_CASE("empirical z function", "[inference]") {
    const Matrix y = sample_y(30, 2, 1);
    CHECK_THAT(z_n(Vector::Zero(2), y), WithinAbs(0.0, 1e-13));
    Matrix pm(2, 1);
    pm << -1.0, 1.0;
    for (double s : {0.0, 0.4, 1.7}) {
        const double hand = std::cos(s) - (1.0 - s * s) * std::exp(-0.5 * s * s);
        CHECK_THAT(z_n(vec({s}), pm), WithinAbs(hand, 1e-15));
    }
    // An affine map x -> Ax + b rotates the residuals by O = (A S A^T)^{-1/2} A S^{1/2}.
    const Matrix x = testing::normal_sample(30, 2, 1);
    const Matrix a = testing::random_invertible(2, 3);
    Matrix z = x * a.transpose();
    z.rowwise() += Eigen::RowVector2d(1.0, 4.0);
    const Matrix sx = sample_covariance(DataMatrix(x));
    const Matrix sqrt_sx = spd_inverse_sqrt(sx).inverse();
    const Matrix o = spd_inverse_sqrt(a * sx * a.transpose()) * a * sqrt_sx;
    REQUIRE((o.transpose() * o - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    const Vector s = vec({0.5, -0.2});
    CHECK_THAT(z_n(o * s, standardize_rows(z)), WithinAbs(z_n(s, standardize_rows(x)), 1e-10));
}

TEST_CASE("psi estimators at the origin", "[inference]") {
    const Matrix y = sample_y(40, 3, 2);
    const PsiBundle psi = psi_estimators(y, Vector::Zero(3));
    CHECK(psi.psi1.cwiseAbs().maxCoeff() < 1e-13);
    CHECK((psi.psi2 - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THAT(psi.psi3_plus, WithinAbs(3.0, 1e-12));
    CHECK_THAT(psi.psi3_minus, WithinAbs(3.0, 1e-12));
    Matrix direct = Matrix::Zero(3, 3);
    for (Eigen::Index j = 0; j < 40; ++j) {
        direct += y.row(j).squaredNorm() * y.row(j).transpose() * y.row(j);
    }
    CHECK((psi.psi5 - direct / 40.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psi matrices are symmetric", "[inference]") {
    const Matrix y = sample_y(25, 2, 3);
    const PsiBundle psi = psi_estimators(y, vec({0.7, -0.4}));
    CHECK((psi.psi2 - psi.psi2.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((psi.psi5 - psi.psi5.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("third psi estimator approaches its normal-theory value", "[inference]") {
    const std::size_t n = 200000;
    const Matrix y = testing::normal_sample(n, 1, 4);
    const Vector t = vec({0.8});
    double mean = 0.0;
    double sq = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        const double v = cs_plus(t, y.row(j).transpose()) * y.row(j).squaredNorm();
        mean += v;
        sq += v * v;
    }
    mean /= static_cast<double>(n);
    const double se = std::sqrt((sq / static_cast<double>(n) - mean * mean) / static_cast<double>(n));
    CHECK_THAT(psi_estimators(y, t).psi3_plus, WithinAbs(mean, 1e-12));
    CHECK(std::abs(mean - m_func(t)) < 3.0 * se);
}

TEST_CASE("integral kernels: special values", "[inference]") {
    const Vector y = vec({0.4, -1.1});
    const Vector z = vec({-0.3, 0.8});
    for (double a : {0.1, 1.0}) {
        CHECK_THAT(p1(y, y, a), WithinRel(kPi / a, 1e-15));
        CHECK(p2(y, y, a).cwiseAbs().maxCoeff() == 0.0);
        CHECK(vdiff(p2(y, z, a), -p2(z, y, a)) < 1e-15);
        const double b = 2.0 * a + 1.0;
        CHECK_THAT(q1(Vector::Zero(2), a), WithinRel(2.0 * kPi * 4.0 * a * b / std::pow(b, 3.0), 1e-14));
    }
}

TEST_CASE("integral kernels agree with their defining integrals", "[inference][oracle]") {
    const auto d = GENERATE(1U, 2U);
    const auto a = GENERATE(0.3, 1.0);
    const Vector y = testing::normal_sample(1, d, 10 + d).row(0).transpose();
    const Vector z = testing::normal_sample(1, d, 20 + d).row(0).transpose();
    const double q1_quad = weighted_integral(d, a, [&](const Vector& t) { return m_func(t) * cs_plus(t, y); });
    const double p1_quad = weighted_integral(d, a, [&](const Vector& t) { return cs_plus(t, y) * cs_plus(t, z); });
    const Vector p2_quad =
        weighted_integral(d, a, [&](const Vector& t) -> Vector { return cs_plus(t, y) * cs_minus(t, z) * t; });
    const Vector q2_quad = weighted_integral(d, a, [&](const Vector& t) -> Vector { return m_func(t) * cs_minus(t, y) * t; });
    CHECK_THAT(q1(y, a), WithinAbs(q1_quad, 1e-6));
    CHECK_THAT(p1(y, z, a), WithinAbs(p1_quad, 1e-6));
    CHECK(vdiff(p2(y, z, a), p2_quad) < 1e-6);
    CHECK(vdiff(q2(y, a), q2_quad) < 1e-6);
}

TEST_CASE("aggregates agree with naive loops", "[inference][oracle]") {
    const auto d = GENERATE(1U, 2U, 3U);
    const double a = 0.7;
    const Matrix y = sample_y(12, d, 30 + d);
    const PAggregates fast = p_aggregates(y, a);
    const PAggregates slow = naive_aggregates(y, a);
    const double tol = 1e-11;
    CHECK_THAT(fast.p1a1, WithinAbs(slow.p1a1, tol));
    CHECK(vdiff(fast.p1a1_tilde, slow.p1a1_tilde) < tol);
    CHECK(vdiff(fast.p1a2_tilde, slow.p1a2_tilde) < tol);
    CHECK(vdiff(fast.p2a_tilde, slow.p2a_tilde) < tol);
    CHECK((fast.p1a_bar - slow.p1a_bar).cwiseAbs().maxCoeff() < tol);
    CHECK(vdiff(fast.p1a2_of, slow.p1a2_of) < tol);
    CHECK(vdiff(fast.p1a3_of, slow.p1a3_of) < tol);
    CHECK(vdiff(fast.p2a3_of, slow.p2a3_of) < tol);
    CHECK_THAT(fast.p2a1, WithinAbs(slow.p2a1, tol));
    CHECK_THAT(fast.p2a2, WithinAbs(slow.p2a2, tol));
}

TEST_CASE("per-observation aggregate for the two-point sample", "[inference]") {
    Matrix y(2, 1);
    y << -1.0, 1.0;
    const double a = 0.5;
    const PAggregates p = p_aggregates(y, a);
    for (Eigen::Index j = 0; j < 2; ++j) {
        const Vector yj = y.row(j).transpose();
        const double hand = 0.5 * (p1(yj, vec({-1.0}), a) + p1(yj, vec({1.0}), a)) - q1(yj, a);
        CHECK_THAT(p.p1a3_of(j), WithinRel(hand, 1e-14));
    }
}

TEST_CASE("kernel blocks: simplified forms against definitions", "[inference][oracle]") {
    const Matrix y = sample_y(15, 2, 40);
    const Vector s = vec({0.3, -0.6});
    const Vector t = vec({-0.9, 0.2});
    for (int i = 1; i <= 4; ++i) {
        for (int j = i; j <= 4; ++j) {
            INFO("block " << i << "," << j);
            const double closed = ln_block_closed(i, j, s, t, y);
            const double direct = (i == 3 && j == 4) ? ln_block(3, 4, s, t, y) : ln_block(j, i, s, t, y);
            CHECK_THAT(closed, WithinAbs(direct, 1e-12));
        }
    }
    CHECK_THROWS_AS(ln_block_closed(2, 1, s, t, y), InvalidArgument);
}

TEST_CASE("empirical covariance kernel is symmetric", "[inference]") {
    const Matrix y = sample_y(15, 2, 41);
    const Vector s = vec({0.3, -0.6});
    const Vector t = vec({-0.9, 0.2});
    CHECK_THAT(ln_total(s, t, y), WithinAbs(ln_total(t, s, y), 1e-10));
}

TEST_CASE("variance estimate agrees with double quadrature", "[inference][oracle]") {
    const auto a = GENERATE(0.1, 0.5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Matrix y = sample_y(20, 1, 50 + seed);
        const double closed = sigma_hat_sq(y, a).raw;
        CHECK(testing::rel_diff(closed, sigma_hat_sq_quadrature(y, a)) < 1e-3);
    }
}

TEST_CASE("variance estimate agrees with double quadrature in two dimensions", "[inference][oracle]") {
    const Matrix y = sample_y(10, 2, 60);
    QuadratureSpec grid;
    grid.nodes_per_dim = 40;
    CHECK(testing::rel_diff(sigma_hat_sq(y, 1.0).raw, sigma_hat_sq_quadrature(y, 1.0, grid)) < 1e-3);
    CHECK_THROWS_AS(sigma_hat_sq_quadrature(sample_y(10, 3, 61), 1.0), UnsupportedDimension);
}

TEST_CASE("quadrature error shrinks with grid refinement", "[inference][oracle]") {
    const Matrix y = sample_y(20, 1, 62);
    const double closed = sigma_hat_sq(y, 0.5).raw;
    QuadratureSpec coarse;
    coarse.nodes_per_dim = 12;
    QuadratureSpec fine;
    fine.nodes_per_dim = 24;
    const double e1 = std::abs(sigma_hat_sq_quadrature(y, 0.5, coarse) - closed);
    const double e2 = std::abs(sigma_hat_sq_quadrature(y, 0.5, fine) - closed);
    CHECK(e2 <= 0.5 * e1);
}

TEST_CASE("variance estimate stabilises under normality", "[inference]") {
    for (std::size_t n : {100U, 400U, 1600U}) {
        const SigmaEstimate e = sigma_hat_sq(sample_y(n, 1, 70 + n), 0.5);
        CHECK(std::isfinite(e.raw));
        CHECK(e.value >= 0.0);
    }
}

TEST_CASE("confidence interval and validation test", "[inference]") {
    DeltaEstimate est;
    est.delta_hat = 0.3;
    est.sigma_hat = 0.0;
    est.n = 100;
    const ConfidenceInterval degenerate = confidence_interval(est, 0.05);
    CHECK(degenerate.lower == 0.3);
    CHECK(degenerate.upper == 0.3);

    est.sigma_hat = 2.0;
    const ConfidenceInterval ci = confidence_interval(est, 0.05);
    CHECK_THAT(ci.upper - ci.lower, WithinRel(2.0 * normal_quantile(0.975) * 2.0 / 10.0, 1e-14));

    const ValidationDecision at_bound = validation_test(est, 0.3, 0.05);
    CHECK_FALSE(at_bound.reject);
    CHECK(at_bound.threshold < 0.3);

    DeltaEstimate zero = est;
    zero.delta_hat = 0.0;
    zero.n = 100000;
    CHECK(validation_test(zero, 0.1, 0.05).reject);
}

TEST_CASE("interval width shrinks like the inverse square root of n", "[inference][property]") {
    const AlternativeSpec u = parse_alternative("uniform", 1);
    const auto width = [&](std::size_t n) {
        const DeltaEstimate est = estimate_delta(scaled_residuals(sample(u, n, 5)), TuningParameter(0.1));
        const ConfidenceInterval ci = confidence_interval(est, 0.05);
        return ci.upper - ci.lower;
    };
    CHECK_THAT(width(1600) / width(400), WithinAbs(0.5, 0.1));
}

TEST_CASE("validation test is consistent under normality", "[inference]") {
    const AlternativeSpec normal = parse_alternative("normal", 1);
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const DeltaEstimate est = estimate_delta(scaled_residuals(sample(normal, 400, seed)), TuningParameter(1.0));
        rejections += validation_test(est, 0.1, 0.05).reject ? 1 : 0;
    }
    CHECK(rejections >= 45);
}

TEST_CASE("distance to normality for univariate laws", "[inference]") {
    CHECK_THAT(delta_a_univariate(cf2_normal, 0.1), WithinAbs(0.0, 1e-14));
    CHECK_THAT(delta_a_univariate(cf2_normal, 2.0), WithinAbs(0.0, 1e-14));
    CHECK_THAT(delta_a_univariate(cf2_uniform, 0.1), WithinAbs(0.3322, 0.002));
    CHECK_THAT(delta_a_univariate(cf2_laplace, 0.1), WithinAbs(0.127, 0.002));
    CHECK_THAT(delta_a_univariate(cf2_logistic, 0.1), WithinAbs(0.033, 0.002));
}

TEST_CASE("second derivatives of characteristic functions", "[inference]") {
    // Central differences of the closed-form characteristic functions.
    const auto second = [](auto cf, double t) {
        const double h = 1e-3;
        return (cf(t + h) - 2.0 * cf(t) + cf(t - h)) / (h * h);
    };
    const double s3 = std::sqrt(3.0);
    const auto cf_uniform = [s3](double t) { return std::sin(s3 * t) / (s3 * t); };
    const auto cf_laplace = [](double t) { return 1.0 / (1.0 + 0.5 * t * t); };
    const double sc = s3 / kPi;
    const auto cf_logistic = [sc](double t) { return kPi * sc * t / std::sinh(kPi * sc * t); };
    for (double t : {0.37, 1.3, 4.1}) {
        CHECK_THAT(cf2_uniform(t), WithinAbs(second(cf_uniform, t), 1e-6));
        CHECK_THAT(cf2_laplace(t), WithinAbs(second(cf_laplace, t), 1e-6));
        CHECK_THAT(cf2_logistic(t), WithinAbs(second(cf_logistic, t), 1e-6));
    }
    CHECK_THAT(cf2_uniform(0.0), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(cf2_laplace(0.0), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(cf2_logistic(0.0), WithinAbs(-1.0, 1e-14));
    CHECK(std::isfinite(cf2_logistic(60.0)));
}
