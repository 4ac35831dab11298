#include <catch_amalgamated.hpp>

#include "normtest/standardize.hpp"
#include "test_support.hpp"

using namespace normtest;
using Catch::Matchers::WithinAbs;

TEST_CASE("residuals have zero mean and identity covariance", "[standardize]") {
    const auto d = GENERATE(1, 2, 4);
    const Matrix x = testing::normal_sample(40, static_cast<std::size_t>(d), 11) * 3.0 + Matrix::Constant(40, d, 2.0);
    const StandardizedSample s = scaled_residuals(DataMatrix(x));
    const Vector mean = s.residuals.colwise().mean();
    const Matrix cov = s.residuals.transpose() * s.residuals / 40.0;
    CHECK(mean.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((cov - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("covariance uses divisor n", "[standardize]") {
    Matrix x(4, 1);
    x << 1, 2, 3, 4;
    const Matrix s = sample_covariance(DataMatrix(x));
    CHECK_THAT(s(0, 0), WithinAbs(1.25, 1e-15));
}

TEST_CASE("inverse square root is symmetric and inverts the square", "[standardize]") {
    Matrix s(2, 2);
    s << 4, 1, 1, 3;
    const Matrix r = spd_inverse_sqrt(s);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((r * s * r - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("residuals are affine invariant up to rotation", "[standardize]") {
    const Matrix x = testing::normal_sample(30, 3, 5);
    const Matrix a = testing::random_invertible(3, 6);
    Matrix z = x * a.transpose();
    z.rowwise() += Eigen::RowVector3d(1.0, -2.0, 0.5);
    const Matrix y1 = scaled_residuals(DataMatrix(x)).residuals;
    const Matrix y2 = scaled_residuals(DataMatrix(z)).residuals;
    // Gram matrices of the residuals coincide.
    CHECK((y1 * y1.transpose() - y2 * y2.transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fast path matches the full standardization", "[standardize]") {
    const Matrix x = testing::normal_sample(25, 2, 3);
    CHECK((standardize_rows(x) - scaled_residuals(DataMatrix(x)).residuals).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("invalid samples are rejected", "[standardize]") {
    SECTION("too few rows") {
        Matrix x(2, 2);
        x << 1, 2, 3, 4;
        CHECK_THROWS_AS(scaled_residuals(DataMatrix(x)), InvalidArgument);
    }
    SECTION("collinear columns") {
        Matrix x(5, 2);
        x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
        CHECK_THROWS_AS(scaled_residuals(DataMatrix(x)), SingularCovariance);
    }
    SECTION("non-finite entry") {
        Matrix x = Matrix::Ones(3, 1);
        x(1, 0) = std::nan("");
        CHECK_THROWS_AS(DataMatrix(x), InvalidArgument);
    }
}
