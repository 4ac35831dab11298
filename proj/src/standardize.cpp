#include "normtest/standardize.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace normtest {

TuningParameter::TuningParameter(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InvalidArgument("tuning parameter a must be positive and finite, got " + std::to_string(a));
    }
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw InvalidArgument("data matrix must have at least one row and one column");
    }
    for (Eigen::Index j = 0; j < values_.rows(); ++j) {
        for (Eigen::Index c = 0; c < values_.cols(); ++c) {
            if (!std::isfinite(values_(j, c))) {
                throw InvalidArgument("non-finite entry in row " + std::to_string(j + 1) + ", column " +
                                      std::to_string(c + 1));
            }
        }
    }
}

Vector sample_mean(const DataMatrix& data) {
    return data.values().colwise().mean().transpose();
}

Matrix sample_covariance(const DataMatrix& data) {
    if (data.rows() < 2) {
        throw InvalidArgument("sample covariance needs at least two observations");
    }
    const Matrix centered = data.values().rowwise() - sample_mean(data).transpose();
    Matrix s = (centered.transpose() * centered) / static_cast<double>(data.rows());
    // exact symmetry
    return 0.5 * (s + s.transpose());
}

Matrix spd_inverse_sqrt(const Matrix& s, double rel_tol) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw InvalidArgument("spd_inverse_sqrt expects a non-empty square matrix");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
    if (eig.info() != Eigen::Success) {
        throw SingularCovariance("eigendecomposition of the covariance matrix failed");
    }
    const Vector& lambda = eig.eigenvalues();  // ascending
    const double largest = lambda(lambda.size() - 1);
    if (!(largest > 0.0) || lambda(0) <= rel_tol * largest) {
        throw SingularCovariance("covariance matrix is singular (eigenvalue ratio " +
                                 std::to_string(largest > 0.0 ? lambda(0) / largest : 0.0) + ")");
    }
    const Matrix& q = eig.eigenvectors();
    Matrix r = q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
    return 0.5 * (r + r.transpose());
}

StandardizedSample scaled_residuals(const DataMatrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (n < d + 1) {
        throw InvalidArgument("standardization needs n >= d + 1 (n = " + std::to_string(n) +
                              ", d = " + std::to_string(d) + ")");
    }
    StandardizedSample out;
    out.mean = sample_mean(data);
    out.covariance = sample_covariance(data);
    out.inv_sqrt = spd_inverse_sqrt(out.covariance);
    out.residuals = (data.values().rowwise() - out.mean.transpose()) * out.inv_sqrt;
    return out;
}

Matrix standardize_rows(const Matrix& x) {
    const auto n = static_cast<double>(x.rows());
    const Vector mean = x.colwise().mean().transpose();
    Matrix centered = x.rowwise() - mean.transpose();
    Matrix s = (centered.transpose() * centered) / n;
    s = 0.5 * (s + s.transpose());
    return centered * spd_inverse_sqrt(s);
}

}  // namespace normtest
