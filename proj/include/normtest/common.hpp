#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace normtest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The 1/n covariance matrix has a (relatively) vanishing eigenvalue.
class SingularCovariance : public Error {
public:
    using Error::Error;
};

/// A quadrature oracle was asked for a dimension it does not support.
class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

/// The Gaussian-process covariance matrix is indefinite beyond roundoff.
class KernelNotPSD : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Tuning parameter of the weight exp(-a||t||^2); always positive and finite.
class TuningParameter {
public:
    explicit TuningParameter(double a);
    [[nodiscard]] double value() const noexcept { return a_; }

private:
    double a_;
};

}  // namespace normtest
