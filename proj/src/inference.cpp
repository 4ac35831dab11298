#include "normtest/inference.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "normtest/kernels.hpp"
#include "normtest/normal.hpp"
#include "normtest/statistic.hpp"

namespace normtest {

namespace {

constexpr double kPi = std::numbers::pi;

double dim_of(const Vector& v) {
    return static_cast<double>(v.size());
}

void check_index(int i) {
    if (i < 1 || i > 4) {
        throw InvalidArgument("kernel block index must be in 1..4, got " + std::to_string(i));
    }
}

}  // namespace

double m_func(const Vector& t) {
    const double tt = t.squaredNorm();
    return (dim_of(t) - tt) * std::exp(-0.5 * tt);
}

double z_n(const Vector& s, const Matrix& residuals) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < residuals.rows(); ++k) {
        const double u = residuals.row(k).dot(s);
        acc += (std::cos(u) + std::sin(u)) * residuals.row(k).squaredNorm();
    }
    return acc / static_cast<double>(residuals.rows()) - m_func(s);
}

PsiBundle psi_estimators(const Matrix& residuals, const Vector& t) {
    const Eigen::Index n = residuals.rows();
    const Eigen::Index d = residuals.cols();
    PsiBundle p{Vector::Zero(d), Matrix::Zero(d, d), 0.0, 0.0, Vector::Zero(d), Vector::Zero(d), Matrix::Zero(d, d)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Vector y = residuals.row(k).transpose();
        const double u = y.dot(t);
        const double cp = std::cos(u) + std::sin(u);
        const double cm = std::cos(u) - std::sin(u);
        const double r = y.squaredNorm();
        const Matrix yy = y * y.transpose();
        p.psi1 += cp * y;
        p.psi2 += cp * yy;
        p.psi3_plus += cp * r;
        p.psi3_minus += cm * r;
        p.psi4_plus += cp * r * y;
        p.psi4_minus += cm * r * y;
        p.psi5 += cp * r * yy;
    }
    const double inv = 1.0 / static_cast<double>(n);
    p.psi1 *= inv;
    p.psi2 *= inv;
    p.psi3_plus *= inv;
    p.psi3_minus *= inv;
    p.psi4_plus *= inv;
    p.psi4_minus *= inv;
    p.psi5 *= inv;
    return p;
}

double q1(const Vector& y, double a) {
    const double d = dim_of(y);
    const double b = 2.0 * a + 1.0;
    const double r = y.squaredNorm();
    return std::pow(2.0 * kPi, d / 2.0) / std::pow(b, d / 2.0 + 2.0) * (r + 2.0 * d * a * b) * std::exp(-0.5 * r / b);
}

double p1(const Vector& y, const Vector& z, double a) {
    return std::pow(kPi / a, dim_of(y) / 2.0) * std::exp(-(y - z).squaredNorm() / (4.0 * a));
}

Vector p2(const Vector& y, const Vector& z, double a) {
    const Vector diff = y - z;
    return std::pow(kPi / a, dim_of(y) / 2.0) / (2.0 * a) * std::exp(-diff.squaredNorm() / (4.0 * a)) * diff;
}

Vector q2(const Vector& y, double a) {
    const double d = dim_of(y);
    const double b = 2.0 * a + 1.0;
    const double r = y.squaredNorm();
    return std::pow(2.0 * kPi, d / 2.0) / std::pow(b, d / 2.0 + 3.0) * (2.0 * b * (1.0 - a * d) - r) *
           std::exp(-0.5 * r / b) * y;
}

PAggregates p_aggregates(const Matrix& residuals, double a) {
    (void)TuningParameter(a);
    const Eigen::Index n = residuals.rows();
    const Eigen::Index d = residuals.cols();
    const double nn = static_cast<double>(n);
    const Vector r = residuals.rowwise().squaredNorm();
    const double cp = std::pow(kPi / a, static_cast<double>(d) / 2.0);
    const kernels::RowSums rows = kernels::gauss_row_sums(residuals, r, 1.0 / (4.0 * a));

    PAggregates p;
    p.p1a3_of.resize(n);
    Matrix rvec(n, d);  // row l: n^{-1} sum_m r_m p2(Y_m, Y_l) - q2(Y_l)
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector y = residuals.row(j).transpose();
        p.p1a3_of(j) = cp * rows.sums(j) / nn - q1(y, a);
        const Vector moment = rows.moments.row(j).transpose();
        rvec.row(j) = (cp / (2.0 * a) * (moment - rows.sums(j) * y) / nn - q2(y, a)).transpose();
    }

    p.p1a1 = r.dot(p.p1a3_of) / nn;
    const Vector rp3 = r.cwiseProduct(p.p1a3_of);
    p.p1a1_tilde = residuals.transpose() * rp3 / nn;
    p.p1a2_tilde = residuals.transpose() * p.p1a3_of / nn;
    p.p1a_bar = residuals.transpose() * rp3.asDiagonal() * residuals / nn;
    const Matrix mmat = residuals.transpose() * p.p1a3_of.asDiagonal() * residuals / nn;
    p.p1a2_of = (residuals * mmat).cwiseProduct(residuals).rowwise().sum();

    const Matrix rmat = residuals.transpose() * r.asDiagonal() * rvec / nn;  // n^{-1} sum r_l Y_l rvec_l^T
    p.p2a1 = rmat.trace();
    p.p2a2 = (p.p1a_bar * rmat).trace();
    p.p2a_tilde = rvec.transpose() * r / nn;
    p.p2a3_of = (residuals * rmat).cwiseProduct(residuals).rowwise().sum();
    return p;
}

double SigmaComponents::total() const noexcept {
    double t = 0.0;
    for (int i = 0; i < 4; ++i) {
        t += s[i][i];
        for (int j = i + 1; j < 4; ++j) {
            t += 2.0 * s[i][j];
        }
    }
    return t;
}

SigmaComponents sigma_components(const PAggregates& p, const Matrix& residuals) {
    const double nn = static_cast<double>(residuals.rows());
    const Vector r = residuals.rowwise().squaredNorm();
    const Vector c = 2.0 * p.p1a2_tilde + p.p2a_tilde;
    const Vector yc = residuals * c;
    const Vector yhalf = residuals * (p.p1a2_tilde + 0.5 * p.p2a_tilde);

    SigmaComponents out;
    auto set = [&out](int i, int j, double v) {
        out.s[i][j] = v;
        out.s[j][i] = v;
    };
    set(0, 0, 4.0 / nn * r.cwiseProduct(p.p1a3_of).squaredNorm());
    set(0, 1, 2.0 * p.p1a1 * p.p2a1 - 2.0 * p.p2a2);
    set(0, 2, -4.0 * c.dot(p.p1a1_tilde));
    set(0, 3, -4.0 / nn * r.cwiseProduct(p.p1a2_of).dot(p.p1a3_of));
    set(1, 1, p.p2a3_of.squaredNorm() / nn - p.p2a1 * p.p2a1);
    set(1, 2, 4.0 / nn * p.p2a3_of.dot(yhalf));
    set(1, 3, 2.0 / nn * (p.p2a3_of.array() - p.p2a1).matrix().dot(p.p1a2_of));
    set(2, 2, 4.0 * c.squaredNorm());
    set(2, 3, 4.0 / nn * p.p1a2_of.dot(yc));
    set(3, 3, 4.0 / nn * p.p1a2_of.squaredNorm());
    return out;
}

SigmaEstimate sigma_hat_sq(const Matrix& residuals, double a) {
    SigmaEstimate e;
    e.raw = sigma_components(p_aggregates(residuals, a), residuals).total();
    e.clipped = e.raw < 0.0;
    e.value = e.clipped ? 0.0 : e.raw;
    return e;
}

SigmaEstimate sigma_hat_sq(const StandardizedSample& sample, TuningParameter a) {
    return sigma_hat_sq(sample.residuals, a.value());
}

double v_n(int i, const Vector& s, const Vector& y, const PsiBundle& psi) {
    check_index(i);
    switch (i) {
        case 1: {
            const double u = s.dot(y);
            return y.squaredNorm() * (std::cos(u) + std::sin(u));
        }
        case 2: {
            const Matrix yy = y * y.transpose() - Matrix::Identity(y.size(), y.size());
            return -0.5 * s.dot(yy * psi.psi4_minus);
        }
        case 3:
            return -(2.0 * psi.psi1 + psi.psi3_minus * s).dot(y);
        default:
            return -y.dot(psi.psi2 * y);
    }
}

double ln_block(int i, int j, const Vector& s, const Vector& t, const Matrix& residuals) {
    const PsiBundle ps = psi_estimators(residuals, s);
    const PsiBundle pt = psi_estimators(residuals, t);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < residuals.rows(); ++k) {
        const Vector y = residuals.row(k).transpose();
        acc += v_n(i, s, y, ps) * v_n(j, t, y, pt);
    }
    return acc / static_cast<double>(residuals.rows());
}

double ln_block_closed(int i, int j, const Vector& s, const Vector& t, const Matrix& residuals) {
    check_index(i);
    check_index(j);
    if (i > j) {
        throw InvalidArgument("closed-form kernel blocks are indexed with i <= j");
    }
    const PsiBundle ps = psi_estimators(residuals, s);
    const PsiBundle pt = psi_estimators(residuals, t);
    const double nn = static_cast<double>(residuals.rows());
    const Eigen::Index d = residuals.cols();
    const Matrix id = Matrix::Identity(d, d);
    const Vector cs = 2.0 * ps.psi1 + ps.psi3_minus * s;
    const Vector ct = 2.0 * pt.psi1 + pt.psi3_minus * t;
    double acc = 0.0;
    const int key = 10 * i + j;
    switch (key) {
        case 12:
            return -0.5 * ps.psi4_minus.dot(pt.psi5 * s) + 0.5 * pt.psi3_plus * ps.psi4_minus.dot(s);
        case 13:
            return -cs.dot(pt.psi4_plus);
        case 33:
            return ct.dot(cs);
        default:
            break;
    }
    for (Eigen::Index k = 0; k < residuals.rows(); ++k) {
        const Vector y = residuals.row(k).transpose();
        const double r = y.squaredNorm();
        const Matrix yy = y * y.transpose();
        switch (key) {
            case 11:
                acc += r * r * (std::cos((t - s).dot(y)) + std::sin((t + s).dot(y)));
                break;
            case 14: {
                const double u = t.dot(y);
                acc -= r * (std::cos(u) + std::sin(u)) * y.dot(ps.psi2 * y);
                break;
            }
            case 22:
                acc += 0.25 * pt.psi4_minus.dot(yy * t) * ps.psi4_minus.dot((yy - id) * s);
                break;
            case 23:
                acc += pt.psi4_minus.dot(yy * t) * (ps.psi1 + 0.5 * ps.psi3_minus * s).dot(y);
                break;
            case 24:
                acc += 0.5 * pt.psi4_minus.dot((yy - id) * t) * y.dot(ps.psi2 * y);
                break;
            case 34:
                acc += cs.dot(y) * y.dot(pt.psi2 * y);
                break;
            case 44:
                acc += y.dot(pt.psi2 * y) * y.dot(ps.psi2 * y);
                break;
            default:
                break;
        }
    }
    return acc / nn;
}

double ln_total(const Vector& s, const Vector& t, const Matrix& residuals) {
    const PsiBundle ps = psi_estimators(residuals, s);
    const PsiBundle pt = psi_estimators(residuals, t);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < residuals.rows(); ++k) {
        const Vector y = residuals.row(k).transpose();
        double vs = 0.0;
        double vt = 0.0;
        for (int i = 1; i <= 4; ++i) {
            vs += v_n(i, s, y, ps);
            vt += v_n(i, t, y, pt);
        }
        acc += vs * vt;
    }
    return acc / static_cast<double>(residuals.rows());
}

double sigma_hat_sq_quadrature(const Matrix& residuals, double a, const QuadratureSpec& grid) {
    (void)TuningParameter(a);
    const auto d = static_cast<std::size_t>(residuals.cols());
    const TensorRule rule = weighted_tensor_rule(d, a, grid, 2);
    const Eigen::Index n = residuals.rows();
    // g(k) = int sum_i v_{n,i}(s, Y_k) z_n(s) w_a(s) ds
    Vector g = Vector::Zero(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vector s = rule.nodes.row(static_cast<Eigen::Index>(q)).transpose();
        const PsiBundle psi = psi_estimators(residuals, s);
        const double weight = rule.weights[q] * (psi.psi3_plus - m_func(s));
        for (Eigen::Index k = 0; k < n; ++k) {
            const Vector y = residuals.row(k).transpose();
            double v = 0.0;
            for (int i = 1; i <= 4; ++i) {
                v += v_n(i, s, y, psi);
            }
            g(k) += weight * v;
        }
    }
    return 4.0 * g.squaredNorm() / static_cast<double>(n);
}

DeltaEstimate estimate_delta(const StandardizedSample& sample, TuningParameter a) {
    DeltaEstimate e;
    e.n = sample.size();
    e.d = sample.dim();
    e.a = a.value();
    e.delta_hat = t_statistic_value(sample.residuals, a.value()) / static_cast<double>(e.n);
    const SigmaEstimate s = sigma_hat_sq(sample.residuals, a.value());
    e.sigma_hat = std::sqrt(s.value);
    e.sigma_clipped = s.clipped;
    return e;
}

ConfidenceInterval confidence_interval(const DeltaEstimate& est, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    const double half = normal_quantile(1.0 - alpha / 2.0) * est.sigma_hat / std::sqrt(static_cast<double>(est.n));
    return {est.delta_hat - half, est.delta_hat + half, alpha};
}

ValidationDecision validation_test(const DeltaEstimate& est, double delta0, double alpha) {
    if (!(delta0 > 0.0)) {
        throw InvalidArgument("delta0 must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    ValidationDecision v;
    v.statistic = est.delta_hat;
    v.threshold = delta0 - est.sigma_hat / std::sqrt(static_cast<double>(est.n)) * normal_quantile(1.0 - alpha);
    v.reject = v.statistic <= v.threshold;
    return v;
}

double delta_a_univariate(const std::function<double(double)>& cf_second_derivative, double a, double tolerance) {
    (void)TuningParameter(a);
    const auto integrand = [&](double t) {
        const double diff = cf_second_derivative(t) - (t * t - 1.0) * std::exp(-0.5 * t * t);
        return diff * diff * std::exp(-a * t * t);
    };
    return integrate_1d(integrand, -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), tolerance);
}

double cf2_uniform(double t) {
    if (std::abs(t) < 0.05) {
        // Taylor series of sin(sqrt3 t) / (sqrt3 t), differentiated twice.
        const double t2 = t * t;
        return -1.0 + 0.9 * t2 - 27.0 * 30.0 / 5040.0 * t2 * t2 + 81.0 * 56.0 / 362880.0 * t2 * t2 * t2;
    }
    const double s3 = std::sqrt(3.0);
    return (s3 * (2.0 - 3.0 * t * t) * std::sin(s3 * t) - 6.0 * t * std::cos(s3 * t)) / (3.0 * t * t * t);
}

double cf2_laplace(double t) {
    const double u = 2.0 + t * t;
    return (12.0 * t * t - 8.0) / (u * u * u);
}

double cf2_logistic(double t) {
    const double x = std::sqrt(3.0) * t;
    const double ax = std::abs(x);
    if (ax < 0.1) {
        // 3 g''(x) with g(x) = x / sinh(x) = 1 - x^2/6 + 7x^4/360 - 31x^6/15120 + 127x^8/604800 - ...
        const double x2 = x * x;
        return 3.0 * (-1.0 / 3.0 + 7.0 * 12.0 / 360.0 * x2 - 31.0 * 30.0 / 15120.0 * x2 * x2 +
                      127.0 * 56.0 / 604800.0 * x2 * x2 * x2);
    }
    if (ax > 30.0) {
        return 1.5 * 8.0 * (ax / 2.0 - 1.0) * std::exp(-ax);
    }
    const double sh = std::sinh(x);
    return 1.5 * (3.0 * x - 2.0 * std::sinh(2.0 * x) + x * std::cosh(2.0 * x)) / (sh * sh * sh);
}

double cf2_normal(double t) {
    return (t * t - 1.0) * std::exp(-0.5 * t * t);
}

}  // namespace normtest
