#pragma once

#include <cstddef>
#include <functional>

#include "normtest/common.hpp"
#include "normtest/quadrature.hpp"
#include "normtest/standardize.hpp"

namespace normtest {

/// (d - ||t||^2) exp(-||t||^2 / 2), minus the Laplacian of the N(0, I) characteristic function.
[[nodiscard]] double m_func(const Vector& t);

/// n^{-1} sum CS+(s, Y_k) ||Y_k||^2 - m(s), an estimate of the population counterpart z(s).
[[nodiscard]] double z_n(const Vector& s, const Matrix& residuals);

/// Empirical moments weighted by CS+(t, Y_j) or CS-(t, Y_j) at one frequency t.
struct PsiBundle {
    Vector psi1;        ///< n^{-1} sum CS+ Y
    Matrix psi2;        ///< n^{-1} sum CS+ Y Y^T
    double psi3_plus;   ///< n^{-1} sum CS+ ||Y||^2
    double psi3_minus;  ///< n^{-1} sum CS- ||Y||^2
    Vector psi4_plus;   ///< n^{-1} sum CS+ ||Y||^2 Y
    Vector psi4_minus;  ///< n^{-1} sum CS- ||Y||^2 Y
    Matrix psi5;        ///< n^{-1} sum CS+ ||Y||^2 Y Y^T
};

[[nodiscard]] PsiBundle psi_estimators(const Matrix& residuals, const Vector& t);

/// Closed forms of the weighted integrals (weight exp(-a||t||^2)):
///   q1(y)   = int m(t) CS+(t,y) dw
///   p1(y,z) = int CS+(t,y) CS+(t,z) dw
///   p2(y,z) = int CS+(t,y) CS-(t,z) t dw
///   q2(y)   = int m(t) CS-(t,y) t dw
[[nodiscard]] double q1(const Vector& y, double a);
[[nodiscard]] double p1(const Vector& y, const Vector& z, double a);
[[nodiscard]] Vector p2(const Vector& y, const Vector& z, double a);
[[nodiscard]] Vector q2(const Vector& y, double a);

/// Sample aggregates of q1, p1, p2, q2 from which the variance estimate is assembled.
/// Field names follow the roles P^{1,a,1}, P~^{1,a,1}, P~^{1,a,2}, P~^{2,a}, P-bar^{1,a},
/// P^{1,a,2}(Y_j), P^{1,a,3}(Y_j), P^{2,a,3}(Y_j), P^{2,a,1}, P^{2,a,2}.
struct PAggregates {
    double p1a1 = 0.0;
    Vector p1a1_tilde;
    Vector p1a2_tilde;
    Vector p2a_tilde;
    Matrix p1a_bar;
    Vector p1a2_of;
    Vector p1a3_of;
    Vector p2a3_of;
    double p2a1 = 0.0;
    double p2a2 = 0.0;
};

/// O(n^2 d) evaluation using the threaded row-sum kernel.
[[nodiscard]] PAggregates p_aggregates(const Matrix& residuals, double a);

/// The ten distinct components sigma^{i,j}, i <= j, of the variance estimate.
struct SigmaComponents {
    double s[4][4] = {};  ///< symmetric; s[i][j] for 0-based i, j

    /// sum_i s_ii + 2 sum_{i<j} s_ij
    [[nodiscard]] double total() const noexcept;
};

[[nodiscard]] SigmaComponents sigma_components(const PAggregates& p, const Matrix& residuals);

/// Variance estimate; negative roundoff results are clipped to zero and flagged.
struct SigmaEstimate {
    double value = 0.0;
    double raw = 0.0;
    bool clipped = false;
};

[[nodiscard]] SigmaEstimate sigma_hat_sq(const Matrix& residuals, double a);
[[nodiscard]] SigmaEstimate sigma_hat_sq(const StandardizedSample& sample, TuningParameter a);

/// Summand v_{n,i}(s, y), i in 1..4, of the empirical covariance kernel L_n.
[[nodiscard]] double v_n(int i, const Vector& s, const Vector& y, const PsiBundle& psi);

/// n^{-1} sum_k v_{n,i}(s, Y_k) v_{n,j}(t, Y_k), straight from the definition.
[[nodiscard]] double ln_block(int i, int j, const Vector& s, const Vector& t, const Matrix& residuals);

/// The simplified per-block expressions for 1 <= i <= j <= 4. For all blocks except (3,4)
/// they equal ln_block(j, i, s, t); the (3,4) expression equals ln_block(3, 4, s, t).
[[nodiscard]] double ln_block_closed(int i, int j, const Vector& s, const Vector& t, const Matrix& residuals);

/// L_n(s, t) = sum of all sixteen blocks.
[[nodiscard]] double ln_total(const Vector& s, const Vector& t, const Matrix& residuals);

/// 4 * double integral of L_n(s,t) z_n(s) z_n(t) against exp(-a||s||^2 - a||t||^2) on a
/// tensor Gauss–Hermite rule, using the factorization over observations. d <= 2; oracle only.
[[nodiscard]] double sigma_hat_sq_quadrature(const Matrix& residuals, double a, const QuadratureSpec& grid = {});

/// Point estimate T_{n,a}/n of Delta_a and the estimated asymptotic standard deviation.
struct DeltaEstimate {
    double delta_hat = 0.0;
    double sigma_hat = 0.0;
    bool sigma_clipped = false;
    std::size_t n = 0;
    std::size_t d = 0;
    double a = 0.0;
};

[[nodiscard]] DeltaEstimate estimate_delta(const StandardizedSample& sample, TuningParameter a);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05;
};

/// T/n -+ Phi^{-1}(1 - alpha/2) sigma_hat / sqrt(n).
[[nodiscard]] ConfidenceInterval confidence_interval(const DeltaEstimate& est, double alpha);

/// Outcome of the test of H: Delta_a >= delta0 against K: Delta_a < delta0.
struct ValidationDecision {
    bool reject = false;   ///< true when closeness to normality is established
    double threshold = 0.0;  ///< delta0 - sigma_hat / sqrt(n) * Phi^{-1}(1 - alpha)
    double statistic = 0.0;  ///< T/n
};

[[nodiscard]] ValidationDecision validation_test(const DeltaEstimate& est, double delta0, double alpha);

/// int (f''(t) - (t^2 - 1) exp(-t^2/2))^2 exp(-a t^2) dt for a univariate law with second
/// derivative f'' of its characteristic function.
[[nodiscard]] double delta_a_univariate(const std::function<double(double)>& cf_second_derivative, double a,
                                        double tolerance = 1e-12);

/// Second derivatives of characteristic functions of unit-variance laws.
[[nodiscard]] double cf2_uniform(double t);   ///< U(-sqrt3, sqrt3)
[[nodiscard]] double cf2_laplace(double t);   ///< Laplace(0, 1/sqrt2)
[[nodiscard]] double cf2_logistic(double t);  ///< logistic(0, sqrt3/pi)
[[nodiscard]] double cf2_normal(double t);    ///< N(0, 1)

}  // namespace normtest
