#pragma once

#include <optional>
#include <string>

#include "normtest/common.hpp"

namespace normtest {

/// Baringhaus–Henze–Epps–Pulley statistic on scaled residuals; a > 0.
[[nodiscard]] double bhep(const Matrix& residuals, double a);

/// Henze–Jimenez-Gamero moment-generating-function statistic; beta > 1.
[[nodiscard]] double hjg(const Matrix& residuals, double beta);

/// Henze–Visagie statistic; gamma > 2.
[[nodiscard]] double hv(const Matrix& residuals, double gamma);

/// Large-gamma limit of HV: 2 * Mardia skewness + 3 * Mori–Rohatgi–Szekely skewness.
[[nodiscard]] double hv_inf(const Matrix& residuals);

/// del Barrio–Cuesta-Albertos–Matran–Rodriguez-Rodriguez Wasserstein statistic on a raw
/// univariate sample (n >= 2). The sample variance uses the divisor n.
[[nodiscard]] double bcmr(const Vector& raw);

/// Betsch–Ebner zero-bias statistic on univariate scaled residuals with fixed a > 0.
[[nodiscard]] double be(const Vector& residuals, double a);

enum class CompetitorKind { T, BHEP, HJG, HV, HVInf, BCMR, BE };

/// A test statistic together with its tuning parameter (a, beta or gamma).
struct CompetitorSpec {
    CompetitorKind kind = CompetitorKind::T;
    std::optional<double> tuning;

    /// Throws InvalidArgument when the tuning parameter or dimension is not admissible.
    void check(std::size_t d) const;
    [[nodiscard]] std::string label() const;
};

/// Parses "t:0.5", "bhep:1", "hjg:1.5", "hv:5", "hvinf", "bcmr", "be:1".
/// HJG defaults to beta = 1.5 and HV to gamma = 5 when no value is given.
[[nodiscard]] CompetitorSpec parse_competitor(const std::string& text);

/// Evaluates the statistic on a raw n x d sample, standardizing as the statistic requires.
/// T is reported on the scaled axis d^{-2} (a/pi)^{d/2} T_{n,a}.
[[nodiscard]] double evaluate(const CompetitorSpec& spec, const Matrix& raw);

}  // namespace normtest
