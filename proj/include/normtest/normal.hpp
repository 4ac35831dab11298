#pragma once

namespace normtest {

/// Standard normal density, distribution function and quantile function.
[[nodiscard]] double normal_pdf(double x);
[[nodiscard]] double normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate for large x.
[[nodiscard]] double normal_sf(double x);
/// Requires 0 < p < 1.
[[nodiscard]] double normal_quantile(double p);

}  // namespace normtest
