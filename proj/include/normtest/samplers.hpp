#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "normtest/common.hpp"
#include "normtest/rng.hpp"
#include "normtest/standardize.hpp"

namespace normtest {

/// Univariate laws. Parameter roles follow the usual textbook conventions noted per field.
namespace law {
struct Normal {};
struct Mixture1 {  ///< (1-p) N(0,1) + p N(mu, var)
    double p, mu, var;
};
struct StudentT {
    double nu;
};
struct Uniform {  ///< default U(-sqrt3, sqrt3) has unit variance
    double lo, hi;
};
struct ChiSquared {
    double nu;
};
struct Beta {
    double alpha, beta;
};
struct Gamma {  ///< shape and rate
    double shape, rate;
};
struct Gumbel {  ///< location and scale, maximum type
    double loc, scale;
};
struct LogNormal {  ///< parameters of the underlying normal
    double mu, sigma;
};
struct Weibull {  ///< scale and shape
    double scale, shape;
};
struct Laplace {  ///< location and scale b, variance 2b^2
    double loc, scale;
};
struct Logistic {  ///< location and scale s, variance s^2 pi^2 / 3
    double loc, scale;
};
struct Cauchy {
    double loc, scale;
};
struct PearsonVII {  ///< density proportional to (1 + x^2)^{-theta}, theta > 1/2
    double theta;
};
struct Exponential {
    double rate;
};
}  // namespace law

using UnivariateLaw = std::variant<law::Normal, law::Mixture1, law::StudentT, law::Uniform, law::ChiSquared,
                                   law::Beta, law::Gamma, law::Gumbel, law::LogNormal, law::Weibull, law::Laplace,
                                   law::Logistic, law::Cauchy, law::PearsonVII, law::Exponential>;

namespace law {
/// (1-p) N_d(0, I) + p N_d(mu, sigma)
struct MixtureD {
    double p;
    Vector mu;
    Matrix sigma;
};
/// Multivariate t: Z / sqrt(W / nu), Z ~ N_d(0, I), W ~ chi^2_nu.
struct MultiT {
    double nu;
};
/// Independent components drawn from one univariate law.
struct ProductIID {
    UnivariateLaw base;
};
/// R * U with U uniform on the unit sphere and R drawn from the radius law.
struct Spherical {
    UnivariateLaw radius;
};
}  // namespace law

/// A sampling distribution on R^dim together with the text it was parsed from.
struct AlternativeSpec {
    std::variant<law::Normal, law::MixtureD, law::MultiT, law::ProductIID, law::Spherical> law;
    std::size_t dim = 1;
    std::string label;  ///< the parsed text, lowercased
};

/// Parses the compact grammar used by the command line:
///
///   spec  := "iid:" base | "spherical:" base | "nmix" args | "mt" args | base
///   base  := name "(" values ")" | name ":" values | name
///   values := v ("," v)*   with v either a number (positional) or key=number
///
/// Examples: "normal", "nmix:p=0.1,mu=3,sigma=Bd", "mt:nu=5", "t(3)", "chisq(5)",
/// "iid:pearson7(5)", "spherical:exp(1)". A bare univariate law is accepted for d = 1 only.
/// For nmix, sigma is I, Bd (unit diagonal, 0.9 off-diagonal) or a number (variance times I),
/// and mu is a number repeated in every coordinate.
[[nodiscard]] AlternativeSpec parse_alternative(const std::string& text, std::size_t d);

/// Throws InvalidArgument when a parameter is outside its domain.
void validate(const AlternativeSpec& spec);
void validate(const UnivariateLaw& law);

[[nodiscard]] double draw(const UnivariateLaw& law, Rng& rng);
[[nodiscard]] Vector draw(const AlternativeSpec& spec, Rng& rng);

/// n independent draws, one per row.
[[nodiscard]] Matrix sample_matrix(const AlternativeSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] DataMatrix sample(const AlternativeSpec& spec, std::size_t n, std::uint64_t seed);

/// rows x cols matrix of independent N(0,1) variates, filled row by row.
[[nodiscard]] Matrix standard_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Uniformly distributed point on the unit sphere in R^d.
[[nodiscard]] Vector sphere_uniform(std::size_t d, Rng& rng);
[[nodiscard]] Vector sphere_uniform(std::size_t d, std::uint64_t seed);

/// The d x d matrix with unit diagonal and 0.9 elsewhere.
[[nodiscard]] Matrix bd_matrix(std::size_t d);

}  // namespace normtest
