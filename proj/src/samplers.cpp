#include "normtest/samplers.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

namespace normtest {

namespace {

using ArgMap = std::map<std::string, std::string>;

struct ParsedCall {
    std::string name;
    std::vector<std::string> positional;
    ArgMap named;
};

std::string lower_trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) {
        --e;
    }
    std::string out = s.substr(b, e - b);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

ParsedCall parse_call(const std::string& raw) {
    const std::string text = lower_trim(raw);
    ParsedCall call;
    std::string args;
    const auto paren = text.find('(');
    const auto colon = text.find(':');
    if (paren != std::string::npos && (colon == std::string::npos || paren < colon)) {
        if (text.back() != ')') {
            throw ParseError("missing ')' in '" + raw + "'");
        }
        call.name = text.substr(0, paren);
        args = text.substr(paren + 1, text.size() - paren - 2);
    } else if (colon != std::string::npos) {
        call.name = text.substr(0, colon);
        args = text.substr(colon + 1);
    } else {
        call.name = text;
    }
    call.name = lower_trim(call.name);
    if (call.name.empty()) {
        throw ParseError("empty distribution name in '" + raw + "'");
    }
    std::size_t start = 0;
    while (start <= args.size() && !args.empty()) {
        const auto comma = args.find(',', start);
        const std::string item = lower_trim(args.substr(start, comma == std::string::npos ? std::string::npos
                                                                                             : comma - start));
        if (item.empty()) {
            throw ParseError("empty argument in '" + raw + "'");
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            if (!call.named.empty()) {
                throw ParseError("positional argument after keyword argument in '" + raw + "'");
            }
            call.positional.push_back(item);
        } else {
            const std::string key = lower_trim(item.substr(0, eq));
            if (!call.named.emplace(key, lower_trim(item.substr(eq + 1))).second) {
                throw ParseError("duplicate argument '" + key + "' in '" + raw + "'");
            }
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return call;
}

double to_number(const std::string& s, const std::string& context) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("expected a number for " + context + ", got '" + s + "'");
    }
    return v;
}

// Binds positional and keyword arguments to parameter names; unset names stay empty.
std::vector<std::optional<std::string>> bind_raw(const ParsedCall& call, const std::vector<std::string>& names) {
    if (call.positional.size() > names.size()) {
        throw ParseError("too many arguments for '" + call.name + "'");
    }
    std::vector<std::optional<std::string>> out(names.size());
    for (std::size_t i = 0; i < call.positional.size(); ++i) {
        out[i] = call.positional[i];
    }
    for (const auto& [key, value] : call.named) {
        std::size_t idx = names.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == key) {
                idx = i;
            }
        }
        if (idx == names.size()) {
            throw ParseError("unknown argument '" + key + "' for '" + call.name + "'");
        }
        if (out[idx]) {
            throw ParseError("argument '" + key + "' given twice for '" + call.name + "'");
        }
        out[idx] = value;
    }
    return out;
}

std::vector<std::string> bind(const ParsedCall& call, const std::vector<std::string>& names,
                              const std::vector<std::optional<std::string>>& defaults) {
    const auto raw = bind_raw(call, names);
    std::vector<std::string> result;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& v = raw[i] ? raw[i] : defaults[i];
        if (!v) {
            throw ParseError("missing argument '" + names[i] + "' for '" + call.name + "'");
        }
        result.push_back(*v);
    }
    return result;
}

std::vector<double> bind_numbers(const ParsedCall& call, const std::vector<std::string>& names,
                                 const std::vector<std::optional<double>>& defaults) {
    const auto raw = bind_raw(call, names);
    std::vector<double> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (raw[i]) {
            out.push_back(to_number(*raw[i], call.name + "." + names[i]));
        } else if (defaults[i]) {
            out.push_back(*defaults[i]);
        } else {
            throw ParseError("missing argument '" + names[i] + "' for '" + call.name + "'");
        }
    }
    return out;
}

std::optional<UnivariateLaw> parse_univariate(const ParsedCall& c) {
    const double sqrt3 = std::sqrt(3.0);
    const std::string& n = c.name;
    if (n == "normal" || n == "norm" || n == "n") {
        bind(c, {}, {});
        return law::Normal{};
    }
    if (n == "nmix") {
        const auto v = bind_numbers(c, {"p", "mu", "sigma"}, {std::nullopt, std::nullopt, 1.0});
        return law::Mixture1{v[0], v[1], v[2]};
    }
    if (n == "t" || n == "student") {
        return law::StudentT{bind_numbers(c, {"nu"}, {std::nullopt})[0]};
    }
    if (n == "u" || n == "unif" || n == "uniform") {
        const auto v = bind_numbers(c, {"lo", "hi"}, {-sqrt3, sqrt3});
        return law::Uniform{v[0], v[1]};
    }
    if (n == "chisq" || n == "chi2") {
        return law::ChiSquared{bind_numbers(c, {"nu"}, {std::nullopt})[0]};
    }
    if (n == "beta" || n == "b") {
        const auto v = bind_numbers(c, {"alpha", "beta"}, {std::nullopt, std::nullopt});
        return law::Beta{v[0], v[1]};
    }
    if (n == "gamma") {
        const auto v = bind_numbers(c, {"shape", "rate"}, {std::nullopt, 1.0});
        return law::Gamma{v[0], v[1]};
    }
    if (n == "gumbel" || n == "gum") {
        const auto v = bind_numbers(c, {"loc", "scale"}, {0.0, 1.0});
        return law::Gumbel{v[0], v[1]};
    }
    if (n == "lognormal" || n == "ln") {
        const auto v = bind_numbers(c, {"mu", "sigma"}, {0.0, 1.0});
        return law::LogNormal{v[0], v[1]};
    }
    if (n == "weibull" || n == "w") {
        const auto v = bind_numbers(c, {"scale", "shape"}, {std::nullopt, std::nullopt});
        return law::Weibull{v[0], v[1]};
    }
    if (n == "laplace" || n == "l") {
        const auto v = bind_numbers(c, {"loc", "scale"}, {0.0, 1.0 / std::sqrt(2.0)});
        return law::Laplace{v[0], v[1]};
    }
    if (n == "logistic" || n == "lo") {
        const auto v = bind_numbers(c, {"loc", "scale"}, {0.0, sqrt3 / std::numbers::pi});
        return law::Logistic{v[0], v[1]};
    }
    if (n == "cauchy" || n == "c") {
        const auto v = bind_numbers(c, {"loc", "scale"}, {0.0, 1.0});
        return law::Cauchy{v[0], v[1]};
    }
    if (n == "pearson7" || n == "p7" || n == "pvii") {
        return law::PearsonVII{bind_numbers(c, {"theta"}, {std::nullopt})[0]};
    }
    if (n == "exp" || n == "exponential") {
        return law::Exponential{bind_numbers(c, {"rate"}, {1.0})[0]};
    }
    return std::nullopt;
}

UnivariateLaw require_univariate(const std::string& text) {
    const ParsedCall call = parse_call(text);
    auto law = parse_univariate(call);
    if (!law) {
        throw ParseError("unknown univariate distribution '" + call.name + "'");
    }
    return *law;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw InvalidArgument("invalid distribution parameter: " + what);
    }
}

double positive_uniform(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v = 0.0;
    do {
        v = u(rng);
    } while (v <= 0.0);
    return v;
}

// Precomputes factorizations so that repeated draws are cheap.
class Sampler {
public:
    explicit Sampler(const AlternativeSpec& spec) : spec_(spec) {
        validate(spec);
        if (const auto* mix = std::get_if<law::MixtureD>(&spec.law)) {
            Eigen::LLT<Matrix> llt(mix->sigma);
            if (llt.info() != Eigen::Success) {
                throw InvalidArgument("mixture covariance must be positive definite");
            }
            chol_ = llt.matrixL();
        }
    }

    Vector operator()(Rng& rng) const {
        const auto d = static_cast<Eigen::Index>(spec_.dim);
        std::normal_distribution<double> z(0.0, 1.0);
        Vector x(d);
        std::visit(
            [&](const auto& l) {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, law::Normal>) {
                    for (Eigen::Index i = 0; i < d; ++i) {
                        x(i) = z(rng);
                    }
                } else if constexpr (std::is_same_v<L, law::MixtureD>) {
                    std::uniform_real_distribution<double> u(0.0, 1.0);
                    const bool shifted = u(rng) < l.p;
                    for (Eigen::Index i = 0; i < d; ++i) {
                        x(i) = z(rng);
                    }
                    if (shifted) {
                        x = (l.mu + chol_ * x).eval();
                    }
                } else if constexpr (std::is_same_v<L, law::MultiT>) {
                    for (Eigen::Index i = 0; i < d; ++i) {
                        x(i) = z(rng);
                    }
                    std::chi_squared_distribution<double> w(l.nu);
                    x /= std::sqrt(w(rng) / l.nu);
                } else if constexpr (std::is_same_v<L, law::ProductIID>) {
                    for (Eigen::Index i = 0; i < d; ++i) {
                        x(i) = draw(l.base, rng);
                    }
                } else {
                    static_assert(std::is_same_v<L, law::Spherical>);
                    const Vector u = sphere_uniform(spec_.dim, rng);
                    x = draw(l.radius, rng) * u;
                }
            },
            spec_.law);
        return x;
    }

private:
    AlternativeSpec spec_;
    Matrix chol_;
};

}  // namespace

Matrix bd_matrix(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix b = Matrix::Constant(n, n, 0.9);
    b.diagonal().setOnes();
    return b;
}

AlternativeSpec parse_alternative(const std::string& text, std::size_t d) {
    if (d == 0) {
        throw InvalidArgument("dimension must be at least 1");
    }
    const std::string t = lower_trim(text);
    AlternativeSpec spec;
    spec.dim = d;
    spec.label = t;
    if (starts_with(t, "iid:")) {
        spec.law = law::ProductIID{require_univariate(t.substr(4))};
    } else if (starts_with(t, "spherical:")) {
        spec.law = law::Spherical{require_univariate(t.substr(10))};
    } else {
        const ParsedCall call = parse_call(t);
        if (call.name == "normal" || call.name == "norm" || call.name == "n") {
            bind(call, {}, {});
            spec.law = law::Normal{};
        } else if (call.name == "mt") {
            spec.law = law::MultiT{bind_numbers(call, {"nu"}, {std::nullopt})[0]};
        } else if (call.name == "nmix") {
            const auto v = bind(call, {"p", "mu", "sigma"}, {std::nullopt, std::nullopt, std::string("i")});
            law::MixtureD mix;
            mix.p = to_number(v[0], "nmix.p");
            mix.mu = Vector::Constant(static_cast<Eigen::Index>(d), to_number(v[1], "nmix.mu"));
            const auto n = static_cast<Eigen::Index>(d);
            if (v[2] == "i") {
                mix.sigma = Matrix::Identity(n, n);
            } else if (v[2] == "bd") {
                mix.sigma = bd_matrix(d);
            } else {
                mix.sigma = to_number(v[2], "nmix.sigma") * Matrix::Identity(n, n);
            }
            spec.law = std::move(mix);
        } else {
            auto uni = parse_univariate(call);
            if (!uni) {
                throw ParseError("unknown distribution '" + call.name + "'");
            }
            if (d != 1) {
                throw ParseError("univariate law '" + call.name + "' needs an iid: or spherical: prefix for d = " +
                                 std::to_string(d));
            }
            spec.law = law::ProductIID{*uni};
        }
    }
    validate(spec);
    return spec;
}

void validate(const UnivariateLaw& l) {
    std::visit(
        [](const auto& v) {
            using L = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<L, law::Mixture1>) {
                require(v.p > 0.0 && v.p < 1.0, "mixture weight p must lie in (0,1)");
                require(v.var > 0.0, "mixture variance must be positive");
            } else if constexpr (std::is_same_v<L, law::StudentT> || std::is_same_v<L, law::ChiSquared>) {
                require(v.nu >= 1.0, "degrees of freedom must be at least 1");
            } else if constexpr (std::is_same_v<L, law::Uniform>) {
                require(v.lo < v.hi, "uniform needs lo < hi");
            } else if constexpr (std::is_same_v<L, law::Beta>) {
                require(v.alpha > 0.0 && v.beta > 0.0, "beta parameters must be positive");
            } else if constexpr (std::is_same_v<L, law::Gamma>) {
                require(v.shape > 0.0 && v.rate > 0.0, "gamma shape and rate must be positive");
            } else if constexpr (std::is_same_v<L, law::Gumbel> || std::is_same_v<L, law::Laplace> ||
                                 std::is_same_v<L, law::Logistic> || std::is_same_v<L, law::Cauchy>) {
                require(v.scale > 0.0, "scale must be positive");
            } else if constexpr (std::is_same_v<L, law::LogNormal>) {
                require(v.sigma > 0.0, "lognormal sigma must be positive");
            } else if constexpr (std::is_same_v<L, law::Weibull>) {
                require(v.scale > 0.0 && v.shape > 0.0, "Weibull scale and shape must be positive");
            } else if constexpr (std::is_same_v<L, law::PearsonVII>) {
                require(v.theta > 0.5, "Pearson VII needs theta > 1/2");
            } else if constexpr (std::is_same_v<L, law::Exponential>) {
                require(v.rate > 0.0, "exponential rate must be positive");
            }
        },
        l);
}

void validate(const AlternativeSpec& spec) {
    require(spec.dim >= 1, "dimension must be at least 1");
    const auto d = static_cast<Eigen::Index>(spec.dim);
    std::visit(
        [&](const auto& v) {
            using L = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<L, law::MixtureD>) {
                require(v.p > 0.0 && v.p < 1.0, "mixture weight p must lie in (0,1)");
                require(v.mu.size() == d && v.sigma.rows() == d && v.sigma.cols() == d,
                        "mixture mean and covariance must match the dimension");
            } else if constexpr (std::is_same_v<L, law::MultiT>) {
                require(v.nu >= 1.0, "degrees of freedom must be at least 1");
            } else if constexpr (std::is_same_v<L, law::ProductIID>) {
                validate(v.base);
            } else if constexpr (std::is_same_v<L, law::Spherical>) {
                validate(v.radius);
            }
        },
        spec.law);
}

double draw(const UnivariateLaw& l, Rng& rng) {
    return std::visit(
        [&rng](const auto& v) -> double {
            using L = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<L, law::Normal>) {
                return std::normal_distribution<double>(0.0, 1.0)(rng);
            } else if constexpr (std::is_same_v<L, law::Mixture1>) {
                const bool shifted = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < v.p;
                const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
                return shifted ? v.mu + std::sqrt(v.var) * z : z;
            } else if constexpr (std::is_same_v<L, law::StudentT>) {
                return std::student_t_distribution<double>(v.nu)(rng);
            } else if constexpr (std::is_same_v<L, law::Uniform>) {
                return std::uniform_real_distribution<double>(v.lo, v.hi)(rng);
            } else if constexpr (std::is_same_v<L, law::ChiSquared>) {
                return std::chi_squared_distribution<double>(v.nu)(rng);
            } else if constexpr (std::is_same_v<L, law::Beta>) {
                const double x = std::gamma_distribution<double>(v.alpha, 1.0)(rng);
                const double y = std::gamma_distribution<double>(v.beta, 1.0)(rng);
                return x / (x + y);
            } else if constexpr (std::is_same_v<L, law::Gamma>) {
                return std::gamma_distribution<double>(v.shape, 1.0 / v.rate)(rng);
            } else if constexpr (std::is_same_v<L, law::Gumbel>) {
                return std::extreme_value_distribution<double>(v.loc, v.scale)(rng);
            } else if constexpr (std::is_same_v<L, law::LogNormal>) {
                return std::lognormal_distribution<double>(v.mu, v.sigma)(rng);
            } else if constexpr (std::is_same_v<L, law::Weibull>) {
                return std::weibull_distribution<double>(v.shape, v.scale)(rng);
            } else if constexpr (std::is_same_v<L, law::Laplace>) {
                std::exponential_distribution<double> e(1.0);
                const double e1 = e(rng);
                const double e2 = e(rng);
                return v.loc + v.scale * (e1 - e2);
            } else if constexpr (std::is_same_v<L, law::Logistic>) {
                const double u = positive_uniform(rng);
                return v.loc + v.scale * std::log(u / (1.0 - u));
            } else if constexpr (std::is_same_v<L, law::Cauchy>) {
                return std::cauchy_distribution<double>(v.loc, v.scale)(rng);
            } else if constexpr (std::is_same_v<L, law::PearsonVII>) {
                const double nu = 2.0 * v.theta - 1.0;
                return std::student_t_distribution<double>(nu)(rng) / std::sqrt(nu);
            } else {
                static_assert(std::is_same_v<L, law::Exponential>);
                return std::exponential_distribution<double>(v.rate)(rng);
            }
        },
        l);
}

Vector draw(const AlternativeSpec& spec, Rng& rng) {
    return Sampler(spec)(rng);
}

Matrix sample_matrix(const AlternativeSpec& spec, std::size_t n, Rng& rng) {
    const Sampler sampler(spec);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim));
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
        x.row(j) = sampler(rng).transpose();
    }
    return x;
}

DataMatrix sample(const AlternativeSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng = substream(seed, StreamFamily::Generic, 0);
    return DataMatrix(sample_matrix(spec, n, rng));
}

Matrix standard_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            x(j, c) = z(rng);
        }
    }
    return x;
}

Vector sphere_uniform(std::size_t d, Rng& rng) {
    if (d == 0) {
        throw InvalidArgument("sphere dimension must be at least 1");
    }
    std::normal_distribution<double> z(0.0, 1.0);
    Vector g(static_cast<Eigen::Index>(d));
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            g(i) = z(rng);
        }
        norm = g.norm();
    } while (norm == 0.0);
    return g / norm;
}

Vector sphere_uniform(std::size_t d, std::uint64_t seed) {
    Rng rng = substream(seed, StreamFamily::Generic, 0);
    return sphere_uniform(d, rng);
}

}  // namespace normtest
