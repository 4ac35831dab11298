#include "normtest/competitors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "normtest/kernels.hpp"
#include "normtest/normal.hpp"
#include "normtest/quadrature.hpp"
#include "normtest/standardize.hpp"
#include "normtest/statistic.hpp"

namespace normtest {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_{j,k} f(||Y_j + Y_k||^2, Y_j^T Y_k) over all ordered pairs.
template <class F>
double sum_pairs_plus(const Matrix& y, F&& f) {
    const Vector r = y.rowwise().squaredNorm();
    double total = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        double row = 0.5 * f(4.0 * r(j), r(j));
        for (Eigen::Index k = j + 1; k < y.rows(); ++k) {
            const double dot = y.row(j).dot(y.row(k));
            row += f(r(j) + r(k) + 2.0 * dot, dot);
        }
        total += 2.0 * row;
    }
    return total;
}

// int_{k/n ... } of the standard normal quantile, via phi(Phi^{-1}(u)).
double phi_of_quantile(double u) {
    if (u <= 0.0 || u >= 1.0) {
        return 0.0;
    }
    return normal_pdf(normal_quantile(u));
}

}  // namespace

double bhep(const Matrix& residuals, double a) {
    const double av = TuningParameter(a).value();
    const double n = static_cast<double>(residuals.rows());
    const double d = static_cast<double>(residuals.cols());
    const double a2 = av * av;
    const Vector ones = Vector::Ones(residuals.rows());
    const double pair = kernels::gauss_pair_sum(residuals, ones, a2 / 2.0);
    const double first = (n + 2.0 * pair) / (n * n);
    double single = 0.0;
    for (Eigen::Index j = 0; j < residuals.rows(); ++j) {
        single += std::exp(-a2 * residuals.row(j).squaredNorm() / (2.0 * (1.0 + a2)));
    }
    return first - 2.0 * std::pow(1.0 + a2, -d / 2.0) * single / n + std::pow(1.0 + 2.0 * a2, -d / 2.0);
}

double hjg(const Matrix& residuals, double beta) {
    if (!(beta > 1.0) || !std::isfinite(beta)) {
        throw InvalidArgument("HJG needs beta > 1");
    }
    const double n = static_cast<double>(residuals.rows());
    const double d = static_cast<double>(residuals.cols());
    const double pair = sum_pairs_plus(residuals, [beta](double sum2, double) { return std::exp(sum2 / (4.0 * beta)); });
    double single = 0.0;
    for (Eigen::Index j = 0; j < residuals.rows(); ++j) {
        single += std::exp(residuals.row(j).squaredNorm() / (4.0 * beta - 2.0));
    }
    return pair / (n * std::pow(beta, d / 2.0)) - 2.0 * std::pow(beta - 0.5, -d / 2.0) * single +
           n * std::pow(beta - 1.0, -d / 2.0);
}

double hv(const Matrix& residuals, double gamma) {
    if (!(gamma > 2.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("HV needs gamma > 2");
    }
    const double n = static_cast<double>(residuals.rows());
    const double d = static_cast<double>(residuals.cols());
    const double coef = 1.0 / (4.0 * gamma * gamma) - 1.0 / (2.0 * gamma);
    const double pair = sum_pairs_plus(residuals, [&](double sum2, double dot) {
        return std::exp(sum2 / (4.0 * gamma)) * (dot + sum2 * coef + d / (2.0 * gamma));
    });
    return std::pow(kPi / gamma, d / 2.0) * pair / n;
}

double hv_inf(const Matrix& residuals) {
    return 2.0 * mardia_skewness(residuals) + 3.0 * mrs_skewness(residuals);
}

double bcmr(const Vector& raw) {
    const Eigen::Index n = raw.size();
    if (n < 2) {
        throw InvalidArgument("BCMR needs at least two observations");
    }
    const double nn = static_cast<double>(n);
    std::vector<double> x(raw.data(), raw.data() + n);
    std::sort(x.begin(), x.end());
    const double mean = raw.mean();
    const double var = (raw.array() - mean).square().sum() / nn;
    if (!(var > 0.0)) {
        throw SingularCovariance("BCMR needs a sample with positive variance");
    }
    double inner = 0.0;
    double upper = phi_of_quantile(0.0);
    for (Eigen::Index k = 1; k <= n; ++k) {
        const double lower = upper;
        upper = phi_of_quantile(static_cast<double>(k) / nn);
        inner += x[static_cast<std::size_t>(k - 1)] * (lower - upper);
    }
    // With t = Phi(x): int t(1-t) / phi(Phi^{-1}(t))^2 dt = int Phi(x)(1-Phi(x)) / phi(x) dx.
    const double lo = normal_quantile(1.0 / (nn + 1.0));
    const double hi = normal_quantile(nn / (nn + 1.0));
    const double correction = integrate_1d(
        [](double z) { return normal_cdf(z) * normal_sf(z) / normal_pdf(z); }, lo, hi, 1e-12);
    return nn * (1.0 - inner * inner / var) - correction;
}

double be(const Vector& residuals, double a) {
    const double av = TuningParameter(a).value();
    const Eigen::Index n = residuals.size();
    const double nn = static_cast<double>(n);
    std::vector<double> y(residuals.data(), residuals.data() + n);
    std::sort(y.begin(), y.end());
    const double sa = std::sqrt(av);
    const double c = av / std::sqrt(2.0 * kPi * av);
    // Prefix sums over j < k of (Y_j^2 - 1), Y_j, Y_j^2.
    double s_sq_minus = 0.0;
    double s_lin = 0.0;
    double s_sq = 0.0;
    double pair = 0.0;
    double single = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double yk = y[static_cast<std::size_t>(k)];
        const double tail = normal_sf(yk / sa);
        const double g = c * std::exp(-yk * yk / (2.0 * av));
        const double kk = static_cast<double>(k);
        pair += tail * ((yk * yk - 1.0) * s_sq_minus + av * yk * s_lin) + g * (-yk * s_sq + kk * yk + s_lin);
        single += tail * (yk * yk * yk * yk + (av - 2.0) * yk * yk + 1.0) + g * (2.0 * yk - yk * yk * yk);
        s_sq_minus += yk * yk - 1.0;
        s_lin += yk;
        s_sq += yk * yk;
    }
    return 2.0 / nn * pair + single / nn;
}

void CompetitorSpec::check(std::size_t d) const {
    const auto need = [&](bool ok, const char* what) {
        if (!ok) {
            throw InvalidArgument(what);
        }
    };
    const double v = tuning.value_or(0.0);
    switch (kind) {
        case CompetitorKind::T:
        case CompetitorKind::BHEP:
            need(tuning.has_value() && v > 0.0 && std::isfinite(v), "tuning parameter a must be positive");
            break;
        case CompetitorKind::HJG:
            need(tuning.has_value() && v > 1.0, "HJG needs beta > 1");
            break;
        case CompetitorKind::HV:
            need(tuning.has_value() && v > 2.0, "HV needs gamma > 2");
            break;
        case CompetitorKind::HVInf:
            break;
        case CompetitorKind::BCMR:
            need(d == 1, "BCMR is a univariate statistic");
            break;
        case CompetitorKind::BE:
            need(d == 1, "BE is a univariate statistic");
            need(tuning.has_value() && v > 0.0, "BE needs a > 0");
            break;
    }
}

std::string CompetitorSpec::label() const {
    std::ostringstream os;
    switch (kind) {
        case CompetitorKind::T: os << "T"; break;
        case CompetitorKind::BHEP: os << "BHEP"; break;
        case CompetitorKind::HJG: os << "HJG"; break;
        case CompetitorKind::HV: os << "HV"; break;
        case CompetitorKind::HVInf: os << "HVinf"; break;
        case CompetitorKind::BCMR: os << "BCMR"; break;
        case CompetitorKind::BE: os << "BE"; break;
    }
    if (tuning) {
        os << "_" << *tuning;
    }
    return os.str();
}

CompetitorSpec parse_competitor(const std::string& text) {
    std::string t;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch)) == 0) {
            t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    const auto colon = t.find(':');
    const std::string name = t.substr(0, colon);
    std::optional<double> value;
    if (colon != std::string::npos) {
        const std::string arg = t.substr(colon + 1);
        std::size_t used = 0;
        try {
            value = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size()) {
            throw ParseError("bad tuning value in '" + text + "'");
        }
    }
    CompetitorSpec spec;
    if (name == "t") {
        spec.kind = CompetitorKind::T;
    } else if (name == "bhep") {
        spec.kind = CompetitorKind::BHEP;
    } else if (name == "hjg") {
        spec.kind = CompetitorKind::HJG;
        value = value.value_or(1.5);
    } else if (name == "hv") {
        spec.kind = CompetitorKind::HV;
        value = value.value_or(5.0);
    } else if (name == "hvinf") {
        spec.kind = CompetitorKind::HVInf;
    } else if (name == "bcmr") {
        spec.kind = CompetitorKind::BCMR;
    } else if (name == "be") {
        spec.kind = CompetitorKind::BE;
    } else {
        throw ParseError("unknown statistic '" + name + "'");
    }
    if ((spec.kind == CompetitorKind::HVInf || spec.kind == CompetitorKind::BCMR) && value) {
        throw ParseError("statistic '" + name + "' takes no tuning value");
    }
    spec.tuning = value;
    return spec;
}

double evaluate(const CompetitorSpec& spec, const Matrix& raw) {
    const auto d = static_cast<std::size_t>(raw.cols());
    spec.check(d);
    if (spec.kind == CompetitorKind::BCMR) {
        return bcmr(raw.col(0));
    }
    const Matrix y = standardize_rows(raw);
    switch (spec.kind) {
        case CompetitorKind::T:
            return scale_factor(d, *spec.tuning) * t_statistic_value(y, *spec.tuning);
        case CompetitorKind::BHEP:
            return bhep(y, *spec.tuning);
        case CompetitorKind::HJG:
            return hjg(y, *spec.tuning);
        case CompetitorKind::HV:
            return hv(y, *spec.tuning);
        case CompetitorKind::HVInf:
            return hv_inf(y);
        case CompetitorKind::BE:
            return be(y.col(0), *spec.tuning);
        default:
            throw InvalidArgument("unhandled statistic");
    }
}

}  // namespace normtest
