#include "normtest/normal.hpp"

#include <string>

#include <boost/math/distributions/normal.hpp>

#include "normtest/common.hpp"

namespace normtest {

namespace {
const boost::math::normal_distribution<double> kStd(0.0, 1.0);
}

double normal_pdf(double x) {
    return boost::math::pdf(kStd, x);
}

double normal_cdf(double x) {
    return boost::math::cdf(kStd, x);
}

double normal_sf(double x) {
    return boost::math::cdf(boost::math::complement(kStd, x));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidArgument("normal quantile needs 0 < p < 1, got " + std::to_string(p));
    }
    return boost::math::quantile(kStd, p);
}

}  // namespace normtest
