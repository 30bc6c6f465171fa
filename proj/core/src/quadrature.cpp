#include "bmc/quadrature.hpp"

#include "bmc/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmc {

namespace {

std::vector<double> knots(double a, double b, const std::vector<double>& breaks) {
    std::vector<double> k{a};
    for (double x : breaks)
        if (x > a && x < b) k.push_back(x);
    k.push_back(b);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breaks, const QuadratureOptions& opt) {
    if (!(b > a)) return {};
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto k = knots(a, b, breaks);
    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        double err = 0.0;
        const double v = GK::integrate(f, k[i], k[i + 1], opt.max_depth, opt.rel_tol, &err);
        if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value");
        out.value += v;
        out.error += err;
    }
    return out;
}

LogIntegral integrate_log(const std::function<double(double)>& logf, double a, double b,
                          double anchor, const std::vector<double>& breaks,
                          const QuadratureOptions& opt) {
    const double ref = logf(std::clamp(anchor, a, b));
    if (!std::isfinite(ref)) throw NumericalError("log-integrand not finite at anchor");
    auto g = [&](double y) { return std::exp(logf(y) - ref); };
    std::vector<double> br = breaks;
    br.push_back(anchor);
    const auto r = integrate(g, a, b, br, opt);
    if (!(r.value > 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {ref + std::log(r.value), r.error / r.value};
}

} // namespace bmc
