#pragma once

#include <functional>
#include <vector>

namespace bmc {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

struct QuadratureOptions {
    double rel_tol = 1e-11;
    unsigned max_depth = 18;
};

// Adaptive Gauss-Kronrod on [a, b] split at the given interior breakpoints.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breaks = {},
                           const QuadratureOptions& opt = {});

// log of the integral of exp(logf) over [a, b]. The integrand is rescaled by
// exp(-logf(anchor)) so very large or very small values never leave double range.
struct LogIntegral {
    double log_value = 0.0;
    double rel_error = 0.0;
};
LogIntegral integrate_log(const std::function<double(double)>& logf, double a, double b,
                          double anchor, const std::vector<double>& breaks = {},
                          const QuadratureOptions& opt = {});

} // namespace bmc
