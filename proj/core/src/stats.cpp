#include "bmc/stats.hpp"

#include "bmc/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace bmc {

double EstimateCI::half_width() const { return normal_quantile(0.5 + ci_level / 2.0) * std_error; }

void RunningStats::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

EstimateCI mc_mean(const RunningStats& s, double ci_level) {
    if (s.count() < 2) throw DomainError("mc_mean needs at least two samples");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw DomainError("ci_level must be in (0,1)");
    return {s.mean(), std::sqrt(s.variance() / static_cast<double>(s.count())), s.count(), ci_level};
}

EstimateCI mc_mean(std::span<const double> xs, double ci_level) {
    RunningStats s;
    for (double x : xs) s.add(x);
    return mc_mean(s, ci_level);
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double chi_square_survival(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (lambda < 1.18) {
        // Jacobi-transformed form converges fast for small lambda.
        double s = 0.0;
        for (int k = 1; k < 40; k += 2) s += std::exp(-k * k * pi * pi / (8.0 * lambda * lambda));
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k < 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_exponential(std::span<const double> samples, double mean) {
    const std::size_t n = samples.size();
    if (n < 100) throw DomainError("ks_exponential needs n >= 100");
    if (!(mean > 0.0)) throw DomainError("ks_exponential: mean must be positive");
    std::vector<double> x(samples.begin(), samples.end());
    for (double v : x)
        if (!(v >= 0.0)) throw DomainError("ks_exponential: samples must be nonnegative");
    std::sort(x.begin(), x.end());
    double d = 0.0;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = -std::expm1(-x[i] / mean);
        d = std::max({d, (i + 1) / nn - f, f - i / nn});
    }
    return {d, kolmogorov_survival(std::sqrt(nn) * d)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 100 || b.size() < 100) throw DomainError("ks_two_sample needs n >= 100 in both samples");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_survival(std::sqrt(ne) * d)};
}

ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected,
                           double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw DomainError("chi_square: observed and expected must match and be non-empty");
    ChiSquareResult r;
    double pool_o = 0.0, pool_e = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        if (expected[k] < min_expected) {
            pool_o += observed[k];
            pool_e += expected[k];
            continue;
        }
        r.statistic += std::pow(observed[k] - expected[k], 2) / expected[k];
        ++bins;
    }
    if (pool_e > 0.0) {
        r.statistic += std::pow(pool_o - pool_e, 2) / pool_e;
        ++bins;
    }
    r.dof = std::max(1, bins - 1);
    r.p_value = chi_square_survival(r.statistic, r.dof);
    return r;
}

IndependenceResult independence_check(std::span<const double> angles, std::span<const double> values, int bins,
                                      std::size_t min_per_bin) {
    if (angles.size() != values.size()) throw DomainError("independence_check: size mismatch");
    if (bins < 1) throw DomainError("independence_check: need at least one bin");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    struct Acc {
        double lo, hi;
        RunningStats s;
    };
    std::vector<Acc> acc;
    for (int k = 0; k < bins; ++k) acc.push_back({two_pi * k / bins, two_pi * (k + 1) / bins, {}});
    RunningStats all;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double a = std::fmod(angles[i], two_pi);
        if (a < 0) a += two_pi;
        const int k = std::min(bins - 1, static_cast<int>(a / two_pi * bins));
        acc[k].s.add(values[i]);
        all.add(values[i]);
    }
    IndependenceResult out;
    // Merge under-filled bins into the next bin (cyclically) until all are large enough.
    for (;;) {
        if (acc.size() <= 1) break;
        auto it = std::min_element(acc.begin(), acc.end(), [](const Acc& x, const Acc& y) {
            return x.s.count() < y.s.count();
        });
        if (it->s.count() >= min_per_bin) break;
        const std::size_t k = static_cast<std::size_t>(it - acc.begin());
        const std::size_t nb = (k + 1) % acc.size();
        acc[nb].s.merge(acc[k].s);
        if (nb == 0)
            acc[nb].hi = acc[k].hi + two_pi;  // wraps past 2 pi
        else
            acc[nb].lo = acc[k].lo;
        acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(k));
        ++out.merged;
    }
    const double m = all.mean();
    const double sd = std::sqrt(all.variance());
    for (const auto& a : acc) {
        AngleBin b{a.lo, a.hi, a.s.count(), a.s.mean(), 0.0};
        if (acc.size() > 1 && a.s.count() > 0) {
            const double se = sd / std::sqrt(static_cast<double>(a.s.count()));
            b.z = se > 0.0 ? std::abs(a.s.mean() - m) / se : 0.0;
            if (m != 0.0) out.max_rel_deviation = std::max(out.max_rel_deviation, std::abs(a.s.mean() - m) / std::abs(m));
            out.max_z = std::max(out.max_z, b.z);
        }
        out.bins.push_back(b);
    }
    return out;
}

double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty()) throw DomainError("extrapolate_to_zero: bad input");
    std::vector<double> p(ys.begin(), ys.end());
    const std::size_t n = p.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
    return p[0];
}

} // namespace bmc
