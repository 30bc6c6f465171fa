#include "bmc/bessel.hpp"

#include "bmc/error.hpp"
#include "bmc/parallel.hpp"
#include "bmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace bmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSwitch = 20.0;
constexpr double kTailSigmas = 40.0;  // exp(-800) beyond this many sqrt(t)

LogValue from_log(double lv) { return {std::exp(lv), lv}; }

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

} // namespace

double bessel_i1_series(double u) {
    if (u < 0.0) throw DomainError("bessel_i1: u must be >= 0");
    const double h = u / 2.0, h2 = h * h;
    double term = h, sum = h;
    for (int m = 0; m < 500; ++m) {
        term *= h2 / ((m + 1.0) * (m + 2.0));
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    return sum;
}

double bessel_i1e_asymptotic(double u) {
    if (!(u > 0.0)) throw DomainError("bessel_i1e_asymptotic: u must be > 0");
    double c = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = c * ((2.0 * k - 1.0) * (2.0 * k - 1.0) - 4.0) / (8.0 * k * u);
        if (std::abs(next) >= std::abs(c)) break;  // asymptotic series starts diverging
        c = next;
        sum += c;
        if (std::abs(c) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * kPi * u);
}

double bessel_i1(double u) {
    if (u < 0.0) throw DomainError("bessel_i1: u must be >= 0");
    if (u <= kSwitch) return bessel_i1_series(u);
    if (u > 709.0) {
        const double lv = u + std::log(bessel_i1e_asymptotic(u));
        return lv > std::log(std::numeric_limits<double>::max()) ? std::numeric_limits<double>::infinity()
                                                                  : std::exp(lv);
    }
    return std::exp(u) * bessel_i1e_asymptotic(u);
}

double bessel_i1e(double u) {
    if (u < 0.0) throw DomainError("bessel_i1e: u must be >= 0");
    if (u <= kSwitch) return bessel_i1_series(u) * std::exp(-u);
    return bessel_i1e_asymptotic(u);
}

double bessel_i1_log(double u) {
    if (!(u > 0.0)) throw DomainError("bessel_i1_log: u must be > 0");
    if (u <= kSwitch) return std::log(bessel_i1_series(u));
    return u + std::log(bessel_i1e_asymptotic(u));
}

double log_transition_density(double r, double s, double y) {
    require_positive(r, "r");
    require_positive(s, "s");
    require_positive(y, "y");
    const double d = r - y;
    return std::log(r / s) - d * d / (2.0 * s) + std::log(bessel_i1e(r * y / s));
}

double transition_density(double r, double s, double y) { return std::exp(log_transition_density(r, s, y)); }

double besq_density(double x0, double s, double x) {
    require_positive(x, "x");
    const double y = std::sqrt(x);
    return transition_density(std::sqrt(x0), s, y) / (2.0 * y);
}

double sample_besq0(double x0, double s, Engine& eng) {
    if (!(x0 >= 0.0)) throw DomainError("sample_besq0: x0 must be >= 0");
    require_positive(s, "s");
    if (x0 == 0.0) return 0.0;
    std::poisson_distribution<long long> pois(x0 / (2.0 * s));
    const long long n = pois(eng);
    if (n == 0) return 0.0;
    std::gamma_distribution<double> gam(static_cast<double>(n), 2.0 * s);
    return gam(eng);
}

double sample_besq0(double x0, double s, RunSeed seed) {
    Engine eng = make_engine(seed);
    return sample_besq0(x0, s, eng);
}

BesqPathSkeleton sample_bessel_path(const BesselLaw& law, const std::vector<double>& grid, Engine& eng) {
    if (grid.empty() || grid.front() != 0.0) throw DomainError("sample_bessel_path: grid must start at 0");
    if (!(law.r >= 0.0)) throw DomainError("sample_bessel_path: r must be >= 0");
    BesqPathSkeleton p{grid, {}};
    p.values.reserve(grid.size());
    double x = law.r * law.r;
    p.values.push_back(x);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double dt = grid[k] - grid[k - 1];
        if (!(dt > 0.0)) throw DomainError("sample_bessel_path: grid must be strictly increasing");
        x = sample_besq0(x, dt, eng);
        p.values.push_back(x);
    }
    return p;
}

BesqPathSkeleton sample_bessel_path(const BesselLaw& law, const std::vector<double>& grid, RunSeed seed) {
    Engine eng = make_engine(seed);
    return sample_bessel_path(law, grid, eng);
}

LogValue tail_prob(double r, double t, double lambda) {
    require_positive(r, "r");
    require_positive(t, "t");
    require_positive(lambda, "lambda");
    const double st = std::sqrt(t);
    const double upper = std::max(lambda, r) + kTailSigmas * st;
    const double anchor = std::max(lambda, std::max(r, st));
    std::vector<double> br{r};
    for (double k : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) br.push_back(lambda + k * st);
    auto logq = [&](double y) { return y > 0.0 ? log_transition_density(r, t, y) : -HUGE_VAL; };
    const auto li = integrate_log(logq, lambda, upper, anchor, br, {1e-12, 18});
    return from_log(li.log_value);
}

LogValue tail_bound(double r, double t, double lambda, double C) {
    return from_log(std::log(C) + 0.5 * std::log(r) + lambda * r / t - std::log(lambda) - lambda * lambda / (2.0 * t));
}

LogValue exp_moment(double r, double t, double gamma, std::optional<double> window) {
    require_positive(r, "r");
    require_positive(t, "t");
    if (!(gamma >= 0.0)) throw DomainError("exp_moment: gamma must be >= 0");
    const double st = std::sqrt(t);
    double a = 0.0, b = std::max(r, gamma * t) + r + kTailSigmas * st;
    if (window) {
        if (!(*window > 0.0)) throw DomainError("exp_moment: window M must be positive");
        a = std::max(0.0, gamma * t - *window * st);
        b = gamma * t + *window * st;
        if (!(b > a)) return {0.0, -HUGE_VAL};
    }
    const double anchor = std::clamp(r + gamma * t, a, b);
    std::vector<double> br{r, gamma * t};
    for (double k : {-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0}) br.push_back(anchor + k * st);
    auto logf = [&](double y) { return y > 0.0 ? gamma * y + log_transition_density(r, t, y) : -HUGE_VAL; };
    const auto li = integrate_log(logf, a, b, anchor, br, {1e-12, 18});
    return from_log(li.log_value);
}

LogValue exp_moment_bound(double r, double t, double gamma, double C) {
    return from_log(std::log(C) + 0.5 * std::log(r) + C * r - 0.5 * std::log(t) + gamma * gamma * t / 2.0);
}

double exp_moment_bound_constant(double r, double t, double gamma, double value_log) {
    auto f = [&](double C) { return exp_moment_bound(r, t, gamma, C).log_value; };
    double lo = 1e-300, hi = 1.0;
    while (f(hi) < value_log) hi *= 2.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = lo < 1e-200 ? hi * 1e-3 : 0.5 * (lo + hi);
        if (f(mid) < value_log)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return hi;
}

double gaussian_window_mass(double M) {
    if (std::isinf(M)) return 1.0;
    return std::erf(M / std::sqrt(2.0));
}

std::vector<double> l1_limit_check(double r, double gamma, double b, const std::vector<double>& t_ladder) {
    require_positive(r, "r");
    require_positive(gamma, "gamma");
    const double log_limit = std::log(r) + bessel_i1_log(gamma * r) - std::log(gamma) - b * gamma;
    std::vector<double> out;
    for (double t : t_ladder) {
        require_positive(t, "t");
        const double lam = gamma * t + b;
        if (!(lam > 0.0)) throw DomainError("l1_limit_check: gamma t + b must be positive");
        const double lr = std::log(t) + gamma * gamma * t / 2.0 + tail_prob(r, t, lam).log_value - log_limit;
        out.push_back(std::exp(lr));
    }
    return out;
}

std::vector<double> l2_limit_check(double r, double gamma, double M, const std::vector<double>& t_ladder) {
    require_positive(r, "r");
    require_positive(gamma, "gamma");
    if (!(M > 0.0)) throw DomainError("l2_limit_check: M must be positive");
    const double log_limit =
        std::log(r) + bessel_i1_log(gamma * r) - std::log(gamma) + std::log(gaussian_window_mass(M));
    std::vector<double> out;
    for (double t : t_ladder) {
        require_positive(t, "t");
        const auto em = std::isinf(M) ? exp_moment(r, t, gamma) : exp_moment(r, t, gamma, M);
        const double lr = -std::log(gamma * std::sqrt(2.0 * kPi)) + 0.5 * std::log(t) - gamma * gamma * t / 2.0 +
                          em.log_value - log_limit;
        out.push_back(std::exp(lr));
    }
    return out;
}

EstimateCI besq_increment_moments(double r, double s, int p, std::size_t n, std::uint64_t seed, unsigned workers) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("besq_increment_moments: s must be in (0,1)");
    if (p < 1 || p > 3) throw DomainError("besq_increment_moments: p must be 1, 2 or 3");
    if (!(r >= 0.0)) throw DomainError("besq_increment_moments: r must be >= 0");
    const double x0 = r * r;
    const auto xs = draw_samples(n, seed, workers, [&](Engine& eng) {
        return std::pow(std::abs(sample_besq0(x0, s, eng) - x0), p);
    });
    return mc_mean(xs);
}

WrappedNormal wrapped_normal_density(double theta, double theta0, double t) {
    require_positive(t, "t");
    double d = std::remainder(theta - theta0, 2.0 * kPi);  // in [-pi, pi]
    WrappedNormal w;
    const int n_img = static_cast<int>(std::ceil((std::sqrt(2.0 * t * 40.0) + kPi) / (2.0 * kPi))) + 1;
    double s = 0.0;
    for (int n = -n_img; n <= n_img; ++n) {
        const double x = d + 2.0 * kPi * n;
        s += std::exp(-x * x / (2.0 * t));
    }
    w.theta_series = s / std::sqrt(2.0 * kPi * t);
    const int p_max = static_cast<int>(std::ceil(std::sqrt(80.0 / t))) + 1;
    double c = 1.0;
    for (int p = 1; p <= p_max; ++p) c += 2.0 * std::cos(p * d) * std::exp(-p * p * t / 2.0);
    w.fourier_series = c / (2.0 * kPi);
    w.value = w.fourier_series;
    return w;
}

double wrapped_normal_envelope(double t) {
    require_positive(t, "t");
    return std::max(1.0, 1.0 / std::sqrt(t)) * std::exp(-t / 2.0);
}

std::vector<GoodEventEstimate> bessel_good_event_probability(double r, double gamma, double gamma_tilde, double b,
                                                             double b_tilde, int t,
                                                             const std::vector<double>& s0_values, std::size_t n,
                                                             std::uint64_t seed) {
    if (!(gamma_tilde > gamma && gamma > 0.0)) throw DomainError("good event: need gamma_tilde > gamma > 0");
    if (t < 1) throw DomainError("good event: t must be >= 1");
    // Per path: conditioned flag, and the largest integer s violating the cap (or -1).
    std::vector<double> last_violation(n, -2.0);
    constexpr std::size_t chunk = 4096;
    parallel_for((n + chunk - 1) / chunk, 1, [&](std::size_t c, unsigned) {
        Engine eng = make_engine({seed, c});
        for (std::size_t i = c * chunk; i < std::min(n, (c + 1) * chunk); ++i) {
            double x = r * r;
            double worst = -1.0;
            for (int s = 1; s <= t; ++s) {
                x = sample_besq0(x, 1.0, eng);
                if (std::sqrt(x) > gamma_tilde * s + b_tilde) worst = s;
            }
            last_violation[i] = std::sqrt(x) >= gamma * t + b ? worst : -2.0;
        }
    });
    std::vector<GoodEventEstimate> out;
    for (double s0 : s0_values) {
        GoodEventEstimate e{s0, 0.0, 0};
        std::size_t good = 0;
        for (double v : last_violation) {
            if (v == -2.0) continue;
            ++e.conditioned;
            if (v < s0) ++good;
        }
        e.probability = e.conditioned ? static_cast<double>(good) / static_cast<double>(e.conditioned) : 0.0;
        out.push_back(e);
    }
    return out;
}

} // namespace bmc
