#pragma once

#include "bmc/rng.hpp"
#include "bmc/stats.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bmc {

// Modified Bessel function of the first kind, order one.
// Series for u <= 20, asymptotic expansion above. Returns +inf once I1 overflows
// (u > ~713); use bessel_i1_log or bessel_i1e there.
double bessel_i1(double u);
double bessel_i1e(double u);     // exp(-u) I1(u)
double bessel_i1_log(double u);  // log I1(u), u > 0

// The two branches, exposed for cross-validation.
double bessel_i1_series(double u);
double bessel_i1e_asymptotic(double u);

// Zero-dimensional Bessel process R started at r (R_0 = r).
struct BesselLaw {
    double r = 1.0;
    double t = 1.0;
};

// Density of R_s at y > 0 given R_0 = r (the absorbed mass at 0 is not part of it).
double transition_density(double r, double s, double y);
double log_transition_density(double r, double s, double y);
// Same law expressed for X = R^2 at x > 0.
double besq_density(double x0, double s, double x);

// Exact BESQ0 draw: N ~ Poisson(x0/(2s)), X = 0 if N = 0 else Gamma(N, scale 2s).
double sample_besq0(double x0, double s, Engine& eng);
double sample_besq0(double x0, double s, RunSeed seed);

struct BesqPathSkeleton {
    std::vector<double> times;
    std::vector<double> values;  // X = R^2
};

// Markov iteration of sample_besq0 over an increasing grid starting at 0.
BesqPathSkeleton sample_bessel_path(const BesselLaw& law, const std::vector<double>& grid, Engine& eng);
BesqPathSkeleton sample_bessel_path(const BesselLaw& law, const std::vector<double>& grid, RunSeed seed);

struct LogValue {
    double value = 0.0;      // may underflow to 0 or overflow to inf
    double log_value = 0.0;  // always finite when value > 0 mathematically
};

// P_r[R_t >= lambda] by quadrature of the density.
LogValue tail_prob(double r, double t, double lambda);
// C sqrt(r) e^{lambda r/t} (1/lambda) e^{-lambda^2/(2t)}
LogValue tail_bound(double r, double t, double lambda, double C);

// E_r[e^{gamma R_t}] restricted to R_t > 0, optionally to |R_t - gamma t| <= M sqrt(t).
LogValue exp_moment(double r, double t, double gamma, std::optional<double> window = std::nullopt);
// C sqrt(r) e^{C r} t^{-1/2} e^{gamma^2 t/2}
LogValue exp_moment_bound(double r, double t, double gamma, double C);

// Smallest C with value <= exp_moment_bound(r, t, gamma, C).
double exp_moment_bound_constant(double r, double t, double gamma, double value_log);

// Gaussian mass of [-M, M]: 1 - p(M).
double gaussian_window_mass(double M);

// t e^{gamma^2 t/2} P_r[R_t >= gamma t + b] / (r I1(gamma r) e^{-b gamma}/gamma), per t.
std::vector<double> l1_limit_check(double r, double gamma, double b, const std::vector<double>& t_ladder);
// (1/(gamma sqrt(2 pi))) sqrt(t) e^{-gamma^2 t/2} E_r[e^{gamma R_t}; |R_t - gamma t| <= M sqrt t]
//   / ((r I1(gamma r)/gamma)(1 - p(M))), per t. M = +inf drops the window.
std::vector<double> l2_limit_check(double r, double gamma, double M, const std::vector<double>& t_ladder);

// MC estimate of E_r[|R_s^2 - r^2|^p] from n exact draws.
EstimateCI besq_increment_moments(double r, double s, int p, std::size_t n, std::uint64_t seed,
                                  unsigned workers = 1);

struct WrappedNormal {
    double theta_series = 0.0;    // image sum of Gaussians
    double fourier_series = 0.0;  // cosine series
    double value = 0.0;           // = fourier_series
};

// Density of the angle theta0 + B_t (mod 2 pi); both truncations below 1e-16.
WrappedNormal wrapped_normal_density(double theta, double theta0, double t);
// max(1, 1/sqrt t) e^{-t/2}
double wrapped_normal_envelope(double t);

struct GoodEventEstimate {
    double s0 = 0.0;
    double probability = 0.0;  // P[E_t(s0) | R_t >= gamma t + b]
    std::size_t conditioned = 0;
};

// E_t(s0) = {R_s <= gamma_tilde s + b_tilde for every integer s in [s0, t]}.
std::vector<GoodEventEstimate> bessel_good_event_probability(double r, double gamma, double gamma_tilde,
                                                             double b, double b_tilde, int t,
                                                             const std::vector<double>& s0_values,
                                                             std::size_t n, std::uint64_t seed);

} // namespace bmc
