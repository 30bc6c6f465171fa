#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bmc {

struct EstimateCI {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n)
    std::size_t n = 0;
    double ci_level = 0.95;

    double half_width() const;
    double lower() const { return mean - half_width(); }
    double upper() const { return mean + half_width(); }
};

// Welford single-pass accumulator.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& o);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;  // unbiased

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

EstimateCI mc_mean(std::span<const double> xs, double ci_level = 0.95);
EstimateCI mc_mean(const RunningStats& s, double ci_level = 0.95);

double normal_quantile(double p);
double chi_square_survival(double x, double dof);

// Asymptotic Kolmogorov survival function Q(lambda) = P(sup |B_bridge| > lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
    double distance = 0.0;
    double p_value = 1.0;
};

KsResult ks_exponential(std::span<const double> samples, double mean);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

// Pearson test; bins with expected count below min_expected are pooled into a tail bin.
ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected,
                           double min_expected = 5.0);

struct AngleBin {
    double lo = 0.0, hi = 0.0;  // radians
    std::size_t n = 0;
    double mean = 0.0;
    double z = 0.0;
};

struct IndependenceResult {
    double max_rel_deviation = 0.0;
    double max_z = 0.0;
    std::size_t merged = 0;
    std::vector<AngleBin> bins;
};

// Bins angles in [0, 2 pi) and compares per-bin conditional means of value with the
// global mean. Bins under min_per_bin samples are merged into a neighbour.
IndependenceResult independence_check(std::span<const double> angles, std::span<const double> values,
                                      int bins = 8, std::size_t min_per_bin = 20);

// Polynomial (Neville) extrapolation of y(x) to x = 0.
double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys);

} // namespace bmc
