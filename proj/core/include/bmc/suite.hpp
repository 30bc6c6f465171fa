#pragma once

#include "bmc/geometry.hpp"
#include "bmc/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bmc {

// Every n and threshold used by the acceptance checks lives here.
struct RingMeanConfig {
    double rho = 1.0;
    double eps = 0.1;
    double mesh = 1.0 / 200.0;
    std::size_t replicas = 10000;
    double rel_tol = 0.05;
};

struct HittingConfig {
    double rho = 1.0;
    double start = 0.5;
    double eps = 0.1;
    double mesh = 1.0 / 200.0;
    std::size_t replicas = 10000;
    double sigmas = 3.0;
    double ks_max = 0.05;
    double independence_z = 3.0;
    int angle_bins = 8;
};

struct FirstMomentConfig {
    double gamma = 0.5;
    double eps = 0.018315638888734179;  // e^{-4}
    double inner = 0.2;
    double outer = 0.8;
    double mesh = 1.0 / 400.0;
    std::size_t replicas = 10000;
    double rel_tol = 0.15;
    double rerun_mesh = 1.0 / 800.0;
    std::size_t rerun_replicas = 10000;
};

struct BesqConfig {
    double chi_x0 = 1.0;
    double chi_s = 0.5;
    std::size_t chi_draws = 1000000;
    int chi_bins = 60;
    double chi_p_min = 0.001;
    std::vector<double> mass_r{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> mass_s{0.1, 0.3, 1.0, 3.0, 10.0};
    double mass_tol = 1e-8;
    std::vector<double> martingale_x0{0.5, 1.0, 4.0};
    std::vector<double> martingale_s{0.25, 1.0};
    std::size_t martingale_draws = 1000000;
    double sigmas = 3.0;
};

struct L1Config {
    double r = 1.0;
    double gamma = 1.0;
    double b = 0.0;
    double t_coarse = 20.0;
    double t_fine = 40.0;
    double limit_tol = 0.05;
    std::vector<double> shifts{0.5, 1.0};
    std::vector<double> extrapolation_t{20.0, 40.0, 80.0, 160.0};
    double shift_tol = 1e-6;
};

struct RayKnightSuiteConfig {
    double eta = 1.0;
    double eta_prime = 0.1353352832366127;  // e^{-2}
    Point2 start{0.2, 0.0};
    double mesh = 1.0 / 400.0;
    std::size_t walks = 10000;
    int bins = 4;
    std::size_t draws_per_walk = 10;
    std::size_t min_per_bin = 100;
    double ks_max = 0.05;
};

struct ProfileConfig {
    double gamma = 0.8;
    std::vector<int> eps_p{3, 4, 5};  // eps = e^{-p}
    int main_p = 4;
    double b = 0.5;
    double inner = 0.2;
    double outer = 0.8;
    double mesh = 1.0 / 400.0;
    std::size_t replicas = 10000;
    double profile_lo = 0.8, profile_hi = 1.25;
    double mu_nu_lo = 0.7, mu_nu_hi = 1.4;
    double thick_lo = 0.5, thick_hi = 2.0;
};

struct FigureConfig {
    double mesh = 1.0 / 400.0;  // unit square: 401 x 401 vertices
    std::vector<double> gammas{0.3, 0.8, 1.3, 1.8};
    double eps = 0.018315638888734179;
    double top_share = 0.01;
};

struct WrappedNormalConfig {
    double t_min = 0.1;
    double t_max = 10.0;
    int t_points = 100;
    int angles = 64;
    double theta0 = 0.0;
    double agree_tol = 1e-10;
    double calibration_t = 0.1;
};

struct IncrementConfig {
    std::vector<int> p{1, 2};
    std::vector<double> s{0.04, 0.16, 0.64};
    std::vector<double> r{0.1, 1.0, 5.0};
    std::size_t draws = 100000;
    double bound = 5.0;
    double sigmas = 3.0;
};

struct InvariantConfig {
    std::vector<std::string> rerun{"AC-5", "AC-6", "AC-9", "AC-10", "AC-11"};
    std::vector<double> halving_mesh{1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0};
    std::size_t halving_replicas = 20000;
    double halving_rho = 1.0;
    double halving_eps = 0.1;
    double uniform_mesh = 1.0 / 100.0;
    std::size_t uniform_replicas = 100000;
    double uniform_p_min = 0.01;
    std::size_t small_replicas = 200;
};

struct SuiteConfig {
    std::string suite = "all";
    std::uint64_t seed = 20240617;
    unsigned workers = 0;
    std::string out;  // when set, AC-9 writes its heatmaps here
    std::map<std::string, double> budgets_s{{"AC-1", 300},  {"AC-2", 300},  {"AC-3", 600}, {"AC-4", 1800},
                                            {"AC-5", 120},  {"AC-6", 60},   {"AC-7", 1800}, {"AC-8", 2700},
                                            {"AC-9", 120},  {"AC-10", 1},   {"AC-11", 120}};
    RingMeanConfig ac1;
    HittingConfig ac2_3;
    FirstMomentConfig ac4;
    BesqConfig ac5;
    L1Config ac6;
    RayKnightSuiteConfig ac7;
    ProfileConfig ac8;
    FigureConfig ac9;
    WrappedNormalConfig ac10;
    IncrementConfig ac11;
    InvariantConfig ac12;
};

void to_json(nlohmann::json& j, const SuiteConfig& c);
// Keys absent from j keep their defaults.
void from_json(const nlohmann::json& j, SuiteConfig& c);

// "walk", "bessel", "chaos", "figure", "determinism", "all" or "none".
std::vector<std::string> suite_criteria(const std::string& suite);
const std::vector<std::string>& all_criteria();

struct CriterionResult {
    std::string id;
    Status status = Status::pass;  // from the checks alone
    double runtime_s = 0.0;
    double budget_s = 0.0;         // 0: no budget
    bool within_budget() const { return budget_s <= 0.0 || runtime_s <= budget_s; }
    bool passed() const { return status == Status::pass && within_budget(); }
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckReport> checks;
    std::vector<CriterionResult> criteria;
    bool passed() const;
};

std::vector<CheckReport> run_criterion(const std::string& id, const SuiteConfig& cfg);

using SuiteProgress = std::function<void(const CriterionResult&, const std::vector<CheckReport>&)>;
SuiteReport run_acceptance_suite(const SuiteConfig& cfg, const SuiteProgress& progress = {});

// Without runtime the JSON is a pure function of (config, seed).
nlohmann::json suite_json(const SuiteReport& r, bool include_runtime);
std::string suite_markdown(const SuiteReport& r);
// One line per criterion.
std::string criterion_line(const CriterionResult& c, const std::vector<CheckReport>& checks);

} // namespace bmc
