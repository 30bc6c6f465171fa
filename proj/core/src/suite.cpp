#include "bmc/suite.hpp"

#include "bmc/bessel.hpp"
#include "bmc/chaos.hpp"
#include "bmc/error.hpp"
#include "bmc/heatmap.hpp"
#include "bmc/json_io.hpp"
#include "bmc/local_time_field.hpp"
#include "bmc/parallel.hpp"
#include "bmc/ray_knight.hpp"
#include "bmc/stats.hpp"
#include "bmc/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

namespace bmc {

#define BMC_JSON_TO(f) nlohmann_json_j[#f] = nlohmann_json_t.f;
#define BMC_JSON_FROM(f) \
    if (nlohmann_json_j.contains(#f)) nlohmann_json_j.at(#f).get_to(nlohmann_json_t.f);
#define BMC_JSON(Type, ...)                                                                 \
    void to_json(nlohmann::json& nlohmann_json_j, const Type& nlohmann_json_t) {            \
        NLOHMANN_JSON_EXPAND(NLOHMANN_JSON_PASTE(BMC_JSON_TO, __VA_ARGS__))                 \
    }                                                                                       \
    void from_json(const nlohmann::json& nlohmann_json_j, Type& nlohmann_json_t) {          \
        NLOHMANN_JSON_EXPAND(NLOHMANN_JSON_PASTE(BMC_JSON_FROM, __VA_ARGS__))               \
    }

BMC_JSON(RingMeanConfig, rho, eps, mesh, replicas, rel_tol)
BMC_JSON(HittingConfig, rho, start, eps, mesh, replicas, sigmas, ks_max, independence_z, angle_bins)
BMC_JSON(FirstMomentConfig, gamma, eps, inner, outer, mesh, replicas, rel_tol, rerun_mesh, rerun_replicas)
BMC_JSON(BesqConfig, chi_x0, chi_s, chi_draws, chi_bins, chi_p_min, mass_r, mass_s, mass_tol, martingale_x0,
         martingale_s, martingale_draws, sigmas)
BMC_JSON(L1Config, r, gamma, b, t_coarse, t_fine, limit_tol, shifts, extrapolation_t, shift_tol)
BMC_JSON(RayKnightSuiteConfig, eta, eta_prime, start, mesh, walks, bins, draws_per_walk, min_per_bin, ks_max)
BMC_JSON(ProfileConfig, gamma, eps_p, main_p, b, inner, outer, mesh, replicas, profile_lo, profile_hi, mu_nu_lo,
         mu_nu_hi, thick_lo, thick_hi)
BMC_JSON(FigureConfig, mesh, gammas, eps, top_share)
BMC_JSON(WrappedNormalConfig, t_min, t_max, t_points, angles, theta0, agree_tol, calibration_t)
BMC_JSON(IncrementConfig, p, s, r, draws, bound, sigmas)
BMC_JSON(InvariantConfig, rerun, halving_mesh, halving_replicas, halving_rho, halving_eps, uniform_mesh,
         uniform_replicas, uniform_p_min, small_replicas)
BMC_JSON(SuiteConfig, suite, seed, workers, out, budgets_s, ac1, ac2_3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11,
         ac12)

namespace {

constexpr double kPi = std::numbers::pi;
using Reports = std::vector<CheckReport>;

std::uint64_t seed_for(const SuiteConfig& c, const std::string& tag) { return derive_seed(c.seed, tag); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double angle_of(Point2 p) {
    double a = std::atan2(p.y, p.x);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

// ---- walk suite ----

Reports ac1(const SuiteConfig& c) {
    const auto& a = c.ac1;
    const auto d = DomainSpec::disc({0, 0}, a.rho, {a.eps, 0.0});
    const LatticeConfig lc{a.mesh};
    const Lattice lat(d, lc);
    auto r = map_replicas(lat, {a.replicas, seed_for(c, "AC-1"), c.workers},
                          [&](const OccupationField& f, std::size_t, unsigned) {
                              return local_time_estimate(f, {{0, 0}, a.eps}, lc).value;
                          });
    const auto m = mc_mean(r.values);
    const double expected = expected_local_time_ring(a.eps, a.rho);
    return {make_check("AC-1/ring-mean", "AC-1", "mean circle local time before exiting D(x,r) is 2 eps log(r/eps)",
                       Comparator::rel_diff, {m.mean}, {expected}, a.rel_tol,
                       "stderr " + fmt(m.std_error) + ", truncated " + std::to_string(r.truncated))};
}

struct HitData {
    std::size_t n = 0, hits = 0;
    std::vector<double> local_times, angles;
};

HitData hitting_walks(const SuiteConfig& c) {
    const auto& a = c.ac2_3;
    const auto d = DomainSpec::disc({0, 0}, a.rho, {a.start, 0.0});
    const LatticeConfig lc{a.mesh};
    const Lattice lat(d, lc);
    auto r = map_replicas(lat, {a.replicas, seed_for(c, "AC-2/3"), c.workers},
                          [&](const OccupationField& f, std::size_t, unsigned) {
                              return exit_sample_from(f, {{0, 0}, a.eps}, lc);
                          });
    HitData h;
    h.n = r.values.size();
    for (const auto& s : r.values) {
        if (!s.hit) continue;
        ++h.hits;
        if (s.local_time > 0.0) {
            h.local_times.push_back(s.local_time);
            h.angles.push_back(angle_of(s.exit_point));
        }
    }
    return h;
}

Reports ac2(const SuiteConfig& c) {
    const auto& a = c.ac2_3;
    const auto h = hitting_walks(c);
    const double p = hit_prob_concentric(a.start, a.eps, a.rho);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(h.n));
    const double freq = static_cast<double>(h.hits) / static_cast<double>(h.n);
    return {make_check("AC-2/hit-frequency", "AC-2", "P(hit D(x,eps) before exit) = log(|y|/rho)/log(eps/rho)",
                       Comparator::abs_diff, {freq}, {p}, a.sigmas * sigma,
                       "hits " + std::to_string(h.hits) + " of " + std::to_string(h.n))};
}

Reports ac3(const SuiteConfig& c) {
    const auto& a = c.ac2_3;
    const auto h = hitting_walks(c);
    const double mean = expected_local_time_ring(a.eps, a.rho);
    const auto ks = ks_exponential(h.local_times, mean);
    const auto ind = independence_check(h.angles, h.local_times, a.angle_bins);
    return {make_check("AC-3/exponential-law", "AC-3",
                       "local time given a hit is exponential with mean 2 eps log(rho/eps)", Comparator::at_most,
                       {ks.distance}, {a.ks_max}, 0.0,
                       "n " + std::to_string(h.local_times.size()) + ", p " + fmt(ks.p_value)),
            make_check("AC-3/independence", "AC-3", "local time independent of the exit point", Comparator::at_most,
                       {ind.max_z}, {a.independence_z}, 0.0,
                       "max relative deviation " + fmt(ind.max_rel_deviation) + ", merged " +
                           std::to_string(ind.merged))};
}

// ---- chaos suite ----

// Runs n walks and reduces each one at every scale with f(sample, scale index), so
// only the reduced records are kept.
template <class F>
auto scale_ensemble(const Lattice& lat, const std::vector<double>& eps, const Region& region, std::size_t n,
                    std::uint64_t seed, unsigned workers, F f) {
    using R = std::invoke_result_t<F&, const ThicknessSample&, std::size_t>;
    std::vector<ScaleSampler> samplers;
    for (double e : eps) samplers.emplace_back(lat, e, region);
    const unsigned w = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(n));
    std::vector<std::vector<ScaleSampler::Scratch>> scratch(w);
    for (auto& s : scratch)
        for (const auto& sm : samplers) s.push_back(sm.make_scratch());
    auto r = map_replicas(lat, {n, seed, w}, [&](const OccupationField& fld, std::size_t, unsigned k) {
        std::vector<R> out;
        for (std::size_t q = 0; q < samplers.size(); ++q) out.push_back(f(samplers[q].sample(fld, scratch[k][q]), q));
        return out;
    });
    std::vector<std::vector<R>> by_eps(eps.size());
    for (auto& v : r.values)
        for (std::size_t q = 0; q < eps.size(); ++q) by_eps[q].push_back(std::move(v[q]));
    return by_eps;
}

double mean_mu(const Lattice& lat, double gamma, double eps, const Region& region, std::size_t n,
               std::uint64_t seed, unsigned workers, double* se) {
    const auto m = scale_ensemble(lat, {eps}, region, n, seed, workers, [&](const ThicknessSample& s, std::size_t) {
        return mu_mass(s, gamma, eps, lat.mesh());
    });
    const auto ci = mc_mean(m[0]);
    if (se) *se = ci.std_error;
    return ci.mean;
}

Reports ac4(const SuiteConfig& c) {
    const auto& a = c.ac4;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    const Region region = Annulus{{0, 0}, a.inner, a.outer};
    const double limit = first_moment_integral(d, a.gamma, region).value;
    double se1 = 0, se2 = 0;
    const double m1 = mean_mu(Lattice(d, {a.mesh}), a.gamma, a.eps, region, a.replicas, seed_for(c, "AC-4"),
                              c.workers, &se1);
    const double m2 = mean_mu(Lattice(d, {a.rerun_mesh}), a.gamma, a.eps, region, a.rerun_replicas,
                              seed_for(c, "AC-4/rerun"), c.workers, &se2);
    return {make_check("AC-4/first-moment", "AC-4", "E mu_eps(A) tends to the first-moment integral",
                       Comparator::rel_diff, {m1}, {limit}, a.rel_tol,
                       "stderr " + fmt(se1) + ", ratio " + fmt(m1 / limit)),
            make_check("AC-4/mesh-refinement", "AC-4", "halving h moves the estimate toward the integral",
                       Comparator::strictly_decreasing, {std::abs(m1 - limit), std::abs(m2 - limit)}, {}, 0.0,
                       "means " + fmt(m1) + " -> " + fmt(m2) + ", stderr " + fmt(se2))};
}

Reports ac8(const SuiteConfig& c) {
    const auto& a = c.ac8;
    const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
    const Region region = Annulus{{0, 0}, a.inner, a.outer};
    const Lattice lat(d, {a.mesh});
    std::vector<double> eps;
    for (int p : a.eps_p) eps.push_back(std::exp(-static_cast<double>(p)));
    const std::vector<double> b_grid{0.0, a.b};
    const auto by_eps = scale_ensemble(lat, eps, region, a.replicas, seed_for(c, "AC-8"), c.workers,
                                       [&](const ThicknessSample& s, std::size_t q) {
                                           return walk_masses(s, a.gamma, eps[q], a.mesh, b_grid);
                                       });
    const auto main_it = std::find(a.eps_p.begin(), a.eps_p.end(), a.main_p);
    if (main_it == a.eps_p.end()) throw DomainError("AC-8: main_p must be on the eps ladder");
    const std::size_t mi = static_cast<std::size_t>(main_it - a.eps_p.begin());

    std::vector<double> ratios, gaps;
    std::size_t dropped = 0;
    for (std::size_t q = 0; q < eps.size(); ++q) {
        const auto p = nu_exponential_profile(by_eps[q], a.gamma, b_grid);
        ratios.push_back(p.ratio[1]);
        gaps.push_back(std::abs(p.ratio[1] - 1.0));
        dropped += p.dropped;
    }
    std::string ladder = "ratios";
    for (double r : ratios) ladder += " " + fmt(r);
    const auto mn = mu_nu_consistency(by_eps[mi], a.gamma);
    const auto th = thick_area_consistency(by_eps[mi], a.gamma);
    return {make_check("AC-8/profile", "AC-8", "e^{gamma b} nu(b,inf)/nu(0,inf) tends to 1", Comparator::in_range,
                       {ratios[mi]}, {a.profile_lo, a.profile_hi}, 0.0,
                       ladder + ", dropped " + std::to_string(dropped)),
            make_check("AC-8/profile-trend", "AC-8", "|ratio - 1| non-increasing as eps decreases",
                       Comparator::non_increasing, gaps, {}, 0.0, ladder),
            make_check("AC-8/mu-nu", "AC-8", "nu(A x (0,inf)) tends to mu(A)/(sqrt(2 pi) gamma)", Comparator::in_range,
                       {mn.ratio}, {a.mu_nu_lo, a.mu_nu_hi}, 0.0,
                       "means " + fmt(mn.numerator) + " / " + fmt(mn.denominator)),
            make_check("AC-8/thick-area", "AC-8", "rescaled thick-point area tends to mu(A)/(sqrt(2 pi) gamma)",
                       Comparator::in_range, {th.ratio}, {a.thick_lo, a.thick_hi}, 0.0,
                       "means " + fmt(th.numerator) + " / " + fmt(th.denominator))};
}

// ---- figure ----

struct FigureRun {
    std::vector<double> top;
    std::vector<std::size_t> support;
    std::vector<std::vector<std::uint8_t>> pixels;
};

FigureRun figure_run(const SuiteConfig& c, const std::string& out_dir) {
    const auto& a = c.ac9;
    const auto d = DomainSpec::rectangle({0, 0}, 1.0, 1.0, {0.5, 0.5});
    const LatticeConfig lc{a.mesh};
    const auto field = run_killed_walk(d, lc, {seed_for(c, "AC-9"), 0});
    const auto lt = compute_local_time_field(field, a.eps, lc);
    const auto region = region_mask(field, WholeDomain{}, lc);
    FigureRun fr;
    for (double g : a.gammas) {
        const auto cf = build_mu(lt, region, g);
        fr.top.push_back(top_mass_fraction(cf, a.top_share));
        fr.support.push_back(cf.region_cells);
        const auto img = render_heatmap(cf);
        fr.pixels.push_back(img.rgb);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            const std::string stem = out_dir + "/figure_gamma_" + fmt(g);
            write_ppm(img, stem + ".ppm");
        }
    }
    return fr;
}

Reports ac9(const SuiteConfig& c) {
    const auto a = figure_run(c, c.out.empty() ? "" : c.out + "/figure");
    const auto b = figure_run(c, "");
    const bool same = a.pixels == b.pixels;
    const bool support = std::all_of(a.support.begin(), a.support.end(), [&](auto s) { return s == a.support[0]; });
    std::string tops = "top-share mass";
    for (double t : a.top) tops += " " + fmt(t);
    return {make_check("AC-9/concentration", "AC-9", "mass concentrates as gamma grows, same walk",
                       Comparator::strictly_increasing, a.top, {}, 0.0, tops),
            make_check("AC-9/deterministic", "AC-9", "heatmaps are a pure function of the seed", Comparator::abs_diff,
                       {same && support ? 1.0 : 0.0}, {1.0}, 0.0,
                       std::to_string(a.pixels.size()) + " images, support " + std::to_string(a.support[0]))};
}

// ---- bessel suite ----

Reports ac5(const SuiteConfig& c) {
    const auto& a = c.ac5;
    Reports out;
    {
        const double x0 = a.chi_x0, s = a.chi_s, r = std::sqrt(x0);
        const auto xs = draw_samples(a.chi_draws, seed_for(c, "AC-5/chi"), c.workers,
                                     [&](Engine& e) { return sample_besq0(x0, s, e); });
        const double top = r + 8.0 * std::sqrt(s), width = top / a.chi_bins;
        std::vector<double> obs(a.chi_bins + 2, 0.0), exp(a.chi_bins + 2, 0.0);
        for (double x : xs) {
            if (x == 0.0) {
                obs[0] += 1;
                continue;
            }
            const auto k = static_cast<std::size_t>(std::sqrt(x) / width);
            obs[std::min<std::size_t>(k, a.chi_bins) + 1] += 1;
        }
        const double n = static_cast<double>(a.chi_draws);
        const double p0 = std::exp(-x0 / (2 * s));
        exp[0] = n * p0;
        double acc = p0;
        for (int k = 0; k < a.chi_bins; ++k) {
            const double pk =
                integrate([&](double y) { return transition_density(r, s, y); }, k * width, (k + 1) * width, {},
                          {1e-12, 18})
                    .value;
            exp[k + 1] = n * pk;
            acc += pk;
        }
        exp[a.chi_bins + 1] = n * std::max(0.0, 1.0 - acc);
        const auto chi = chi_square(obs, exp);
        out.push_back(make_check("AC-5/sampler-vs-density", "AC-5", "exact sampler reproduces the transition density",
                                 Comparator::at_least, {chi.p_value}, {a.chi_p_min}, 0.0,
                                 "chi2 " + fmt(chi.statistic) + " on " + fmt(chi.dof) + " dof"));
    }
    {
        std::vector<double> mass, surv;
        for (double r : a.mass_r)
            for (double s : a.mass_s) {
                const double up = r + 40.0 * std::sqrt(s);
                mass.push_back(integrate([&](double y) { return transition_density(r, s, y); }, 0.0, up, {r},
                                         {1e-12, 18})
                                   .value);
                surv.push_back(1.0 - std::exp(-r * r / (2 * s)));
            }
        out.push_back(make_check("AC-5/density-mass", "AC-5", "density mass equals the survival 1 - e^{-r^2/2s}",
                                 Comparator::abs_diff, mass, surv, a.mass_tol));
    }
    {
        std::vector<double> z;
        std::size_t k = 0;
        for (double x0 : a.martingale_x0)
            for (double s : a.martingale_s) {
                const auto xs = draw_samples(a.martingale_draws, derive_seed(seed_for(c, "AC-5/mart"), "k") + k++,
                                             c.workers, [&](Engine& e) { return sample_besq0(x0, s, e); });
                const auto m = mc_mean(xs);
                z.push_back((m.mean - x0) / m.std_error);
            }
        out.push_back(make_check("AC-5/martingale", "AC-5", "E X_s = X_0 (z-scores)", Comparator::abs_diff, z, {0.0},
                                 a.sigmas));
    }
    return out;
}

Reports ac6(const SuiteConfig& c) {
    const auto& a = c.ac6;
    Reports out = convergence_ladder(
        "AC-6/l1", "AC-6", "t e^{gamma^2 t/2} P[R_t >= gamma t + b] tends to r I1(gamma r) e^{-b gamma}/gamma",
        [&](double t) { return l1_limit_check(a.r, a.gamma, a.b, {t})[0]; },
        {a.t_coarse / 2, a.t_coarse, a.t_fine}, 1.0, Trend::strictly_decreasing, 0.0, a.limit_tol);
    std::vector<double> inv;
    for (double t : a.extrapolation_t) inv.push_back(1.0 / t);
    // l1(b) e^{b gamma}: the extrapolated ratio times the closed-form limit at b = 0
    const double l1_zero = a.r * bessel_i1(a.gamma * a.r) / a.gamma;
    auto limit = [&](double b) {
        return l1_zero * extrapolate_to_zero(inv, l1_limit_check(a.r, a.gamma, b, a.extrapolation_t));
    };
    const double base = limit(a.b);
    std::vector<double> shifted;
    for (double b : a.shifts) shifted.push_back(limit(a.b + b));
    out.push_back(make_check("AC-6/b-shift", "AC-6", "l1(b) e^{b gamma} = l1(0)", Comparator::abs_diff, shifted,
                             {base}, a.shift_tol, "limit at b: " + fmt(base)));
    return out;
}

Reports ac7(const SuiteConfig& c) {
    const auto& a = c.ac7;
    RayKnightConfig rk;
    rk.eta = a.eta;
    rk.eta_prime = a.eta_prime;
    rk.start = a.start;
    rk.lattice = LatticeConfig{a.mesh};
    rk.walks = a.walks;
    rk.bins = a.bins;
    rk.draws_per_walk = a.draws_per_walk;
    rk.min_per_bin = a.min_per_bin;
    rk.seed = seed_for(c, "AC-7");
    rk.workers = c.workers;
    const auto rep = ray_knight_check(ray_knight_pairs(rk), rk);
    std::vector<double> ks;
    std::string note = "bins";
    for (const auto& b : rep.bins) {
        ks.push_back(b.ks.distance);
        note += " [n " + std::to_string(b.n) + ", mean z " + fmt(b.mean_z) + "]";
    }
    note += "; l=0: " + std::to_string(rep.zero_n) + " (" + std::to_string(rep.zero_consistent) +
            " with inner 0), merged " + std::to_string(rep.merged);
    return {make_check("AC-7/ray-knight", "AC-7", "L_{x,eta'/e}/(eta'/e) given L_{x,eta'} = l is BESQ0 from l/eta'",
                       Comparator::at_most, ks, {a.ks_max}, 0.0, note)};
}

Reports ac10(const SuiteConfig& c) {
    const auto& a = c.ac10;
    std::vector<double> ts;
    for (int k = 0; k < a.t_points; ++k)
        ts.push_back(a.t_min * std::pow(a.t_max / a.t_min, a.t_points > 1 ? k / double(a.t_points - 1) : 0.0));
    auto worst = [&](double t, double* gap) {
        double dev = 0.0, g = 0.0;
        for (int m = 0; m < a.angles; ++m) {
            const auto w = wrapped_normal_density(a.theta0 + 2 * kPi * m / a.angles, a.theta0, t);
            dev = std::max(dev, std::abs(w.value - 1 / (2 * kPi)));
            g = std::max(g, std::abs(w.theta_series - w.fourier_series));
        }
        if (gap) *gap = g;
        return dev / wrapped_normal_envelope(t);
    };
    const double c1 = worst(a.calibration_t, nullptr);
    std::vector<double> gaps, ratios;
    for (double t : ts) {
        double g = 0.0;
        ratios.push_back(worst(t, &g));
        gaps.push_back(g);
    }
    const auto worst_it = std::max_element(ratios.begin(), ratios.end());
    return {make_check("AC-10/series-agreement", "AC-10", "image sum and Fourier series agree", Comparator::at_most,
                       gaps, {a.agree_tol}, 0.0),
            make_check("AC-10/uniformity-bound", "AC-10", "|f_t - 1/2pi| <= C1 max(1, 1/sqrt t) e^{-t/2}",
                       Comparator::at_most, ratios, {c1}, 0.0,
                       "C1 " + fmt(c1) + " at t=" + fmt(a.calibration_t) + "; worst ratio " + fmt(*worst_it) +
                           " at t=" + fmt(ts[static_cast<std::size_t>(worst_it - ratios.begin())]))};
}

Reports ac11(const SuiteConfig& c) {
    const auto& a = c.ac11;
    std::vector<double> ratios, z;
    std::uint64_t k = 0;
    for (int p : a.p)
        for (double s : a.s)
            for (double r : a.r) {
                const auto m = besq_increment_moments(r, s, p, a.draws, derive_seed(seed_for(c, "AC-11"), "k") + k++,
                                                      c.workers);
                ratios.push_back(m.mean / (std::pow(s, p / 2.0) * std::max(1.0, std::pow(r, 2.0 * p))));
                if (p == 2) z.push_back((m.mean - 4 * s * r * r) / m.std_error);
            }
    Reports out{make_check("AC-11/bounded", "AC-11", "E|R_s^2 - r^2|^p <= C s^{p/2} max(1, r^{2p})",
                           Comparator::at_most, ratios, {a.bound}, 0.0,
                           "max ratio " + fmt(*std::max_element(ratios.begin(), ratios.end())))};
    if (!z.empty())
        out.push_back(make_check("AC-11/variance", "AC-11", "E(X_s - r^2)^2 = 4 s r^2 (z-scores)", Comparator::abs_diff,
                                 z, {0.0}, a.sigmas));
    return out;
}

// ---- determinism and invariants ----

SuiteReport run_ids(const std::vector<std::string>& ids, const SuiteConfig& cfg, const SuiteProgress& progress);

Reports ac12(const SuiteConfig& c) {
    const auto& a = c.ac12;
    Reports out;
    {
        SuiteConfig sub = c;
        sub.out.clear();
        std::vector<std::string> ids;
        for (const auto& id : a.rerun)
            if (id != "AC-12") ids.push_back(id);
        const auto j1 = suite_json(run_ids(ids, sub, {}), false).dump();
        const auto j2 = suite_json(run_ids(ids, sub, {}), false).dump();
        out.push_back(make_check("AC-12/byte-identical", "AC-12", "seeded suite reruns give identical JSON",
                                 Comparator::abs_diff, {j1 == j2 ? 1.0 : 0.0}, {1.0}, 0.0,
                                 std::to_string(ids.size()) + " criteria, " + std::to_string(j1.size()) + " bytes"));
    }
    const auto disc = DomainSpec::disc({0, 0}, 1.0, {0.3, 0.1});
    const LatticeConfig small{1.0 / 100.0};
    const Lattice lat(disc, small);
    const std::uint64_t seed = seed_for(c, "AC-12");
    {
        auto f = [&](const OccupationField& fld, std::size_t, unsigned) {
            return std::pair<std::uint64_t, double>{fld.step_count,
                                                    local_time_estimate(fld, {{0, 0}, 0.2}, small).value};
        };
        const auto r1 = map_replicas(lat, {a.small_replicas, seed, 1}, f);
        const auto r3 = map_replicas(lat, {a.small_replicas, seed, 3}, f);
        std::size_t bad = 0;
        Walker w(lat);
        for (std::size_t k = 0; k < a.small_replicas; ++k) {
            const auto& fld = w.run({seed, k});
            bad += fld.total() != fld.step_count + 1;
        }
        const auto x = run_killed_walk(disc, small, {seed, 7}), y = run_killed_walk(disc, small, {seed, 7});
        out.push_back(make_check("AC-12/workers", "AC-12", "ensemble results independent of the worker count",
                                 Comparator::abs_diff, {r1.values == r3.values ? 1.0 : 0.0}, {1.0}, 0.0));
        out.push_back(make_check("AC-12/conservation", "AC-12", "sum of counts = steps + 1", Comparator::abs_diff,
                                 {static_cast<double>(bad)}, {0.0}, 0.0));
        out.push_back(make_check("AC-12/walk-determinism", "AC-12", "identical seed gives identical field",
                                 Comparator::abs_diff, {x.counts == y.counts && x.step_count == y.step_count ? 1.0 : 0.0},
                                 {1.0}, 0.0));
    }
    {
        const auto fld = run_killed_walk(disc, small, {seed, 11});
        const double eps = std::exp(-3.0);
        const auto lt = compute_local_time_field(fld, eps, small);
        double diff = 0.0;
        for (int j = 0; j < fld.ny; j += 3)
            for (int i = 0; i < fld.nx; i += 3)
                diff = std::max(diff, std::abs(lt.values[fld.index(i, j)] -
                                               local_time_estimate(fld, {fld.site(i, j), eps}, small).value));
        out.push_back(make_check("AC-12/stencil", "AC-12", "ring-stencil field equals the per-circle estimator",
                                 Comparator::at_most, {diff}, {0.0}, 1e-12));
        const auto prof = local_time_profile(fld, {0.9, 0.0}, {0.2, 0.05}, small);
        out.push_back(make_check("AC-12/profile-convention", "AC-12", "circles leaving the domain carry L = 0",
                                 Comparator::abs_diff, {prof.values[0]}, {0.0}, 0.0));

        const auto region = region_mask(fld, WholeDomain{}, small);
        std::vector<double> nus;
        for (double b = -4.0; b <= 2.0; b += 0.5) nus.push_back(build_nu(lt, region, 0.8, b));
        out.push_back(make_check("AC-12/nu-monotone", "AC-12", "nu(b, inf) non-increasing in b",
                                 Comparator::non_increasing, nus, {}, 0.0));
        std::size_t nest = 0;
        auto prev = thick_points(lt, region, 0.0);
        for (double g = 0.1; g < 2.0; g += 0.1) {
            const auto m = thick_points(lt, region, g);
            for (std::size_t k = 0; k < m.mask.size(); ++k) nest += m.mask[k] && !prev.mask[k];
            prev = m;
        }
        out.push_back(make_check("AC-12/thick-nesting", "AC-12", "thick-point sets shrink as gamma grows",
                                 Comparator::abs_diff, {static_cast<double>(nest)}, {0.0}, 0.0));
        const auto ge = good_event_mask(fld, 0.8, eps, {1.2, std::exp(-2.0), 2.0}, small);
        const double nu = build_nu(lt, region, 0.8, 0.0), nuf = build_nu_filtered(lt, region, ge.g, 0.8, 0.0);
        const double mu = build_mu(lt, region, 0.8).mass, muf = build_mu_filtered(lt, region, ge.g, 0.8);
        out.push_back(make_check("AC-12/filtered", "AC-12", "filtered masses never exceed unfiltered",
                                 Comparator::at_least, {nu - nuf, mu - muf}, {0.0}, 0.0));
        LocalTimeField flat = lt;
        const double g = 0.8, v = g * std::log(1.0 / eps);
        std::fill(flat.values.begin(), flat.values.end(), v * v * eps);
        const double n_cells = static_cast<double>(std::count(region.begin(), region.end(), 1));
        const double h2 = small.mesh * small.mesh;
        out.push_back(make_check("AC-12/normalisation", "AC-12", "constant field masses match hand evaluation",
                                 Comparator::rel_diff, {build_mu(flat, region, g).mass, build_nu(flat, region, g, -0.5)},
                                 {mu_normalization(g, eps) * h2 * n_cells * std::exp(g * v),
                                  nu_normalization(g, eps) * h2 * n_cells},
                                 1e-12));
    }
    {
        std::vector<double> bias;
        std::string note = "relative bias";
        for (std::size_t k = 0; k < a.halving_mesh.size(); ++k) {
            const auto d = DomainSpec::disc({0, 0}, a.halving_rho, {a.halving_eps, 0.0});
            const LatticeConfig lc{a.halving_mesh[k]};
            auto r = map_replicas(Lattice(d, lc), {a.halving_replicas, derive_seed(seed, "halving") + k, c.workers},
                                  [&](const OccupationField& f, std::size_t, unsigned) {
                                      return local_time_estimate(f, {{0, 0}, a.halving_eps}, lc).value;
                                  });
            const double e = expected_local_time_ring(a.halving_eps, a.halving_rho);
            const double m = mc_mean(r.values).mean;
            bias.push_back(std::abs(m - e));
            note += " " + fmt((m - e) / e);
        }
        out.push_back(make_check("AC-12/h-halving", "AC-12", "|bias| of the ring mean shrinks as h halves",
                                 Comparator::strictly_decreasing, bias, {}, 0.0, note));
    }
    {
        const auto d = DomainSpec::disc({0, 0}, 1.0, {0, 0});
        const LatticeConfig lc{a.uniform_mesh};
        const Lattice ul(d, lc);
        const auto s = ul.cell(ul.start_index());
        auto r = map_replicas(ul, {a.uniform_replicas, derive_seed(seed, "uniform"), c.workers},
                              [&](const OccupationField& f, std::size_t rep, unsigned) {
                                  const int di = f.exit_site.i - s.i, dj = f.exit_site.j - s.j;
                                  const double th = angle_of({static_cast<double>(di), static_cast<double>(dj)});
                                  int k = static_cast<int>(std::floor(th / (kPi / 4))) % 8;
                                  // sites on an octant edge go to either side by replica parity
                                  if ((di == 0 || dj == 0 || std::abs(di) == std::abs(dj)) && (rep % 2))
                                      k = (k + 7) % 8;
                                  return k;
                              });
        std::vector<double> obs(8, 0.0), exp(8, a.uniform_replicas / 8.0);
        for (int k : r.values) obs[k] += 1;
        const auto chi = chi_square(obs, exp);
        out.push_back(make_check("AC-12/exit-uniformity", "AC-12", "exit site uniform from the centre of a disc",
                                 Comparator::at_least, {chi.p_value}, {a.uniform_p_min}, 0.0,
                                 "chi2 " + fmt(chi.statistic)));
    }
    {
        nlohmann::json j = c;
        SuiteConfig back;
        from_json(j, back);
        out.push_back(make_check("AC-12/config-roundtrip", "AC-12", "suite config survives a JSON round trip",
                                 Comparator::abs_diff, {nlohmann::json(back).dump() == j.dump() ? 1.0 : 0.0}, {1.0},
                                 0.0));
    }
    return out;
}

using CheckFn = Reports (*)(const SuiteConfig&);

CheckFn lookup(const std::string& id) {
    static const std::map<std::string, CheckFn> table{{"AC-1", ac1}, {"AC-2", ac2},   {"AC-3", ac3},   {"AC-4", ac4},
                                                      {"AC-5", ac5}, {"AC-6", ac6},   {"AC-7", ac7},   {"AC-8", ac8},
                                                      {"AC-9", ac9}, {"AC-10", ac10}, {"AC-11", ac11}, {"AC-12", ac12}};
    const auto it = table.find(id);
    if (it == table.end()) throw DomainError("unknown criterion " + id);
    return it->second;
}

SuiteReport run_ids(const std::vector<std::string>& ids, const SuiteConfig& cfg, const SuiteProgress& progress) {
    SuiteReport rep;
    rep.suite = cfg.suite;
    rep.seed = cfg.seed;
    for (const auto& id : ids) {
        const auto t0 = std::chrono::steady_clock::now();
        Reports checks;
        try {
            checks = run_criterion(id, cfg);
        } catch (const std::exception& e) {
            checks.push_back(make_check(id + "/error", id, "check ran to completion", Comparator::abs_diff, {0.0},
                                        {1.0}, 0.0, std::string("exception: ") + e.what()));
        }
        CriterionResult cr;
        cr.id = id;
        cr.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto b = cfg.budgets_s.find(id);
        cr.budget_s = b == cfg.budgets_s.end() ? 0.0 : b->second;
        for (auto& ch : checks) {
            ch.runtime_s = cr.runtime_s;
            if (ch.status != Status::pass && cr.status == Status::pass) cr.status = ch.status;
            if (ch.status == Status::fail) cr.status = Status::fail;
        }
        if (progress) progress(cr, checks);
        rep.criteria.push_back(cr);
        rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
    }
    return rep;
}

} // namespace

const std::vector<std::string>& all_criteria() {
    static const std::vector<std::string> ids{"AC-1", "AC-2", "AC-3", "AC-4",  "AC-5",  "AC-6",
                                              "AC-7", "AC-8", "AC-9", "AC-10", "AC-11", "AC-12"};
    return ids;
}

std::vector<std::string> suite_criteria(const std::string& suite) {
    if (suite == "all") return all_criteria();
    if (suite == "none") return {};
    if (suite == "walk") return {"AC-1", "AC-2", "AC-3"};
    if (suite == "bessel") return {"AC-5", "AC-6", "AC-7", "AC-10", "AC-11"};
    if (suite == "chaos") return {"AC-4", "AC-8"};
    if (suite == "figure") return {"AC-9"};
    if (suite == "determinism") return {"AC-12"};
    if (suite.rfind("AC-", 0) == 0) {
        lookup(suite);
        return {suite};
    }
    throw DomainError("unknown suite: " + suite);
}

std::vector<CheckReport> run_criterion(const std::string& id, const SuiteConfig& cfg) { return lookup(id)(cfg); }

SuiteReport run_acceptance_suite(const SuiteConfig& cfg, const SuiteProgress& progress) {
    return run_ids(suite_criteria(cfg.suite), cfg, progress);
}

bool SuiteReport::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed(); });
}

nlohmann::json suite_json(const SuiteReport& r, bool include_runtime) {
    nlohmann::json checks = nlohmann::json::array(), crit = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(report_to_json(c, include_runtime));
    for (const auto& c : r.criteria) {
        nlohmann::json j{{"id", c.id}, {"status", to_string(c.status)}};
        if (include_runtime) {
            j["runtime_s"] = c.runtime_s;
            j["budget_s"] = c.budget_s;
            j["within_budget"] = c.within_budget();
        }
        crit.push_back(j);
    }
    nlohmann::json j{{"suite", r.suite}, {"seed", r.seed}, {"criteria", crit}, {"checks", checks}};
    if (include_runtime) j["passed"] = r.passed();
    return j;
}

std::string criterion_line(const CriterionResult& c, const std::vector<CheckReport>& checks) {
    std::ostringstream os;
    os << c.id << ' ' << (c.passed() ? "PASS" : "FAIL");
    if (!c.within_budget()) os << " (over budget: " << fmt(c.runtime_s) << " s > " << fmt(c.budget_s) << " s)";
    for (const auto& ch : checks) {
        if (ch.criterion != c.id) continue;
        os << " | " << ch.check_id << ' ' << to_string(ch.status) << " obs=";
        for (std::size_t k = 0; k < std::min<std::size_t>(ch.observed.size(), 4); ++k)
            os << (k ? "," : "") << fmt(ch.observed[k]);
        if (ch.observed.size() > 4) os << ",...";
    }
    os << " [" << fmt(c.runtime_s) << " s]";
    return os.str();
}

std::string suite_markdown(const SuiteReport& r) {
    std::ostringstream os;
    os << "# Acceptance suite `" << r.suite << "` (seed " << r.seed << ")\n\n";
    os << "| criterion | status | runtime (s) | budget (s) |\n|---|---|---|---|\n";
    for (const auto& c : r.criteria)
        os << "| " << c.id << " | " << (c.passed() ? "pass" : "fail") << " | " << fmt(c.runtime_s) << " | "
           << fmt(c.budget_s) << " |\n";
    os << "\n| check | status | comparator | observed | expected | tolerance | note |\n|---|---|---|---|---|---|---|\n";
    for (const auto& c : r.checks) {
        auto join = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t k = 0; k < std::min<std::size_t>(v.size(), 6); ++k) s += (k ? ", " : "") + fmt(v[k]);
            if (v.size() > 6) s += ", ...";
            return s;
        };
        os << "| " << c.check_id << " | " << to_string(c.status) << " | " << to_string(c.comparator) << " | "
           << join(c.observed) << " | " << join(c.expected) << " | " << fmt(c.tolerance) << " | " << c.note << " |\n";
    }
    return os.str();
}

} // namespace bmc
