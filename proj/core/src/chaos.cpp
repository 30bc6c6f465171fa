#include "bmc/chaos.hpp"

#include "bmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace bmc {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("gamma must lie in (0, 2)");
}

double log_inv(double eps) { return std::log(1.0 / eps); }

} // namespace

std::vector<double> ScaleLadder::values() const {
    std::vector<double> v;
    for (int p = p_min; p <= p_max; ++p) v.push_back(base * std::exp(-static_cast<double>(p)));
    return v;
}

void ScaleLadder::validate(double mesh) const {
    if (!(base > 0.0)) throw DomainError("eps ladder: base must be positive");
    if (p_max < p_min) throw DomainError("eps ladder is empty");
    for (double e : values())
        if (!(e >= 2.0 * mesh)) throw SubResolution("eps ladder: rung below the 2h resolution floor");
}

double mu_normalization(double gamma, double eps) {
    return std::sqrt(std::abs(std::log(eps))) * std::pow(eps, gamma * gamma / 2.0);
}

double nu_normalization(double gamma, double eps) {
    return std::abs(std::log(eps)) * std::pow(eps, -gamma * gamma / 2.0);
}

std::vector<std::uint8_t> region_mask(const OccupationField& field, const Region& region, const LatticeConfig& cfg) {
    LatticeConfig c = cfg;
    c.mesh = field.mesh;
    const Lattice lat(field.domain, c);
    if (lat.nx() != field.nx || lat.ny() != field.ny) throw DomainError("region_mask: field does not match lattice");
    std::vector<std::uint8_t> m(lat.size(), 0);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = lat.live(k) && region_contains(region, lat.site(k));
    return m;
}

ChaosField build_mu(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma) {
    check_gamma(gamma);
    ChaosField c{gamma, lt.eps, lt.nx, lt.ny, lt.origin, lt.mesh, {}, region, 0, 0.0};
    c.weights.assign(lt.values.size(), 0.0);
    const double pre = mu_normalization(gamma, lt.eps) * lt.mesh * lt.mesh;
    for (std::size_t k = 0; k < region.size(); ++k) {
        if (!region[k]) continue;
        ++c.region_cells;
        c.weights[k] = pre * std::exp(gamma * std::sqrt(lt.values[k] / lt.eps));
        c.mass += c.weights[k];
    }
    return c;
}

ChaosField build_mu(const OccupationField& field, double gamma, double eps, const Region& region,
                    const LatticeConfig& cfg) {
    check_gamma(gamma);
    return build_mu(compute_local_time_field(field, eps, cfg), region_mask(field, region, cfg), gamma);
}

double build_nu(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma, double b) {
    std::vector<std::uint8_t> all(region.size(), 1);
    return build_nu_filtered(lt, region, all, gamma, b);
}

double build_nu(const OccupationField& field, double gamma, double eps, const Region& region, double b,
                const LatticeConfig& cfg) {
    check_gamma(gamma);
    return build_nu(compute_local_time_field(field, eps, cfg), region_mask(field, region, cfg), gamma, b);
}

double build_nu_filtered(const LocalTimeField& lt, const std::vector<std::uint8_t>& region,
                         const std::vector<std::uint8_t>& mask, double gamma, double b) {
    check_gamma(gamma);
    const double shift = gamma * log_inv(lt.eps);
    std::size_t n = 0;
    for (std::size_t k = 0; k < region.size(); ++k)
        if (region[k] && mask[k] && std::sqrt(lt.values[k] / lt.eps) - shift > b) ++n;
    return nu_normalization(gamma, lt.eps) * lt.mesh * lt.mesh * static_cast<double>(n);
}

double build_mu_filtered(const LocalTimeField& lt, const std::vector<std::uint8_t>& region,
                         const std::vector<std::uint8_t>& mask, double gamma) {
    const ChaosField c = build_mu(lt, region, gamma);
    double m = 0.0;
    for (std::size_t k = 0; k < region.size(); ++k)
        if (mask[k]) m += c.weights[k];
    return m;
}

double mu_mass(const ThicknessSample& s, double gamma, double eps, double mesh) {
    check_gamma(gamma);
    double sum = static_cast<double>(s.n_cells - s.v.size());
    for (double v : s.v) sum += std::exp(gamma * v);
    return mu_normalization(gamma, eps) * mesh * mesh * sum;
}

double nu_mass(const ThicknessSample& s, double gamma, double eps, double mesh, double b) {
    check_gamma(gamma);
    const double cut = b + gamma * log_inv(eps);
    std::size_t n = 0;
    for (double v : s.v) n += v > cut;
    // zero cells pass only when the cut is negative
    if (0.0 > cut) n += s.n_cells - s.v.size();
    return nu_normalization(gamma, eps) * mesh * mesh * static_cast<double>(n);
}

double thick_area(const ThicknessSample& s, double gamma, double eps, double mesh) {
    if (!(gamma >= 0.0)) throw DomainError("thick_area: gamma must be >= 0");
    const double l = std::log(eps);
    std::size_t n = 0;
    for (double v : s.v)
        if (v * v / (l * l) >= gamma * gamma) ++n;
    if (gamma == 0.0) n = s.n_cells;
    return mesh * mesh * static_cast<double>(n);
}

ThickPointMask thick_points(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("thick_points: gamma must be >= 0");
    ThickPointMask m{gamma, lt.eps, std::vector<std::uint8_t>(region.size(), 0), 0.0};
    const double l = std::log(lt.eps);
    std::size_t n = 0;
    for (std::size_t k = 0; k < region.size(); ++k) {
        if (!region[k]) continue;
        if (lt.values[k] / (lt.eps * l * l) >= gamma * gamma) {
            m.mask[k] = 1;
            ++n;
        }
    }
    m.area = static_cast<double>(n) * lt.mesh * lt.mesh;
    return m;
}

WalkMasses walk_masses(const ThicknessSample& s, double gamma, double eps, double mesh,
                       const std::vector<double>& b_grid) {
    WalkMasses m;
    m.mu = mu_mass(s, gamma, eps, mesh);
    m.nu0 = nu_mass(s, gamma, eps, mesh, 0.0);
    for (double b : b_grid) m.nu.push_back(nu_mass(s, gamma, eps, mesh, b));
    m.thick = nu_normalization(gamma, eps) * thick_area(s, gamma, eps, mesh);
    return m;
}

namespace {

std::vector<WalkMasses> all_masses(const std::vector<ThicknessSample>& samples, double gamma, double eps,
                                   double mesh, const std::vector<double>& b_grid = {}) {
    std::vector<WalkMasses> m;
    m.reserve(samples.size());
    for (const auto& s : samples) m.push_back(walk_masses(s, gamma, eps, mesh, b_grid));
    return m;
}

MassRatio ratio_of_means(const std::vector<WalkMasses>& m, const std::function<double(const WalkMasses&)>& num,
                         const std::function<double(const WalkMasses&)>& den) {
    MassRatio r;
    for (const auto& w : m) {
        r.numerator += num(w);
        r.denominator += den(w);
    }
    const double n = static_cast<double>(std::max<std::size_t>(m.size(), 1));
    r.numerator /= n;
    r.denominator /= n;
    r.zero_denominator = r.denominator == 0.0;
    r.ratio = r.zero_denominator ? 0.0 : r.numerator / r.denominator;
    return r;
}

} // namespace

NuProfile nu_exponential_profile(const std::vector<WalkMasses>& m, double gamma, const std::vector<double>& b_grid) {
    check_gamma(gamma);
    NuProfile p{b_grid, std::vector<double>(b_grid.size(), 0.0), 0, 0};
    double den = 0.0;
    for (const auto& w : m) {
        if (w.nu.size() != b_grid.size()) throw DomainError("nu profile: records were built on another b grid");
        if (w.nu0 == 0.0) {
            ++p.dropped;
            continue;
        }
        ++p.used;
        den += w.nu0;
        for (std::size_t k = 0; k < b_grid.size(); ++k) p.ratio[k] += w.nu[k];
    }
    for (std::size_t k = 0; k < b_grid.size(); ++k)
        p.ratio[k] = den > 0.0 ? std::exp(gamma * b_grid[k]) * p.ratio[k] / den : 0.0;
    return p;
}

NuProfile nu_exponential_profile(const std::vector<ThicknessSample>& samples, double gamma, double eps,
                                 double mesh, const std::vector<double>& b_grid) {
    return nu_exponential_profile(all_masses(samples, gamma, eps, mesh, b_grid), gamma, b_grid);
}

MassRatio mu_nu_consistency(const std::vector<WalkMasses>& m, double gamma) {
    const double k = std::sqrt(2.0 * std::numbers::pi) * gamma;
    return ratio_of_means(
        m, [&](const WalkMasses& w) { return w.mu / k; }, [](const WalkMasses& w) { return w.nu0; });
}

MassRatio thick_area_consistency(const std::vector<WalkMasses>& m, double gamma) {
    const double k = std::sqrt(2.0 * std::numbers::pi) * gamma;
    return ratio_of_means(
        m, [](const WalkMasses& w) { return w.thick; }, [&](const WalkMasses& w) { return w.mu / k; });
}

MassRatio mu_nu_consistency(const std::vector<ThicknessSample>& samples, double gamma, double eps, double mesh) {
    return mu_nu_consistency(all_masses(samples, gamma, eps, mesh), gamma);
}

MassRatio thick_area_consistency(const std::vector<ThicknessSample>& samples, double gamma, double eps,
                                 double mesh) {
    return thick_area_consistency(all_masses(samples, gamma, eps, mesh), gamma);
}

GoodEventMasks good_event_mask(const OccupationField& field, double gamma, double eps, const GoodEventParams& p,
                               const LatticeConfig& cfg) {
    check_gamma(gamma);
    if (!(p.gamma_tilde > gamma)) throw DomainError("good events: gamma_tilde must exceed gamma");
    if (!(p.M > 0.0)) throw DomainError("good events: M must be positive");
    const double p0 = -std::log(p.eps0);
    if (!(p.eps0 > 0.0) || std::abs(p0 - std::round(p0)) > 1e-9 || std::round(p0) < 1.0)
        throw DomainError("good events: eps0 must be e^{-p} for an integer p >= 1");
    if (!(p.eps0 >= eps)) throw DomainError("good events: eps0 must be >= eps");
    GoodEventMasks out;
    const int pmin = static_cast<int>(std::round(p0));
    const int pmax = static_cast<int>(std::floor(log_inv(eps) + 1e-9));
    for (int q = pmin; q <= pmax; ++q) out.ladder.push_back(std::exp(-static_cast<double>(q)));
    for (double r : out.ladder)
        if (!(r >= 2.0 * field.mesh)) throw SubResolution("good events: ladder radius below the 2h floor");

    const std::size_t n = field.counts.size();
    out.g.assign(n, 1);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            const Point2 x = field.site(i, j);
            const bool keep = distance(x, field.domain.start) > p.eps0 && field.domain.boundary_distance(x) > p.eps0;
            out.g[field.index(i, j)] = keep;
        }
    const double gt2 = p.gamma_tilde * p.gamma_tilde;
    for (double r : out.ladder) {
        const auto lt = compute_local_time_field(field, r, cfg);
        const double l = std::log(r);
        for (std::size_t k = 0; k < n; ++k)
            if (out.g[k] && lt.values[k] / r > gt2 * l * l) out.g[k] = 0;
    }
    out.g_prime = out.g;
    const auto lt = compute_local_time_field(field, eps, cfg);
    const double shift = gamma * log_inv(eps), win = p.M * std::sqrt(log_inv(eps));
    for (std::size_t k = 0; k < n; ++k)
        if (out.g_prime[k] && std::abs(std::sqrt(lt.values[k] / eps) - shift) > win) out.g_prime[k] = 0;
    return out;
}

double top_mass_fraction(const ChaosField& c, double share) {
    if (!(share > 0.0 && share <= 1.0)) throw DomainError("top_mass_fraction: share must be in (0, 1]");
    std::vector<double> w;
    w.reserve(c.region_cells);
    for (std::size_t k = 0; k < c.weights.size(); ++k)
        if (c.in_region[k]) w.push_back(c.weights[k]);
    if (w.empty() || c.mass <= 0.0) return 0.0;
    const std::size_t top = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(share * w.size())));
    std::nth_element(w.begin(), w.begin() + (top - 1), w.end(), std::greater<>());
    const double s = std::accumulate(w.begin(), w.begin() + top, 0.0);
    return s / std::accumulate(w.begin(), w.end(), 0.0);
}

} // namespace bmc
