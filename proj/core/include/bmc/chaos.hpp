#pragma once

#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/local_time_field.hpp"
#include "bmc/walk.hpp"

#include <cstdint>
#include <vector>

namespace bmc {

// eps_p = base * e^{-p}, p = p_min..p_max.
struct ScaleLadder {
    double base = 1.0;
    int p_min = 4;
    int p_max = 4;

    std::vector<double> values() const;
    // Throws DomainError for an empty ladder and SubResolution when a rung is below 2h.
    void validate(double mesh) const;

    friend bool operator==(const ScaleLadder&, const ScaleLadder&) = default;
};

// sqrt|log eps| eps^{gamma^2/2}
double mu_normalization(double gamma, double eps);
// |log eps| eps^{-gamma^2/2}
double nu_normalization(double gamma, double eps);

struct ChaosField {
    double gamma = 0.0;
    double eps = 0.0;
    int nx = 0, ny = 0;
    Point2 origin;
    double mesh = 0.0;
    std::vector<double> weights;         // 0 outside the region
    std::vector<std::uint8_t> in_region;
    std::size_t region_cells = 0;
    double mass = 0.0;
};

// Live lattice sites that lie in the region.
std::vector<std::uint8_t> region_mask(const OccupationField& field, const Region& region, const LatticeConfig& cfg);

ChaosField build_mu(const OccupationField& field, double gamma, double eps, const Region& region,
                    const LatticeConfig& cfg);
ChaosField build_mu(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma);

double build_nu(const OccupationField& field, double gamma, double eps, const Region& region, double b,
                const LatticeConfig& cfg);
double build_nu(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma, double b);

// Same masses from a sparse per-walk sample; used by the ensemble estimators.
double mu_mass(const ThicknessSample& s, double gamma, double eps, double mesh);
double nu_mass(const ThicknessSample& s, double gamma, double eps, double mesh, double b);
// h^2 * #{L/(eps (log eps)^2) >= gamma^2}
double thick_area(const ThicknessSample& s, double gamma, double eps, double mesh);

struct ThickPointMask {
    double gamma = 0.0;
    double eps = 0.0;
    std::vector<std::uint8_t> mask;
    double area = 0.0;
};

ThickPointMask thick_points(const LocalTimeField& lt, const std::vector<std::uint8_t>& region, double gamma);

// The per-walk numbers the ensemble estimators need, so an ensemble can keep one
// small record per walk instead of its sparse sample.
struct WalkMasses {
    double mu = 0.0;
    double nu0 = 0.0;            // nu(0, inf)
    std::vector<double> nu;      // nu(b, inf) on the profile grid
    double thick = 0.0;          // nu_normalization * thick_area
};

WalkMasses walk_masses(const ThicknessSample& s, double gamma, double eps, double mesh,
                       const std::vector<double>& b_grid = {});

struct NuProfile {
    std::vector<double> b;
    std::vector<double> ratio;    // e^{gamma b} sum nu(b) / sum nu(0) over used replicas
    std::size_t used = 0;
    std::size_t dropped = 0;      // replicas with nu(0) = 0
};

NuProfile nu_exponential_profile(const std::vector<ThicknessSample>& samples, double gamma, double eps,
                                 double mesh, const std::vector<double>& b_grid);
// Same from walk_masses records computed on b_grid.
NuProfile nu_exponential_profile(const std::vector<WalkMasses>& m, double gamma, const std::vector<double>& b_grid);

struct MassRatio {
    double ratio = 0.0;
    double numerator = 0.0;    // ensemble mean
    double denominator = 0.0;  // ensemble mean
    bool zero_denominator = false;
};

// (mean mu / (sqrt(2 pi) gamma)) / mean nu(b = 0)
MassRatio mu_nu_consistency(const std::vector<ThicknessSample>& samples, double gamma, double eps, double mesh);
// mean nu_normalization * thick area  /  (mean mu / (sqrt(2 pi) gamma))
MassRatio thick_area_consistency(const std::vector<ThicknessSample>& samples, double gamma, double eps,
                                 double mesh);
MassRatio mu_nu_consistency(const std::vector<WalkMasses>& m, double gamma);
MassRatio thick_area_consistency(const std::vector<WalkMasses>& m, double gamma);

struct GoodEventParams {
    double gamma_tilde = 1.0;
    double eps0 = 0.1353352832366127;  // e^{-2}
    double M = 2.0;
};

struct GoodEventMasks {
    std::vector<std::uint8_t> g;        // ladder condition and distance cutoffs
    std::vector<std::uint8_t> g_prime;  // g and the M-window at eps
    std::vector<double> ladder;         // radii e^{-p} in [eps, eps0]
};

// Throws DomainError unless gamma_tilde > gamma and eps0 is e^{-p} with eps0 >= eps;
// SubResolution when a ladder radius is below 2h.
GoodEventMasks good_event_mask(const OccupationField& field, double gamma, double eps, const GoodEventParams& p,
                               const LatticeConfig& cfg);

// nu(b) and mu restricted to mask cells.
double build_nu_filtered(const LocalTimeField& lt, const std::vector<std::uint8_t>& region,
                         const std::vector<std::uint8_t>& mask, double gamma, double b);
double build_mu_filtered(const LocalTimeField& lt, const std::vector<std::uint8_t>& region,
                         const std::vector<std::uint8_t>& mask, double gamma);

// Share of the mass carried by the heaviest `share` of region cells (at least one).
double top_mass_fraction(const ChaosField& c, double share);

} // namespace bmc
