#pragma once

#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/stats.hpp"

#include <cstdint>
#include <vector>

namespace bmc {

struct RayKnightConfig {
    double eta = 1.0;                          // disc D(x, eta), x = origin
    double eta_prime = 0.1353352832366127;     // e^{-2}
    Point2 start{0.2, 0.0};
    LatticeConfig lattice{1.0 / 400.0};
    std::size_t walks = 10000;
    int bins = 4;                  // quantile bins of the positive l values
    std::size_t draws_per_walk = 10;
    std::size_t min_per_bin = 100;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

// One (L_{x,eta'}, L_{x,eta'/e}) observation.
struct RayKnightPair {
    double l_outer = 0.0;
    double l_inner = 0.0;

    friend bool operator==(const RayKnightPair&, const RayKnightPair&) = default;
};

struct RayKnightBin {
    double l_lo = 0.0, l_hi = 0.0;
    std::size_t n = 0;
    KsResult ks;
    double mean_observed = 0.0;  // mean of L_inner/(eta'/e)
    double mean_expected = 0.0;  // mean of l/eta'
    double mean_z = 0.0;
};

struct RayKnightReport {
    std::vector<RayKnightBin> bins;
    std::size_t zero_n = 0;           // walks with l = 0
    std::size_t zero_consistent = 0;  // ... of which L_inner = 0 too
    std::size_t merged = 0;
    double max_ks = 0.0;
};

std::vector<RayKnightPair> ray_knight_pairs(const RayKnightConfig& cfg);
// Compares L_inner/(eta'/e) given l = L_outer with BESQ0 draws from x0 = l/eta', s = 1.
RayKnightReport ray_knight_check(const std::vector<RayKnightPair>& pairs, const RayKnightConfig& cfg);

} // namespace bmc
