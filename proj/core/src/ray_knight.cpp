#include "bmc/ray_knight.hpp"

#include "bmc/bessel.hpp"
#include "bmc/error.hpp"
#include "bmc/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bmc {

std::vector<RayKnightPair> ray_knight_pairs(const RayKnightConfig& cfg) {
    if (!(cfg.eta_prime < cfg.eta) || !(norm(cfg.start) > cfg.eta_prime))
        throw DomainError("ray_knight: need start outside D(0, eta') and eta' < eta");
    const auto d = DomainSpec::disc({0, 0}, cfg.eta, cfg.start);
    const Lattice lat(d, cfg.lattice);
    const double inner = cfg.eta_prime / std::numbers::e;
    if (!(inner >= 2.0 * cfg.lattice.mesh)) throw SubResolution("ray_knight: eta'/e below the 2h floor");
    auto r = map_replicas(lat, {cfg.walks, cfg.seed, cfg.workers}, [&](const OccupationField& f, std::size_t, unsigned) {
        return RayKnightPair{local_time_estimate(f, {{0, 0}, cfg.eta_prime}, cfg.lattice).value,
                             local_time_estimate(f, {{0, 0}, inner}, cfg.lattice).value};
    });
    return r.values;
}

RayKnightReport ray_knight_check(const std::vector<RayKnightPair>& pairs, const RayKnightConfig& cfg) {
    RayKnightReport rep;
    const double inner = cfg.eta_prime / std::numbers::e;
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k].l_outer > 0.0) {
            pos.push_back(k);
        } else {
            ++rep.zero_n;
            rep.zero_consistent += pairs[k].l_inner == 0.0;
        }
    }
    std::stable_sort(pos.begin(), pos.end(), [&](auto a, auto b) { return pairs[a].l_outer < pairs[b].l_outer; });

    // Quantile cut points, then merge under-filled bins into their left neighbour.
    std::vector<std::size_t> cuts{0};
    const int nb = std::max(1, cfg.bins);
    for (int q = 1; q < nb; ++q) cuts.push_back(pos.size() * q / nb);
    cuts.push_back(pos.size());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t q = 1; q + 1 < cuts.size();) {
        if (cuts[q] - cuts[q - 1] < cfg.min_per_bin || cuts[q + 1] - cuts[q] < cfg.min_per_bin) {
            cuts.erase(cuts.begin() + q);
            ++rep.merged;
        } else {
            ++q;
        }
    }

    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
        const std::size_t a = cuts[q], b = cuts[q + 1];
        if (b - a < cfg.min_per_bin) {
            ++rep.merged;
            continue;
        }
        RayKnightBin bin;
        bin.l_lo = pairs[pos[a]].l_outer;
        bin.l_hi = pairs[pos[b - 1]].l_outer;
        bin.n = b - a;
        std::vector<double> obs, sim;
        RunningStats diff, o, e;
        for (std::size_t k = a; k < b; ++k) {
            const auto& p = pairs[pos[k]];
            const double x0 = p.l_outer / cfg.eta_prime, v = p.l_inner / inner;
            obs.push_back(v);
            o.add(v);
            e.add(x0);
            diff.add(v - x0);
            Engine eng = make_engine({derive_seed(cfg.seed, "ray-knight-besq"), pos[k]});
            for (std::size_t d = 0; d < cfg.draws_per_walk; ++d) sim.push_back(sample_besq0(x0, 1.0, eng));
        }
        bin.ks = ks_two_sample(obs, sim);
        bin.mean_observed = o.mean();
        bin.mean_expected = e.mean();
        const auto dci = mc_mean(diff);
        bin.mean_z = dci.std_error > 0.0 ? dci.mean / dci.std_error : 0.0;
        rep.max_ks = std::max(rep.max_ks, bin.ks.distance);
        rep.bins.push_back(bin);
    }
    return rep;
}

} // namespace bmc
