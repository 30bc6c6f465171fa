#pragma once

#include "bmc/error.hpp"
#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/parallel.hpp"
#include "bmc/rng.hpp"

#include <cstdint>
#include <memory>
#include <type_traits>
#include <vector>

namespace bmc {

// Visit counts of one killed walk. counts include the start site and every landing
// site, the kill site included, so their sum is step_count + 1.
struct OccupationField {
    int nx = 0;
    int ny = 0;
    Point2 origin;
    double mesh = 0.0;
    DomainSpec domain;
    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> visited;  // distinct sites, first-visit order
    GridIndex start_site;
    GridIndex exit_site;                 // invalid when truncated
    std::uint64_t step_count = 0;
    bool truncated = false;
    RunSeed seed;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::uint32_t at(int i, int j) const { return counts[index(i, j)]; }
    Point2 site(int i, int j) const { return {origin.x + i * mesh, origin.y + j * mesh}; }
    std::uint64_t total() const;
};

// Reusable walker: owns a field buffer sized to the lattice and clears only the
// touched sites between runs.
class Walker {
public:
    explicit Walker(const Lattice& lattice);

    const OccupationField& run(RunSeed seed);
    const OccupationField& field() const { return field_; }
    const Lattice& lattice() const { return *lattice_; }

private:
    const Lattice* lattice_;
    OccupationField field_;
};

OccupationField run_killed_walk(const DomainSpec& domain, const LatticeConfig& cfg, RunSeed seed);

struct LocalTimeEstimate {
    double value = 0.0;
    std::size_t shell_sites = 0;  // 0 flags a degenerate (empty) shell
};

// (h^2/2)(1/2w) * sum of counts over sites with |site - centre| in [eps - w, eps + w).
// Returns 0 when the circle is not strictly inside the domain. The kill site is
// excluded since no time is spent there.
LocalTimeEstimate local_time_estimate(const OccupationField& field, const CircleSpec& circle,
                                      const LatticeConfig& cfg);

// Shell membership shared by every local-time routine: distances in units of h.
inline bool in_shell(double dist_units, double lo_units, double hi_units) {
    constexpr double tol = 1e-9;
    return dist_units >= lo_units - tol && dist_units < hi_units - tol;
}

struct LocalTimeProfile {
    Point2 center;
    std::vector<double> radii;   // strictly decreasing
    std::vector<double> values;
};

LocalTimeProfile local_time_profile(const OccupationField& field, Point2 center,
                                    const std::vector<double>& radii, const LatticeConfig& cfg);

struct ExitSample {
    bool hit = false;            // some visited site within the closed target disc
    double local_time = 0.0;     // local-time estimate on the target circle
    Point2 exit_point;
    bool truncated = false;
};

ExitSample exit_sample_from(const OccupationField& field, const CircleSpec& target, const LatticeConfig& cfg);
ExitSample conditional_exit_sample(const DomainSpec& domain, const CircleSpec& target, RunSeed seed,
                                   const LatticeConfig& cfg);

struct EnsembleOptions {
    std::size_t replicas = 1;
    std::uint64_t master_seed = 0;
    unsigned workers = 0;
};

template <class R>
struct EnsembleResult {
    std::vector<R> values;        // index order
    std::size_t truncated = 0;
};

// Runs replicas 0..n-1 with streams (master, index) and maps each field through
// map(field, replica, worker). Results are stored by replica index, so every
// reduction over them is independent of the worker count.
template <class Map>
auto map_replicas(const Lattice& lattice, const EnsembleOptions& opt, Map&& map)
    -> EnsembleResult<std::invoke_result_t<Map&, const OccupationField&, std::size_t, unsigned>> {
    using R = std::invoke_result_t<Map&, const OccupationField&, std::size_t, unsigned>;
    static_assert(!std::is_same_v<R, bool>, "vector<bool> is not safe for concurrent writes");
    if (opt.replicas < 1) throw DomainError("ensemble needs at least one replica");
    const unsigned workers = std::min<unsigned>(resolve_workers(opt.workers), static_cast<unsigned>(opt.replicas));
    std::vector<std::unique_ptr<Walker>> walkers;
    for (unsigned w = 0; w < workers; ++w) walkers.push_back(std::make_unique<Walker>(lattice));
    EnsembleResult<R> out;
    out.values.resize(opt.replicas);
    std::vector<std::uint8_t> trunc(opt.replicas, 0);
    parallel_for(opt.replicas, workers, [&](std::size_t i, unsigned w) {
        const auto& f = walkers[w]->run({opt.master_seed, i});
        trunc[i] = f.truncated ? 1 : 0;
        out.values[i] = map(f, i, w);
    });
    for (auto t : trunc) out.truncated += t;
    return out;
}

template <class Acc>
struct EnsembleReduction {
    Acc value;
    std::size_t replicas = 0;
    std::size_t truncated = 0;
};

// map_replicas followed by an in-order fold.
template <class Map, class Acc, class Fold>
EnsembleReduction<Acc> run_ensemble(const Lattice& lattice, const EnsembleOptions& opt, Map&& map, Acc init,
                                    Fold&& fold) {
    auto r = map_replicas(lattice, opt, std::forward<Map>(map));
    for (const auto& v : r.values) init = fold(std::move(init), v);
    return {std::move(init), opt.replicas, r.truncated};
}

} // namespace bmc
