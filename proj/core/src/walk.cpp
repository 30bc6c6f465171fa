#include "bmc/walk.hpp"

#include "bmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bmc {

std::uint64_t OccupationField::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Walker::Walker(const Lattice& lattice) : lattice_(&lattice) {
    field_.nx = lattice.nx();
    field_.ny = lattice.ny();
    field_.origin = lattice.origin();
    field_.mesh = lattice.mesh();
    field_.domain = lattice.domain();
    field_.counts.assign(lattice.size(), 0);
    const auto s = lattice.cell(lattice.start_index());
    field_.start_site = s;
}

const OccupationField& Walker::run(RunSeed seed) {
    auto& f = field_;
    for (auto idx : f.visited) f.counts[idx] = 0;
    f.visited.clear();
    f.seed = seed;
    f.truncated = false;
    f.exit_site = {};

    const auto& live = lattice_->live_mask();
    std::uint32_t* counts = f.counts.data();
    const std::ptrdiff_t nx = lattice_->nx();
    const std::ptrdiff_t off[4] = {1, -1, nx, -nx};
    const std::uint64_t max_steps = lattice_->config().max_steps;

    Engine eng = make_engine(seed);
    std::size_t idx = lattice_->start_index();
    counts[idx] = 1;
    f.visited.push_back(static_cast<std::uint32_t>(idx));

    std::uint64_t steps = 0;
    std::uint64_t bits = 0;
    int nbits = 0;
    bool exited = false;
    while (steps < max_steps) {
        if (nbits == 0) {
            bits = eng();
            nbits = 32;
        }
        idx = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + off[bits & 3u]);
        bits >>= 2;
        --nbits;
        ++steps;
        if (counts[idx]++ == 0) f.visited.push_back(static_cast<std::uint32_t>(idx));
        if (!live[idx]) {
            exited = true;
            break;
        }
    }
    f.step_count = steps;
    if (exited)
        f.exit_site = lattice_->cell(idx);
    else
        f.truncated = true;
    return f;
}

OccupationField run_killed_walk(const DomainSpec& domain, const LatticeConfig& cfg, RunSeed seed) {
    const Lattice lattice(domain, cfg);
    Walker w(lattice);
    return w.run(seed);
}

LocalTimeEstimate local_time_estimate(const OccupationField& field, const CircleSpec& circle,
                                      const LatticeConfig& cfg) {
    LocalTimeEstimate out;
    if (!circle_inside(field.domain, circle)) return out;
    const double h = field.mesh;
    const double w = cfg.half_width();
    const double lo = (circle.radius - w) / h, hi = (circle.radius + w) / h;
    const double cx = (circle.center.x - field.origin.x) / h;
    const double cy = (circle.center.y - field.origin.y) / h;
    const int i0 = std::max(0, static_cast<int>(std::floor(cx - hi)) - 1);
    const int i1 = std::min(field.nx - 1, static_cast<int>(std::ceil(cx + hi)) + 1);
    const int j0 = std::max(0, static_cast<int>(std::floor(cy - hi)) - 1);
    const int j1 = std::min(field.ny - 1, static_cast<int>(std::ceil(cy + hi)) + 1);
    std::uint64_t sum = 0;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            const double d = std::hypot(i - cx, j - cy);
            if (!in_shell(d, lo, hi)) continue;
            ++out.shell_sites;
            if (GridIndex{i, j} == field.exit_site) continue;
            sum += field.at(i, j);
        }
    out.value = static_cast<double>(sum) * (h * h / 2.0) / (2.0 * w);
    return out;
}

LocalTimeProfile local_time_profile(const OccupationField& field, Point2 center,
                                    const std::vector<double>& radii, const LatticeConfig& cfg) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] >= 2.0 * field.mesh))
            throw SubResolution("local_time_profile: radius below the 2h resolution floor");
        if (k > 0 && !(radii[k] < radii[k - 1]))
            throw DomainError("local_time_profile: radii must be strictly decreasing");
    }
    LocalTimeProfile p{center, radii, {}};
    p.values.reserve(radii.size());
    for (double r : radii) p.values.push_back(local_time_estimate(field, {center, r}, cfg).value);
    return p;
}

ExitSample exit_sample_from(const OccupationField& field, const CircleSpec& target, const LatticeConfig& cfg) {
    ExitSample s;
    s.truncated = field.truncated;
    if (field.exit_site.valid()) s.exit_point = field.site(field.exit_site.i, field.exit_site.j);
    const double h = field.mesh;
    const double r = target.radius / h;
    const double cx = (target.center.x - field.origin.x) / h;
    const double cy = (target.center.y - field.origin.y) / h;
    const int i0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int i1 = std::min(field.nx - 1, static_cast<int>(std::ceil(cx + r)));
    const int j0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int j1 = std::min(field.ny - 1, static_cast<int>(std::ceil(cy + r)));
    for (int j = j0; j <= j1 && !s.hit; ++j)
        for (int i = i0; i <= i1; ++i)
            if (field.at(i, j) > 0 && std::hypot(i - cx, j - cy) <= r + 1e-9) {
                s.hit = true;
                break;
            }
    s.local_time = local_time_estimate(field, target, cfg).value;
    return s;
}

ExitSample conditional_exit_sample(const DomainSpec& domain, const CircleSpec& target, RunSeed seed,
                                   const LatticeConfig& cfg) {
    if (!circle_inside(domain, target))
        throw DomainError("conditional_exit_sample: target must lie strictly inside the domain");
    const auto f = run_killed_walk(domain, cfg, seed);
    return exit_sample_from(f, target, cfg);
}

} // namespace bmc
