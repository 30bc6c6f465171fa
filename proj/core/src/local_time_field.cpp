#include "bmc/local_time_field.hpp"

#include "bmc/error.hpp"

#include <algorithm>
#include <cmath>

namespace bmc {

RingStencil::RingStencil(double eps, double mesh, double half_width) : eps_(eps) {
    if (!(mesh > 0.0) || !(eps > 0.0) || !(half_width > 0.0)) throw DomainError("RingStencil: bad parameters");
    const double lo = (eps - half_width) / mesh, hi = (eps + half_width) / mesh;
    reach_ = static_cast<int>(std::ceil(hi)) + 1;
    scale_ = (mesh * mesh / 2.0) / (2.0 * half_width);
    for (int dj = -reach_; dj <= reach_; ++dj) {
        int run_lo = 0;
        bool open = false;
        for (int di = -reach_; di <= reach_ + 1; ++di) {
            const bool in = di <= reach_ && in_shell(std::hypot(static_cast<double>(di), dj), lo, hi);
            if (in && !open) {
                run_lo = di;
                open = true;
            } else if (!in && open) {
                spans_.push_back({dj, run_lo, di - 1});
                size_ += static_cast<std::size_t>(di - run_lo);
                open = false;
            }
        }
    }
}

namespace {

struct RowRange {
    int j0, j1;
};

// sums[x] += count(y) for every visited y and every x with y - x in the stencil.
// Returns the rows that may have been written.
RowRange scatter(const OccupationField& f, const RingStencil& st, std::vector<std::uint32_t>& sums) {
    if (f.step_count + 1 >= (1ULL << 32)) throw NumericalError("local-time field: visit counts overflow 32 bits");
    const std::size_t exit_idx = f.exit_site.valid() ? f.index(f.exit_site.i, f.exit_site.j) : SIZE_MAX;
    RowRange rows{f.ny, -1};
    for (std::uint32_t idx : f.visited) {
        if (idx == exit_idx) continue;
        const std::uint32_t c = f.counts[idx];
        const int i = static_cast<int>(idx % f.nx), j = static_cast<int>(idx / f.nx);
        rows.j0 = std::min(rows.j0, std::max(0, j - st.reach()));
        rows.j1 = std::max(rows.j1, std::min(f.ny - 1, j + st.reach()));
        for (const auto& sp : st.spans()) {
            const int jj = j + sp.dj;
            if (jj < 0 || jj >= f.ny) continue;
            const int a = std::max(0, i + sp.di_lo), b = std::min(f.nx - 1, i + sp.di_hi);
            std::uint32_t* row = sums.data() + static_cast<std::size_t>(jj) * f.nx;
            for (int ii = a; ii <= b; ++ii) row[ii] += c;
        }
    }
    return rows;
}

void clear_rows(std::vector<std::uint32_t>& sums, int nx, RowRange rows) {
    if (rows.j1 < rows.j0) return;
    std::fill(sums.begin() + static_cast<std::ptrdiff_t>(rows.j0) * nx,
              sums.begin() + static_cast<std::ptrdiff_t>(rows.j1 + 1) * nx, 0u);
}

} // namespace

LocalTimeField compute_local_time_field(const OccupationField& field, double eps, const LatticeConfig& cfg) {
    if (!(eps >= 2.0 * field.mesh)) throw SubResolution("local-time field: eps below the 2h resolution floor");
    const RingStencil st(eps, field.mesh, cfg.half_width());
    LocalTimeField out{field.nx, field.ny, field.origin, field.mesh, eps, {}, {}};
    const std::size_t n = field.counts.size();
    out.values.assign(n, 0.0);
    out.circle_inside.assign(n, 0);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i)
            out.circle_inside[field.index(i, j)] = circle_inside(field.domain, {field.site(i, j), eps}) ? 1 : 0;
    std::vector<std::uint32_t> sums(n, 0);
    scatter(field, st, sums);
    for (std::size_t idx = 0; idx < n; ++idx)
        if (out.circle_inside[idx]) out.values[idx] = static_cast<double>(sums[idx]) * st.scale();
    return out;
}

ScaleSampler::ScaleSampler(const Lattice& lattice, double eps, const Region& region)
    : stencil_(eps, lattice.mesh(), lattice.config().half_width()),
      nx_(lattice.nx()),
      ny_(lattice.ny()),
      mesh_(lattice.mesh()) {
    if (!(eps >= 2.0 * lattice.mesh())) throw SubResolution("ScaleSampler: eps below the 2h resolution floor");
    for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
        const Point2 p = lattice.site(idx);
        if (!lattice.live(idx) || !region_contains(region, p)) continue;
        if (circle_inside(lattice.domain(), {p, eps})) cells_.push_back(static_cast<std::uint32_t>(idx));
        ++n_cells_;
    }
}

ScaleSampler::Scratch ScaleSampler::make_scratch() const {
    return {std::vector<std::uint32_t>(static_cast<std::size_t>(nx_) * ny_, 0)};
}

ThicknessSample ScaleSampler::sample(const OccupationField& field, Scratch& scratch) const {
    if (field.nx != nx_ || field.ny != ny_) throw DomainError("ScaleSampler: field does not match the lattice");
    const RowRange rows = scatter(field, stencil_, scratch.sums);
    ThicknessSample out{n_cells_, {}};
    const double k = stencil_.scale() / stencil_.eps();
    for (std::uint32_t idx : cells_)
        if (const std::uint32_t s = scratch.sums[idx]) out.v.push_back(std::sqrt(s * k));
    clear_rows(scratch.sums, nx_, rows);
    return out;
}

} // namespace bmc
