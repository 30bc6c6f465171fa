#pragma once

#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/walk.hpp"

#include <cstdint>
#include <vector>

namespace bmc {

// Integer offsets of the local-time shell around a lattice site, stored as row spans.
// Uses the same membership rule as local_time_estimate, so scattering a field through
// the stencil reproduces the per-circle estimator exactly.
class RingStencil {
public:
    struct Span {
        int dj;
        int di_lo;  // inclusive
        int di_hi;  // inclusive
    };

    RingStencil(double eps, double mesh, double half_width);

    const std::vector<Span>& spans() const { return spans_; }
    std::size_t size() const { return size_; }
    int reach() const { return reach_; }
    double eps() const { return eps_; }
    // Converts a shell count sum into a local time: (h^2/2)/(2w).
    double scale() const { return scale_; }

private:
    std::vector<Span> spans_;
    std::size_t size_ = 0;
    int reach_ = 0;
    double eps_ = 0.0;
    double scale_ = 0.0;
};

// Dense grid of local-time estimates L(x, eps) at every lattice site. Sites whose
// circle leaves the domain (or that are not live) carry 0.
struct LocalTimeField {
    int nx = 0, ny = 0;
    Point2 origin;
    double mesh = 0.0;
    double eps = 0.0;
    std::vector<double> values;
    std::vector<std::uint8_t> circle_inside;  // 1 where the circle lies in the domain
};

// Throws SubResolution when eps < 2h.
LocalTimeField compute_local_time_field(const OccupationField& field, double eps, const LatticeConfig& cfg);

// Sparse per-walk summary over a fixed region: how many region cells there are and
// the thickness v = sqrt(L/eps) at the cells where it is nonzero.
struct ThicknessSample {
    std::size_t n_cells = 0;
    std::vector<double> v;  // nonzero values only, in cell index order; zero cells are implicit
};

// Precomputes the stencil and the region cell classification for one (lattice, eps,
// region) triple; sample() is then called once per walk with per-worker scratch.
class ScaleSampler {
public:
    ScaleSampler(const Lattice& lattice, double eps, const Region& region);

    struct Scratch {
        std::vector<std::uint32_t> sums;
    };
    Scratch make_scratch() const;

    ThicknessSample sample(const OccupationField& field, Scratch& scratch) const;

    const RingStencil& stencil() const { return stencil_; }
    std::size_t region_cells() const { return n_cells_; }
    double eps() const { return stencil_.eps(); }
    double mesh() const { return mesh_; }

private:
    RingStencil stencil_;
    int nx_ = 0, ny_ = 0;
    double mesh_ = 0.0;
    std::vector<std::uint32_t> cells_;  // region cells whose circle lies in the domain
    std::size_t n_cells_ = 0;
};

} // namespace bmc
