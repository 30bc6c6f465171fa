#include "bmc/lattice.hpp"

#include "bmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bmc {

namespace {

constexpr long kMaxSide = 1L << 15;

// Snap a ratio that is an integer up to rounding noise.
double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-9 * std::max(1.0, std::abs(v)) ? r : v;
}

} // namespace

void LatticeConfig::validate() const {
    if (!(mesh > 0.0) || !std::isfinite(mesh)) throw DomainError("lattice mesh must be positive");
    if (max_steps < 1) throw DomainError("max_steps must be at least 1");
    if (!(half_width() >= mesh / 2.0)) throw DomainError("local-time window must be at least mesh/2");
}

Lattice::Lattice(const DomainSpec& domain, const LatticeConfig& cfg) : domain_(domain), cfg_(cfg) {
    domain_.validate();
    cfg_.validate();
    const double h = cfg_.mesh;
    if (const auto* d = std::get_if<Disc>(&domain_.kind)) {
        const double ru = snap(d->radius / h);
        const long n = static_cast<long>(std::ceil(ru)) + 1;
        if (2 * n + 1 > kMaxSide) throw DomainError("lattice too large for this mesh");
        nx_ = ny_ = static_cast<int>(2 * n + 1);
        origin_ = {d->center.x - n * h, d->center.y - n * h};
        live_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
        const double r2 = ru * ru;
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) {
                const double di = i - n, dj = j - n;
                live_[index(i, j)] = (di * di + dj * dj < r2) ? 1 : 0;
            }
    } else {
        const auto& r = std::get<Rectangle>(domain_.kind);
        const long wx = std::lround(r.width / h), wy = std::lround(r.height / h);
        if (wx < 2 || wy < 2) throw DomainError("rectangle narrower than two lattice spacings");
        if (wx + 1 > kMaxSide || wy + 1 > kMaxSide) throw DomainError("lattice too large for this mesh");
        nx_ = static_cast<int>(wx + 1);
        ny_ = static_cast<int>(wy + 1);
        origin_ = r.lower_left;
        live_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
        for (int j = 1; j < ny_ - 1; ++j)
            for (int i = 1; i < nx_ - 1; ++i) live_[index(i, j)] = 1;
    }
    live_count_ = static_cast<std::size_t>(std::count(live_.begin(), live_.end(), 1));
    const auto s = nearest(domain_.start);
    start_ = index(s.i, s.j);
    if (!live(start_))
        throw DomainError("start site is not interior after snapping to the lattice");
}

GridIndex Lattice::nearest(Point2 p) const {
    const long i = std::lround((p.x - origin_.x) / cfg_.mesh);
    const long j = std::lround((p.y - origin_.y) / cfg_.mesh);
    return {static_cast<int>(std::clamp<long>(i, 0, nx_ - 1)), static_cast<int>(std::clamp<long>(j, 0, ny_ - 1))};
}

} // namespace bmc
