#pragma once

#include "bmc/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bmc {

struct LatticeConfig {
    double mesh = 1.0 / 400.0;
    std::uint64_t max_steps = 1'000'000'000ULL;
    double window = 0.0;  // local-time half width w; 0 means w = mesh

    double half_width() const { return window > 0.0 ? window : mesh; }
    void validate() const;

    friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

struct GridIndex {
    int i = -1;
    int j = -1;

    bool valid() const { return i >= 0 && j >= 0; }
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

// Rasterised domain: every site of an nx-by-ny grid is either live (inside the
// open domain) or part of the kill set. Live sites never touch the grid edge.
class Lattice {
public:
    Lattice(const DomainSpec& domain, const LatticeConfig& cfg);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return live_.size(); }
    double mesh() const { return cfg_.mesh; }
    Point2 origin() const { return origin_; }
    const DomainSpec& domain() const { return domain_; }
    const LatticeConfig& config() const { return cfg_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    GridIndex cell(std::size_t idx) const { return {static_cast<int>(idx % nx_), static_cast<int>(idx / nx_)}; }
    Point2 site(int i, int j) const { return {origin_.x + i * cfg_.mesh, origin_.y + j * cfg_.mesh}; }
    Point2 site(std::size_t idx) const {
        const auto c = cell(idx);
        return site(c.i, c.j);
    }
    bool live(std::size_t idx) const { return live_[idx] != 0; }
    const std::vector<std::uint8_t>& live_mask() const { return live_; }
    std::size_t live_count() const { return live_count_; }

    std::size_t start_index() const { return start_; }
    // Nearest grid site to p, clamped to the grid.
    GridIndex nearest(Point2 p) const;

private:
    DomainSpec domain_;
    LatticeConfig cfg_;
    int nx_ = 0, ny_ = 0;
    Point2 origin_;
    std::vector<std::uint8_t> live_;
    std::size_t live_count_ = 0;
    std::size_t start_ = 0;
};

} // namespace bmc
