#pragma once

#include "bmc/chaos.hpp"
#include "bmc/walk.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace bmc {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, top row first
    double log_lo = 0.0;            // log10 weight mapped to the bottom of the scale
    double log_hi = 0.0;
    bool empty_region = false;      // 1x1 sentinel
};

// One pixel per lattice site, log10-scaled weights over region cells, black elsewhere.
// The overlay brightens sites the walk visited.
Image render_heatmap(const ChaosField& c, const OccupationField* overlay = nullptr);

void write_ppm(const Image& img, const std::filesystem::path& path);
// Header: gamma,eps,cell_i,cell_j,x,y,weight; region cells only.
void write_chaos_csv(const ChaosField& c, const std::filesystem::path& path);
nlohmann::json heatmap_sidecar(const ChaosField& c, const Image& img);

} // namespace bmc
