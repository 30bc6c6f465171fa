#pragma once

#include "bmc/lattice.hpp"
#include "bmc/walk.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace bmc {

// Binary occupation grid: "OCCF", u16 version, u32 nx, u32 ny, 2 reserved zero
// bytes (16-byte header), then nx*ny little-endian u32 counts, row-major in y.
inline constexpr std::uint16_t kOccfVersion = 1;

struct OccfGrid {
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    std::vector<std::uint32_t> counts;
};

void write_occf(const std::filesystem::path& path, const OccupationField& field);
OccfGrid read_occf(const std::filesystem::path& path);

nlohmann::json occf_sidecar(const OccupationField& field, const LatticeConfig& cfg);

} // namespace bmc
