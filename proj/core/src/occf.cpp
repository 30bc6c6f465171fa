#include "bmc/occf.hpp"

#include "bmc/json_io.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

namespace bmc {

namespace {

void put_u16(std::ostream& os, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    os.write(b, 2);
}

void put_u32(char* b, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
}

std::uint32_t get_u32(const unsigned char* b) {
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

} // namespace

void write_occf(const std::filesystem::path& path, const OccupationField& field) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write("OCCF", 4);
    put_u16(os, kOccfVersion);
    char b[4];
    put_u32(b, static_cast<std::uint32_t>(field.nx));
    os.write(b, 4);
    put_u32(b, static_cast<std::uint32_t>(field.ny));
    os.write(b, 4);
    os.write("\0\0", 2);
    std::vector<char> buf(field.counts.size() * 4);
    for (std::size_t k = 0; k < field.counts.size(); ++k) put_u32(&buf[4 * k], field.counts[k]);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

OccfGrid read_occf(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::array<unsigned char, 16> hdr{};
    is.read(reinterpret_cast<char*>(hdr.data()), 16);
    if (!is || hdr[0] != 'O' || hdr[1] != 'C' || hdr[2] != 'C' || hdr[3] != 'F')
        throw std::runtime_error("not an OCCF file: " + path.string());
    const std::uint16_t version = static_cast<std::uint16_t>(hdr[4] | hdr[5] << 8);
    if (version != kOccfVersion) throw std::runtime_error("unsupported OCCF version");
    OccfGrid g;
    g.nx = get_u32(&hdr[6]);
    g.ny = get_u32(&hdr[10]);
    const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
    std::vector<unsigned char> buf(n * 4);
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!is) throw std::runtime_error("truncated OCCF file: " + path.string());
    g.counts.resize(n);
    for (std::size_t k = 0; k < n; ++k) g.counts[k] = get_u32(&buf[4 * k]);
    return g;
}

nlohmann::json occf_sidecar(const OccupationField& field, const LatticeConfig& cfg) {
    return {
        {"format", "OCCF"},
        {"version", kOccfVersion},
        {"nx", field.nx},
        {"ny", field.ny},
        {"origin", field.origin},
        {"domain", field.domain},
        {"lattice", cfg},
        {"seed", field.seed},
        {"step_count", field.step_count},
        {"start_site", field.start_site},
        {"exit_site", field.truncated ? nlohmann::json(nullptr) : nlohmann::json(field.exit_site)},
        {"truncated", field.truncated},
    };
}

} // namespace bmc
